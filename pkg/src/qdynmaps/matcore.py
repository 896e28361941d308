"""Dense complex matrix algebra used throughout the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Composite
indices follow a single row-major convention: the pair ``(i, j)`` of a
``d x d`` operator maps to the flat index ``i * d + j``.  ``kron``,
``vec``/``unvec``, ``partial_trace`` and ``realign`` all share it.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian, SingularMatrix

HERM_TOL = 1e-9
SINGULAR_TOL = 1e-12
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 50

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


class HermitianEigenResult(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def _square(a: np.ndarray, name: str = "matrix") -> int:
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    return a.shape[0]


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry ``(i*p + k, j*q + l)`` is ``a[i, j] * b[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def vec(rho) -> np.ndarray:
    """Row-major vectorization: ``vec(rho)[i*d + j] == rho[i, j]``."""
    return as_matrix(rho).reshape(-1)


def unvec(v, d: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if d is None:
        d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise DimensionMismatch(f"vector of length {v.size} is not a d*d operator")
    return v.reshape(d, d)


def inverse(a, singular_tol: float = SINGULAR_TOL) -> np.ndarray:
    """Invert a square matrix by Gauss-Jordan elimination with partial pivoting.

    Raises :class:`SingularMatrix` as soon as the best available pivot has
    magnitude below ``singular_tol``.  No regularisation is attempted.
    """
    a = as_matrix(a)
    n = _square(a)
    work = np.hstack([a.copy(), np.eye(n, dtype=complex)])
    for col in range(n):
        piv = col + int(np.argmax(np.abs(work[col:, col])))
        if abs(work[piv, col]) < singular_tol:
            raise SingularMatrix(
                f"pivot {abs(work[piv, col]):.3e} in column {col} below {singular_tol:g}"
            )
        if piv != col:
            work[[col, piv]] = work[[piv, col]]
        work[col] /= work[col, col]
        factors = work[:, col].copy()
        factors[col] = 0.0
        work -= np.outer(factors, work[col])
    return work[:, n:]


def hermitian_defect(a) -> float:
    a = as_matrix(a)
    return float(np.abs(a - a.conj().T).max()) if a.size else 0.0


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def hermitian_eigs(
    a,
    herm_tol: float = HERM_TOL,
    tol: float = JACOBI_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> HermitianEigenResult:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies a real Givens rotation that annihilates it.  Sweeps continue until
    the off-diagonal Frobenius norm drops below ``tol * max(1, ||a||_F)``.

    Returns eigenvalues in ascending order with the matching orthonormal
    eigenvectors as columns.
    """
    a = as_matrix(a)
    n = _square(a)
    defect = hermitian_defect(a)
    if defect > herm_tol:
        raise NotHermitian(f"max |a - a^H| = {defect:.3e} exceeds {herm_tol:g}")
    work = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    threshold = tol * max(1.0, float(np.linalg.norm(work)))
    # pivots this small cannot keep the off-diagonal norm above threshold
    negligible = threshold / (2 * n)

    for _ in range(max_sweeps + 1):
        if _off_norm(work) < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = work[p, q]
                r = abs(apq)
                if r < negligible:
                    continue
                phase = apq / r
                app, aqq = work[p, p].real, work[q, q].real
                theta = (aqq - app) / (2.0 * r)
                t = 1.0 / (abs(theta) + np.hypot(theta, 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                work[:, idx] = work[:, idx] @ g
                work[idx, :] = g.conj().T @ work[idx, :]
                v[:, idx] = v[:, idx] @ g
                work[p, q] = work[q, p] = 0.0
                work[p, p] = app - t * r
                work[q, q] = aqq + t * r
    else:
        raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")

    evals = np.diag(work).real.copy()
    order = np.argsort(evals, kind="stable")
    return HermitianEigenResult(evals[order], v[:, order])


def partial_trace(m, d1: int, d2: int, which: int = 1) -> np.ndarray:
    """Trace out factor ``which`` (0 = first, 1 = second) of a ``d1*d2`` operator."""
    m = as_matrix(m)
    if m.shape != (d1 * d2, d1 * d2):
        raise DimensionMismatch(f"shape {m.shape} is not ({d1}*{d2}) square")
    t = m.reshape(d1, d2, d1, d2)
    if which == 0:
        return np.einsum("iaib->ab", t)
    if which == 1:
        return np.einsum("aibi->ab", t)
    raise ValueError(f"which must be 0 or 1, got {which!r}")


def realign(m, d: int | None = None) -> np.ndarray:
    """Swap the middle indices: ``out[a1*d + b1, a2*d + b2] = m[a1*d + a2, b1*d + b2]``.

    This is the A-map <-> B-map reshuffle; applying it twice returns ``m``.
    """
    m = as_matrix(m)
    n = _square(m)
    if d is None:
        d = int(round(np.sqrt(n)))
    if d * d != n:
        raise DimensionMismatch(f"size {n} is not the square of an integer d")
    return m.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(n, n)


def expm_hermitian_generator(h, t: float, herm_tol: float = HERM_TOL) -> np.ndarray:
    """``exp(-i h t)`` for Hermitian ``h`` via its spectral decomposition."""
    evals, vecs = hermitian_eigs(h, herm_tol=herm_tol)
    return (vecs * np.exp(-1j * evals * t)) @ vecs.conj().T
