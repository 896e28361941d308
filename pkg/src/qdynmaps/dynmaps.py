"""A-form and B-form dynamical maps.

An :class:`AMap` acts on the row-major vectorised density matrix,
``rho'[a1, a2] = sum A[(a1, a2), (b1, b2)] rho[b1, b2]``.  The B-form is the
index realignment ``B[(a1, b1), (a2, b2)] = A[(a1, a2), (b1, b2)]``; for a
trace-preserving map ``B / d`` is the Choi state, whose partial trace over
its first factor is ``I / d``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import matcore
from .errors import DimensionMismatch, NonLinearAction, NotCP, ParseError, SingularIntermediateMap, SingularMatrix

CP_TOL = 1e-10
TP_TOL = 1e-9
N_SAMPLES = 10_000


def _frozen(m) -> np.ndarray:
    m = np.array(matcore.as_matrix(m), dtype=complex)
    m.flags.writeable = False
    return m


def _dim_of(m: np.ndarray) -> int:
    n = m.shape[0]
    d = int(round(np.sqrt(n)))
    if m.shape != (n, n) or d * d != n:
        raise DimensionMismatch(f"map matrix of shape {m.shape} is not d^2 x d^2")
    return d


@dataclass(frozen=True)
class AMap:
    d: int
    m: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "m", _frozen(self.m))
        if self.m.shape != (self.d**2, self.d**2):
            raise DimensionMismatch(f"A-map for d={self.d} needs shape {(self.d**2,) * 2}, got {self.m.shape}")

    @classmethod
    def from_matrix(cls, m) -> "AMap":
        m = matcore.as_matrix(m)
        return cls(_dim_of(m), m)

    def __call__(self, rho) -> np.ndarray:
        return apply_amap(self, rho)


@dataclass(frozen=True)
class BMap:
    """Realigned map.  Hermiticity and ``Tr B = d`` are checked by
    :func:`diagnose`, not enforced here, so that non-admissible maps can
    still be represented and inspected."""

    d: int
    m: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "m", _frozen(self.m))
        if self.m.shape != (self.d**2, self.d**2):
            raise DimensionMismatch(f"B-map for d={self.d} needs shape {(self.d**2,) * 2}, got {self.m.shape}")

    @classmethod
    def from_matrix(cls, m) -> "BMap":
        m = matcore.as_matrix(m)
        return cls(_dim_of(m), m)

    def choi_state(self) -> np.ndarray:
        return self.m / self.d

    def eigenvalues(self, herm_tol: float = matcore.HERM_TOL) -> np.ndarray:
        return matcore.hermitian_eigs(self.m, herm_tol=herm_tol).eigenvalues


@dataclass(frozen=True)
class MapDiagnostics:
    tp_defect: float
    herm_defect: float
    min_choi_eig: float
    block_pos_min: float
    is_cp: bool
    is_tp: bool


def identity_amap(d: int) -> AMap:
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    return AMap(d, np.eye(d * d, dtype=complex))


def apply_amap(a: AMap, rho) -> np.ndarray:
    rho = matcore.as_matrix(rho)
    if rho.shape != (a.d, a.d):
        raise DimensionMismatch(f"state of shape {rho.shape} for a d={a.d} map")
    return matcore.unvec(a.m @ matcore.vec(rho), a.d)


def a_to_b(a: AMap) -> BMap:
    return BMap(a.d, matcore.realign(a.m, a.d))


def b_to_a(b: BMap) -> AMap:
    return AMap(b.d, matcore.realign(b.m, b.d))


def compose(a2: AMap, a1: AMap) -> AMap:
    """Map that applies ``a1`` first, then ``a2``."""
    if a1.d != a2.d:
        raise DimensionMismatch(f"cannot compose d={a2.d} with d={a1.d}")
    return AMap(a1.d, matcore.matmul(a2.m, a1.m))


def intermediate_amap(a_t2: AMap, a_t1: AMap, singular_tol: float = matcore.SINGULAR_TOL) -> AMap:
    """``A(t2, t1) = A(t2, 0) A(t1, 0)^-1``."""
    if a_t1.d != a_t2.d:
        raise DimensionMismatch(f"maps have d={a_t2.d} and d={a_t1.d}")
    try:
        inv = matcore.inverse(a_t1.m, singular_tol)
    except SingularMatrix as exc:
        raise SingularIntermediateMap(f"A(t1, 0) is not invertible: {exc}") from exc
    return AMap(a_t1.d, matcore.matmul(a_t2.m, inv))


def matrix_unit(d: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((d, d), dtype=complex)
    e[i, j] = 1.0
    return e


def amap_from_action(action: Callable[[np.ndarray], np.ndarray], d: int) -> AMap:
    """Matrix representation of a linear action, column by column on matrix units."""
    cols = [matcore.vec(action(matrix_unit(d, i, j))) for i in range(d) for j in range(d)]
    return AMap(d, np.stack(cols, axis=1))


def _check_linear(action, d: int, seed: int, tol: float) -> None:
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    y = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    alpha, beta = complex(rng.normal(), rng.normal()), complex(rng.normal(), rng.normal())
    lhs = np.asarray(action(alpha * x + beta * y), dtype=complex)
    rhs = alpha * np.asarray(action(x), dtype=complex) + beta * np.asarray(action(y), dtype=complex)
    dev = float(np.abs(lhs - rhs).max())
    if dev > tol:
        raise NonLinearAction(f"action deviates from linearity by {dev:.3e}")


def choi_from_action(
    action: Callable[[np.ndarray], np.ndarray],
    d: int,
    linearity_tol: float = 1e-8,
    seed: int = 0,
) -> BMap:
    """B-map of ``action`` via ``(Id (x) action)`` on the maximally entangled state.

    The ancilla is the first factor of the Jamiolkowski state; the B-map
    orders the system output first, so the two factors are swapped before
    scaling by ``d``.
    """
    _check_linear(action, d, seed, linearity_tol)
    state = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = matrix_unit(d, i, j)
            state += np.kron(e, np.asarray(action(e), dtype=complex)) / d
    swapped = state.reshape(d, d, d, d).transpose(1, 0, 3, 2).reshape(d * d, d * d)
    return BMap(d, d * swapped)


def _tp_defect(a: AMap) -> float:
    d = a.d
    t = a.m.reshape(d, d, d, d)
    sums = np.einsum("iijk->jk", t)
    return float(np.abs(sums - np.eye(d)).max())


def _herm_defect(a: AMap) -> float:
    t = a.m.reshape((a.d,) * 4)
    return float(np.abs(t - t.transpose(1, 0, 3, 2).conj()).max())


def _unit_vectors(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    z = rng.normal(size=(n, d)) + 1j * rng.normal(size=(n, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def block_positivity_min(b: BMap, n_samples: int = N_SAMPLES, seed: int = 0) -> float:
    """Smallest sampled value of ``sum x*_a1 y_b1 B[(a1,b1),(a2,b2)] x_a2 y*_b2``
    over unit product vectors ``x``, ``y``."""
    rng = np.random.default_rng(seed)
    x = _unit_vectors(rng, n_samples, b.d)
    y = _unit_vectors(rng, n_samples, b.d)
    w = np.einsum("na,nb->nab", x, y.conj()).reshape(n_samples, -1)
    vals = np.einsum("ni,ij,nj->n", w.conj(), b.m, w).real
    return float(vals.min())


def min_choi_eigenvalue(b: BMap) -> float:
    # Hermitian part only; the anti-Hermitian residue is reported as herm_defect.
    herm = 0.5 * (b.m + b.m.conj().T)
    return float(matcore.hermitian_eigs(herm).eigenvalues[0])


def is_cp(a: AMap, cp_tol: float = CP_TOL) -> bool:
    return min_choi_eigenvalue(a_to_b(a)) >= -cp_tol


def diagnose(
    a: AMap,
    cp_tol: float = CP_TOL,
    n_samples: int = N_SAMPLES,
    seed: int = 0,
    tp_tol: float = TP_TOL,
) -> MapDiagnostics:
    b = a_to_b(a)
    tp = _tp_defect(a)
    mce = min_choi_eigenvalue(b)
    return MapDiagnostics(
        tp_defect=tp,
        herm_defect=_herm_defect(a),
        min_choi_eig=mce,
        block_pos_min=block_positivity_min(b, n_samples, seed),
        is_cp=mce >= -cp_tol,
        is_tp=tp <= tp_tol,
    )


def kraus_from_bmap(b: BMap, cp_tol: float = CP_TOL) -> list[np.ndarray]:
    """Kraus operators ``sqrt(lam_i) * unvec(v_i)`` from the spectrum of ``B``.

    Zero-weight eigenvectors are dropped.  Each operator's phase is fixed so
    its largest-magnitude entry is real and positive.
    """
    evals, vecs = matcore.hermitian_eigs(b.m)
    if evals[0] < -cp_tol:
        raise NotCP(f"B-map has eigenvalue {evals[0]:.6g} < -{cp_tol:g}")
    ops = []
    for lam, v in zip(evals[::-1], vecs.T[::-1]):
        if lam <= cp_tol:
            continue
        k = np.sqrt(lam) * matcore.unvec(v, b.d)
        flat = k.reshape(-1)
        big = flat[np.argmax(np.abs(flat))]
        ops.append(k * (abs(big) / big))
    return ops


# map files ------------------------------------------------------------------


def map_to_dict(mp: AMap | BMap) -> dict:
    kind = "A" if isinstance(mp, AMap) else "B"
    return {"d": mp.d, "kind": kind, "re": mp.m.real.tolist(), "im": mp.m.imag.tolist()}


def map_from_dict(obj) -> AMap | BMap:
    if not isinstance(obj, dict):
        raise ParseError("map file: top level must be an object")
    for key in ("d", "kind", "re", "im"):
        if key not in obj:
            raise ParseError(f"map file: missing field {key!r}")
    d, kind = obj["d"], obj["kind"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ParseError(f"map file: field 'd' must be a positive integer, got {d!r}")
    if kind not in ("A", "B"):
        raise ParseError(f"map file: field 'kind' must be 'A' or 'B', got {kind!r}")
    parts = {}
    for key in ("re", "im"):
        try:
            arr = np.array(obj[key], dtype=float)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"map file: field {key!r} is not a numeric array ({exc})") from exc
        if arr.shape != (d * d, d * d):
            raise ParseError(f"map file: field {key!r} has shape {arr.shape}, expected {(d * d, d * d)}")
        if not np.all(np.isfinite(arr)):
            raise ParseError(f"map file: field {key!r} has non-finite entries")
        parts[key] = arr
    m = parts["re"] + 1j * parts["im"]
    return AMap(d, m) if kind == "A" else BMap(d, m)


def save_map(mp: AMap | BMap, path) -> None:
    Path(path).write_text(json.dumps(map_to_dict(mp), indent=1) + "\n")


def load_map(path) -> AMap | BMap:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    try:
        return map_from_dict(obj)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from exc
