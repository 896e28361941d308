"""Markovianity classification, divisibility scans and concurrence trajectories."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from . import matcore
from .dynmaps import CP_TOL, a_to_b, intermediate_amap, min_choi_eigenvalue
from .errors import EmptyGrid, InconsistentFlags, InvalidState, SingularIntermediateMap
from .matcore import SY
from .models import MapFamily, PFunction, p_eval, werner_bmap

STATE_TOL = 1e-8
# eigenvalues of rho below this are treated as exact zeros in sqrt(rho)
SQRT_CUTOFF = 1e-14
SYSY = np.kron(SY, SY)


class Verdict(str, Enum):
    MARKOV = "Markov"
    NON_MARKOV = "NonMarkov"
    NON_MARKOV_INITIAL_CORRELATIONS = "NonMarkovInitialCorrelations"


@dataclass(frozen=True)
class ClassificationRecord:
    cp_t1: bool
    cp_t2: bool
    cp_intermediate: Optional[bool]
    verdict: Verdict


def classify(cp_t1: bool, cp_t2: bool, cp_intermediate: Optional[bool]) -> ClassificationRecord:
    """Map CP flags of B(t1,0), B(t2,0) and B(t2,t1) to a Markov verdict.

    Only the three admissible flag patterns are accepted:

    ======  ======  =============  ============================
    t1      t2      intermediate   verdict
    ======  ======  =============  ============================
    CP      CP      CP             Markov
    CP      CP      NCP            NonMarkov
    NCP     NCP     (ignored)      NonMarkovInitialCorrelations
    ======  ======  =============  ============================

    Anything else raises :class:`InconsistentFlags`.
    """
    if cp_t1 != cp_t2:
        raise InconsistentFlags(f"B(t1,0) CP={cp_t1} but B(t2,0) CP={cp_t2}")
    if not cp_t1:
        return ClassificationRecord(False, False, None, Verdict.NON_MARKOV_INITIAL_CORRELATIONS)
    if cp_intermediate is None:
        raise InconsistentFlags("both endpoint maps are CP but the intermediate map is undefined")
    verdict = Verdict.MARKOV if cp_intermediate else Verdict.NON_MARKOV
    return ClassificationRecord(True, True, bool(cp_intermediate), verdict)


@dataclass(frozen=True)
class ClassifyReport:
    record: ClassificationRecord
    min_eig_t1: float
    min_eig_t2: float
    min_eig_intermediate: float


def classify_family(
    family: MapFamily,
    t1: float,
    t2: float,
    cp_tol: float = CP_TOL,
    singular_tol: float = matcore.SINGULAR_TOL,
) -> ClassifyReport:
    """Evaluate the three maps for ``family`` and classify.

    Raises :class:`SingularIntermediateMap` when ``A(t1, 0)`` is not
    invertible and the endpoint maps are both CP.
    """
    a1, a2 = family.amap(t1), family.amap(t2)
    e1 = min_choi_eigenvalue(a_to_b(a1))
    e2 = min_choi_eigenvalue(a_to_b(a2))
    cp1, cp2 = e1 >= -cp_tol, e2 >= -cp_tol
    if not (cp1 and cp2):
        return ClassifyReport(classify(cp1, cp2, None), e1, e2, math.nan)
    e12 = min_choi_eigenvalue(a_to_b(intermediate_amap(a2, a1, singular_tol)))
    return ClassifyReport(classify(cp1, cp2, e12 >= -cp_tol), e1, e2, e12)


@dataclass(frozen=True)
class ScanRow:
    t1: float
    t2: float
    min_choi_eig: float
    cp: Optional[bool]
    semigroup_defect: float


@dataclass
class ScanResult:
    rows: list[ScanRow] = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def defined(self) -> list[ScanRow]:
        return [r for r in self.rows if r.cp is not None]


def _check_grid(grid: Sequence[float]) -> np.ndarray:
    g = np.asarray(grid, dtype=float).reshape(-1)
    if g.size == 0:
        raise EmptyGrid("time grid is empty")
    if np.any(g <= 0) or np.any(np.diff(g) <= 0):
        raise ValueError("time grid must be positive and strictly increasing")
    return g


def scan_divisibility(
    family: MapFamily,
    grid: Sequence[float],
    cp_tol: float = CP_TOL,
    singular_tol: float = matcore.SINGULAR_TOL,
) -> ScanResult:
    """Intermediate-map CP test over every pair ``t1 < t2`` of ``grid``.

    ``semigroup_defect`` is ``||A(t2, t1) - A(t2 - t1, 0)||_F``.  Pairs whose
    ``A(t1, 0)`` is singular are kept with ``cp=None`` and NaN values.
    """
    g = _check_grid(grid)
    amaps = [family.amap(float(t)) for t in g]
    rows = []
    for i, t1 in enumerate(g):
        for j in range(i + 1, len(g)):
            t2 = g[j]
            try:
                inter = intermediate_amap(amaps[j], amaps[i], singular_tol)
            except SingularIntermediateMap:
                rows.append(ScanRow(float(t1), float(t2), math.nan, None, math.nan))
                continue
            mce = min_choi_eigenvalue(a_to_b(inter))
            defect = float(np.linalg.norm(inter.m - family.amap(float(t2 - t1)).m))
            rows.append(ScanRow(float(t1), float(t2), mce, mce >= -cp_tol, defect))
    return ScanResult(rows)


def _check_state(rho: np.ndarray, tol: float) -> None:
    if rho.shape != (4, 4):
        raise InvalidState(f"concurrence needs a 4x4 two-qubit state, got {rho.shape}")
    herm = matcore.hermitian_defect(rho)
    if herm > tol:
        raise InvalidState(f"state is not Hermitian (defect {herm:.2e})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise InvalidState(f"state trace is {tr.real:.12g}, not 1")
    lo = matcore.hermitian_eigs(rho, herm_tol=tol).eigenvalues[0]
    if lo < -tol:
        raise InvalidState(f"state has negative eigenvalue {lo:.3e}")


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    evals, vecs = matcore.hermitian_eigs(rho)
    evals = np.where(evals < SQRT_CUTOFF, 0.0, evals)
    return (vecs * np.sqrt(evals)) @ vecs.conj().T


def concurrence(rho, tol: float = STATE_TOL) -> float:
    """Two-qubit concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_i`` are the decreasing square roots of the eigenvalues of
    ``rho (sy sy) rho* (sy sy)``.  They equal the singular values of
    ``sqrt(rho) sqrt(rho~)``, read off here from the Hermitian embedding
    ``[[0, M], [M^H, 0]]`` so that no square root of a near-zero
    eigenvalue is ever taken.
    """
    rho = matcore.as_matrix(rho)
    _check_state(rho, tol)
    sqrt_rho = _psd_sqrt(0.5 * (rho + rho.conj().T))
    m = sqrt_rho @ (SYSY @ sqrt_rho.conj() @ SYSY)
    zero = np.zeros((4, 4), dtype=complex)
    embed = np.block([[zero, m], [m.conj().T, zero]])
    lam = matcore.hermitian_eigs(embed).eigenvalues[::-1][:4]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


@dataclass(frozen=True)
class TrajectoryRow:
    t: float
    p: float
    concurrence: float


@dataclass
class ConcurrenceTrajectory:
    rows: list[TrajectoryRow] = field(default_factory=list)

    @property
    def t(self) -> np.ndarray:
        return np.array([r.t for r in self.rows])

    @property
    def values(self) -> np.ndarray:
        return np.array([r.concurrence for r in self.rows])


def concurrence_trajectory(f: PFunction, times: Sequence[float]) -> ConcurrenceTrajectory:
    """Concurrence of the Choi state ``B(t, 0) / 2`` of the Werner family along ``times``."""
    ts = np.asarray(times, dtype=float).reshape(-1)
    if ts.size == 0:
        raise EmptyGrid("time grid is empty")
    rows = []
    for t in ts:
        p = p_eval(f, float(t))
        rows.append(TrajectoryRow(float(t), p, concurrence(werner_bmap(p).choi_state())))
    return ConcurrenceTrajectory(rows)
