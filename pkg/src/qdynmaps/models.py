"""Concrete dynamical families with closed forms and dilation oracles.

* Werner (isotropic) family: ``B(t, 0) = 2 * [(1 - p)/4 I + p |phi+><phi+|]``
  with ``p(t)`` exponential, stretched exponential or an even cosine power.
* Spin-star dephasing: a central spin coupled to ``N`` bath spins through
  ``(g / sqrt(N)) sz (x) sum_k sz_k`` with a maximally mixed bath.
* sz (x) sx model: one bath qubit prepared in ``|0><0|``.

Every family exposes ``amap(t)`` returning ``A(t, 0)``, which is what the
scans in :mod:`qdynmaps.markov` consume.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Protocol

import numpy as np

from . import matcore
from .dynmaps import AMap, BMap, a_to_b, b_to_a, matrix_unit
from .errors import DimensionGuard, DomainError, SingularIntermediateMap
from .matcore import I2, SX, SY, SZ, kron

MAX_BATH_SPINS = 10

PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
PHI_PLUS_PROJ = np.outer(PHI_PLUS, PHI_PLUS.conj())
I4 = np.eye(4, dtype=complex)


class MapFamily(Protocol):
    def amap(self, t: float) -> AMap: ...


@dataclass(frozen=True)
class PFunction:
    """Decay profile ``p(t)`` of the Werner family.

    ``exponential``: ``exp(-alpha t)``; ``stretched``: ``exp(-alpha t**beta)``;
    ``cospower``: ``cos(a t)**(2N)``.
    """

    kind: Literal["exponential", "stretched", "cospower"]
    alpha: float = 1.0
    beta: float = 1.0
    a: float = 1.0
    N: int = 1

    def __post_init__(self):
        if self.kind not in ("exponential", "stretched", "cospower"):
            raise ValueError(f"unknown p(t) kind {self.kind!r}")
        if self.alpha <= 0 or self.beta <= 0 or self.a <= 0:
            raise ValueError("p(t) parameters must be positive")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")

    @classmethod
    def exponential(cls, alpha: float = 1.0) -> "PFunction":
        return cls("exponential", alpha=alpha)

    @classmethod
    def stretched(cls, alpha: float = 1.0, beta: float = 0.5) -> "PFunction":
        return cls("stretched", alpha=alpha, beta=beta)

    @classmethod
    def cospower(cls, a: float = 1.0, N: int = 1) -> "PFunction":
        return cls("cospower", a=a, N=int(N))

    def __call__(self, t: float) -> float:
        return p_eval(self, t)


def p_eval(f: PFunction, t: float) -> float:
    if t < 0:
        raise DomainError(f"p(t) is defined for t >= 0, got t={t}")
    if f.kind == "exponential":
        p = math.exp(-f.alpha * t)
    elif f.kind == "stretched":
        p = math.exp(-f.alpha * t**f.beta)
    else:
        p = math.cos(f.a * t) ** (2 * f.N)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p(t)={p} left [0, 1]")
    return p


def werner_bmap(p: float) -> BMap:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"Werner weight must lie in [0, 1], got {p}")
    return BMap(2, 2.0 * ((1.0 - p) / 4.0 * I4 + p * PHI_PLUS_PROJ))


def werner_amap(p: float) -> AMap:
    return b_to_a(werner_bmap(p))


def werner_intermediate_bmap(p1: float, p2: float, singular_tol: float = matcore.SINGULAR_TOL) -> BMap:
    if p1 <= singular_tol:
        raise SingularIntermediateMap(f"p(t1)={p1} is not above {singular_tol:g}")
    return BMap(2, (p1 - p2) / (2.0 * p1) * I4 + (2.0 * p2 / p1) * PHI_PLUS_PROJ)


@dataclass(frozen=True)
class WernerFamily:
    p: PFunction

    def amap(self, t: float) -> AMap:
        return werner_amap(p_eval(self.p, t))


# Both Hamiltonian models reduce to dephasing A = diag(1, x, x, 1) written in
# Pauli-tensor form; the shared pieces live here.


def _dephasing_amap(x: float) -> AMap:
    return AMap(2, 0.5 * (1.0 - x) * kron(SZ, SZ) + 0.5 * (1.0 + x) * kron(I2, I2))


def _dephasing_intermediate_bmap(r: float) -> BMap:
    return BMap(2, 0.5 * (kron(I2, I2) + kron(SZ, SZ)) + 0.5 * r * (kron(SX, SX) - kron(SY, SY)))


def _dilate(u: np.ndarray, rho_env: np.ndarray, d: int = 2) -> AMap:
    """A-map of ``rho -> Tr_E[U (rho (x) rho_env) U^dag]`` assembled over matrix units."""
    de = rho_env.shape[0]
    udag = matcore.dagger(u)

    def action(rho):
        return matcore.partial_trace(u @ kron(rho, rho_env) @ udag, d, de, which=1)

    cols = [matcore.vec(action(matrix_unit(d, i, j))) for i in range(d) for j in range(d)]
    return AMap(d, np.stack(cols, axis=1))


@dataclass(frozen=True)
class SpinStarModel:
    g: float = 1.0
    N: int = 1

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")

    def x(self, t: float) -> float:
        return math.cos(2.0 * self.g * t / math.sqrt(self.N)) ** self.N

    def hamiltonian(self) -> np.ndarray:
        n = self.N
        bath = np.zeros((2**n, 2**n), dtype=complex)
        for k in range(n):
            term = np.ones((1, 1), dtype=complex)
            for j in range(n):
                term = kron(term, SZ if j == k else I2)
            bath += term
        return (self.g / math.sqrt(n)) * kron(SZ, bath)

    def amap(self, t: float) -> AMap:
        return spinstar_amap(self, t)


def spinstar_amap(m: SpinStarModel, t: float) -> AMap:
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    return _dephasing_amap(m.x(t))


def spinstar_amap_dilation(m: SpinStarModel, t: float) -> AMap:
    if m.N > MAX_BATH_SPINS:
        raise DimensionGuard(f"N={m.N} exceeds the dilation limit of {MAX_BATH_SPINS} bath spins")
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    u = matcore.expm_hermitian_generator(m.hamiltonian(), t)
    de = 2**m.N
    return _dilate(u, np.eye(de, dtype=complex) / de)


def spinstar_intermediate_bmap(
    m: SpinStarModel, t1: float, t2: float, singular_tol: float = matcore.SINGULAR_TOL
) -> BMap:
    x1 = m.x(t1)
    if abs(x1) <= singular_tol:
        raise SingularIntermediateMap(f"x(t1)={x1:.3e} vanishes at t1={t1}")
    return _dephasing_intermediate_bmap(m.x(t2) / x1)


@dataclass(frozen=True)
class SigmaZXModel:
    omega: float = 1.0

    def hamiltonian(self) -> np.ndarray:
        # Half-angle generator: reproduces U = cos(wt/2) I - i sin(wt/2) sz(x)sx
        # and the dephasing factor cos(wt).
        return 0.5 * self.omega * kron(SZ, SX)

    def unitary(self, t: float) -> np.ndarray:
        return matcore.expm_hermitian_generator(self.hamiltonian(), t)

    def amap(self, t: float) -> AMap:
        return sigmazx_amap(self, t)


RHO_ENV_ZX = 0.5 * (I2 + SZ)


def sigmazx_amap(m: SigmaZXModel, t: float) -> AMap:
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    return _dephasing_amap(math.cos(m.omega * t))


def sigmazx_amap_dilation(m: SigmaZXModel, t: float) -> AMap:
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    return _dilate(m.unitary(t), RHO_ENV_ZX)


def sigmazx_intermediate_bmap(
    m: SigmaZXModel, t1: float, t2: float, singular_tol: float = matcore.SINGULAR_TOL
) -> BMap:
    c1 = math.cos(m.omega * t1)
    if abs(c1) <= singular_tol:
        raise SingularIntermediateMap(f"cos(omega t1)={c1:.3e} vanishes at t1={t1}")
    return _dephasing_intermediate_bmap(math.cos(m.omega * t2) / c1)


def closed_form_intermediate(family: MapFamily, t1: float, t2: float, singular_tol: float = matcore.SINGULAR_TOL) -> BMap:
    """Closed-form ``B(t2, t1)`` for any of the three families."""
    if isinstance(family, WernerFamily):
        return werner_intermediate_bmap(p_eval(family.p, t1), p_eval(family.p, t2), singular_tol)
    if isinstance(family, SpinStarModel):
        return spinstar_intermediate_bmap(family, t1, t2, singular_tol)
    if isinstance(family, SigmaZXModel):
        return sigmazx_intermediate_bmap(family, t1, t2, singular_tol)
    raise TypeError(f"no closed form for {type(family).__name__}")


def bmap_at(family: MapFamily, t: float) -> BMap:
    return a_to_b(family.amap(t))
