"""Polarization, concurrence and entropy of spin-1/2 density matrices.

Besides the direct definitions this module carries the closed-form links
between them that hold for a pure two-spin state:

* concurrence from the single-spin polarization magnitude,
  ``C = sqrt(1 - (2 P)^2)``;
* entanglement entropy from concurrence (binary entropy of
  ``x = (1 + sqrt(1 - C^2)) / 2``);
* entanglement entropy directly from the polarization magnitude.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .linalg import hermitian_eigen, partial_trace, psd_sqrt, roundoff_floor
from .spins import SIGMA_Y, SPIN_HALF

CLAMP_TOL = 1e-10
ZERO_EIG = 1e-12
YY = np.kron(SIGMA_Y, SIGMA_Y)


@dataclass(frozen=True)
class PolarizationVector:
    px: float
    py: float
    pz: float

    @property
    def magnitude(self) -> float:
        return float(np.sqrt(self.px**2 + self.py**2 + self.pz**2))


@dataclass(frozen=True)
class EntanglementSample:
    concurrence: float
    entropy: float
    c_from_polarization: float
    s_from_polarization: float


def clamp_unit(x: float, what: str = "value") -> float:
    """Clamp ``x`` into [0, 1], allowing ``CLAMP_TOL`` of overshoot."""
    if not np.isfinite(x) or x < -CLAMP_TOL or x > 1 + CLAMP_TOL:
        raise DomainError(f"{what} {x!r} lies outside [0, 1]")
    return float(min(max(x, 0.0), 1.0))


def _bloch_of(rho1: np.ndarray) -> PolarizationVector:
    ops = (SPIN_HALF.ix, SPIN_HALF.iy, SPIN_HALF.iz)
    vals = [np.trace(rho1 @ op) for op in ops]
    return PolarizationVector(*(float(v.real) for v in vals))


def polarization(rho, k: int, n: int) -> PolarizationVector:
    """``(Tr rho Ix_k, Tr rho Iy_k, Tr rho Iz_k)``."""
    return _bloch_of(partial_trace(rho, [k], n))


def site_polarizations(rho, n: int) -> list[PolarizationVector]:
    return [polarization(rho, k, n) for k in range(1, n + 1)]


def total_polarization(rho, n: int) -> float:
    """Sum over sites of the single-spin polarization magnitudes."""
    return float(sum(p.magnitude for p in site_polarizations(rho, n)))


def spin_flip(rho2) -> np.ndarray:
    """``(sy x sy) rho* (sy x sy)`` in the computational basis."""
    return YY @ np.conj(rho2) @ YY


def wootters_lambdas(rho2) -> np.ndarray:
    """Descending square roots of the spectrum of ``rho rho~``.

    Evaluated through the Hermitian matrix ``sqrt(rho) rho~ sqrt(rho)``,
    which shares its spectrum with ``rho rho~``.  Eigenvalues at roundoff
    level are zeroed before any square root: a 1e-17 residue would otherwise
    surface as a spurious 3e-9 in ``lambda``.
    """
    rho2 = np.asarray(rho2, dtype=np.complex128)
    w_rho = hermitian_eigen(rho2).eigenvalues
    root = psd_sqrt(rho2, floor=roundoff_floor(w_rho))
    m = root @ spin_flip(rho2) @ root
    w = hermitian_eigen(0.5 * (m + m.conj().T)).eigenvalues
    w = np.where(w > roundoff_floor(w), w, 0.0)
    return np.sqrt(w)[::-1]


def pair_concurrence(rho2) -> float:
    lam = wootters_lambdas(rho2)
    return clamp_unit(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]), "concurrence")


def concurrence(rho, m: int, k: int, n: int) -> float:
    """Wootters concurrence of the reduced state of sites ``m`` and ``k``."""
    return pair_concurrence(partial_trace(rho, [m, k], n))


def _check_polarization(p1: float) -> float:
    if not np.isfinite(p1) or p1 < -CLAMP_TOL or p1 > 0.5 + CLAMP_TOL:
        raise DomainError(f"polarization magnitude {p1!r} lies outside [0, 1/2]")
    return float(min(max(p1, 0.0), 0.5))


def concurrence_from_polarization(p1: float) -> float:
    p1 = _check_polarization(p1)
    return float(np.sqrt(max(0.0, 1.0 - (2.0 * p1) ** 2)))


def binary_entropy(x: float) -> float:
    """``-x log2 x - (1-x) log2 (1-x)`` with ``0 log 0 = 0``."""
    return float(sum(-q * np.log2(q) for q in (x, 1.0 - x) if q > 0.0))


def entropy_from_concurrence(c: float) -> float:
    c = clamp_unit(c, "concurrence")
    x = 0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - c * c)))
    return clamp_unit(binary_entropy(x), "entropy")


def entropy_from_polarization(p1: float) -> float:
    p1 = _check_polarization(p1)
    s = 1.0
    for q in (1.0 + 2.0 * p1, 1.0 - 2.0 * p1):
        if q > 0.0:
            s -= 0.5 * q * np.log2(q)
    return clamp_unit(s, "entropy")


def von_neumann_entropy(rho_r) -> float:
    """``-Tr(rho log2 rho)``; eigenvalues below ``ZERO_EIG`` contribute 0."""
    w = hermitian_eigen(rho_r).eigenvalues
    w = w[w > ZERO_EIG]
    return float(-np.sum(w * np.log2(w)))


def entanglement_entropy(rho, subsystem: Sequence[int], n: int) -> float:
    s = von_neumann_entropy(partial_trace(rho, subsystem, n))
    if len(subsystem) == 1:
        return clamp_unit(s, "entropy")
    return max(0.0, s)


def noninteracting_entropy(p: float) -> float:
    """``2 ln 2 - (1+p) ln(1+p) - (1-p) ln(1-p)`` in nats, for ``p`` in [0, 1]."""
    if not np.isfinite(p) or p < 0.0 or p > 1.0:
        raise DomainError(f"polarization {p!r} lies outside [0, 1]")
    s = 2.0 * np.log(2.0)
    for q in (1.0 + p, 1.0 - p):
        if q > 0.0:
            s -= q * np.log(q)
    return float(s)


def entanglement_sample(rho, m: int, k: int, n: int) -> EntanglementSample:
    """Numerical and polarization-predicted concurrence/entropy for one pair.

    The predictions use the polarization magnitude of site ``m``; the
    numerical entropy is that of site ``m`` against the rest of the chain.
    """
    p = polarization(rho, m, n).magnitude
    return EntanglementSample(
        concurrence=concurrence(rho, m, k, n),
        entropy=entanglement_entropy(rho, [m], n),
        c_from_polarization=concurrence_from_polarization(p),
        s_from_polarization=entropy_from_polarization(p),
    )
