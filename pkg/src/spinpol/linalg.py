"""Dense complex matrix algebra for spin-1/2 registers.

Operators and states are plain ``numpy.ndarray`` objects of dtype
``complex128``. Sites are numbered from 1, and site 1 is the most
significant bit of the computational-basis index, so that
``|b1 b2 ... bN>`` sits at the integer whose binary digits read
``b1 b2 ... bN`` left to right.  Basis vector 0 of a single spin is
spin up (eigenvalue +1/2 of Iz).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    DuplicateSite,
    NonFiniteError,
    NotHermitian,
    NotPSD,
    SiteOutOfRange,
)

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a finite square complex matrix."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteError("matrix has NaN or infinite entries")
    return m


def max_abs(a) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def hermiticity_error(a) -> float:
    a = np.asarray(a)
    return max_abs(a - a.conj().T)


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry (i*db + k, j*db + l) is a[i, j] * b[k, l]."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(mats: Sequence) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for m in mats:
        out = np.kron(out, as_matrix(m))
    return out


@dataclass(frozen=True)
class HermitianEigen:
    """Spectral decomposition ``h = V diag(w) V^dagger``.

    ``eigenvalues`` are real and ascending; the columns of ``eigenvectors``
    are orthonormal.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def apply_function(self, f) -> np.ndarray:
        """Return ``V diag(f(w)) V^dagger``."""
        v = self.eigenvectors
        return (v * f(self.eigenvalues)) @ v.conj().T


def hermitian_eigen(h, tol: float = HERMITIAN_TOL) -> HermitianEigen:
    h = as_matrix(h)
    err = hermiticity_error(h)
    if err >= tol:
        raise NotHermitian(f"max |h - h^dagger| = {err:.3e} exceeds {tol:.1e}")
    # symmetrize so LAPACK sees an exactly Hermitian input
    h = 0.5 * (h + h.conj().T)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return HermitianEigen(w, v)


def unitary_from_eigen(eig: HermitianEigen, t: float) -> np.ndarray:
    """``exp(-i h t)`` from a precomputed decomposition of ``h``."""
    return eig.apply_function(lambda w: np.exp(-1j * w * t))


def evolve_unitary(h, t: float) -> np.ndarray:
    """Propagator ``exp(-i h t)`` through the spectral decomposition of ``h``."""
    eig = h if isinstance(h, HermitianEigen) else hermitian_eigen(h)
    return unitary_from_eigen(eig, float(t))


def check_sites(sites: Sequence[int], n: int) -> list[int]:
    """Validate 1-based site labels against an ``n``-spin register."""
    out = []
    for s in sites:
        if int(s) != s or not 1 <= s <= n:
            raise SiteOutOfRange(f"site {s} is outside [1, {n}]")
        out.append(int(s))
    if len(set(out)) != len(out):
        raise DuplicateSite(f"repeated site in {list(sites)}")
    return out


def partial_trace(rho, keep: Sequence[int], n: int) -> np.ndarray:
    """Reduced density matrix on the sites in ``keep`` (1-based).

    The output tensor factors follow the order given in ``keep``.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    keep = check_sites(keep, n)
    if rho.shape != (2**n, 2**n):
        raise DimensionMismatch(f"rho has shape {rho.shape}, expected {(2**n, 2**n)}")
    kept_axes = [s - 1 for s in keep]
    traced = [a for a in range(n) if a not in kept_axes]
    dk, dt = 2 ** len(kept_axes), 2 ** len(traced)
    t = rho.reshape((2,) * (2 * n))
    order = kept_axes + traced + [n + a for a in kept_axes] + [n + a for a in traced]
    t = t.transpose(order).reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def roundoff_floor(w: np.ndarray) -> float:
    """Magnitude below which eigenvalues of a matrix with spectrum ``w`` are noise."""
    return 4.0 * w.shape[0] * np.finfo(float).eps * max(1.0, float(np.max(np.abs(w))))


def psd_sqrt(rho, tol: float = PSD_TOL, floor: float = 0.0) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues in ``[-tol, 0)`` are treated as roundoff and set to zero, as
    are eigenvalues not exceeding ``floor``.
    """
    eig = hermitian_eigen(rho)
    w = eig.eigenvalues
    if w[0] < -tol:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} is below -{tol:.1e}")
    return eig.apply_function(lambda x: np.sqrt(np.where(x > floor, x, 0.0)))


def purity(rho) -> float:
    rho = np.asarray(rho)
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(rho) ** 2))
