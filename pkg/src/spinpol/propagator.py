"""Exact Liouville-von Neumann propagation for time-independent Hamiltonians.

The Hamiltonian is diagonalised once.  In its eigenbasis the state evolves
by elementwise phases, ``rho_ij(tau) = rho_ij(0) exp(-i (w_i - w_j) tau)``,
so every grid point is exact to roundoff and independent of the others.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonFiniteError
from .linalg import HermitianEigen, as_matrix, hermitian_eigen


@dataclass(frozen=True)
class TimeGrid:
    """Ascending dimensionless times ``tau = d12 * t``."""

    points: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(p) for p in np.atleast_1d(self.points))
        if not pts:
            raise ValueError("time grid is empty")
        if not all(np.isfinite(pts)):
            raise NonFiniteError("time grid has non-finite points")
        if pts[0] < 0:
            raise ValueError(f"time grid starts at {pts[0]} < 0")
        if any(b < a for a, b in zip(pts, pts[1:])):
            raise ValueError("time grid must be ascending")
        object.__setattr__(self, "points", pts)

    @classmethod
    def linspace(cls, start: float, stop: float, num: int) -> "TimeGrid":
        return cls(tuple(np.linspace(start, stop, int(num))))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]


@dataclass(frozen=True)
class PreparedState:
    """An initial state together with its eigenbasis representation."""

    rho0: np.ndarray
    rho_eig: np.ndarray


class Propagator:
    """Reusable spectral propagator for one Hamiltonian."""

    def __init__(self, h):
        self.h = as_matrix(h)
        self.eigen: HermitianEigen = hermitian_eigen(self.h)

    @property
    def dim(self) -> int:
        return self.eigen.dim

    def prepare(self, rho0) -> PreparedState:
        rho0 = as_matrix(rho0)
        if rho0.shape[0] != self.dim:
            raise DimensionMismatch(
                f"state dimension {rho0.shape[0]} does not match Hamiltonian dimension {self.dim}"
            )
        v = self.eigen.eigenvectors
        return PreparedState(rho0.copy(), v.conj().T @ rho0 @ v)

    def state_at(self, start: PreparedState, tau: float) -> np.ndarray:
        if tau == 0.0:
            # the round trip V V^dagger is the identity only to ~1e-16
            return start.rho0.copy()
        v = self.eigen.eigenvectors
        vp = v * np.exp(-1j * self.eigen.eigenvalues * tau)
        return vp @ start.rho_eig @ vp.conj().T

    def evolve(self, rho0, grid: TimeGrid) -> "EvolutionResult":
        if not isinstance(grid, TimeGrid):
            grid = TimeGrid(tuple(grid))
        return EvolutionResult(grid, _States(self, self.prepare(rho0), grid))


class _States(Sequence):
    """Lazy, read-only sequence of evolved density matrices."""

    def __init__(self, prop: Propagator, start: PreparedState, grid: TimeGrid):
        self._prop = prop
        self._start = start
        self._grid = grid

    def __len__(self) -> int:
        return len(self._grid)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        return self._prop.state_at(self._start, self._grid.points[i])


@dataclass(frozen=True)
class EvolutionResult:
    grid: TimeGrid
    states: Sequence


def evolve(h, rho0, grid: TimeGrid) -> EvolutionResult:
    """Evolve ``rho0`` under ``h`` to every point of ``grid``.

    ``states[i] = U rho0 U^dagger`` with ``U = exp(-i h grid[i])``.  States are
    produced on access, so long grids on large registers stay cheap in memory.
    """
    return Propagator(h).evolve(rho0, grid)
