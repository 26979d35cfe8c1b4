"""Spin-1/2 operators and rotating-frame Hamiltonians of a dipolar chain.

All frequencies are measured in units of the nearest-neighbour coupling
``d12`` (hbar = 1), so a Hamiltonian built here generates evolution in the
dimensionless time ``tau = d12 * t``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .linalg import check_sites, kron_all

@dataclass(frozen=True)
class SpinOperatorSet:
    ix: np.ndarray
    iy: np.ndarray
    iz: np.ndarray
    iplus: np.ndarray
    iminus: np.ndarray
    identity: np.ndarray


def _spin_half() -> SpinOperatorSet:
    ix = np.array([[0, 1], [1, 0]], dtype=np.complex128) / 2
    iy = np.array([[0, -1j], [1j, 0]], dtype=np.complex128) / 2
    iz = np.array([[1, 0], [0, -1]], dtype=np.complex128) / 2
    ops = SpinOperatorSet(ix, iy, iz, ix + 1j * iy, ix - 1j * iy, np.eye(2, dtype=np.complex128))
    for m in (ops.ix, ops.iy, ops.iz, ops.iplus, ops.iminus, ops.identity):
        m.setflags(write=False)
    return ops


SPIN_HALF = _spin_half()
SIGMA_Y = 2 * SPIN_HALF.iy


def site_operator(op, k: int, n: int) -> np.ndarray:
    """Embed a single-spin operator at site ``k`` of an ``n``-spin register."""
    (k,) = check_sites([k], n)
    factors = [SPIN_HALF.identity] * n
    factors[k - 1] = op
    return kron_all(factors)


def total_iz(n: int) -> np.ndarray:
    return np.diag(_iz_diagonals(n).sum(axis=0)).astype(np.complex128)


def _iz_diagonals(n: int) -> np.ndarray:
    """Row k-1 holds the diagonal of Iz at site k."""
    idx = np.arange(2**n)
    bits = (idx[None, :] >> (n - 1 - np.arange(n))[:, None]) & 1
    # bit 0 is spin up
    return 0.5 - bits


COUPLING_LAWS = ("inverse-cube", "nearest-neighbor", "explicit")
MODELS = ("full-secular", "zz-only")
EXCHANGE_FORMS = ("flip-flop", "double-quantum")


@dataclass(frozen=True)
class ChainSpec:
    """Physical description of a driven dipolar spin chain.

    Parameters
    ----------
    n : int
        Number of spins (at least 2).
    d12 : float
        Nearest-neighbour coupling; the frequency unit of every run.
    coupling_law : str
        ``"inverse-cube"`` (``d12 / |j-k|**3``), ``"nearest-neighbor"`` or
        ``"explicit"`` (``coupling_matrix`` is used as given).
    irradiated : tuple of int
        1-based sites that carry a resonant transverse drive.
    omega1 : float or tuple of float
        Drive amplitude, either shared by all irradiated sites or one per site.
    offsets : tuple of float, optional
        Per-site resonance offsets (Iz coefficients); empty means on resonance.
    model : str
        ``"full-secular"`` (ZZ plus exchange) or ``"zz-only"``.
    kappa : float
        Overall scale of the secular bracket.  The default 3/2 reproduces the
        zero-drive two-spin oscillation ``Pz = -cos(3 tau / 4) / 2``.
    zz_weight : float
        Weight of the ``Iz Iz`` term inside the secular bracket.
    exchange_form : str
        ``"flip-flop"`` uses ``I+ I- + I- I+``; ``"double-quantum"`` uses
        ``I+ I+ + I- I-`` for comparison runs.
    """

    n: int
    d12: float = 1.0
    coupling_law: str = "inverse-cube"
    irradiated: tuple[int, ...] = ()
    omega1: float | tuple[float, ...] = 0.0
    offsets: tuple[float, ...] = ()
    model: str = "full-secular"
    kappa: float = 1.5
    zz_weight: float = 1.0
    exchange_form: str = "flip-flop"
    coupling_matrix: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ConfigError(f"chain.n: need an integer >= 2, got {self.n}")
        if self.coupling_law not in COUPLING_LAWS:
            raise ConfigError(f"chain.coupling_law: unknown law {self.coupling_law!r}")
        if self.model not in MODELS:
            raise ConfigError(f"chain.model: unknown model {self.model!r}")
        if self.exchange_form not in EXCHANGE_FORMS:
            raise ConfigError(f"chain.exchange_form: unknown form {self.exchange_form!r}")
        for name in ("d12", "kappa", "zz_weight"):
            if not np.isfinite(getattr(self, name)):
                raise ConfigError(f"chain.{name}: must be finite")
        object.__setattr__(self, "irradiated", tuple(int(s) for s in self.irradiated))
        try:
            check_sites(self.irradiated, self.n)
        except (IndexError, ValueError) as exc:
            raise ConfigError(f"chain.irradiated: {exc}") from None
        drives = self.drive_amplitudes()
        if any(not np.isfinite(w) or w < 0 for w in drives):
            raise ConfigError("chain.omega1: amplitudes must be finite and >= 0")
        if self.offsets:
            if len(self.offsets) != self.n:
                raise ConfigError(f"chain.offsets: need {self.n} values, got {len(self.offsets)}")
            if not np.all(np.isfinite(self.offsets)):
                raise ConfigError("chain.offsets: must be finite")
        if self.coupling_law == "explicit":
            d = self.coupling_matrix
            if d is None:
                raise ConfigError("chain.couplings: explicit law needs a coupling matrix")
            d = np.asarray(d, dtype=float)
            if d.shape != (self.n, self.n):
                raise ConfigError(f"chain.couplings: expected {self.n}x{self.n}, got {d.shape}")
            if not np.all(np.isfinite(d)):
                raise ConfigError("chain.couplings: entries must be finite")
            if not np.allclose(d, d.T, rtol=0, atol=1e-14) or np.any(np.diag(d) != 0):
                raise ConfigError("chain.couplings: matrix must be symmetric with zero diagonal")
            object.__setattr__(self, "coupling_matrix", d)

    def drive_amplitudes(self) -> tuple[float, ...]:
        if np.ndim(self.omega1) == 0:
            return tuple(float(self.omega1) for _ in self.irradiated)
        amps = tuple(float(w) for w in self.omega1)
        if len(amps) != len(self.irradiated):
            raise ConfigError(
                f"chain.omega1: {len(amps)} amplitudes for {len(self.irradiated)} irradiated sites"
            )
        return amps


def couplings(spec: ChainSpec) -> np.ndarray:
    """Symmetric matrix of pair couplings ``D[j-1, k-1]``."""
    if spec.coupling_law == "explicit":
        return np.array(spec.coupling_matrix, dtype=float)
    j = np.arange(spec.n)
    dist = np.abs(j[:, None] - j[None, :]).astype(float)
    d = np.zeros((spec.n, spec.n))
    off = dist > 0
    if spec.coupling_law == "inverse-cube":
        d[off] = spec.d12 / dist[off] ** 3
    else:
        d[dist == 1] = spec.d12
    return d


def _pairs(d: np.ndarray):
    n = d.shape[0]
    for j in range(n):
        for k in range(j + 1, n):
            if d[j, k] != 0:
                yield j + 1, k + 1, d[j, k]


def build_zz(spec: ChainSpec) -> np.ndarray:
    """Diagonal ``sum_{j<k} D_jk Iz_j Iz_k``."""
    d = couplings(spec)
    z = _iz_diagonals(spec.n)
    diag = np.zeros(2**spec.n)
    for j, k, djk in _pairs(d):
        diag += djk * z[j - 1] * z[k - 1]
    return np.diag(diag).astype(np.complex128)


def _exchange(j: int, k: int, n: int, form: str) -> np.ndarray:
    sp, sm = SPIN_HALF.iplus, SPIN_HALF.iminus
    if form == "flip-flop":
        pairs = ((sp, sm), (sm, sp))
    else:
        pairs = ((sp, sp), (sm, sm))
    return sum(site_operator(a, j, n) @ site_operator(b, k, n) for a, b in pairs)


def build_secular_dipolar(spec: ChainSpec) -> np.ndarray:
    """``kappa * sum_{j<k} D_jk [w Iz_j Iz_k - (I+_j I-_k + I-_j I+_k) / 4]``.

    ``w`` is ``spec.zz_weight``; the exchange pair is swapped for
    ``I+ I+ + I- I-`` when ``spec.exchange_form == "double-quantum"``.
    """
    d = couplings(spec)
    n = spec.n
    h = spec.zz_weight * build_zz(spec)
    for j, k, djk in _pairs(d):
        h = h - 0.25 * djk * _exchange(j, k, n, spec.exchange_form)
    return spec.kappa * h


def build_dipolar(spec: ChainSpec) -> np.ndarray:
    if spec.model == "zz-only":
        return build_zz(spec)
    return build_secular_dipolar(spec)


def build_hamiltonian(spec: ChainSpec) -> np.ndarray:
    """Rotating-frame Hamiltonian: drives, offsets and the dipolar part."""
    n = spec.n
    h = build_dipolar(spec)
    for k, w in zip(spec.irradiated, spec.drive_amplitudes()):
        if w:
            h = h + w * site_operator(SPIN_HALF.ix, k, n)
    if spec.offsets:
        z = _iz_diagonals(n)
        h = h + np.diag(np.asarray(spec.offsets, dtype=float) @ z)
    return h
