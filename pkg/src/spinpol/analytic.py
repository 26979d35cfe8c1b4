"""Closed-form site-1 polarization of the driven two-spin system, and the
calibration that matches it against exact numerical propagation.

With ``u = 8 w1 / 3``, ``r = sqrt(1 + u^2)`` and ``a = 3 tau / 8`` (``w1`` and
``tau`` in units of ``d12``) the closed forms are::

    px = -/+ 2 w1 / (3 r^2) * (cos(f r tau) - 1)       f = 3/4 or 3/8
    py = -/+ 2 w1 / (3 r) * cos(a) * sin(a r)
    pz = +/- 1/2 * [cos(a) cos(a r) +/- sin(a) sin(a r) / r]

where the upper sign belongs to the all-up start and the lower sign to the
start with site 1 flipped.  Two readings of the ``px`` oscillation frequency
``f`` are supported; calibration decides between them.  The numerical
propagator is treated as ground truth throughout.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .propagator import Propagator, TimeGrid
from .spins import SPIN_HALF, ChainSpec, build_hamiltonian
from .states import rho_minus, rho_plus

PX_FREQUENCIES = {"3/4": 0.75, "3/8": 0.375}
SIGNS = {"plus": 1.0, "minus": -1.0}
CALIBRATION_THRESHOLD = 1e-6


@dataclass(frozen=True)
class AnalyticParams:
    omega1_over_d12: float
    sign: str = "plus"

    def __post_init__(self):
        if not np.isfinite(self.omega1_over_d12) or self.omega1_over_d12 < 0:
            raise ValueError(f"omega1_over_d12 must be finite and >= 0, got {self.omega1_over_d12}")
        if self.sign not in SIGNS:
            raise ValueError(f"sign must be 'plus' or 'minus', got {self.sign!r}")


@dataclass(frozen=True)
class AnalyticPolarization:
    px1: float
    py1: float
    pz1: float

    @property
    def magnitude(self) -> float:
        return float(np.sqrt(self.px1**2 + self.py1**2 + self.pz1**2))


def analytic_components(params: AnalyticParams, tau, px_frequency: str = "3/4"):
    """Vectorised ``(px, py, pz)`` arrays over ``tau``."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be >= 0")
    f = PX_FREQUENCIES[px_frequency]
    s = SIGNS[params.sign]
    w = params.omega1_over_d12
    u = 8.0 * w / 3.0
    r = np.sqrt(1.0 + u * u)
    a = 3.0 * tau / 8.0
    px = -s * 2.0 * w / (3.0 * r * r) * (np.cos(f * r * tau) - 1.0)
    py = -s * 2.0 * w / (3.0 * r) * np.cos(a) * np.sin(a * r)
    pz = s * 0.5 * (np.cos(a) * np.cos(a * r) + s * np.sin(a) * np.sin(a * r) / r)
    return px, py, pz


def analytic_polarization(
    params: AnalyticParams, tau: float, px_frequency: str = "3/4"
) -> AnalyticPolarization:
    px, py, pz = analytic_components(params, tau, px_frequency)
    return AnalyticPolarization(float(px), float(py), float(pz))


def two_spin_chain(omega1: float, kappa: float = 1.5, zz_weight: float = 1.0) -> ChainSpec:
    return ChainSpec(n=2, irradiated=(1, 2), omega1=omega1, kappa=kappa, zz_weight=zz_weight)


def numeric_components(spec: ChainSpec, sign: str, tau) -> np.ndarray:
    """Site-1 polarization from exact propagation; array of shape (len(tau), 3)."""
    prop = Propagator(build_hamiltonian(spec))
    rho0 = rho_plus(spec.n) if sign == "plus" else rho_minus(spec.n)
    rho_eig = prop.prepare(rho0).rho_eig
    v = prop.eigen.eigenvectors
    ph = np.exp(-1j * np.outer(np.asarray(tau, dtype=float), prop.eigen.eigenvalues))
    vt = v[None, :, :] * ph[:, None, :]
    rhos = vt @ rho_eig @ np.conj(np.swapaxes(vt, 1, 2))
    eye = np.eye(2 ** (spec.n - 1))
    ops = [np.kron(op, eye) for op in (SPIN_HALF.ix, SPIN_HALF.iy, SPIN_HALF.iz)]
    return np.stack([np.einsum("tij,ji->t", rhos, op).real for op in ops], axis=1)


@dataclass
class Residuals:
    omega1: float
    sign: str
    pz: float
    px: dict[str, float]
    py_printed: float
    py_flipped: float
    py_amplitude_ratio: float | None


@dataclass
class CalibrationReport:
    kappa: float
    kappa_fit_on: str
    px_frequency: str
    residual: float
    threshold: float
    passed: bool
    grid_points: int
    tau_max: float
    omega1_values: list[float]
    variant_residuals: dict[str, float]
    per_omega1: list[Residuals]
    zz_weight_diagnostic: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_record(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [
            "two-spin convention calibration",
            f"  grid: {self.grid_points} points, tau in [0, {self.tau_max:g}]",
            f"  omega1/d12 values: {', '.join(f'{w:g}' for w in self.omega1_values)}",
            f"  kappa = {self.kappa:.10f} (fitted on {self.kappa_fit_on} data)",
            f"  px frequency variant selected: {self.px_frequency}",
        ]
        for name, res in sorted(self.variant_residuals.items()):
            lines.append(f"    max |dpx|,|dpz| with px frequency {name}: {res:.3e}")
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(
            f"  residual (px, pz; all omega1, both starts): {self.residual:.3e}"
            f"  threshold {self.threshold:.0e}  {verdict}"
        )
        lines.append("  per omega1 (max abs residual over the grid):")
        lines.append(
            "    omega1  start   dpz        dpx(3/4)   dpx(3/8)   dpy        dpy(-)     py ratio"
        )
        for r in self.per_omega1:
            ratio = "-" if r.py_amplitude_ratio is None else f"{r.py_amplitude_ratio:.6f}"
            lines.append(
                f"    {r.omega1:<7g} {r.sign:<6}  {r.pz:.3e}  {r.px['3/4']:.3e}  "
                f"{r.px['3/8']:.3e}  {r.py_printed:.3e}  {r.py_flipped:.3e}  {ratio}"
            )
        d = self.zz_weight_diagnostic
        if d:
            lines.append("  zz-weight diagnostic (kappa held fixed, zz weight fitted on all data):")
            lines.append(
                f"    zz_weight = {d['zz_weight']:.10f}, px frequency {d['px_frequency']}, "
                f"residual {d['residual']:.3e}"
            )
            if d.get("py_amplitude_ratio") is not None:
                lines.append(
                    f"    numerical/closed-form py amplitude ratio: {d['py_amplitude_ratio']:.6f}"
                )
        if not self.passed:
            lines.append(
                "  note: with the standard secular bracket the closed forms match exact "
                "propagation only at zero drive"
            )
        return "\n".join(lines) + "\n"


def _cases(omega1_values: Iterable[float], signs: Sequence[str]):
    return [(float(w), s) for w in omega1_values for s in signs]


def _max_residual(kappa, zz_weight, cases, tau, variants) -> float:
    worst = 0.0
    for w, s in cases:
        num = numeric_components(two_spin_chain(w, kappa, zz_weight), s, tau)
        best = np.inf
        for v in variants:
            px, _, pz = analytic_components(AnalyticParams(w, s), tau, v)
            best = min(best, max(np.max(np.abs(num[:, 0] - px)), np.max(np.abs(num[:, 2] - pz))))
        worst = max(worst, best)
    return float(worst)


def _scan(objective, lo: float, hi: float, prefer: float, num: int = 101) -> tuple[float, float]:
    """Grid scan plus bounded refinement; ties go to the value nearest ``prefer``."""
    xs = np.linspace(lo, hi, num)
    vals = np.array([objective(x) for x in xs])
    best = vals.min()
    ties = np.flatnonzero(vals <= best + 1e-13)
    i = ties[np.argmin(np.abs(xs[ties] - prefer))]
    x, fx = xs[i], vals[i]
    step = xs[1] - xs[0]
    opt = minimize_scalar(
        objective,
        bounds=(max(lo, x - step), min(hi, x + step)),
        method="bounded",
        options={"xatol": 1e-12},
    )
    if opt.fun < fx - 1e-13:
        x, fx = float(opt.x), float(opt.fun)
    return float(x), float(fx)


def calibrate_convention(
    grid: TimeGrid,
    omega1_values: Sequence[float],
    signs: Sequence[str] = ("plus", "minus"),
    kappa_range: tuple[float, float] = (1.0, 2.0),
    default_kappa: float = 1.5,
    diagnose_zz_weight: bool = True,
) -> CalibrationReport:
    """Fit the secular scale ``kappa`` and choose the ``px`` frequency reading.

    ``kappa`` is fitted on the zero-drive cases when the list contains any:
    without a drive the closed forms depend on ``kappa`` alone, so that data
    fixes it uniquely.  Otherwise all cases are used.  The ``px`` frequency
    variant with the smaller worst-case residual at the fitted ``kappa`` is
    selected.  The optional diagnostic then holds ``kappa`` and fits the
    weight of the ``Iz Iz`` term inside the secular bracket.
    """
    if not isinstance(grid, TimeGrid):
        grid = TimeGrid(tuple(grid))
    omega1_values = [float(w) for w in omega1_values]
    if not omega1_values:
        raise ValueError("omega1_values is empty")
    tau = np.asarray(grid.points)
    cases = _cases(omega1_values, signs)
    zero = [c for c in cases if c[0] == 0.0]
    fit_cases = zero or cases
    variants = tuple(PX_FREQUENCIES)

    kappa, _ = _scan(
        lambda k: _max_residual(k, 1.0, fit_cases, tau, variants),
        *kappa_range,
        prefer=default_kappa,
    )

    per_case = []
    variant_worst = {v: 0.0 for v in variants}
    for w, s in cases:
        num = numeric_components(two_spin_chain(w, kappa), s, tau)
        params = AnalyticParams(w, s)
        dpx = {}
        for v in variants:
            px, py, pz = analytic_components(params, tau, v)
            dpx[v] = float(np.max(np.abs(num[:, 0] - px)))
        dpz = float(np.max(np.abs(num[:, 2] - pz)))
        for v in variants:
            variant_worst[v] = max(variant_worst[v], dpx[v], dpz)
        per_case.append(
            Residuals(
                omega1=w,
                sign=s,
                pz=dpz,
                px=dpx,
                py_printed=float(np.max(np.abs(num[:, 1] - py))),
                py_flipped=float(np.max(np.abs(num[:, 1] + py))),
                py_amplitude_ratio=_amplitude_ratio(num[:, 1], py),
            )
        )
    chosen = min(variants, key=lambda v: (variant_worst[v], v != "3/4"))
    residual = variant_worst[chosen]

    diagnostic = {}
    if diagnose_zz_weight and any(w > 0 for w in omega1_values):
        best = None
        for v in variants:
            zw, res = _scan(
                lambda x, v=v: _max_residual(kappa, x, cases, tau, (v,)), 0.0, 1.0, prefer=1.0
            )
            if best is None or res < best[2]:
                best = (v, zw, res)
        v, zw, res = best
        ratios = []
        for w, s in cases:
            if w > 0:
                num = numeric_components(two_spin_chain(w, kappa, zw), s, tau)
                _, py, _ = analytic_components(AnalyticParams(w, s), tau, v)
                ratio = _amplitude_ratio(num[:, 1], py)
                if ratio is not None:
                    ratios.append(ratio)
        diagnostic = {
            "kappa": kappa,
            "zz_weight": zw,
            "px_frequency": v,
            "residual": res,
            "py_amplitude_ratio": float(np.median(ratios)) if ratios else None,
        }

    return CalibrationReport(
        kappa=kappa,
        kappa_fit_on="zero-drive" if zero else "all",
        px_frequency=chosen,
        residual=residual,
        threshold=CALIBRATION_THRESHOLD,
        passed=residual < CALIBRATION_THRESHOLD,
        grid_points=len(grid),
        tau_max=float(tau[-1]),
        omega1_values=omega1_values,
        variant_residuals=variant_worst,
        per_omega1=per_case,
        zz_weight_diagnostic=diagnostic,
    )


def _amplitude_ratio(num: np.ndarray, closed: np.ndarray) -> float | None:
    """Least-squares scale ``c`` minimising ``|num - c * closed|``."""
    denom = float(np.dot(closed, closed))
    if denom < 1e-20:
        return None
    return float(np.dot(num, closed) / denom)
