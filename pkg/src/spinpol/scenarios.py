"""Scenario configuration, builtin figure scenarios and the scenario runner.

Configurations are flat ``key = value`` mappings with dotted keys::

    name = fig1a
    chain.n = 2
    chain.irradiated = 1, 2
    chain.omega1 = 0.5
    initial = plus
    grid.max = 25
    grid.points = 501
    pairs = 1-2

See ``CONFIG_KEYS`` for the full list.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import ConfigError, SpinpolError
from .linalg import check_sites, hermiticity_error, purity
from .measures import (
    EntanglementSample,
    PolarizationVector,
    entanglement_sample,
    site_polarizations,
)
from .propagator import Propagator, TimeGrid
from .spins import COUPLING_LAWS, ChainSpec, build_hamiltonian
from .states import initial_state

LAYOUTS = ("timeseries", "parametric")
SWEEPABLE = ("omega1", "kappa", "zz_weight", "d12")

CONFIG_KEYS = {
    "name": "scenario name",
    "chain.n": "spin count",
    "chain.d12": "nearest-neighbour coupling (frequency unit)",
    "chain.coupling_law": "|".join(COUPLING_LAWS),
    "chain.couplings": "explicit coupling matrix, rows separated by ';'",
    "chain.irradiated": "comma-separated driven sites",
    "chain.omega1": "drive amplitude, shared or one per driven site",
    "chain.offsets": "per-site resonance offsets",
    "chain.model": "full-secular|zz-only",
    "chain.kappa": "secular bracket scale",
    "chain.zz_weight": "weight of the ZZ term inside the secular bracket",
    "chain.exchange_form": "flip-flop|double-quantum",
    "initial": "comma-separated initial states: plus, minus or 0/1 strings",
    "grid.min": "first tau",
    "grid.max": "last tau",
    "grid.points": "number of tau points",
    "grid.values": "explicit comma-separated tau list (overrides min/max/points)",
    "pairs": "measured site pairs, e.g. '1-2, 1-8'",
    "sweep.parameter": "|".join(SWEEPABLE),
    "sweep.min": "first sweep value",
    "sweep.max": "last sweep value",
    "sweep.points": "number of sweep values",
    "sweep.values": "explicit comma-separated sweep values",
    "sweep.tau": "fixed time at which a sweep is evaluated",
    "layout": "|".join(LAYOUTS),
}

_TWO_SPIN = {
    "chain.n": "2",
    "chain.coupling_law": "inverse-cube",
    "chain.irradiated": "1, 2",
    "chain.model": "full-secular",
    "grid.min": "0",
    "grid.max": "25",
    "grid.points": "501",
    "pairs": "1-2",
}

BUILTIN_SCENARIOS: dict[str, dict[str, str]] = {
    "fig1a": {**_TWO_SPIN, "name": "fig1a", "chain.omega1": "0.5", "initial": "plus"},
    "fig1b": {**_TWO_SPIN, "name": "fig1b", "chain.omega1": "0.5", "initial": "minus"},
    "fig2": {
        **_TWO_SPIN,
        "name": "fig2",
        "chain.omega1": "0.5",
        "initial": "minus",
        "layout": "parametric",
    },
    "fig3a": {
        **_TWO_SPIN,
        "name": "fig3a",
        "chain.omega1": "0",
        "initial": "minus, plus",
        "sweep.parameter": "omega1",
        "sweep.min": "0",
        "sweep.max": "3",
        "sweep.points": "301",
        "sweep.tau": "5.4",
    },
    "fig3b": {**_TWO_SPIN, "name": "fig3b", "chain.omega1": "0", "initial": "minus"},
    "fig4plus": {
        "name": "fig4plus",
        "chain.n": "8",
        "chain.coupling_law": "inverse-cube",
        "chain.irradiated": "1, 8",
        "chain.omega1": "0.5",
        "chain.model": "zz-only",
        "initial": "plus",
        "grid.min": "0",
        "grid.max": "4000",
        "grid.points": "2001",
        "pairs": "1-8",
    },
}
BUILTIN_SCENARIOS["fig4minus"] = {
    **BUILTIN_SCENARIOS["fig4plus"],
    "name": "fig4minus",
    "initial": "minus",
}


@dataclass(frozen=True)
class Sweep:
    parameter: str
    values: tuple[float, ...]
    tau: float


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    chain: ChainSpec
    initial: tuple[str, ...]
    grid: TimeGrid
    pairs: tuple[tuple[int, int], ...]
    sweep: Sweep | None = None
    layout: str = "timeseries"


# -- parsing -----------------------------------------------------------------


def read_config_file(path: str | Path) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key] = value
    return values


def parse_override(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise ConfigError(f"override {text!r}: expected key=value")
    key, value = (part.strip() for part in text.split("=", 1))
    return key, value


def _float(key: str, value: str) -> float:
    try:
        x = float(value)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {value!r}") from None
    if not np.isfinite(x):
        raise ConfigError(f"{key}: must be finite, got {value!r}")
    return x


def _int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {value!r}") from None


def _floats(key: str, value: str) -> tuple[float, ...]:
    return tuple(_float(key, v) for v in value.split(",") if v.strip())


def _ints(key: str, value: str) -> tuple[int, ...]:
    return tuple(_int(key, v.strip()) for v in value.split(",") if v.strip())


def _pairs(key: str, value: str) -> tuple[tuple[int, int], ...]:
    out = []
    for item in value.split(","):
        item = item.strip()
        if not item:
            continue
        parts = item.split("-")
        if len(parts) != 2:
            raise ConfigError(f"{key}: expected pairs like '1-2', got {item!r}")
        out.append((_int(key, parts[0]), _int(key, parts[1])))
    if not out:
        raise ConfigError(f"{key}: no pairs given")
    return tuple(out)


def _chain(values: Mapping[str, str]) -> ChainSpec:
    if "chain.n" not in values:
        raise ConfigError("chain.n: required")
    kw: dict = {"n": _int("chain.n", values["chain.n"])}
    for key in ("d12", "kappa", "zz_weight"):
        if f"chain.{key}" in values:
            kw[key] = _float(f"chain.{key}", values[f"chain.{key}"])
    for key in ("coupling_law", "model", "exchange_form"):
        if f"chain.{key}" in values:
            kw[key] = values[f"chain.{key}"]
    if "chain.irradiated" in values:
        kw["irradiated"] = _ints("chain.irradiated", values["chain.irradiated"])
    if "chain.omega1" in values:
        amps = _floats("chain.omega1", values["chain.omega1"])
        kw["omega1"] = amps[0] if len(amps) == 1 else amps
    if "chain.offsets" in values:
        kw["offsets"] = _floats("chain.offsets", values["chain.offsets"])
    if "chain.couplings" in values:
        rows = [r for r in values["chain.couplings"].split(";") if r.strip()]
        kw["coupling_matrix"] = np.array([_floats("chain.couplings", r) for r in rows])
        kw.setdefault("coupling_law", "explicit")
    return ChainSpec(**kw)


def _grid(values: Mapping[str, str]) -> TimeGrid:
    try:
        if "grid.values" in values:
            return TimeGrid(_floats("grid.values", values["grid.values"]))
        lo = _float("grid.min", values.get("grid.min", "0"))
        hi = _float("grid.max", values.get("grid.max", "25"))
        num = _int("grid.points", values.get("grid.points", "501"))
        if num < 1:
            raise ConfigError("grid.points: must be >= 1")
        return TimeGrid.linspace(lo, hi, num)
    except (ValueError, SpinpolError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"grid: {exc}") from None


def _sweep(values: Mapping[str, str]) -> Sweep | None:
    if "sweep.parameter" not in values:
        stray = [k for k in values if k.startswith("sweep.")]
        if stray:
            raise ConfigError(f"sweep.parameter: required when {stray[0]} is set")
        return None
    param = values["sweep.parameter"]
    if param not in SWEEPABLE:
        raise ConfigError(f"sweep.parameter: expected one of {SWEEPABLE}, got {param!r}")
    if "sweep.values" in values:
        pts = _floats("sweep.values", values["sweep.values"])
    else:
        lo = _float("sweep.min", values.get("sweep.min", "0"))
        hi = _float("sweep.max", values.get("sweep.max", "1"))
        num = _int("sweep.points", values.get("sweep.points", "11"))
        if num < 1:
            raise ConfigError("sweep.points: must be >= 1")
        pts = tuple(np.linspace(lo, hi, num))
    if not pts:
        raise ConfigError("sweep.values: empty")
    if "sweep.tau" not in values:
        raise ConfigError("sweep.tau: required for a sweep")
    tau = _float("sweep.tau", values["sweep.tau"])
    if tau < 0:
        raise ConfigError("sweep.tau: must be >= 0")
    return Sweep(param, tuple(sorted(pts)), tau)


def parse_config(values: Mapping[str, str]) -> ScenarioConfig:
    """Validate a flat key/value mapping into a ScenarioConfig."""
    unknown = sorted(set(values) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown configuration key")
    try:
        chain = _chain(values)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"chain: {exc}") from None
    labels = tuple(v.strip() for v in values.get("initial", "plus").split(",") if v.strip())
    if not labels or len(set(labels)) != len(labels):
        raise ConfigError("initial: need one or more distinct initial states")
    for label in labels:
        initial_state(label, chain.n)
    if "pairs" in values:
        pairs = _pairs("pairs", values["pairs"])
    elif len(chain.irradiated) == 2:
        pairs = (tuple(chain.irradiated),)
    else:
        pairs = ((1, 2),)
    for m, k in pairs:
        try:
            check_sites([m, k], chain.n)
        except (IndexError, ValueError) as exc:
            raise ConfigError(f"pairs: {exc}") from None
    layout = values.get("layout", "timeseries")
    if layout not in LAYOUTS:
        raise ConfigError(f"layout: expected one of {LAYOUTS}, got {layout!r}")
    sweep = _sweep(values)
    if layout == "parametric" and (sweep is not None or chain.n != 2 or len(labels) != 1):
        raise ConfigError("layout: parametric output needs a two-spin time series with one initial state")
    return ScenarioConfig(
        name=values.get("name", "custom"),
        chain=chain,
        initial=labels,
        grid=_grid(values),
        pairs=pairs,
        sweep=sweep,
        layout=layout,
    )


def load_scenario(name_or_path: str, overrides: Mapping[str, str] | None = None) -> ScenarioConfig:
    """Resolve a builtin name or a config file path, then apply overrides."""
    if name_or_path in BUILTIN_SCENARIOS:
        values = dict(BUILTIN_SCENARIOS[name_or_path])
    elif Path(name_or_path).is_file():
        values = read_config_file(name_or_path)
    else:
        raise ConfigError(
            f"scenario: {name_or_path!r} is neither a builtin "
            f"({', '.join(BUILTIN_SCENARIOS)}) nor a readable file"
        )
    values.update(overrides or {})
    return parse_config(values)


# -- running -----------------------------------------------------------------


@dataclass(frozen=True)
class Snapshot:
    """All measures of one state."""

    polarizations: tuple[PolarizationVector, ...]
    total_p: float
    total_pz: float
    pairs: tuple[tuple[tuple[int, int], EntanglementSample], ...]

    def columns(self) -> dict[str, float]:
        row: dict[str, float] = {}
        for k, p in enumerate(self.polarizations, 1):
            row[f"p{k}x"] = p.px
            row[f"p{k}y"] = p.py
            row[f"p{k}z"] = p.pz
            row[f"p{k}mag"] = p.magnitude
        row["total_p"] = self.total_p
        for (m, k), s in self.pairs:
            row[f"c_num_{m}_{k}"] = s.concurrence
            row[f"c_eq10_{m}_{k}"] = s.c_from_polarization
            row[f"s_num_{m}_{k}"] = s.entropy
            row[f"s_eq14_{m}_{k}"] = s.s_from_polarization
        row["total_pz"] = self.total_pz
        return row


@dataclass(frozen=True)
class TimeSeriesRecord:
    """Measures at one point of the outer axis (``tau`` or a swept parameter)."""

    axis_name: str
    axis: float
    snapshots: tuple[tuple[str, Snapshot], ...]

    def snapshot(self, label: str | None = None) -> Snapshot:
        if label is None:
            return self.snapshots[0][1]
        return dict(self.snapshots)[label]

    def row(self, layout: str = "timeseries") -> dict[str, float]:
        row = {self.axis_name: self.axis}
        if layout == "parametric":
            snap = self.snapshot()
            (pair, sample), *_ = snap.pairs
            p1 = snap.polarizations[pair[0] - 1].magnitude
            p2 = snap.polarizations[pair[1] - 1].magnitude
            row.update({"p1": p1, "p2": p2, "p1_plus_p2": p1 + p2, "c_num": sample.concurrence})
            return row
        if len(self.snapshots) == 1:
            row.update(self.snapshots[0][1].columns())
            return row
        for label, snap in self.snapshots:
            row.update({f"{label}_{k}": v for k, v in snap.columns().items()})
        return row


@dataclass
class InvariantMonitor:
    """Worst deviations of the unitary-evolution invariants seen during a run."""

    trace: float = 0.0
    hermiticity: float = 0.0
    purity: float = 0.0
    energy: float = 0.0
    states: int = 0
    _reference: dict = field(default_factory=dict, repr=False)

    def observe(self, key, rho: np.ndarray, h: np.ndarray, rho0: np.ndarray) -> None:
        if key not in self._reference:
            self._reference[key] = (purity(rho0), float(np.real(np.sum(rho0 * h.T))))
        pur0, e0 = self._reference[key]
        self.trace = max(self.trace, abs(np.trace(rho) - 1.0))
        self.hermiticity = max(self.hermiticity, hermiticity_error(rho))
        self.purity = max(self.purity, abs(purity(rho) - pur0))
        self.energy = max(self.energy, abs(float(np.real(np.sum(rho * h.T))) - e0))
        self.states += 1


def snapshot(rho: np.ndarray, n: int, pairs) -> Snapshot:
    pols = tuple(site_polarizations(rho, n))
    return Snapshot(
        polarizations=pols,
        total_p=float(sum(p.magnitude for p in pols)),
        total_pz=float(sum(p.pz for p in pols)),
        pairs=tuple(((m, k), entanglement_sample(rho, m, k, n)) for m, k in pairs),
    )


def run_scenario(
    config: ScenarioConfig, monitor: InvariantMonitor | None = None
) -> list[TimeSeriesRecord]:
    """Evolve and measure; one record per grid point or sweep value."""
    chain = config.chain
    n = chain.n
    starts = {label: initial_state(label, n) for label in config.initial}

    if config.sweep is None:
        h = build_hamiltonian(chain)
        prop = Propagator(h)
        series = {}
        for label, rho0 in starts.items():
            states = prop.evolve(rho0, config.grid).states
            snaps = []
            for rho in states:
                if monitor is not None:
                    monitor.observe(label, rho, h, rho0)
                snaps.append(snapshot(rho, n, config.pairs))
            series[label] = snaps
        return [
            TimeSeriesRecord("tau", tau, tuple((lab, series[lab][i]) for lab in config.initial))
            for i, tau in enumerate(config.grid.points)
        ]

    sweep = config.sweep
    records = []
    for value in sweep.values:
        spec = dataclasses.replace(chain, **{sweep.parameter: float(value)})
        h = build_hamiltonian(spec)
        prop = Propagator(h)
        snaps = []
        for label, rho0 in starts.items():
            rho = prop.state_at(prop.prepare(rho0), sweep.tau)
            if monitor is not None:
                monitor.observe((label, value), rho, h, rho0)
            snaps.append((label, snapshot(rho, n, config.pairs)))
        records.append(TimeSeriesRecord(sweep.parameter, float(value), tuple(snaps)))
    return records
