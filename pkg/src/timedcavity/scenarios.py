"""Figure presets, config files, runs and parameter sweeps."""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .errors import ConfigError, TimedCavityError
from .geometry import DD_VARIANTS, SystemConfig, derive_couplings
from .lindblad import (DEFAULT_DT, DEFAULT_STRIDE, POSITIVITY_TOL, TRACE_TOL,
                       build_generator, evolve, initial_density)
from .observables import CSV_COLUMNS, TimeSeries, format_float

PI = math.pi
DEFAULT_TMAX = 5.0

# parameters shared by every figure
FIGURE_BASE = SystemConfig(gamma=1.0, kappa=0.3, g0=5.0, delta=0.0, r12=0.25,
                          theta=PI / 2, beta=PI / 8, alpha=PI / 2, z_center=0.0)
EQUAL_Z = 0.0
UNEQUAL_Z = 1.0 / 6.0

_THETAS = (("theta_pi8", PI / 8), ("theta_pi4", PI / 4), ("theta_pi2", PI / 2))


@dataclass(frozen=True)
class Curve:
    label: str
    config: SystemConfig


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    curves: tuple[Curve, ...]
    sweep_axis: str | None = None
    sweep_values: tuple[float, ...] = ()


def _theta_preset(name, z_center, description):
    base = FIGURE_BASE.with_(z_center=z_center)
    curves = [Curve(label, base.with_(theta=th)) for label, th in _THETAS]
    curves += [Curve(label + "_nodd", base.with_(theta=th, dd_enabled=False))
               for label, th in _THETAS]
    return Preset(name, description, tuple(curves), "theta",
                  tuple(th for _, th in _THETAS))


def _placements(base):
    return (Curve("equal", base.with_(z_center=EQUAL_Z)),
            Curve("unequal", base.with_(z_center=UNEQUAL_Z)))


def _build_presets() -> dict[str, Preset]:
    fig4 = FIGURE_BASE.with_(theta=PI / 8, r12=0.25)
    fig5 = FIGURE_BASE.with_(theta=PI / 8, r12=0.1)
    presets = [
        _theta_preset("fig2", EQUAL_Z, "cavity population vs theta, g1 = g2"),
        _theta_preset("fig3", UNEQUAL_Z, "cavity population vs theta, g1 g2 < 0"),
        Preset("fig4a", "dark-state populations, equal vs unequal coupling",
               _placements(fig4)),
        Preset("fig4b", "atomic population, equal vs unequal coupling",
               _placements(fig4)),
        Preset("fig5a", "dark state at r12 = lambda/10, with r12 = lambda/4 inset",
               _placements(fig5) + (Curve("equal_r12_quarter", fig4.with_(z_center=EQUAL_Z)),),
               "r12", (0.1, 0.25)),
        Preset("fig5b", "bad-cavity purification, kappa = 0.3 and 3",
               tuple(Curve(f"{c.label}_kappa{k:g}", c.config.with_(kappa=k))
                     for k in (0.3, 3.0) for c in _placements(fig5)),
               "kappa", (0.3, 3.0)),
    ]
    return {p.name: p for p in presets}


PRESETS = _build_presets()


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


_BOOL_WORDS = {"true": True, "yes": True, "on": True, "1": True,
               "false": False, "no": False, "off": False, "0": False}


def parse_config(text: str) -> SystemConfig:
    """Parse flat ``key = value`` text; ``#`` starts a comment."""
    types = {f.name: f.type for f in fields(SystemConfig)}
    values, seen = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in types:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in seen:
            raise ConfigError(f"duplicate key {key!r} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        if key == "dd_enabled":
            if value.lower() not in _BOOL_WORDS:
                raise ConfigError(f"dd_enabled expects true/false, got {value!r}", lineno)
            values[key] = _BOOL_WORDS[value.lower()]
        elif key == "dd_variant":
            if value not in DD_VARIANTS:
                raise ConfigError(f"dd_variant expects one of {DD_VARIANTS}, got {value!r}",
                                  lineno)
            values[key] = value
        else:
            try:
                values[key] = float(value)
            except ValueError:
                raise ConfigError(f"{key} expects a number, got {value!r}", lineno) from None
    try:
        return SystemConfig(**values)
    except ConfigError as exc:
        bad = next((k for k in seen if str(exc).startswith(k)), None)
        raise ConfigError(str(exc), seen.get(bad)) from None


def load_config(path) -> SystemConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def simulate(config: SystemConfig, t_max: float = DEFAULT_TMAX, dt: float = DEFAULT_DT,
             stride: int = DEFAULT_STRIDE, preflight: bool = True, check: bool = True,
             meta: dict | None = None) -> TimeSeries:
    """Integrate the timed initial state for one configuration."""
    couplings = derive_couplings(config)
    L = build_generator(couplings, config)
    return evolve(initial_density(couplings.phi), L, t_max, dt, stride=stride,
                  check=check, preflight=preflight, meta=meta)


@dataclass
class RunResult:
    label: str
    config: SystemConfig
    path: Path | None = None
    series: TimeSeries | None = None
    error: str | None = None


@dataclass
class RunReport:
    results: list[RunResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.error is None for r in self.results)


def run(curves, out_dir, prefix: str, t_max: float = DEFAULT_TMAX,
        dt: float = DEFAULT_DT, stride: int = DEFAULT_STRIDE,
        preflight: bool = True) -> RunReport:
    """Simulate each ``Curve`` and write ``<prefix>_<label>.csv`` into ``out_dir``.

    Integration failures are collected per curve rather than aborting the run.
    A ``<prefix>.json`` manifest records configs, resolved couplings and errors.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = RunReport()
    manifest = []
    for curve in curves:
        name = f"{prefix}_{curve.label}" if curve.label else prefix
        result = RunResult(curve.label, curve.config)
        try:
            series = simulate(curve.config, t_max, dt, stride, preflight,
                              meta={"preset": prefix, "label": curve.label})
        except TimedCavityError as exc:
            result.error = f"{type(exc).__name__}: {exc}"
        else:
            result.series = series
            result.path = out_dir / f"{name}.csv"
            series.write_csv(result.path)
        report.results.append(result)
        manifest.append({
            "label": curve.label,
            "csv": result.path.name if result.path else None,
            "config": asdict(curve.config),
            "couplings": asdict(derive_couplings(curve.config)),
            "dt": dt,
            "stride": stride,
            "t_max": t_max,
            "error": result.error,
        })
    with open(out_dir / f"{prefix}.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return report


def first_peak(t: np.ndarray, p: np.ndarray) -> tuple[float, float]:
    """Time and height of the first interior local maximum, NaN if none."""
    for i in range(1, len(p) - 1):
        if p[i - 1] < p[i] >= p[i + 1]:
            return float(t[i]), float(p[i])
    return math.nan, math.nan


SWEEP_AXES = ("theta", "r12", "kappa", "z_center")
SWEEP_COLUMNS = ("value", "first_peak_t", "first_peak_p_cav", "p_dark_tmax", "error")


def _sweep_point(config, axis, value, t_max, dt):
    try:
        series = simulate(config.with_(**{axis: value}), t_max, dt, stride=1,
                          preflight=False)
    except (TimedCavityError, ValueError) as exc:
        return (value, math.nan, math.nan, math.nan, f"{type(exc).__name__}: {exc}")
    tp, pp = first_peak(series.t, series["p_cav"])
    return (value, tp, pp, float(series["p_dark"][-1]), "")


def sweep(config: SystemConfig, axis: str, values, t_max: float = DEFAULT_TMAX,
          dt: float = DEFAULT_DT, workers: int = 1) -> list[tuple]:
    """One summary row per value, in input order.

    Peaks are located on the unstrided trajectory. Per-point failures land in
    the ``error`` column.
    """
    if axis not in SWEEP_AXES:
        raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")
    values = [float(v) for v in values]
    if not all(math.isfinite(v) for v in values):
        raise ConfigError("sweep values must be finite")

    def point(v):
        return _sweep_point(config, axis, v, t_max, dt)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(point, values))
    return [point(v) for v in values]


def sweep_csv(rows) -> str:
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        *nums, err = row
        err = err.replace(",", ";").replace("\n", " ")
        lines.append(",".join([format_float(x) for x in nums] + [err]))
    return "\n".join(lines) + "\n"


PROB_TOL = 1e-9
IDENTITY_TOL = 1e-10
_PROB_COLUMNS = ("p_cav", "p_atom", "p_e1", "p_e2", "p_dark", "p_bright",
                 "p_cav_dark", "p_cav_bright")


def verify_csv(text: str) -> list[str]:
    """Check a trajectory CSV against the observable invariants.

    Returns a list of human-readable problems, empty when the file is clean.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != ",".join(CSV_COLUMNS):
        return ["bad header"]
    problems = []
    prev_t, stride = None, None
    for n, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(CSV_COLUMNS):
            problems.append(f"row {n}: expected {len(CSV_COLUMNS)} fields")
            continue
        try:
            row = dict(zip(CSV_COLUMNS, map(float, parts)))
        except ValueError:
            problems.append(f"row {n}: non-numeric field")
            continue
        t = row["t"]
        if prev_t is not None:
            step = t - prev_t
            if step <= 0:
                problems.append(f"row {n}: t not increasing")
            elif stride is None:
                stride = step
            elif abs(step - stride) > 1e-9 * max(1.0, abs(t)):
                problems.append(f"row {n}: irregular stride")
        prev_t = t
        for name in _PROB_COLUMNS:
            v = row[name]
            if math.isnan(v) and name.startswith("p_cav_"):
                continue
            if not -PROB_TOL <= v <= 1 + PROB_TOL:
                problems.append(f"row {n}: {name}={v!r} outside [0, 1]")
        if abs(row["p_atom"] - (row["p_e1"] + row["p_e2"])) > 1e-12:
            problems.append(f"row {n}: p_atom != p_e1 + p_e2")
        if abs(row["p_dark"] + row["p_bright"] - row["p_atom"]) > IDENTITY_TOL:
            problems.append(f"row {n}: p_dark + p_bright != p_atom")
        cav = row["p_cav_dark"] + row["p_cav_bright"]
        if not math.isnan(cav) and abs(cav - row["p_atom"]) > IDENTITY_TOL:
            problems.append(f"row {n}: p_cav_dark + p_cav_bright != p_atom")
        if row["trace_err"] > TRACE_TOL:
            problems.append(f"row {n}: trace_err={row['trace_err']!r}")
        if not row["min_eig"] >= -POSITIVITY_TOL:
            problems.append(f"row {n}: min_eig={row['min_eig']!r}")
    return problems
