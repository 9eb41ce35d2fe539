"""Parameter-grid engine: scans over detuning, spin rate, backscattering,
drive and Kerr rate, with numeric and closed-form observables per point.

Grids are cartesian products of one or two linearly spaced axes.  Every
grid point is solved independently (optionally by a process pool); records
land in pre-indexed slots so the output is deterministic and identical
between serial and parallel runs.  Per-point failures are recorded in the
row's flags and never abort a sweep.

Exports are CSV or JSON with all floats written as ``%.17g`` so a rerun is
byte-identical and a round-trip through :func:`load_result` is bit-exact.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import analytic, observables, steadystate
from .errors import ConfigError, SpinKerrError, UndefinedObservableError
from .fock import build_space
from .observables import CorrelationResult, Regime
from .params import (DerivedParams, Mode, PhysicalParams, derive,
                     paper_preset, params_from_dict)

__all__ = [
    "AXIS_NAMES", "Axis", "SweepSpec", "PointRecord", "SweepResult",
    "run", "solve_point", "find_extremum", "export", "load_result",
    "spec_from_dict", "load_spec", "calibrate_switch_detuning",
    "DELTA0_STAR",
]

AXIS_NAMES = ("delta0", "omega", "J", "xi", "chi")

# Switch-curve detuning: the reference value is stated only as
# "non-resonant"; this number is calibrated by
# calibrate_switch_detuning() against the static-resonator correlation
# pair (21.55, 8.58) and stored for reproducibility (provenance:
# calibrated, see tests/test_acceptance.py).
DELTA0_STAR = -2106500.0

SCHEMA_SWEEP = "sweep-v1"

_CSV_COLUMNS = (
    "delta0", "omega", "J", "xi", "chi", "params_key",
    "n_cw", "s_cw", "g2_cw", "g3_cw", "regime_cw",
    "n_ccw", "s_ccw", "g2_ccw", "g3_ccw", "regime_ccw",
    "g2_analytic_cw", "g3_analytic_cw", "g2_analytic_ccw", "g3_analytic_ccw",
    "flags",
)
_FLOAT_COLUMNS = frozenset(c for c in _CSV_COLUMNS
                           if c not in ("params_key", "regime_cw",
                                        "regime_ccw", "flags"))


@dataclass(frozen=True)
class Axis:
    """One linearly spaced sweep axis."""

    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ConfigError(f"axis name must be one of {AXIS_NAMES}, "
                              f"got {self.name!r}")
        if self.count < 2:
            raise ConfigError(f"axis {self.name} needs at least 2 points, "
                              f"got {self.count}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """A grid of parameter points plus which oracles to evaluate."""

    base: PhysicalParams
    axes: tuple[Axis, ...]
    numeric: bool = True
    analytic: bool = True
    cutoff: int = 4
    chi_over_gamma: float | None = None
    xi_over_gamma: float | None = None

    def __post_init__(self):
        if not isinstance(self.axes, tuple):
            object.__setattr__(self, "axes", tuple(self.axes))
        if not 1 <= len(self.axes) <= 2:
            raise ConfigError(
                f"sweeps take one or two axes, got {len(self.axes)}")
        names = [axis.name for axis in self.axes]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate axis names: {names}")
        if not (self.numeric or self.analytic):
            raise ConfigError("at least one oracle must be enabled")
        if self.cutoff < 1:
            raise ConfigError(f"cutoff must be >= 1, got {self.cutoff}")

    def grid(self) -> list[tuple[float, ...]]:
        """Row-major cartesian product of the axis values."""
        arrays = [axis.values() for axis in self.axes]
        if len(arrays) == 1:
            return [(float(v),) for v in arrays[0]]
        return [(float(u), float(v)) for u in arrays[0] for v in arrays[1]]


def derived_at(spec: SweepSpec, coords: tuple[float, ...]) -> DerivedParams:
    """Model rates at one grid point.

    ``delta0``, ``omega`` and ``J`` act on the physical record before
    derivation; ``xi`` and ``chi`` override the derived rates afterwards,
    taking precedence over any pinned ratio.
    """
    by_name = dict(zip((a.name for a in spec.axes), coords))
    physical = {}
    if "delta0" in by_name:
        physical["detuning"] = by_name["delta0"]
    if "omega" in by_name:
        physical["angular_velocity"] = by_name["omega"]
    if "J" in by_name:
        physical["backscattering"] = by_name["J"]
    base = replace(spec.base, **physical) if physical else spec.base
    d = derive(base)
    overrides = {}
    if spec.chi_over_gamma is not None:
        overrides["chi"] = spec.chi_over_gamma * d.gamma
    if spec.xi_over_gamma is not None:
        overrides["xi"] = spec.xi_over_gamma * d.gamma
    if "chi" in by_name:
        overrides["chi"] = by_name["chi"]
    if "xi" in by_name:
        overrides["xi"] = by_name["xi"]
    return d.replace(**overrides) if overrides else d


@dataclass(frozen=True)
class PointRecord:
    """One solved grid point; failures leave fields None and set flags."""

    coords: tuple[float, ...]
    delta0: float
    omega: float
    J: float
    xi: float
    chi: float
    params_key: str
    numeric: CorrelationResult | None = None
    analytic: dict = field(default_factory=dict)
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    records: list[PointRecord]


def _analytic_values(d: DerivedParams) -> tuple[dict, list[str]]:
    out = {}
    flags = []
    for mode in (Mode.CW, Mode.CCW):
        for name, fn in (("g2", analytic.g2_analytic),
                         ("g3", analytic.g3_analytic)):
            key = f"{name}_analytic_{mode.value}"
            try:
                out[key] = fn(d, mode)
            except UndefinedObservableError:
                out[key] = None
                flags.append(f"{key}_undefined")
            except SpinKerrError as exc:
                out[key] = None
                flags.append(f"{key}_error:{type(exc).__name__}")
    return out, flags


def solve_point(spec: SweepSpec, coords: tuple[float, ...]) -> PointRecord:
    """Solve one grid point; never raises for per-point physics failures."""
    d = derived_at(spec, coords)
    by_name = dict(zip((a.name for a in spec.axes), coords))
    omega = by_name.get("omega", spec.base.angular_velocity)
    flags: list[str] = []
    numeric = None
    if spec.numeric:
        try:
            space = build_space(spec.cutoff, spec.cutoff)
            rho = steadystate.steady_state(d, space)
            numeric = observables.correlations(rho, d)
            flags.extend(numeric.cw.flags)
            flags.extend(numeric.ccw.flags)
        except SpinKerrError as exc:
            flags.append(f"solver_error:{type(exc).__name__}:{exc}")
    analytic_values: dict = {}
    if spec.analytic:
        analytic_values, aflags = _analytic_values(d)
        flags.extend(aflags)
    return PointRecord(
        coords=coords,
        delta0=d.delta0,
        omega=float(omega),
        J=d.backscattering,
        xi=d.xi,
        chi=d.chi,
        params_key=d.key(),
        numeric=numeric,
        analytic=analytic_values,
        flags=tuple(flags),
    )


def run(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Solve every grid point; output order never depends on scheduling."""
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    grid = spec.grid()
    if workers == 1:
        records = [solve_point(spec, coords) for coords in grid]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(grid) // (workers * 8))
            records = list(pool.map(solve_point, [spec] * len(grid), grid,
                                    chunksize=chunk))
    return SweepResult(spec, records)


_OBSERVABLE_KEYS = ("n", "s", "g2", "g3", "g2_analytic", "g3_analytic")


def _record_value(record: PointRecord, observable: str,
                  mode: Mode) -> float | None:
    if observable.endswith("_analytic"):
        return record.analytic.get(f"{observable}_{mode.value}")
    if record.numeric is None:
        return None
    return getattr(record.numeric.mode(mode), observable)


def _tiebreak_key(result: SweepResult, record: PointRecord):
    by_name = dict(zip((a.name for a in result.spec.axes), record.coords))
    return tuple(by_name.get(name, 0.0) for name in AXIS_NAMES)


def find_extremum(result: SweepResult, observable: str, mode: Mode,
                  kind: str) -> tuple[PointRecord, float]:
    """Extremum of one observable over the defined records.

    Ties are broken toward the smaller axis value in the canonical order
    delta0, omega, J, xi, chi.
    """
    if observable not in _OBSERVABLE_KEYS:
        raise ConfigError(f"unknown observable {observable!r}; "
                          f"expected one of {_OBSERVABLE_KEYS}")
    if kind not in ("min", "max"):
        raise ConfigError(f"kind must be min or max, got {kind!r}")
    best: tuple[PointRecord, float] | None = None
    sign = 1.0 if kind == "min" else -1.0
    for record in result.records:
        value = _record_value(record, observable, mode)
        if value is None:
            continue
        if best is None or sign * value < sign * best[1] or (
                value == best[1]
                and _tiebreak_key(result, record)
                < _tiebreak_key(result, best[0])):
            best = (record, value)
    if best is None:
        raise SpinKerrError(
            f"{observable}_{mode.value} is undefined over the entire sweep")
    return best


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def _row_cells(record: PointRecord) -> dict:
    # flag text must stay a single CSV cell: strip separators and newlines
    flags = ";".join(record.flags)
    flags = flags.replace(",", ";").replace("\n", " ").replace("\r", " ")
    cells = {
        "delta0": record.delta0, "omega": record.omega, "J": record.J,
        "xi": record.xi, "chi": record.chi, "params_key": record.params_key,
        "flags": flags,
    }
    for mode in (Mode.CW, Mode.CCW):
        tag = mode.value
        data = record.numeric.mode(mode) if record.numeric else None
        cells[f"n_{tag}"] = data.n if data else None
        cells[f"s_{tag}"] = data.s if data else None
        cells[f"g2_{tag}"] = data.g2 if data else None
        cells[f"g3_{tag}"] = data.g3 if data else None
        cells[f"regime_{tag}"] = (data.regime.value
                                  if data and data.regime else "")
        for name in ("g2_analytic", "g3_analytic"):
            cells[f"{name}_{tag}"] = record.analytic.get(f"{name}_{tag}")
    return cells


def export(result: SweepResult, fmt: str, path) -> None:
    """Write a sweep result as CSV or JSON (schema sweep-v1)."""
    rows = [_row_cells(r) for r in result.records]
    if fmt == "csv":
        lines = [",".join(_CSV_COLUMNS)]
        for row in rows:
            lines.append(",".join(_fmt(row[c]) for c in _CSV_COLUMNS))
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        parts = [f'{{"schema": "{SCHEMA_SWEEP}",\n "axes": [']
        axis_items = [
            f'{{"name": "{a.name}", "start": {_fmt(a.start)}, '
            f'"stop": {_fmt(a.stop)}, "count": {a.count}}}'
            for a in result.spec.axes]
        parts.append(", ".join(axis_items))
        parts.append('],\n "rows": [\n')
        row_texts = []
        for row in rows:
            items = []
            for c in _CSV_COLUMNS:
                v = row[c]
                if v is None:
                    items.append(f'"{c}": null')
                elif c in _FLOAT_COLUMNS:
                    items.append(f'"{c}": {_fmt(v)}')
                else:
                    items.append(f'"{c}": {json.dumps(v)}')
            row_texts.append("  {" + ", ".join(items) + "}")
        parts.append(",\n".join(row_texts))
        parts.append("\n]}\n")
        text = "".join(parts)
    else:
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from None


def load_result(path) -> list[dict]:
    """Parse an exported sweep file back into row dictionaries.

    Floats round-trip bit-exactly; empty/undefined cells come back as
    None.  Works for both CSV and JSON exports.
    """
    text = _read_text(path)
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        if doc.get("schema") != SCHEMA_SWEEP:
            raise ConfigError(f"unexpected schema {doc.get('schema')!r}")
        return doc["rows"]
    lines = text.strip().split("\n")
    header = lines[0].split(",")
    if set(header) != set(_CSV_COLUMNS):
        raise ConfigError("CSV header does not match the sweep-v1 schema")
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        row = {}
        for name, cell in zip(header, cells):
            if name in _FLOAT_COLUMNS:
                row[name] = float(cell) if cell else None
            else:
                row[name] = cell
        rows.append(row)
    return rows


def _read_text(path) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None


def spec_from_dict(doc: dict) -> SweepSpec:
    """Build a SweepSpec from a parsed JSON document."""
    if not isinstance(doc, dict) or "base" not in doc or "axes" not in doc:
        raise ConfigError("sweep spec needs 'base' and 'axes' entries")
    known = {"base", "axes", "numeric", "analytic", "cutoff",
             "chi_over_gamma", "xi_over_gamma"}
    unknown = sorted(set(doc) - known)
    if unknown:
        raise ConfigError(f"unknown sweep spec keys: {', '.join(unknown)}")
    axes = []
    for item in doc["axes"]:
        extra = sorted(set(item) - {"name", "start", "stop", "count"})
        if extra:
            raise ConfigError(f"unknown axis keys: {', '.join(extra)}")
        try:
            axes.append(Axis(item["name"], float(item["start"]),
                             float(item["stop"]), int(item["count"])))
        except KeyError as exc:
            raise ConfigError(f"axis missing key {exc}") from None
    return SweepSpec(
        base=params_from_dict(doc["base"]),
        axes=tuple(axes),
        numeric=bool(doc.get("numeric", True)),
        analytic=bool(doc.get("analytic", True)),
        cutoff=int(doc.get("cutoff", 4)),
        chi_over_gamma=doc.get("chi_over_gamma"),
        xi_over_gamma=doc.get("xi_over_gamma"),
    )


def load_spec(path) -> SweepSpec:
    try:
        doc = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"sweep spec {path} is not valid JSON: {exc}") \
            from None
    return spec_from_dict(doc)


# ---------------------------------------------------------------------------
# switch-point calibration
# ---------------------------------------------------------------------------

def calibrate_switch_detuning(target: tuple[float, float] = (21.55, 8.58),
                              rel_tol: float = 0.20, cutoff: int = 4,
                              workers: int = 1) -> float:
    """Locate the static-resonator detuning whose (g2, g3) pair best
    matches ``target``, two-stage scan plus local refinement.

    Raises SpinKerrError if no detuning matches within ``rel_tol``.
    """
    def best_on(lo: float, hi: float, count: int) -> tuple[float, float]:
        spec = SweepSpec(
            base=paper_preset(omega=0.0),
            axes=(Axis("delta0", lo, hi, count),),
            analytic=False, cutoff=cutoff,
            chi_over_gamma=9.5, xi_over_gamma=0.25)
        result = run(spec, workers=workers)
        best_d = None
        for record in result.records:
            if record.numeric is None or record.numeric.cw.g2 is None \
                    or record.numeric.cw.g3 is None:
                continue
            err = max(abs(record.numeric.cw.g2 / target[0] - 1.0),
                      abs(record.numeric.cw.g3 / target[1] - 1.0))
            if best_d is None or err < best_d[1]:
                best_d = (record.delta0, err)
        if best_d is None:
            raise SpinKerrError("calibration scan produced no defined points")
        return best_d

    coarse, _ = best_on(-3.0e6, -1.6e6, 141)
    step = (3.0e6 - 1.6e6) / 140
    refined, err = best_on(coarse - step, coarse + step, 81)
    if err > rel_tol:
        raise SpinKerrError(
            f"switch-point calibration failed: best match at "
            f"{refined:.5e} rad/s deviates {err:.1%} > {rel_tol:.0%}")
    return refined
