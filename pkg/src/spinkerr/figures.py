"""Named figure-data presets.

Each preset runs the sweeps behind one figure panel and writes a single
data file ``<preset>_figure-data.<fmt>`` into the output directory.  Rows
are self-describing (every row carries delta0, omega, J, xi, chi), so
presets that overlay several parameter slices concatenate the slices into
one file.

Curve/map presets use the sweep schema (``sweep-v1``); the photon-number
histogram presets use ``hist-v1`` with one row per (parameter point, mode,
photon number k).
"""

from __future__ import annotations

import json
import os

from . import observables, steadystate, sweep
from .errors import ConfigError
from .fock import build_space
from .params import (PAPER_CHI_OVER_GAMMA, PAPER_XI_OVER_GAMMA, Mode,
                     derive, paper_derived, paper_preset)

__all__ = ["PRESET_NAMES", "emit", "emit_all", "SCHEMA_HIST"]

SCHEMA_HIST = "hist-v1"

_HIST_COLUMNS = ("delta0", "omega", "J", "xi", "chi", "params_key",
                 "mode", "k", "p", "poisson")

OMEGA_SET = (0.0, 10e3, 20e3, 30e3)     # preset spin rates [rad/s]
OMEGA_FAST = 30e3
DELTA_SCAN = (-6e6, 6e6, 241)           # default 1D detuning grid [rad/s]
MAP_POINTS = 61                          # per axis of the 2D map


def _paper_spec(axes, *, omega=0.0, delta0=0.0, j_over_gamma=2.0,
                numeric=True, use_analytic=True, cutoff=4):
    return sweep.SweepSpec(
        base=paper_preset(omega=omega, delta0=delta0,
                          j_over_gamma=j_over_gamma),
        axes=axes,
        numeric=numeric,
        analytic=use_analytic,
        cutoff=cutoff,
        chi_over_gamma=PAPER_CHI_OVER_GAMMA,
        xi_over_gamma=PAPER_XI_OVER_GAMMA,
    )


def _delta_axis() -> sweep.Axis:
    return sweep.Axis("delta0", *DELTA_SCAN)


def _gamma() -> float:
    return derive(paper_preset()).gamma


def _run_concat(specs, workers):
    results = [sweep.run(spec, workers=workers) for spec in specs]
    records = [record for result in results for record in result.records]
    return sweep.SweepResult(results[0].spec, records)


# --- sweep-schema presets ---------------------------------------------------

def _fig1b(workers):
    """Excitation spectra S_cw, S_ccw over detuning for each spin rate."""
    spec = _paper_spec(
        (_delta_axis(), sweep.Axis("omega", 0.0, OMEGA_SET[-1],
                                   len(OMEGA_SET))),
        use_analytic=False)
    return sweep.run(spec, workers=workers)


def _fig2a(workers):
    """g2 of both modes, static vs fastest spin, with closed-form values."""
    spec = _paper_spec(
        (_delta_axis(), sweep.Axis("omega", 0.0, OMEGA_FAST, 2)))
    return sweep.run(spec, workers=workers)


def _fig2b(workers):
    """g2 and g3 of the counter-propagating mode at the fastest spin."""
    spec = _paper_spec((_delta_axis(),), omega=OMEGA_FAST)
    return sweep.run(spec, workers=workers)


def _fig3a(workers):
    """Static-resonator g2 over detuning for J/gamma in {0, 1, 2}."""
    gamma = _gamma()
    spec = _paper_spec(
        (_delta_axis(), sweep.Axis("J", 0.0, 2.0 * gamma, 3)),
        use_analytic=False)
    return sweep.run(spec, workers=workers)


def _fig3b(workers):
    """Revival: g2 over detuning per spin rate, with and without
    backscattering (rows distinguished by the J column)."""
    omega_axis = sweep.Axis("omega", 0.0, OMEGA_SET[-1], len(OMEGA_SET))
    specs = [
        _paper_spec((_delta_axis(), omega_axis), j_over_gamma=2.0,
                    use_analytic=False),
        _paper_spec((_delta_axis(), omega_axis), j_over_gamma=0.0,
                    use_analytic=False),
    ]
    return _run_concat(specs, workers)


def _fig3c(workers):
    """2D map of g2_cw over (detuning, spin rate)."""
    spec = _paper_spec(
        (sweep.Axis("delta0", DELTA_SCAN[0], DELTA_SCAN[1], MAP_POINTS),
         sweep.Axis("omega", 0.0, OMEGA_SET[-1], MAP_POINTS)),
        use_analytic=False)
    return sweep.run(spec, workers=workers)


def _fig3d(workers):
    """Switch curve: g2_cw and g3_cw versus spin rate at the calibrated
    non-resonant detuning."""
    spec = _paper_spec(
        (sweep.Axis("omega", 0.0, OMEGA_SET[-1], 241),),
        delta0=sweep.DELTA0_STAR)
    return sweep.run(spec, workers=workers)


# --- histogram-schema presets -----------------------------------------------

def _hist_rows(delta0, omega, modes):
    d = paper_derived(omega=omega, delta0=delta0)
    space = build_space(4, 4)
    rho = steadystate.steady_state(d, space)
    rows = []
    for mode in modes:
        p, poisson = observables.photon_distribution(rho, mode)
        for k in range(p.size):
            rows.append({
                "delta0": d.delta0, "omega": omega, "J": d.backscattering,
                "xi": d.xi, "chi": d.chi, "params_key": d.key(),
                "mode": mode.value, "k": k,
                "p": float(p[k]), "poisson": float(poisson[k]),
            })
    return rows


def _fig2c(workers):
    """Photon-number distributions vs Poissonian at the two blockade
    detunings, fastest spin, both modes."""
    rows = []
    for delta0 in (-3.5e6, -2.3e6):
        rows.extend(_hist_rows(delta0, OMEGA_FAST, (Mode.CW, Mode.CCW)))
    return rows


def _fig3e(workers):
    """Driven-mode distributions vs Poissonian along the switch sequence."""
    rows = []
    for omega in (0.0, 10e3, 30e3):
        rows.extend(_hist_rows(sweep.DELTA0_STAR, omega, (Mode.CW,)))
    return rows


def _export_hist(rows, fmt, path):
    if fmt == "csv":
        lines = [",".join(_HIST_COLUMNS)]
        for row in rows:
            cells = []
            for c in _HIST_COLUMNS:
                v = row[c]
                if c in ("params_key", "mode"):
                    cells.append(v)
                elif c == "k":
                    cells.append(str(v))
                else:
                    cells.append(format(float(v), ".17g"))
            lines.append(",".join(cells))
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        row_texts = []
        for row in rows:
            items = []
            for c in _HIST_COLUMNS:
                v = row[c]
                if c in ("params_key", "mode"):
                    items.append(f'"{c}": {json.dumps(v)}')
                elif c == "k":
                    items.append(f'"{c}": {v}')
                else:
                    items.append(f'"{c}": {format(float(v), ".17g")}')
            row_texts.append("  {" + ", ".join(items) + "}")
        text = (f'{{"schema": "{SCHEMA_HIST}",\n "rows": [\n'
                + ",\n".join(row_texts) + "\n]}\n")
    else:
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    with open(path, "w", newline="") as fh:
        fh.write(text)


_SWEEP_PRESETS = {
    "fig1b": _fig1b,
    "fig2a": _fig2a,
    "fig2b": _fig2b,
    "fig3a": _fig3a,
    "fig3b": _fig3b,
    "fig3c": _fig3c,
    "fig3d": _fig3d,
}
_HIST_PRESETS = {
    "fig2c": _fig2c,
    "fig3e": _fig3e,
}
PRESET_NAMES = ("fig1b", "fig2a", "fig2b", "fig2c", "fig3a", "fig3b",
                "fig3c", "fig3d", "fig3e")


def emit(name: str, out_dir, fmt: str = "csv", workers: int = 1) -> str:
    """Run one preset and write ``<name>_figure-data.<fmt>``; returns the
    written path."""
    if name not in PRESET_NAMES:
        raise ConfigError(f"unknown figure preset {name!r}; expected one "
                          f"of {', '.join(PRESET_NAMES)}")
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{name}_figure-data.{fmt}")
    if name in _SWEEP_PRESETS:
        result = _SWEEP_PRESETS[name](workers)
        sweep.export(result, fmt, path)
    else:
        rows = _HIST_PRESETS[name](workers)
        _export_hist(rows, fmt, path)
    return path


def emit_all(out_dir, fmt: str = "csv", workers: int = 1) -> list[str]:
    return [emit(name, out_dir, fmt, workers) for name in PRESET_NAMES]
