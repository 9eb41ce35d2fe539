"""Command-line interface.

Subcommands
-----------
derive-params   print the model rates derived from raw parameters
solve           solve one parameter point and print its observables
sweep           run a sweep-spec file and export CSV/JSON
validate        compare closed-form and master-equation g2 over a scan
figure-data     emit the named figure datasets (fig1b ... fig3e)

All frequencies are accepted in rad/s (scientific notation welcome);
``--units MHz`` multiplies the frequency-like inputs (--delta0, --J, --xi)
by 1e6.  The spin rate --omega is always in rad/s.  Exit codes: 0 success,
2 usage, 3 config, 4 solver, 5 io.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import figures, observables, steadystate, sweep
from .errors import (ConfigError, ParameterError, SpinKerrError,
                     SteadyStateError)
from .fock import build_space
from .params import (PAPER_CHI_OVER_GAMMA, PAPER_XI_OVER_GAMMA, Mode,
                     derive, load_config, paper_preset)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_SOLVER = 4
EXIT_IO = 5

OUT_DIR_ENV = "SPINKERR_OUT_DIR"


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that accepts scientific notation in negative numbers
    (e.g. ``--delta0 -2.3e6``)."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(
            r"^-\d+$|^-\d*\.\d+$|^-\d+\.?\d*[eE][-+]?\d+$")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="spinkerr",
        description="Spinning two-mode Kerr resonator: spectra, photon "
                    "correlations and blockade regimes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_overrides=True):
        p.add_argument("--preset", choices=["paper"],
                       help="fill the reference parameter set")
        p.add_argument("--config", metavar="PATH",
                       help="flat JSON file of physical parameters")
        p.add_argument("--out", metavar="DIR",
                       default=os.environ.get(OUT_DIR_ENV, "."),
                       help="output directory (default: $%s or cwd)"
                            % OUT_DIR_ENV)
        p.add_argument("--units", choices=["rad/s", "MHz"], default="rad/s",
                       help="unit of --delta0/--J/--xi (MHz = 1e6 rad/s)")
        if with_overrides:
            p.add_argument("--omega", type=float,
                           help="spin rate [rad/s]")
            p.add_argument("--delta0", type=float,
                           help="cavity-drive detuning")
            p.add_argument("--J", type=float, dest="backscattering",
                           help="backscattering coupling")
            p.add_argument("--xi", type=float,
                           help="drive amplitude override")
            p.add_argument("--chi-over-gamma", type=float,
                           help="pin the Kerr/loss ratio")
            p.add_argument("--cutoff", type=int, default=4,
                           help="photon cutoff per mode (default 4)")

    p = sub.add_parser("derive-params",
                       help="print derived rates and dimensionless ratios")
    add_common(p)
    p.add_argument("--json", action="store_true", help="machine output")

    p = sub.add_parser("solve", help="single-point steady state")
    add_common(p)
    p.add_argument("--json", action="store_true", help="machine output")

    p = sub.add_parser("sweep", help="run a sweep spec file")
    add_common(p, with_overrides=False)
    p.add_argument("--spec", required=True, metavar="PATH",
                   help="sweep spec (JSON)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--name", default="sweep", help="output file stem")

    p = sub.add_parser("validate",
                       help="closed-form vs master-equation g2 report")
    add_common(p, with_overrides=False)
    p.add_argument("--tol", type=float, default=0.10,
                   help="relative deviation threshold (default 0.10)")
    p.add_argument("--points", type=int, default=241)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("figure-data", help="emit named figure datasets")
    add_common(p, with_overrides=False)
    p.add_argument("--figure", dest="figure", metavar="NAME",
                   choices=list(figures.PRESET_NAMES),
                   help="one of %s" % ", ".join(figures.PRESET_NAMES))
    p.add_argument("--all", action="store_true", dest="all_figures",
                   help="emit every preset")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--workers", type=int, default=1)
    return parser


def _unit_factor(args) -> float:
    return 1e6 if getattr(args, "units", "rad/s") == "MHz" else 1.0


def _physical_from_args(args):
    if args.config and args.preset:
        raise ConfigError("--preset and --config are mutually exclusive")
    factor = _unit_factor(args)
    if args.config:
        base = load_config(args.config)
    elif args.preset == "paper":
        base = paper_preset()
    else:
        raise ConfigError("one of --preset or --config is required")
    from dataclasses import replace
    updates = {}
    if getattr(args, "omega", None) is not None:
        updates["angular_velocity"] = args.omega
    if getattr(args, "delta0", None) is not None:
        updates["detuning"] = args.delta0 * factor
    if getattr(args, "backscattering", None) is not None:
        updates["backscattering"] = args.backscattering * factor
    try:
        return replace(base, **updates) if updates else base
    except ParameterError as exc:
        raise ConfigError(str(exc)) from None


def _derived_from_args(args):
    physical = _physical_from_args(args)
    d = derive(physical)
    factor = _unit_factor(args)
    overrides = {}
    if args.preset == "paper":
        overrides["chi"] = PAPER_CHI_OVER_GAMMA * d.gamma
        overrides["xi"] = PAPER_XI_OVER_GAMMA * d.gamma
    if getattr(args, "chi_over_gamma", None) is not None:
        overrides["chi"] = args.chi_over_gamma * d.gamma
    if getattr(args, "xi", None) is not None:
        overrides["xi"] = args.xi * factor
    return d.replace(**overrides) if overrides else d


def _cmd_derive_params(args) -> int:
    physical = _physical_from_args(args)
    d = derive(physical)
    values = {
        "omega_c": d.omega_c, "gamma": d.gamma, "chi": d.chi, "xi": d.xi,
        "delta_sag": d.delta_sag, "delta0": d.delta0,
        "J": d.backscattering,
        "chi_over_gamma": d.chi / d.gamma,
        "xi_over_gamma": d.xi / d.gamma,
        "J_over_gamma": d.backscattering / d.gamma,
        "n0": d.n0,
        "drive_direction": d.drive_direction.value,
    }
    if args.json:
        print(json.dumps(values, indent=2, sort_keys=True))
    else:
        for key, value in values.items():
            if isinstance(value, float):
                print(f"{key} = {value:.6g}")
            else:
                print(f"{key} = {value}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    d = _derived_from_args(args)
    space = build_space(args.cutoff, args.cutoff)
    rho = steadystate.steady_state(d, space)
    result = observables.correlations(rho, d)
    if args.json:
        doc = {"params_key": result.params_key}
        for mode in (Mode.CW, Mode.CCW):
            data = result.mode(mode)
            doc[mode.value] = {
                "n": data.n, "s": data.s, "g2": data.g2, "g3": data.g3,
                "regime": data.regime.value if data.regime else None,
                "p": [float(v) for v in data.p],
                "poisson": [float(v) for v in data.poisson],
                "flags": list(data.flags),
            }
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(f"params {result.params_key}")
        for mode in (Mode.CW, Mode.CCW):
            data = result.mode(mode)
            s = "undefined" if data.s is None else f"{data.s:.6g}"
            g2v = "undefined" if data.g2 is None else f"{data.g2:.6g}"
            g3v = "undefined" if data.g3 is None else f"{data.g3:.6g}"
            regime = data.regime.value if data.regime else "undefined"
            print(f"{mode.value}: N={data.n:.6g} S={s} g2={g2v} g3={g3v} "
                  f"regime={regime}")
            if data.flags:
                print(f"{mode.value} flags: {';'.join(data.flags)}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    spec = sweep.load_spec(args.spec)
    result = sweep.run(spec, workers=args.workers)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, f"{args.name}_sweep.{args.format}")
    sweep.export(result, args.format, path)
    print(path)
    return EXIT_OK


def _cmd_validate(args) -> int:
    """Scan detuning at the static and fastest-spin points and report the
    worst closed-form vs master-equation g2 deviation."""
    failures = 0
    print(f"tolerance: {args.tol:.3g} relative")
    for omega in (0.0, figures.OMEGA_FAST):
        spec = sweep.SweepSpec(
            base=paper_preset(omega=omega),
            axes=(sweep.Axis("delta0", *figures.DELTA_SCAN[:2],
                             args.points),),
            chi_over_gamma=PAPER_CHI_OVER_GAMMA,
            xi_over_gamma=PAPER_XI_OVER_GAMMA)
        result = sweep.run(spec, workers=args.workers)
        for mode in (Mode.CW, Mode.CCW):
            worst = 0.0
            worst_at = None
            count = 0
            for record in result.records:
                numeric = (record.numeric.mode(mode).g2
                           if record.numeric else None)
                closed = record.analytic.get(f"g2_analytic_{mode.value}")
                if numeric is None or closed is None:
                    continue
                dev = abs(closed - numeric) / abs(numeric)
                count += 1
                if dev > worst:
                    worst, worst_at = dev, record.delta0
            status = "ok" if worst <= args.tol else "FAIL"
            if worst > args.tol:
                failures += 1
            at = "" if worst_at is None else f" at delta0={worst_at:.5g}"
            print(f"omega={omega:g} mode={mode.value}: max rel dev "
                  f"{worst:.4f} over {count} points{at} [{status}]")
    return EXIT_OK if failures == 0 else EXIT_SOLVER


def _cmd_figure_data(args) -> int:
    if bool(args.figure) == bool(args.all_figures):
        raise ConfigError("figure-data needs exactly one of --figure/--all")
    names = figures.PRESET_NAMES if args.all_figures else (args.figure,)
    for name in names:
        path = figures.emit(name, args.out, args.format, args.workers)
        print(path)
    return EXIT_OK


_COMMANDS = {
    "derive-params": _cmd_derive_params,
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "validate": _cmd_validate,
    "figure-data": _cmd_figure_data,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SteadyStateError as exc:
        print(f"solver: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except SpinKerrError as exc:
        print(f"solver: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"io: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
