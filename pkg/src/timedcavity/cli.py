"""Command line entry point ``simulate``.

    simulate [--preset NAME | --config PATH] [options]     write trajectory CSVs
    simulate sweep --axis AXIS --values V1,V2,... [...]     write a summary CSV
    simulate verify FILE.csv [...]                          check CSV invariants

Exit status: 0 ok, 2 configuration error, 3 integration diagnostic.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ConfigError
from .geometry import DD_VARIANTS, SystemConfig
from .lindblad import DEFAULT_DT, DEFAULT_STRIDE
from .scenarios import (DEFAULT_TMAX, PRESETS, SWEEP_AXES, Curve, get_preset,
                        load_config, run, sweep, sweep_csv, verify_csv)

EXIT_OK, EXIT_CONFIG, EXIT_DIAGNOSTIC = 0, 2, 3


def _add_source_args(p):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=sorted(PRESETS), help="figure preset")
    src.add_argument("--config", type=Path, help="flat key=value config file")
    p.add_argument("--tmax", type=float, default=DEFAULT_TMAX, help="final time, 1/gamma")
    p.add_argument("--dt", type=float, default=DEFAULT_DT, help="RK4 step, 1/gamma")
    p.add_argument("--theta", type=float, help="override input angle theta (rad)")
    p.add_argument("--kappa", type=float, help="override cavity decay rate")
    p.add_argument("--no-dd", action="store_true", help="switch dipole-dipole terms off")
    p.add_argument("--dd-variant", choices=DD_VARIANTS, help="dipole-dipole formula variant")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")


def _run_parser():
    p = argparse.ArgumentParser(prog="simulate", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_source_args(p)
    p.add_argument("--stride", type=int, default=DEFAULT_STRIDE,
                   help="steps between output samples")
    p.add_argument("--no-preflight", action="store_true",
                   help="skip the dt/2 convergence check")
    return p


def _sweep_parser():
    p = argparse.ArgumentParser(prog="simulate sweep")
    _add_source_args(p)
    p.add_argument("--axis", required=True, choices=SWEEP_AXES)
    p.add_argument("--values", default="",
                   help="comma-separated values; default is the preset's own list")
    p.add_argument("--workers", type=int, default=1)
    return p


def _verify_parser():
    p = argparse.ArgumentParser(prog="simulate verify")
    p.add_argument("files", nargs="+", type=Path)
    return p


def _override(config: SystemConfig, args) -> SystemConfig:
    changes = {}
    if args.theta is not None:
        changes["theta"] = args.theta
    if args.kappa is not None:
        changes["kappa"] = args.kappa
    if args.no_dd:
        changes["dd_enabled"] = False
    if args.dd_variant is not None:
        changes["dd_variant"] = args.dd_variant
    return config.with_(**changes) if changes else config


def _curves(args) -> tuple[str, list[Curve]]:
    if args.preset:
        preset = get_preset(args.preset)
        curves, labels = [], set()
        for c in preset.curves:
            label = c.label
            if args.no_dd and not label.endswith("_nodd"):
                label += "_nodd"
            if label in labels:
                continue
            labels.add(label)
            curves.append(Curve(label, _override(c.config, args)))
        return preset.name, curves
    if args.config:
        return args.config.stem, [Curve("", _override(load_config(args.config), args))]
    return "run", [Curve("", _override(SystemConfig(), args))]


def cmd_run(argv) -> int:
    args = _run_parser().parse_args(argv)
    prefix, curves = _curves(args)
    report = run(curves, args.out, prefix, t_max=args.tmax, dt=args.dt,
                 stride=args.stride, preflight=not args.no_preflight)
    for r in report.results:
        if r.error:
            print(f"FAILED {prefix} {r.label}: {r.error}", file=sys.stderr)
        else:
            print(r.path)
    return EXIT_OK if report.ok else EXIT_DIAGNOSTIC


def cmd_sweep(argv) -> int:
    args = _sweep_parser().parse_args(argv)
    prefix, curves = _curves(args)
    if args.values.strip():
        try:
            values = [float(v) for v in args.values.split(",") if v.strip()]
        except ValueError:
            raise ConfigError(f"--values must be comma-separated numbers: {args.values!r}")
    elif args.preset and get_preset(args.preset).sweep_axis == args.axis:
        values = list(get_preset(args.preset).sweep_values)
    else:
        values = []
    rows = sweep(curves[0].config, args.axis, values, t_max=args.tmax, dt=args.dt,
                 workers=args.workers)
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / f"{prefix}_sweep_{args.axis}.csv"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(sweep_csv(rows))
    print(path)
    failed = [r for r in rows if r[-1]]
    for r in failed:
        print(f"FAILED {args.axis}={r[0]!r}: {r[-1]}", file=sys.stderr)
    return EXIT_DIAGNOSTIC if failed else EXIT_OK


def cmd_verify(argv) -> int:
    args = _verify_parser().parse_args(argv)
    status = EXIT_OK
    for path in args.files:
        problems = verify_csv(path.read_text(encoding="utf-8"))
        if problems:
            status = EXIT_DIAGNOSTIC
            print(f"{path}: {len(problems)} problem(s)")
            for msg in problems[:20]:
                print(f"  {msg}")
        else:
            print(f"{path}: ok")
    return status


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    commands = {"sweep": cmd_sweep, "verify": cmd_verify}
    try:
        if argv and argv[0] in commands:
            return commands[argv[0]](argv[1:])
        return cmd_run(argv)
    except ValueError as exc:
        # ConfigError and bad numeric arguments (dt > tmax, negative dt)
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
