"""Command-line front end.

One subcommand per model plus the comparison and audit tools:

    oilleak jet       --scenario demo.yaml --dt 0.1 --t-end 20000 --out run/
    oilleak two-stage --scenario sub.yaml  --dt 0.01 --t-end 600
    oilleak cfd       --scenario demo.yaml --grid 64x64 --cfl 0.5 --t-end 2
    oilleak estimate  --scenario demo.yaml --film films.csv
    oilleak compare   --scenario demo.yaml --models jet,cfd --t-end 2
    oilleak audit     run/
    oilleak run       --scenario demo.yaml --model jet      (generic form)

Exit codes: 0 success, 2 scenario/pairing/validation problem,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import runner
from .cfd.solver import ProjectionDiverged
from .estimators import EstimatorError
from .runner import ModelPairingError, RunOptions
from .scenario import ScenarioError
from .two_stage import NotSubmerged

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _add_common(p: argparse.ArgumentParser, with_model: bool = False) -> None:
    p.add_argument("--scenario", required=True, help="scenario YAML file")
    if with_model:
        p.add_argument("--model", required=True,
                       choices=list(runner.MODELS))
    p.add_argument("--dt", type=float, default=0.1,
                   help="time step for the transient models, s")
    p.add_argument("--t-end", type=float, default=1000.0,
                   help="simulated end time, s")
    p.add_argument("--out", help="output directory for artifacts")
    p.add_argument("--grid", default="64x64",
                   help="CFD grid as NXxNY")
    p.add_argument("--cfl", type=float, default=0.5, help="CFD CFL number")
    p.add_argument("--snapshot-every", type=int, default=0,
                   help="CFD: write a field snapshot every N steps")
    p.add_argument("--seed", type=int, default=None,
                   help="reserved; no stochastic components at present")


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        nx, ny = text.lower().split("x")
        return int(nx), int(ny)
    except ValueError as exc:
        raise ModelPairingError(f"bad --grid {text!r}, expected NXxNY") \
            from exc


def _options(args: argparse.Namespace) -> RunOptions:
    opts = RunOptions(dt=args.dt, t_end=args.t_end,
                      grid=_parse_grid(args.grid), cfl=args.cfl,
                      snapshot_every=args.snapshot_every)
    if getattr(args, "film", None):
        opts.film_csv = args.film
    if getattr(args, "inventory", None):
        opts.inventory = tuple(args.inventory)
    if getattr(args, "flux", None):
        opts.flux = tuple(args.flux)
    return opts


def _run_and_report(scenario: str, model: str,
                    args: argparse.Namespace) -> int:
    result = runner.run(scenario, model, _options(args))
    s = result.series
    print(f"model: {result.model}  scenario: {result.label}")
    print(f"samples: {len(s)}  total: {s.total_volume:.6g} m^3 "
          f"({s.total_mass:.6g} kg)  peak rate: {s.peak_rate:.6g} kg/s")
    if result.source_continuous is not None:
        sc = result.source_continuous
        print(f"constant-rate source term: {sc.rate:.6g} kg/s over "
              f"{sc.duration:.6g} s")
    for key, value in sorted(result.notes.items()):
        if key.startswith("_") or key in ("snapshots", "head_series_m", "exit_speed_series_mps"):
            continue
        print(f"  {key}: {value}")
    if args.out:
        paths = runner.export(result, args.out)
        print("wrote: " + ", ".join(str(p) for p in paths))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="oilleak",
        description="Breached-tank oil leak source terms: estimators, "
                    "orifice jets, two-stage submerged discharge, 2D CFD.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("jet", "two-stage", "cfd"):
        p = sub.add_parser(name, help=f"run the {name} model")
        _add_common(p)

    p = sub.add_parser("estimate", help="closed-form spill estimators")
    _add_common(p)
    p.add_argument("--film", help="film observation CSV "
                                  "(area_m2, appearance_or_thickness_m)")
    p.add_argument("--inventory", nargs=3, type=float,
                   metavar=("STOCK_T", "CONSUMED_T", "REMAINING_T"),
                   help="inventory balance inputs, tonnes")
    p.add_argument("--flux", nargs=4, type=float,
                   metavar=("AREA_M2", "VEL_MPS", "RHO", "DURATION_S"),
                   help="optical flux inputs")

    p = sub.add_parser("run", help="generic run with --model")
    _add_common(p, with_model=True)
    p.add_argument("--film")
    p.add_argument("--inventory", nargs=3, type=float)
    p.add_argument("--flux", nargs=4, type=float)

    p = sub.add_parser("compare", help="run several models side by side")
    _add_common(p)
    p.add_argument("--models", default="jet,cfd",
                   help="comma-separated model ids")

    p = sub.add_parser("audit",
                       help="check an exported run directory for "
                            "series/summary consistency")
    p.add_argument("run_dir")

    args = parser.parse_args(argv)

    try:
        if args.command == "audit":
            problems = runner.audit(args.run_dir)
            if problems:
                for item in problems:
                    print(f"MISMATCH {item}")
                return EXIT_VALIDATION
            print("summary consistent with series")
            return EXIT_OK
        if args.command == "compare":
            models = [m.strip().replace("-", "_")
                      for m in args.models.split(",") if m.strip()]
            table = runner.compare(args.scenario, models, _options(args))
            print(runner.comparison_text(table))
            if args.out:
                out = Path(args.out)
                out.mkdir(parents=True, exist_ok=True)
                csv_path = out / "comparison.csv"
                csv_path.write_text(runner.comparison_csv(table),
                                    encoding="utf-8")
                for model, result in table.results.items():
                    runner.export(result, out / model)
                print(f"wrote: {csv_path}")
            if any(r.status != "ok" for r in table.rows):
                return EXIT_VALIDATION
            return EXIT_OK
        model = args.command.replace("-", "_") if args.command != "run" \
            else args.model
        return _run_and_report(args.scenario, model, args)
    except (ScenarioError, ModelPairingError, NotSubmerged,
            EstimatorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ProjectionDiverged as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    raise SystemExit(main())
