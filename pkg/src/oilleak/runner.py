"""Model harness: run a scenario through any model, compare models, and
export results.

Exported artifacts per run: ``series.csv`` (shared time-series schema)
and ``summary.txt`` (key: value lines).  CFD runs add field snapshots.
CSV files are byte-reproducible across repeated invocations; wall-clock
runtime appears only in summaries and comparison tables, never in the
series files.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import estimators, orifice, series as series_mod, two_stage
from .estimators import (CONTINUOUS_CONSTANT, INSTANTANEOUS, SourceTerm,
                         reduce_to_source_term)
from .scenario import (BELOW_WATERLINE, Scenario, ScenarioError,
                       load_scenario, validate)
from .series import LeakTimeSeries

MODELS = ("estimate", "jet", "two_stage", "cfd")


class ModelPairingError(ValueError):
    """Scenario and model do not fit together (wrong breach position,
    missing estimator inputs, geometry that cannot be gridded...)."""


@dataclass
class RunOptions:
    """Knobs shared by the CLI and the compare harness."""

    dt: float = 0.1              # s, transient models
    t_end: float = 1000.0        # s
    grid: tuple[int, int] = (64, 64)
    cfl: float = 0.5
    snapshot_every: int = 0
    series_stride: int = 1
    # estimate-model inputs
    film_csv: str | None = None
    inventory: tuple[float, float, float] | None = None  # Z, C, R in tonnes
    flux: tuple[float, float, float, float] | None = None  # S, V, rho, t


@dataclass
class RunResult:
    label: str
    model: str
    series: LeakTimeSeries
    source_instantaneous: SourceTerm
    source_continuous: SourceTerm | None
    runtime_s: float
    notes: dict[str, Any] = field(default_factory=dict)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ModelPairingError(message)


def _estimate_series(total_mass: float, rho: float) -> LeakTimeSeries:
    """Degenerate one-sample series carrying a static spill estimate."""
    vol = total_mass / rho if rho > 0 else 0.0
    return LeakTimeSeries(
        times=np.array([0.0]), velocity=np.array([0.0]),
        mass_rate=np.array([0.0]), cumulative_volume=np.array([vol]),
        cumulative_mass=np.array([total_mass]), phase=("estimate",))


def _run_estimate(s: Scenario, opts: RunOptions) -> tuple[LeakTimeSeries,
                                                          dict[str, Any]]:
    notes: dict[str, Any] = {}
    total = 0.0
    used = []
    if opts.inventory is not None:
        z, c, r = opts.inventory
        spilled_t = estimators.inventory_balance(z, c, r)
        notes["inventory_spilled_t"] = spilled_t
        total += spilled_t * estimators.TONNE
        used.append("inventory")
    if opts.film_csv is not None:
        obs = estimators.read_film_observations(opts.film_csv)
        spilled = estimators.film_volume(obs, s.oil.density_oil)
        notes["film_spilled_kg"] = spilled
        total += spilled
        used.append("film")
    if opts.flux is not None:
        area, vel, rho, duration = opts.flux
        spilled = estimators.optical_flux(area, vel, rho, duration)
        notes["flux_spilled_kg"] = spilled
        total += spilled
        used.append("flux")
    _require(bool(used), "estimate model needs at least one input: "
                         "--film, --inventory or --flux")
    notes["estimators_used"] = "+".join(used)
    return _estimate_series(total, s.oil.density_oil), notes


def run(scenario: Scenario | str | Path, model: str,
        opts: RunOptions | None = None) -> RunResult:
    """Run one model on one scenario and reduce the result to source
    terms.  Deterministic for fixed inputs."""
    opts = opts if opts is not None else RunOptions()
    if not isinstance(scenario, Scenario):
        scenario = load_scenario(scenario)
    violations = validate(scenario)
    if violations:
        raise ScenarioError("invalid scenario: " + "; ".join(violations))
    if model not in MODELS:
        raise ModelPairingError(f"unknown model {model!r}; "
                                f"choose from {MODELS}")

    notes: dict[str, Any] = {}
    t0 = time.perf_counter()
    if model == "estimate":
        result_series, notes = _run_estimate(scenario, opts)
    elif model == "jet":
        result_series = orifice.drain_transient(scenario, opts.dt,
                                                opts.t_end)
        notes["discharge_coefficient"] = \
            orifice.resolve_discharge_coefficient(scenario)
        if result_series.phase and result_series.phase[-1] == "empty":
            notes["empty_time_s"] = float(result_series.times[-1])
    elif model == "two_stage":
        _require(scenario.breach.position == BELOW_WATERLINE
                 and scenario.breach.height_above_keel
                 < scenario.environment.draft,
                 "two_stage model needs a breach below the waterline")
        result_series = two_stage.simulate_two_stage(scenario, opts.dt,
                                                     opts.t_end)
        try:
            notes["phase1_duration_s"] = two_stage.phase1_duration(scenario)
            notes["initial_velocity_mps"] = two_stage.initial_velocity(
                scenario)
        except two_stage.EquilibriumReached:
            notes["phase1_duration_s"] = 0.0
        forcing = two_stage.scenario_forcing(scenario)
        notes["wave_amplitude_m"] = forcing.amplitude
        notes["wave_period_s"] = forcing.period
    else:  # cfd
        from .cfd import grid_for_scenario, run_leak_simulation
        nx, ny = opts.grid
        cfd_run = run_leak_simulation(
            scenario, nx=nx, ny=ny, cfl=opts.cfl, t_end=opts.t_end,
            snapshot_every=opts.snapshot_every,
            series_stride=opts.series_stride)
        result_series = cfd_run.series
        notes.update(cfd_run.notes)
        notes["snapshots"] = cfd_run.snapshots
        notes["head_series_m"] = cfd_run.head
        notes["exit_speed_series_mps"] = cfd_run.exit_speed
        notes["_grid_obj"] = grid_for_scenario(scenario, nx, ny)

    runtime = time.perf_counter() - t0
    inst = reduce_to_source_term(result_series, INSTANTANEOUS)
    try:
        cont = reduce_to_source_term(result_series, CONTINUOUS_CONSTANT)
    except estimators.EstimatorError:
        cont = None
    return RunResult(label=scenario.label, model=model,
                     series=result_series, source_instantaneous=inst,
                     source_continuous=cont, runtime_s=runtime, notes=notes)


# ---------------------------------------------------------------------------
# Comparison harness

@dataclass
class ComparisonRow:
    model: str
    status: str                 # "ok" | "failed: <reason>"
    total_volume_m3: float = float("nan")
    total_mass_kg: float = float("nan")
    peak_rate_kgps: float = float("nan")
    t50_s: float = float("nan")
    t90_s: float = float("nan")
    phase1_duration_s: float | None = None
    runtime_s: float = float("nan")


@dataclass
class ComparisonTable:
    scenario_label: str
    rows: list[ComparisonRow]
    results: dict[str, RunResult]


def compare(scenario: Scenario | str | Path, models: Sequence[str],
            opts: RunOptions | None = None) -> ComparisonTable:
    """Run several models on one scenario; failures become marked rows
    instead of aborting the table."""
    if len(models) < 2:
        raise ModelPairingError("compare needs at least two models")
    if not isinstance(scenario, Scenario):
        scenario = load_scenario(scenario)
    rows: list[ComparisonRow] = []
    results: dict[str, RunResult] = {}
    for model in models:
        try:
            res = run(scenario, model, opts)
        except Exception as exc:  # noqa: BLE001 - failure rows are the contract
            rows.append(ComparisonRow(model=model,
                                      status=f"failed: {exc}"))
            continue
        results[model] = res
        rows.append(ComparisonRow(
            model=model, status="ok",
            total_volume_m3=res.series.total_volume,
            total_mass_kg=res.series.total_mass,
            peak_rate_kgps=res.series.peak_rate,
            t50_s=res.series.time_to_fraction(0.5),
            t90_s=res.series.time_to_fraction(0.9),
            phase1_duration_s=res.notes.get("phase1_duration_s"),
            runtime_s=res.runtime_s,
        ))
    return ComparisonTable(scenario_label=scenario.label, rows=rows,
                           results=results)


def comparison_csv(table: ComparisonTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["model", "status", "total_volume_m3", "total_mass_kg",
                     "peak_rate_kgps", "t50_s", "t90_s",
                     "phase1_duration_s", "runtime_s"])
    for r in table.rows:
        writer.writerow([
            r.model, r.status, repr(r.total_volume_m3),
            repr(r.total_mass_kg), repr(r.peak_rate_kgps), repr(r.t50_s),
            repr(r.t90_s),
            "" if r.phase1_duration_s is None else repr(r.phase1_duration_s),
            f"{r.runtime_s:.3f}",
        ])
    return buf.getvalue()


def comparison_text(table: ComparisonTable) -> str:
    header = f"{'model':<10} {'status':<10} {'total m3':>12} " \
             f"{'total kg':>12} {'peak kg/s':>12} {'t50 s':>10} " \
             f"{'t90 s':>10} {'runtime s':>10}"
    lines = [f"scenario: {table.scenario_label}", header, "-" * len(header)]
    for r in table.rows:
        status = r.status if r.status == "ok" else "FAILED"
        lines.append(f"{r.model:<10} {status:<10} {r.total_volume_m3:>12.5g} "
                     f"{r.total_mass_kg:>12.5g} {r.peak_rate_kgps:>12.5g} "
                     f"{r.t50_s:>10.4g} {r.t90_s:>10.4g} {r.runtime_s:>10.3f}")
        if r.status != "ok":
            lines.append(f"    {r.status}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Export and audit

def _summary_lines(result: RunResult) -> list[str]:
    s = result.series
    lines = [
        f"label: {result.label}",
        f"model: {result.model}",
        f"samples: {len(s)}",
        f"total_volume_m3: {s.total_volume!r}",
        f"total_mass_kg: {s.total_mass!r}",
        f"peak_rate_kgps: {s.peak_rate!r}",
        f"t50_s: {s.time_to_fraction(0.5)!r}",
        f"t90_s: {s.time_to_fraction(0.9)!r}",
        "source_instantaneous: "
        f"total_mass_kg={result.source_instantaneous.total_mass!r} "
        f"start_time_s={result.source_instantaneous.start_time!r}",
    ]
    if result.source_continuous is not None:
        sc = result.source_continuous
        lines.append(f"source_continuous: rate_kgps={sc.rate!r} "
                     f"duration_s={sc.duration!r} "
                     f"total_mass_kg={sc.total_mass!r}")
    else:
        lines.append("source_continuous: unavailable (no sustained flow)")
    lines.append(f"runtime_s: {result.runtime_s:.3f}")
    for key, value in sorted(result.notes.items()):
        if key.startswith("_") or key in ("snapshots", "head_series_m", "exit_speed_series_mps"):
            continue
        lines.append(f"note.{key}: {value}")
    return lines


def export(result: RunResult, directory: str | Path) -> list[Path]:
    """Write series.csv, summary.txt and any CFD snapshots; returns the
    paths written."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []

    series_path = directory / "series.csv"
    series_mod.write_csv(result.series, series_path)
    paths.append(series_path)

    summary_path = directory / "summary.txt"
    summary_path.write_text("\n".join(_summary_lines(result)) + "\n",
                            encoding="utf-8")
    paths.append(summary_path)

    snapshots = result.notes.get("snapshots") or []
    if snapshots:
        from .cfd import write_snapshot
        from .cfd.grid import Grid2D
        grid = result.notes.get("_grid_obj")
        if grid is None:
            ny, nx = snapshots[0][2]["p"].shape
            grid = Grid2D(nx=nx, ny=ny, dx=1.0 / nx, dy=1.0 / ny)
        for step_no, sim_time, fields in snapshots:
            snap_path = directory / f"snapshot_{step_no:06d}.dat"
            write_snapshot(snap_path, grid, sim_time, fields)
            paths.append(snap_path)
    return paths


def audit(run_dir: str | Path, rel_tol: float = 1e-12) -> list[str]:
    """Re-derive every summary number from the exported series; returns
    the list of mismatches (empty = consistent)."""
    run_dir = Path(run_dir)
    s = series_mod.read_csv(run_dir / "series.csv")
    expected = {
        "samples": float(len(s)),
        "total_volume_m3": s.total_volume,
        "total_mass_kg": s.total_mass,
        "peak_rate_kgps": s.peak_rate,
        "t50_s": s.time_to_fraction(0.5),
        "t90_s": s.time_to_fraction(0.9),
    }
    problems = []
    text = (run_dir / "summary.txt").read_text(encoding="utf-8")
    seen = {}
    for line in text.splitlines():
        if ":" not in line:
            continue
        key, _, value = line.partition(":")
        seen[key.strip()] = value.strip()
    for key, want in expected.items():
        if key not in seen:
            problems.append(f"summary missing {key}")
            continue
        got = float(seen[key])
        if np.isnan(want) and np.isnan(got):
            continue
        if abs(got - want) > rel_tol * max(1.0, abs(want)):
            problems.append(f"{key}: summary {got!r} != series {want!r}")
    return problems
