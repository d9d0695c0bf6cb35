"""Sampled leak history shared by every transient model.

All models report the same record: time, efflux velocity at the breach,
oil mass rate, and cumulative spilled oil (volume and mass), plus a
per-sample phase tag ("drain", "phase1", "phase2", "cfd", ...).

The CSV schema is stable: ``t_s, velocity_mps, rate_kgps, cum_volume_m3,
cum_mass_kg, phase``.  Numbers are written with repr so repeated runs of
the same simulation produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

CSV_HEADER = ["t_s", "velocity_mps", "rate_kgps", "cum_volume_m3",
              "cum_mass_kg", "phase"]


@dataclass(frozen=True)
class LeakTimeSeries:
    """Leak history on a strictly increasing time grid.

    velocity is the (possibly signed) efflux speed through the breach;
    mass_rate and the cumulative series count spilled oil only, so the
    cumulative columns never decrease.
    """

    times: np.ndarray            # s
    velocity: np.ndarray         # m/s, signed (positive = oil out)
    mass_rate: np.ndarray        # kg/s of oil
    cumulative_volume: np.ndarray  # m^3 of oil
    cumulative_mass: np.ndarray    # kg of oil
    phase: tuple[str, ...]

    def __post_init__(self):
        n = len(self.times)
        for name in ("velocity", "mass_rate", "cumulative_volume",
                     "cumulative_mass"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} length != times length")
        if len(self.phase) != n:
            raise ValueError("phase length != times length")
        if n > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def total_volume(self) -> float:
        return float(self.cumulative_volume[-1]) if len(self) else 0.0

    @property
    def total_mass(self) -> float:
        return float(self.cumulative_mass[-1]) if len(self) else 0.0

    @property
    def peak_rate(self) -> float:
        return float(np.max(self.mass_rate)) if len(self) else 0.0

    def time_to_fraction(self, fraction: float) -> float:
        """First sample time at which cumulative mass reaches the given
        fraction of the final total (nan if the series never spills)."""
        total = self.total_mass
        if total <= 0.0:
            return float("nan")
        idx = np.searchsorted(self.cumulative_mass, fraction * total)
        idx = min(idx, len(self) - 1)
        return float(self.times[idx])


def from_rate_samples(times: Sequence[float], velocity: Sequence[float],
                      oil_volume_rate: Sequence[float], density_oil: float,
                      phase: Sequence[str]) -> LeakTimeSeries:
    """Assemble a series from sampled rates, integrating cumulative
    volume with the trapezoidal rule (exact for piecewise-linear rates).
    """
    t = np.asarray(times, dtype=float)
    vel = np.asarray(velocity, dtype=float)
    qv = np.asarray(oil_volume_rate, dtype=float)
    cum_vol = np.zeros_like(t)
    if len(t) > 1:
        cum_vol[1:] = np.cumsum(0.5 * (qv[1:] + qv[:-1]) * np.diff(t))
    return LeakTimeSeries(
        times=t,
        velocity=vel,
        mass_rate=qv * density_oil,
        cumulative_volume=cum_vol,
        cumulative_mass=cum_vol * density_oil,
        phase=tuple(phase),
    )


def to_csv_text(series: LeakTimeSeries) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for i in range(len(series)):
        writer.writerow([repr(float(series.times[i])),
                         repr(float(series.velocity[i])),
                         repr(float(series.mass_rate[i])),
                         repr(float(series.cumulative_volume[i])),
                         repr(float(series.cumulative_mass[i])),
                         series.phase[i]])
    return buf.getvalue()


def write_csv(series: LeakTimeSeries, path: str | Path) -> None:
    Path(path).write_text(to_csv_text(series), encoding="utf-8")


def read_csv(path: str | Path) -> LeakTimeSeries:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected series header: {header}")
        rows = list(reader)
    cols = list(zip(*rows)) if rows else [[]] * 6
    return LeakTimeSeries(
        times=np.array([float(x) for x in cols[0]]),
        velocity=np.array([float(x) for x in cols[1]]),
        mass_rate=np.array([float(x) for x in cols[2]]),
        cumulative_volume=np.array([float(x) for x in cols[3]]),
        cumulative_mass=np.array([float(x) for x in cols[4]]),
        phase=tuple(cols[5]),
    )
