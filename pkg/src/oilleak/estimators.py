"""Spill-quantity estimators and source-term reduction.

Three closed-form estimators give a spilled quantity without modelling
the release transient:

* inventory balance - stock before, consumption, remainder (tonnes);
* film volume - observed slick areas times per-colour film thickness;
* optical flux - breach area x mean jet velocity x density x duration.

``reduce_to_source_term`` collapses any simulated leak history to the
release description downstream drift models consume: an instantaneous
release or a constant-rate release of the same total mass.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .series import LeakTimeSeries

TONNE = 1000.0  # kg

INSTANTANEOUS = "instantaneous"
CONTINUOUS_CONSTANT = "continuous_constant"


class EstimatorError(ValueError):
    """Inconsistent estimator inputs (bad records, unknown codes...)."""


@dataclass(frozen=True)
class FilmObservation:
    """One slick colour region: area plus either an explicit thickness
    in metres (float) or an appearance-class code (str)."""

    area: float                 # m^2
    appearance: float | str     # thickness in m, or appearance code

    def __post_init__(self):
        if self.area < 0:
            raise EstimatorError("film observation area must be >= 0")
        if not isinstance(self.appearance, str) and self.appearance < 0:
            raise EstimatorError("explicit film thickness must be >= 0")


# Representative film thickness per appearance class, metres.
# Implementation defaults in the spirit of the Bonn Agreement appearance
# code; they are this package's choice, not authoritative values, and any
# call can override them with its own table.
DEFAULT_APPEARANCE_THICKNESS = {
    "sheen": 1e-7,          # silvery/grey sheen, ~0.04-0.30 um band
    "rainbow": 1e-6,        # ~0.3-5 um band
    "metallic": 1e-5,       # ~5-50 um band
    "discontinuous": 1e-4,  # discontinuous true colour, ~50-200 um band
    "continuous": 3e-4,     # continuous true colour, >200 um
}

_APPEARANCE_ALIASES = {
    "silver": "sheen",
    "sheen/silver": "sheen",
    "grey": "sheen",
    "true_color_discontinuous": "discontinuous",
    "true_color_continuous": "continuous",
}


def thickness_from_appearance(code: str,
                              table: Mapping[str, float] | None = None
                              ) -> float:
    """Representative film thickness (m) for an appearance-class code.

    With ``table`` given the lookup uses it verbatim; otherwise the
    shipped default table (plus common aliases) applies.
    """
    if table is not None:
        if code not in table:
            raise EstimatorError(
                f"unknown appearance code {code!r}; "
                f"known: {sorted(table)}")
        return float(table[code])
    key = _APPEARANCE_ALIASES.get(code.strip().lower(), code.strip().lower())
    if key not in DEFAULT_APPEARANCE_THICKNESS:
        raise EstimatorError(
            f"unknown appearance code {code!r}; "
            f"known: {sorted(DEFAULT_APPEARANCE_THICKNESS)}")
    return DEFAULT_APPEARANCE_THICKNESS[key]


def inventory_balance(total_stock_before: float, consumed_since_record: float,
                      remaining_after: float) -> float:
    """Spilled quantity from ship oil records, tonnes.

    spilled = stock at last record - consumption since - remainder.
    A negative result means the records contradict each other and is an
    error rather than a silent clamp to zero.
    """
    if min(total_stock_before, consumed_since_record, remaining_after) < 0:
        raise EstimatorError("inventory quantities must be >= 0")
    spilled = total_stock_before - consumed_since_record - remaining_after
    if spilled < 0:
        raise EstimatorError(
            "inconsistent inventory records: consumption plus remainder "
            f"exceed the recorded stock by {-spilled} t")
    return spilled


def film_volume(observations: Sequence[FilmObservation],
                density_oil: float,
                table: Mapping[str, float] | None = None) -> float:
    """Spilled mass (kg) from slick observations: sum of area x thickness
    x density over colour regions."""
    if not observations:
        raise EstimatorError("film_volume needs at least one observation")
    if density_oil <= 0:
        raise EstimatorError("density_oil must be > 0")
    total = 0.0
    for obs in observations:
        if isinstance(obs.appearance, str):
            thickness = thickness_from_appearance(obs.appearance, table)
        else:
            thickness = float(obs.appearance)
        total += obs.area * thickness
    return total * density_oil


def optical_flux(breach_area: float, mean_velocity: float,
                 density_oil: float, duration: float) -> float:
    """Spilled mass (kg) from an observed mean jet velocity: area x
    velocity x density x duration."""
    if min(breach_area, mean_velocity, density_oil, duration) < 0:
        raise EstimatorError("optical_flux inputs must be >= 0")
    return breach_area * mean_velocity * density_oil * duration


@dataclass(frozen=True)
class SourceTerm:
    """Reduced release description for downstream drift models."""

    mode: str                   # "instantaneous" | "continuous_constant"
    total_mass: float           # kg
    start_time: float           # s
    rate: float | None = None   # kg/s, continuous only
    duration: float | None = None  # s, continuous only

    def __post_init__(self):
        if self.mode == INSTANTANEOUS:
            if self.rate is not None or self.duration is not None:
                raise ValueError("instantaneous source term carries no "
                                 "rate/duration")
        elif self.mode == CONTINUOUS_CONSTANT:
            if self.rate is None or self.duration is None:
                raise ValueError("continuous source term needs rate and "
                                 "duration")
            if abs(self.rate * self.duration - self.total_mass) \
                    > 1e-9 * max(1.0, abs(self.total_mass)):
                raise ValueError("rate x duration != total_mass")
        else:
            raise ValueError(f"unknown source term mode {self.mode!r}")


def reduce_to_source_term(series: LeakTimeSeries, mode: str) -> SourceTerm:
    """Collapse a leak history to an instantaneous or constant-rate
    release conserving total mass exactly."""
    if len(series) == 0:
        raise EstimatorError("cannot reduce an empty series")
    total = series.total_mass
    if mode == INSTANTANEOUS:
        return SourceTerm(mode=INSTANTANEOUS, total_mass=total,
                          start_time=float(series.times[0]))
    if mode != CONTINUOUS_CONSTANT:
        raise EstimatorError(f"unknown reduction mode {mode!r}")

    flowing = [i for i in range(len(series)) if series.mass_rate[i] > 0.0]
    if not flowing:
        raise EstimatorError("series has no nonzero flow; cannot form a "
                             "continuous source term")
    start = float(series.times[flowing[0]])
    duration = float(series.times[-1]) - start
    if duration <= 0.0:
        raise EstimatorError("zero-duration series; cannot form a "
                             "continuous source term")
    return SourceTerm(mode=CONTINUOUS_CONSTANT, total_mass=total,
                      start_time=start, rate=total / duration,
                      duration=duration)


# ---------------------------------------------------------------------------
# Film-observation table ingestion: columns `area_m2,
# appearance_or_thickness_m`; the second column is a float thickness when
# it parses as one, an appearance code otherwise.

def read_film_observations(path: str | Path) -> list[FilmObservation]:
    out: list[FilmObservation] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise EstimatorError(f"{path}: empty film observation table")
        expected = ["area_m2", "appearance_or_thickness_m"]
        if [h.strip() for h in header] != expected:
            raise EstimatorError(
                f"{path}: expected header {','.join(expected)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                raise EstimatorError(f"{path}:{lineno}: expected 2 columns")
            area = float(row[0])
            raw = row[1].strip()
            try:
                appearance: float | str = float(raw)
            except ValueError:
                appearance = raw
            out.append(FilmObservation(area=area, appearance=appearance))
    return out
