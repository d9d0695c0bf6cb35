"""Hydrostatic orifice discharge models.

Covers the breach-jet family driven by static head and tank pressure:

* constant-head volume for an above-waterline hole,
  V = sqrt(2 g h0) * A * t;
* the pressure-head mass rate
  Q = Cd * A * rho * sqrt(2 (P_tank - P_out)/rho + 2 g H);
* a quasi-steady draining transient (evaluate the rate, then lower the
  level by the discharged volume), which for a vented tank reduces to
  the classical Torricelli solution;
* discharge-coefficient selection from the orifice flow regime
  (single-phase, cavitating, hydraulic flip) via the cavitation number.

The regime thresholds and per-regime discharge coefficients are
implementation defaults, configurable per call; only the existence of
the three regimes is physics, the numbers are engineering practice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scenario import ABOVE_WATERLINE, Scenario
from .series import LeakTimeSeries

SINGLE_PHASE = "single_phase"
CAVITATING = "cavitating"
HYDRAULIC_FLIP = "hydraulic_flip"

# Defaults, overridable per call: K above the threshold keeps the jet
# attached and single-phase; below it the core cavitates.
DEFAULT_CAVITATION_THRESHOLD = 1.8
DEFAULT_CD = {
    SINGLE_PHASE: 0.61,
    CAVITATING: 0.70,
    HYDRAULIC_FLIP: 0.60,
}


class NoOutflow(Exception):
    """External pressure dominates: the radicand of the rate formula is
    negative, so there is no outflow.  Distinct from a numeric failure."""


@dataclass(frozen=True)
class FlowRegime:
    kind: str                   # single_phase | cavitating | hydraulic_flip
    effective_Cd: float

    def __post_init__(self):
        if not 0 < self.effective_Cd <= 1:
            raise ValueError("effective_Cd must be in (0, 1]")


def above_waterline_volume(initial_head_h0: float, hole_area: float,
                           leak_duration: float,
                           gravity: float = 9.81) -> float:
    """Leaked volume (m^3) for a constant-head above-waterline hole.

    Idealizes the efflux as steady at sqrt(2 g h0); the product with the
    hole area and the leak duration gives the volume.
    """
    if min(initial_head_h0, hole_area, leak_duration) < 0:
        raise ValueError("head, area and duration must be >= 0")
    return math.sqrt(2.0 * gravity * initial_head_h0) * hole_area \
        * leak_duration


def orifice_mass_rate(Cd: float, hole_area: float, density_oil: float,
                      ullage_pressure: float, outside_pressure: float,
                      head_H: float, gravity: float = 9.81) -> float:
    """Oil mass rate (kg/s) through a pressurized orifice.

    head_H is the liquid surface height above the hole centerline.
    Raises NoOutflow when the external pressure exceeds the combined
    internal pressure and static head.
    """
    radicand = 2.0 * (ullage_pressure - outside_pressure) / density_oil \
        + 2.0 * gravity * head_H
    if radicand < 0.0:
        raise NoOutflow("no outflow (external pressure dominates): "
                        f"radicand {radicand:.6g} < 0")
    return Cd * hole_area * density_oil * math.sqrt(radicand)


def classify_regime(upstream_pressure: float, downstream_pressure: float,
                    vapor_pressure: float,
                    geometry_flip_prone: bool = False,
                    cavitation_threshold: float = DEFAULT_CAVITATION_THRESHOLD,
                    cd_table: dict[str, float] | None = None) -> FlowRegime:
    """Pick the orifice flow regime and its discharge coefficient.

    Uses the cavitation number
    K = (P_up - P_vap) / (P_up - P_down); K at or above the threshold is
    single-phase, below it cavitating.  A flip-prone geometry overrides
    both: the detached jet never reattaches.
    """
    cds = DEFAULT_CD if cd_table is None else {**DEFAULT_CD, **cd_table}
    if geometry_flip_prone:
        return FlowRegime(HYDRAULIC_FLIP, cds[HYDRAULIC_FLIP])
    if vapor_pressure > upstream_pressure:
        raise ValueError("non-physical pressures: vapor pressure exceeds "
                         "upstream pressure")
    if not upstream_pressure > downstream_pressure:
        raise ValueError("classify_regime needs upstream_pressure > "
                         "downstream_pressure")
    K = (upstream_pressure - vapor_pressure) \
        / (upstream_pressure - downstream_pressure)
    if K >= cavitation_threshold:
        return FlowRegime(SINGLE_PHASE, cds[SINGLE_PHASE])
    return FlowRegime(CAVITATING, cds[CAVITATING])


def _breach_outside_pressure(s: Scenario) -> float:
    """Ambient pressure at the breach: atmospheric above the waterline,
    atmospheric plus water column below it."""
    env = s.environment
    if s.breach.position == ABOVE_WATERLINE:
        return env.atmospheric_pressure
    depth = env.draft - s.breach.height_above_keel
    return env.atmospheric_pressure + env.density_water * env.gravity * depth


def resolve_discharge_coefficient(s: Scenario) -> float:
    """Scenario Cd when given, else the regime-classified coefficient at
    the initial head."""
    if s.breach.discharge_coefficient is not None:
        return s.breach.discharge_coefficient
    head0 = max(s.tank.initial_liquid_level - s.breach.height_above_keel, 0.0)
    upstream = s.tank.initial_ullage_pressure \
        + s.oil.density_oil * s.environment.gravity * head0
    downstream = _breach_outside_pressure(s)
    if upstream <= downstream:
        # Stalled breach: regime is moot, fall back to single-phase.
        return DEFAULT_CD[SINGLE_PHASE]
    return classify_regime(upstream, downstream,
                           s.oil.vapor_pressure).effective_Cd


def drain_transient(s: Scenario, dt: float, t_end: float) -> LeakTimeSeries:
    """Quasi-steady draining of the tank through the breach.

    Each step evaluates the orifice rate at the current head, then
    lowers the level by the discharged volume over dt (explicit Euler,
    first order).  Cumulative volume mirrors the level decrement
    exactly, so level(t) = initial_level - cum_volume(t) / tank_area.

    Stops at t_end or when the surface reaches the hole (final sample
    tagged "empty").  A step whose radicand goes negative reports zero
    rate tagged "stalled" instead of aborting.
    """
    if dt <= 0 or t_end <= 0:
        raise ValueError("dt and t_end must be > 0")

    tank, oil, env = s.tank, s.oil, s.environment
    area_t = tank.free_surface_area
    area_b = s.breach.area
    rho = oil.density_oil
    g = env.gravity
    cd = resolve_discharge_coefficient(s)
    p_out = _breach_outside_pressure(s)

    sealed = tank.sealed
    if sealed:
        pg0 = tank.initial_gas_pressure
        vg0 = tank.initial_gas_volume

    level = tank.initial_liquid_level
    level0 = level
    hole = s.breach.height_above_keel

    times = [0.0]
    vels = [0.0]
    cumvol = [0.0]
    tags: list[str] = []

    n_steps = int(round(t_end / dt))
    t = 0.0
    spilled = 0.0

    def ullage_pressure(lvl: float) -> float:
        if not sealed:
            return tank.initial_ullage_pressure
        vg = vg0 + area_t * (level0 - lvl)  # isothermal gas expansion
        return pg0 * vg0 / vg

    head = level - hole
    if head <= 0.0:
        # Surface already at the hole: nothing can drain.
        return LeakTimeSeries(
            times=np.array([0.0]), velocity=np.array([0.0]),
            mass_rate=np.array([0.0]), cumulative_volume=np.array([0.0]),
            cumulative_mass=np.array([0.0]), phase=("empty",))

    # Sample 0 carries the initial rate.
    radicand = 2.0 * (ullage_pressure(level) - p_out) / rho + 2.0 * g * head
    vels[0] = cd * math.sqrt(radicand) if radicand > 0.0 else 0.0
    tags.append("drain" if radicand > 0.0 else "stalled")

    emptied = False
    for _ in range(n_steps):
        velocity = vels[-1]
        dvol = velocity * area_b * dt
        max_dvol = (level - hole) * area_t
        if dvol >= max_dvol:
            dvol = max_dvol
            emptied = True
        spilled += dvol
        level -= dvol / area_t
        t += dt

        head = level - hole
        if emptied or head <= 0.0:
            times.append(t)
            vels.append(0.0)
            cumvol.append(spilled)
            tags.append("empty")
            break
        radicand = 2.0 * (ullage_pressure(level) - p_out) / rho \
            + 2.0 * g * head
        velocity = cd * math.sqrt(radicand) if radicand > 0.0 else 0.0
        times.append(t)
        vels.append(velocity)
        cumvol.append(spilled)
        tags.append("drain" if radicand > 0.0 else "stalled")

    t_arr = np.array(times)
    v_arr = np.array(vels)
    cv_arr = np.array(cumvol)
    return LeakTimeSeries(
        times=t_arr,
        velocity=v_arr,
        mass_rate=v_arr * area_b * rho,
        cumulative_volume=cv_arr,
        cumulative_mass=cv_arr * rho,
        phase=tuple(tags),
    )
