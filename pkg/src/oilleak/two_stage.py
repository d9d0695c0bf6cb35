"""Two-stage discharge through a submerged breach.

Phase 1: the density mismatch between tank oil and outside water drives
an outflow that decays linearly in time until the hydrostatic heads
balance.  Phase 2: waves (or hull motion) perturb that balance
sinusoidally, pumping oil/water out and water in each half cycle.

Velocities here follow the convention of the underlying model: they
already include the discharge coefficient, so volume rate = velocity x
breach area.  Positive velocity is outflow.

Wave forcing comes from two wind-speed anchor points for the open sea
(10 kt -> a = 0.6 m, T = 2.78 s; 3 kt -> a = 0.3 m, T = 1.3 s) with
linear interpolation/extrapolation between and beyond them, or from a
fixed nearshore band midpoint, or from an explicit override.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scenario import BELOW_WATERLINE, Scenario
from .series import LeakTimeSeries

OPEN_SEA = "open_sea"
NEARSHORE = "nearshore"
OVERRIDE = "override"

# Open-sea wind anchors: (wind speed kt, amplitude m, period s).
WIND_ANCHOR_LOW = (3.0, 0.3, 1.3)
WIND_ANCHOR_HIGH = (10.0, 0.6, 2.78)

# Nearshore band midpoints: amplitude range 0.01-0.05 m, period 1-2 s.
NEARSHORE_AMPLITUDE = 0.03
NEARSHORE_PERIOD = 1.5

_FLOOR = 1e-9  # keeps extrapolated amplitude/period strictly positive

PHASE_ONE = "one"
PHASE_TWO = "two"
PHASE_DONE = "done"


class NotSubmerged(ValueError):
    """The breach is not below the waterline; the two-stage model does
    not apply to this scenario."""


class EquilibriumReached(Exception):
    """The interior head is already at/below the external head: phase 1
    does not occur and discharge starts directly in phase 2."""


@dataclass(frozen=True)
class WaveForcing:
    amplitude: float            # m
    period: float               # s
    source: str = OVERRIDE      # open_sea | nearshore | override

    def __post_init__(self):
        if not (self.amplitude > 0 and self.period > 0):
            raise ValueError("wave amplitude and period must be > 0")


@dataclass(frozen=True)
class TwoStageState:
    """Instantaneous simulator state, mostly for diagnostics."""

    phase: str                  # one | two | done
    velocity: float             # m/s, signed (positive = out)
    elapsed_in_phase: float     # s
    gas_pressure: float         # Pa
    gas_volume: float           # m^3 (inf for vented tanks)
    liquid_level: float         # m above tank bottom
    hole_pressure: float        # Pa, hydrostatic at the breach (diagnostic)


def wave_parameters(wind_speed: float, nearshore: bool = False) -> WaveForcing:
    """Wave amplitude and period for a wind speed in knots.

    Open sea: linear through the two wind anchors, extrapolated beyond
    them and floored just above zero.  Nearshore: fixed midpoint of the
    nearshore band regardless of wind (documented simplification).
    """
    if wind_speed < 0:
        raise ValueError("wind_speed must be >= 0")
    if nearshore:
        return WaveForcing(NEARSHORE_AMPLITUDE, NEARSHORE_PERIOD,
                           source=NEARSHORE)
    w0, a0, t0 = WIND_ANCHOR_LOW
    w1, a1, t1 = WIND_ANCHOR_HIGH
    if wind_speed == w0:
        return WaveForcing(a0, t0, source=OPEN_SEA)
    if wind_speed == w1:
        return WaveForcing(a1, t1, source=OPEN_SEA)
    frac = (wind_speed - w0) / (w1 - w0)
    amplitude = max(a0 + frac * (a1 - a0), _FLOOR)
    period = max(t0 + frac * (t1 - t0), _FLOOR)
    return WaveForcing(amplitude, period, source=OPEN_SEA)


def scenario_forcing(s: Scenario) -> WaveForcing:
    """Forcing for a scenario: explicit override wins, then the
    nearshore flag, then the open-sea wind lookup."""
    env = s.environment
    if env.wave_override is not None:
        return WaveForcing(env.wave_override.amplitude,
                           env.wave_override.period, source=OVERRIDE)
    return wave_parameters(env.wind_speed, env.nearshore)


def _require_submerged(s: Scenario) -> None:
    if s.breach.position != BELOW_WATERLINE \
            or not s.breach.height_above_keel < s.environment.draft:
        raise NotSubmerged(
            "two-stage discharge needs a breach below the waterline")


def _cd(s: Scenario) -> float:
    from .orifice import resolve_discharge_coefficient
    return resolve_discharge_coefficient(s)


def initial_velocity(s: Scenario) -> float:
    """Phase-1 starting efflux speed (m/s) at the breach.

    Balances the interior oil head against the outside water head:
    u0 = Cd * sqrt(2 g (L_l - L_B) - 2 g (rho_w/rho_l) (D - L_B)).
    Raises EquilibriumReached when the radicand is negative (phase 1 is
    skipped); exactly zero radicand returns 0 (continuous limit).
    """
    _require_submerged(s)
    tank, breach, env, oil = s.tank, s.breach, s.environment, s.oil
    g = env.gravity
    inner = 2.0 * (tank.initial_liquid_level - breach.height_above_keel) * g
    outer = 2.0 * (env.density_water / oil.density_oil) \
        * (env.draft - breach.height_above_keel) * g
    radicand = inner - outer
    if radicand < 0.0:
        raise EquilibriumReached(
            "already at/below hydrostatic equilibrium: internal head "
            f"deficit {radicand / (2 * g):.6g} m")
    return _cd(s) * math.sqrt(radicand)


def _decay_slope(s: Scenario) -> float:
    """Velocity decay rate K (m/s^2) of the phase-1 linear law, with the
    gas term frozen at its initial value; vented tanks drop it."""
    tank, oil, env = s.tank, s.oil, s.environment
    area_ratio = s.breach.area / tank.free_surface_area
    bracket = env.gravity * area_ratio
    if tank.sealed:
        bracket += (tank.initial_gas_pressure / tank.initial_gas_volume) \
            * (s.breach.area / oil.density_oil)
    return bracket * _cd(s) ** 2


def phase1_duration(s: Scenario) -> float:
    """Time for phase 1 to reach hydrostatic balance: u0 / K."""
    u0 = initial_velocity(s)
    if u0 == 0.0:
        return 0.0
    k = _decay_slope(s)
    if k <= 0.0:
        raise ValueError("degenerate geometry: non-positive decay slope")
    return u0 / k


def phase1_velocity(t: float, s: Scenario) -> float:
    """Efflux speed during phase 1: linear decay from the initial
    velocity, exactly zero from the balance time onward."""
    if t < 0:
        raise ValueError("t must be >= 0")
    u0 = initial_velocity(s)
    if u0 == 0.0:
        return 0.0
    t_star = phase1_duration(s)
    if t >= t_star:
        return 0.0
    return max(u0 - _decay_slope(s) * t, 0.0)


def phase2_velocity(t2: float, forcing: WaveForcing, s: Scenario) -> float:
    """Signed wave-driven exchange speed at phase-2 time t2.

    Magnitude Cd * sqrt(2 a g (rho_w/rho_l) |sin(2 pi t2 / T)|); the
    sign of the sine sets the direction (positive = outflow, negative =
    water ingress).  The negative-radicand half period is a direction
    reversal, not a numeric failure.
    """
    if t2 < 0:
        raise ValueError("t2 must be >= 0")
    env, oil = s.environment, s.oil
    ratio = env.density_water / oil.density_oil
    # fold the phase first so periodicity does not degrade at large t2
    sine = math.sin(2.0 * math.pi * math.fmod(t2, forcing.period)
                    / forcing.period)
    if sine == 0.0:
        return 0.0
    magnitude = _cd(s) * math.sqrt(
        2.0 * forcing.amplitude * env.gravity * ratio * abs(sine))
    return math.copysign(magnitude, sine)


class _Tank:
    """Mutable volume bookkeeping shared by both phases: oil floats on
    any intruded water, so the water column height decides whether the
    hole is still wetted by oil from inside."""

    def __init__(self, s: Scenario):
        self.area_t = s.tank.free_surface_area
        self.hole = s.breach.height_above_keel
        self.oil_volume = s.tank.free_surface_area \
            * s.tank.initial_liquid_level
        self.water_volume = 0.0
        self.spilled = 0.0
        self.sealed = s.tank.sealed
        self.gas_p0 = s.tank.initial_gas_pressure
        self.gas_v0 = s.tank.initial_gas_volume
        self.gas_p = self.gas_p0 if self.sealed \
            else s.tank.initial_ullage_pressure
        self.gas_v = self.gas_v0 if self.sealed else math.inf

    @property
    def level(self) -> float:
        return (self.oil_volume + self.water_volume) / self.area_t

    @property
    def oil_at_hole(self) -> bool:
        return self.level > self.hole \
            and self.water_volume / self.area_t < self.hole

    def spill_oil(self, dvol: float) -> None:
        self.spilled += dvol
        self.oil_volume -= dvol
        if self.sealed:
            self.gas_v += dvol
            self.gas_p = self.gas_p0 * self.gas_v0 / self.gas_v

    def exchange_water(self, outflow: float) -> None:
        # outflow > 0 removes water, < 0 lets water in
        self.water_volume = max(self.water_volume - outflow, 0.0)


def simulate_two_stage(s: Scenario, dt: float, t_end: float,
                       forcing: WaveForcing | None = None,
                       freeze_coefficient: bool = True,
                       state_log: list[TwoStageState] | None = None
                       ) -> LeakTimeSeries:
    """Run both discharge stages and return the sampled leak history.

    Phase 1 runs on its closed-form linear velocity until the balance
    time t*, with a final sample exactly at t* (so the trapezoidal
    cumulative volume reproduces the triangle area 0.5 u0 t* A_B to
    round-off).  Phase 2 then runs to t_end with signed exchange flow.

    Spilled-oil accounting is binary: positive flow counts as oil while
    the liquid surface stands above the hole and intruded water has not
    yet covered the hole from inside; after that, positive flow moves
    water and the oil total freezes.

    freeze_coefficient=False re-evaluates the gas term of the decay
    slope each step (sensitivity mode); the default matches the linear
    closed form.
    """
    if dt <= 0 or t_end <= 0:
        raise ValueError("dt and t_end must be > 0")
    _require_submerged(s)

    oil = s.oil
    area_b = s.breach.area
    g = s.environment.gravity
    if forcing is None:
        forcing = scenario_forcing(s)

    try:
        u0 = initial_velocity(s)
    except EquilibriumReached:
        u0 = 0.0

    tank = _Tank(s)
    times: list[float] = []
    vels: list[float] = []
    oil_rate: list[float] = []   # m^3/s of oil
    tags: list[str] = []

    def record(t: float, u: float, q_oil: float, tag: str,
               elapsed: float) -> None:
        times.append(t)
        vels.append(u)
        oil_rate.append(q_oil)
        tags.append(tag)
        if state_log is not None:
            lvl = tank.level
            state_log.append(TwoStageState(
                phase=PHASE_ONE if tag == "phase1" else PHASE_TWO,
                velocity=u, elapsed_in_phase=elapsed,
                gas_pressure=tank.gas_p, gas_volume=tank.gas_v,
                liquid_level=lvl,
                hole_pressure=tank.gas_p + oil.density_oil * g
                * max(lvl - tank.hole, 0.0)))

    # ---- phase 1: linear decay to hydrostatic balance --------------------
    t_star = 0.0
    if u0 > 0.0:
        k = _decay_slope(s)
        t_star = u0 / k
        # the frozen closed form ends at t*; the re-evaluated mode finds
        # its own (later) zero crossing, bounded only by t_end
        limit = min(t_star, t_end) if freeze_coefficient else t_end
        t, u = 0.0, u0
        while t < limit:
            record(t, u, u * area_b, "phase1", t)
            t_next = min(t + dt, limit)
            if freeze_coefficient:
                u_next = 0.0 if t_next >= t_star \
                    else max(u0 - k * t_next, 0.0)
            else:
                bracket = g * area_b / tank.area_t
                if tank.sealed:
                    bracket += (tank.gas_p0 * tank.gas_v0 / tank.gas_v ** 2) \
                        * (area_b / oil.density_oil)
                u_next = max(u - bracket * _cd(s) ** 2 * (t_next - t), 0.0)
            tank.spill_oil(0.5 * (u + u_next) * (t_next - t) * area_b)
            t, u = t_next, u_next
            if u == 0.0:
                break
        record(t, u, u * area_b, "phase1", t)
        t_star = t

    # ---- phase 2: wave-driven oscillatory exchange ------------------------
    if t_star < t_end or u0 == 0.0:
        t = t_star
        u_prev = q_prev = 0.0
        while True:
            t2 = t - t_star
            u = phase2_velocity(t2, forcing, s)
            q_oil = u * area_b if (u > 0.0 and tank.oil_at_hole) else 0.0
            if times and t > times[-1]:
                step = t - times[-1]
                dvol_oil = 0.5 * (q_prev + q_oil) * step
                net_out = 0.5 * (u_prev + u) * step * area_b
                tank.spill_oil(dvol_oil)
                tank.exchange_water(net_out - dvol_oil)
            if t > t_star or not times:
                record(t, u, q_oil, "phase2", t2)
            u_prev, q_prev = u, q_oil
            if t >= t_end:
                break
            t = min(t + dt, t_end)

    if state_log is not None and state_log:
        import dataclasses
        state_log.append(dataclasses.replace(state_log[-1],
                                             phase=PHASE_DONE))

    t_arr = np.array(times)
    v_arr = np.array(vels)
    q_arr = np.array(oil_rate)
    cum = np.zeros_like(t_arr)
    if len(t_arr) > 1:
        cum[1:] = np.cumsum(0.5 * (q_arr[1:] + q_arr[:-1]) * np.diff(t_arr))
    rho = oil.density_oil
    return LeakTimeSeries(
        times=t_arr, velocity=v_arr, mass_rate=q_arr * rho,
        cumulative_volume=cum, cumulative_mass=cum * rho,
        phase=tuple(tags),
    )
