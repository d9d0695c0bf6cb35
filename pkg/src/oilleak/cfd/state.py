"""Flow state and scenario-to-domain mapping for the 2D tank solver.

The computational domain is the tank interior, one metre deep: the
horizontal extent is free_surface_area per metre of depth and the
vertical extent is the tank height.  The oil fraction alpha is 1 in
oil, 0 in the ambient phase.  Which fluid plays "ambient" depends on
the breach:

* above-waterline breach: ambient is air-like and the tank top is a
  pressure outlet (vent) so the tank can actually drain;
* below-waterline breach: ambient is sea water and the tank top is a
  rigid lid, giving the buoyancy-driven exchange flow through the hole.
  This mode expects an essentially full tank: a gas cushion cannot be
  represented with two incompressible phases.

Pressure is initialized to the discrete hydrostatic profile using the
same face densities the momentum kernel uses, so a still stratified
state is in exact numerical balance from step one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..scenario import ABOVE_WATERLINE, Scenario
from .grid import (PRESSURE_OUTLET, WALL, BoundarySide, BreachFaces, Grid2D)

# Stand-in gas phase for vented tanks (two-phase solver: oil + ambient).
AIR_DENSITY = 1.2           # kg/m^3
AIR_VISCOSITY = 1.8e-5      # N s/m^2
WATER_VISCOSITY = 1.0e-3    # N s/m^2


class CfdSetupError(ValueError):
    """Scenario geometry cannot be mapped onto the grid."""


@dataclass(frozen=True)
class PhaseProps:
    density: float              # kg/m^3
    viscosity: float            # N s/m^2
    diffusivity: float = 0.0    # m^2/s equivalent for the scalar, k/c_p


@dataclass(frozen=True)
class FluidProps:
    oil: PhaseProps
    ambient: PhaseProps
    gravity: float = 9.81       # m/s^2

    def __post_init__(self):
        for ph in (self.oil, self.ambient):
            if ph.density <= 0 or ph.viscosity <= 0:
                raise ValueError("phase density and viscosity must be > 0")


@dataclass
class SolverOptions:
    poisson_rtol: float = 1e-8   # relative residual target
    poisson_atol: float = 0.0    # absolute residual floor
    max_sweep_factor: int = 10   # sweep-pair cap = factor * nx * ny
    omega: float | None = None   # SOR relaxation; None picks the grid optimum
    harmonic_viscosity: bool = False
    dt_cap: float = 0.01         # s, governs a field at rest


@dataclass
class FlowState:
    """Mutable solver state on a staggered grid; owned by one simulation
    at a time."""

    grid: Grid2D
    props: FluidProps
    u: np.ndarray               # (ny, nx+1)
    v: np.ndarray               # (ny+1, nx)
    p: np.ndarray               # (ny, nx)
    alpha: np.ndarray           # (ny, nx), oil fraction in [0, 1]
    T: np.ndarray               # (ny, nx), passive scalar
    s_u: np.ndarray             # (ny, nx+1), N/m^3
    s_v: np.ndarray             # (ny+1, nx), N/m^3
    s_t: np.ndarray             # (ny, nx), scalar source
    time: float = 0.0
    breach: BreachFaces | None = None
    ambient_alpha: float = 0.0  # fraction entering through open boundaries
    options: SolverOptions = field(default_factory=SolverOptions)
    diagnostics: dict[str, Any] = field(default_factory=dict)

    # Cell properties derived from alpha, refreshed after each transport
    rho: np.ndarray = None
    mu: np.ndarray = None
    diff: np.ndarray = None

    def __post_init__(self):
        if self.rho is None:
            self.refresh_properties()
        self.diagnostics.setdefault("clip_volume", 0.0)
        self.diagnostics.setdefault("total_sweeps", 0)

    def refresh_properties(self) -> None:
        """Blend cell density/viscosity/diffusivity from the oil
        fraction: arithmetic by default, harmonic viscosity optional."""
        a = self.alpha
        oil, amb = self.props.oil, self.props.ambient
        self.rho = a * oil.density + (1.0 - a) * amb.density
        if self.options.harmonic_viscosity:
            self.mu = 1.0 / (a / oil.viscosity + (1.0 - a) / amb.viscosity)
        else:
            self.mu = a * oil.viscosity + (1.0 - a) * amb.viscosity
        self.diff = a * oil.diffusivity + (1.0 - a) * amb.diffusivity

    def copy(self) -> "FlowState":
        return FlowState(
            grid=self.grid, props=self.props,
            u=self.u.copy(), v=self.v.copy(), p=self.p.copy(),
            alpha=self.alpha.copy(), T=self.T.copy(),
            s_u=self.s_u.copy(), s_v=self.s_v.copy(), s_t=self.s_t.copy(),
            time=self.time, breach=self.breach,
            ambient_alpha=self.ambient_alpha, options=self.options,
            diagnostics=dict(self.diagnostics),
        )

    @property
    def oil_volume(self) -> float:
        """Total oil volume in the domain (unit depth), m^3."""
        return float(np.sum(self.alpha)) * self.grid.cell_volume


def make_state(grid: Grid2D, props: FluidProps,
               alpha: np.ndarray | None = None,
               pressure_reference: float = 0.0,
               breach: BreachFaces | None = None,
               options: SolverOptions | None = None) -> FlowState:
    """Quiescent state with hydrostatic pressure for a given oil-fraction
    field (defaults to no oil)."""
    ny, nx = grid.ny, grid.nx
    if alpha is None:
        alpha = np.zeros((ny, nx))
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (ny, nx):
        raise ValueError("alpha shape must be (ny, nx)")
    state = FlowState(
        grid=grid, props=props,
        u=np.zeros((ny, nx + 1)), v=np.zeros((ny + 1, nx)),
        p=np.zeros((ny, nx)), alpha=alpha, T=np.zeros((ny, nx)),
        s_u=np.zeros((ny, nx + 1)), s_v=np.zeros((ny + 1, nx)),
        s_t=np.zeros((ny, nx)),
        breach=breach,
        options=options if options is not None else SolverOptions(),
    )
    state.p = hydrostatic_pressure(state, pressure_reference)
    return state


def hydrostatic_pressure(state: FlowState, reference: float) -> np.ndarray:
    """Discrete hydrostatic profile: integrates rho*g downward from the
    top row with exactly the face densities the momentum kernel sees, so
    gravity and the pressure gradient cancel to round-off at rest."""
    grid, rho, g = state.grid, state.rho, state.props.gravity
    p = np.empty_like(rho)
    p[-1, :] = reference + 0.5 * grid.dy * g * rho[-1, :]
    for j in range(grid.ny - 2, -1, -1):
        p[j, :] = p[j + 1, :] + grid.dy * g * 0.5 * (rho[j, :] + rho[j + 1, :])
    return p


def grid_for_scenario(s: Scenario, nx: int, ny: int) -> Grid2D:
    """Conventional tank grid: width = free surface area per metre of
    depth, height = tank height; vented tanks get a top pressure outlet,
    sealed ones a rigid lid."""
    width = s.tank.free_surface_area  # per unit depth
    height = s.tank.tank_height
    vented = not s.tank.sealed
    top = BoundarySide(PRESSURE_OUTLET, s.tank.initial_ullage_pressure) \
        if vented else BoundarySide(WALL)
    return Grid2D(nx=nx, ny=ny, dx=width / nx, dy=height / ny,
                  top=top)


def breach_faces_for_scenario(s: Scenario, grid: Grid2D,
                              side: str = "right") -> BreachFaces:
    """Snap the breach onto wall faces of the grid.

    The breach is a slot of height area/1m centred on height_above_keel,
    opened as pressure outlets on the chosen vertical wall; outside
    pressure per face is atmospheric above the waterline and hydrostatic
    sea pressure below it.
    """
    env = s.environment
    height = s.breach.area  # slot height per metre of depth
    if height > grid.height:
        raise CfdSetupError("breach is wider than the tank wall")
    y_lo = s.breach.height_above_keel - 0.5 * height
    y_hi = s.breach.height_above_keel + 0.5 * height
    tol = 1e-9 * grid.height
    if y_lo < -tol or y_hi > grid.height + tol:
        raise CfdSetupError("breach lies outside the grid")
    j_lo = max(int(round(y_lo / grid.dy)), 0)
    j_hi = min(int(round(y_hi / grid.dy)), grid.ny)
    if j_hi <= j_lo:  # narrower than one cell: open the nearest face
        j_lo = min(max(int(y_lo / grid.dy), 0), grid.ny - 1)
        j_hi = j_lo + 1
    pressures = []
    for j in range(j_lo, j_hi):
        y_face = (j + 0.5) * grid.dy
        if y_face < env.draft:
            pressures.append(env.atmospheric_pressure + env.density_water
                             * env.gravity * (env.draft - y_face))
        else:
            pressures.append(env.atmospheric_pressure)
    return BreachFaces(side=side, j_lo=j_lo, j_hi=j_hi,
                       pressures=tuple(pressures))


def init_from_scenario(s: Scenario, grid: Grid2D,
                       options: SolverOptions | None = None) -> FlowState:
    """Map a scenario onto the grid: oil column up to the initial level,
    breach faces opened on the right wall, hydrostatic pressure, zero
    velocity."""
    level = s.tank.initial_liquid_level
    if level > grid.height * (1.0 + 1e-12):
        raise CfdSetupError("liquid level exceeds the grid height")

    above = s.breach.position == ABOVE_WATERLINE
    if above:
        ambient = PhaseProps(AIR_DENSITY, AIR_VISCOSITY)
    else:
        ambient = PhaseProps(s.environment.density_water, WATER_VISCOSITY)
        if level < grid.height - grid.dy:
            raise CfdSetupError(
                "submerged-breach mode expects a full tank: a gas cushion "
                "cannot be represented with two incompressible phases")
    props = FluidProps(
        oil=PhaseProps(s.oil.density_oil, s.oil.dynamic_viscosity),
        ambient=ambient, gravity=s.environment.gravity)

    ny, nx = grid.ny, grid.nx
    y_lo = np.arange(ny) * grid.dy
    fill = np.clip((level - y_lo) / grid.dy, 0.0, 1.0)
    alpha = np.repeat(fill[:, None], nx, axis=1)

    breach = breach_faces_for_scenario(s, grid)
    return make_state(grid, props, alpha=alpha,
                      pressure_reference=s.tank.initial_ullage_pressure,
                      breach=breach, options=options)
