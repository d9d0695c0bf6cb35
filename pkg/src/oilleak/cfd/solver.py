"""Incompressible two-phase time stepping: predictor, pressure
projection, bounded VOF transport and passive-scalar advection.

One explicit step advances the state by dt:

1. upwind momentum advection + explicit viscous diffusion + body force
   + sources + the gradient of the current pressure (predictor);
2. pressure-increment projection: solve div((1/rho) grad q) = div(u*)
   with red-black SOR, correct the face velocities, accumulate q/dt
   into p;
3. bounded upwind transport of the oil fraction (clipped to [0, 1] with
   the clipped volume logged);
4. passive-scalar transport;
5. property re-blending from the new fraction field.

Because the predictor carries the old pressure gradient, a hydrostatic
initial state produces u* = 0 identically and the projection is a
no-op: still stratified fluid stays still to machine precision.

Everything is single-threaded and deterministic: two runs of the same
scenario produce bit-identical fields regardless of backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from ..scenario import Scenario
from ..series import LeakTimeSeries
from .backend import BACKEND, kernels
from .grid import Grid2D
from .state import (FlowState, SolverOptions, grid_for_scenario,
                    init_from_scenario)


class ProjectionDiverged(RuntimeError):
    """Pressure solver hit its sweep cap before reaching tolerance."""


# ---------------------------------------------------------------------------
# Ghost assembly

def _pad_copy(f: np.ndarray) -> np.ndarray:
    """Zero-gradient ghosts on all sides (corners copy their edge)."""
    ny, nx = f.shape
    out = np.empty((ny + 2, nx + 2))
    out[1:-1, 1:-1] = f
    out[0, 1:-1] = f[0, :]
    out[-1, 1:-1] = f[-1, :]
    out[:, 0] = out[:, 1]
    out[:, -1] = out[:, -2]
    return out


def _open_masks(state: FlowState):
    """Boolean masks of open (pressure outlet) boundary faces, per side:
    (left[ny], right[ny], bottom[nx], top[nx])."""
    grid = state.grid
    ny, nx = grid.ny, grid.nx
    left = np.full(ny, grid.left.open)
    right = np.full(ny, grid.right.open)
    bottom = np.full(nx, grid.bottom.open)
    top = np.full(nx, grid.top.open)
    b = state.breach
    if b is not None:
        if b.side == "left":
            left[b.j_lo:b.j_hi] = True
        else:
            right[b.j_lo:b.j_hi] = True
    return left, right, bottom, top


def _outlet_pressures(state: FlowState):
    """Per-face outlet pressure arrays matching _open_masks; entries on
    closed faces are unused."""
    grid = state.grid
    ny, nx = grid.ny, grid.nx
    left = np.full(ny, grid.left.pressure)
    right = np.full(ny, grid.right.pressure)
    bottom = np.full(nx, grid.bottom.pressure)
    top = np.full(nx, grid.top.pressure)
    b = state.breach
    if b is not None:
        target = left if b.side == "left" else right
        target[b.j_lo:b.j_hi] = b.pressures
    return left, right, bottom, top


def _pad_pressure(state: FlowState, p: np.ndarray,
                  outlet_scale: float = 1.0) -> np.ndarray:
    """Pressure ghosts: zero-gradient at closed faces, mirrored Dirichlet
    2*P_out - p_edge at open faces.  outlet_scale multiplies P_out (0
    gives the homogeneous closure used for the pressure increment)."""
    out = _pad_copy(p)
    lm, rm, bm, tm = _open_masks(state)
    lp, rp, bp, tp = _outlet_pressures(state)
    rows = np.arange(state.grid.ny) + 1
    cols = np.arange(state.grid.nx) + 1
    out[rows[lm], 0] = 2.0 * outlet_scale * lp[lm] - p[lm, 0]
    out[rows[rm], -1] = 2.0 * outlet_scale * rp[rm] - p[rm, -1]
    out[0, cols[bm]] = 2.0 * outlet_scale * bp[bm] - p[0, bm]
    out[-1, cols[tm]] = 2.0 * outlet_scale * tp[tm] - p[-1, tm]
    return out


def _pad_alpha(state: FlowState) -> np.ndarray:
    """Fraction ghosts: zero-gradient at closed faces, ambient fraction
    behind open faces (inflow carries the ambient phase)."""
    out = _pad_copy(state.alpha)
    lm, rm, bm, tm = _open_masks(state)
    rows = np.arange(state.grid.ny) + 1
    cols = np.arange(state.grid.nx) + 1
    out[rows[lm], 0] = state.ambient_alpha
    out[rows[rm], -1] = state.ambient_alpha
    out[0, cols[bm]] = state.ambient_alpha
    out[-1, cols[tm]] = state.ambient_alpha
    return out


def _pad_u(u: np.ndarray) -> np.ndarray:
    """u ghosts: tangential mirror (free slip) at top/bottom, zero
    gradient beyond the left/right face columns."""
    ny, nf = u.shape
    out = np.empty((ny + 2, nf + 2))
    out[1:-1, 1:-1] = u
    out[0, 1:-1] = u[0, :]
    out[-1, 1:-1] = u[-1, :]
    out[:, 0] = out[:, 1]
    out[:, -1] = out[:, -2]
    return out


def _pad_v(v: np.ndarray) -> np.ndarray:
    nf, nx = v.shape
    out = np.empty((nf + 2, nx + 2))
    out[1:-1, 1:-1] = v
    out[0, 1:-1] = v[0, :]
    out[-1, 1:-1] = v[-1, :]
    out[:, 0] = out[:, 1]
    out[:, -1] = out[:, -2]
    return out


def face_masks(state: FlowState):
    """Active-face masks: faces the momentum and correction updates may
    change.  Interior faces always; boundary faces only where open."""
    grid = state.grid
    ny, nx = grid.ny, grid.nx
    u_act = np.ones((ny, nx + 1), dtype=np.int8)
    v_act = np.ones((ny + 1, nx), dtype=np.int8)
    lm, rm, bm, tm = _open_masks(state)
    u_act[:, 0] = lm
    u_act[:, -1] = rm
    v_act[0, :] = bm
    v_act[-1, :] = tm
    return u_act, v_act


def face_densities(state: FlowState):
    """Densities at u and v faces (averages of flanking cells; edge cell
    value at boundary faces)."""
    rho = state.rho
    ny, nx = state.grid.ny, state.grid.nx
    rho_u = np.empty((ny, nx + 1))
    rho_u[:, 1:-1] = 0.5 * (rho[:, :-1] + rho[:, 1:])
    rho_u[:, 0] = rho[:, 0]
    rho_u[:, -1] = rho[:, -1]
    rho_v = np.empty((ny + 1, nx))
    rho_v[1:-1, :] = 0.5 * (rho[:-1, :] + rho[1:, :])
    rho_v[0, :] = rho[0, :]
    rho_v[-1, :] = rho[-1, :]
    return rho_u, rho_v


# ---------------------------------------------------------------------------
# Pressure Poisson system

def poisson_coefficients(state: FlowState):
    """Five-point coefficients of div((1/rho) grad q) with the boundary
    closures folded in: zero-flux at closed faces, homogeneous Dirichlet
    (ghost = -edge) at open faces.

    Returns (a_e, a_w, a_n, a_s, c_c); the dense oracle in the test
    suite assembles the same matrix from these arrays.
    """
    grid = state.grid
    ny, nx = grid.ny, grid.nx
    inv_dx2 = 1.0 / (grid.dx * grid.dx)
    inv_dy2 = 1.0 / (grid.dy * grid.dy)
    rho_u, rho_v = face_densities(state)
    bu = 1.0 / rho_u
    bv = 1.0 / rho_v

    a_e = np.zeros((ny, nx))
    a_w = np.zeros((ny, nx))
    a_n = np.zeros((ny, nx))
    a_s = np.zeros((ny, nx))
    a_e[:, :-1] = bu[:, 1:-1] * inv_dx2
    a_w[:, 1:] = bu[:, 1:-1] * inv_dx2
    a_n[:-1, :] = bv[1:-1, :] * inv_dy2
    a_s[1:, :] = bv[1:-1, :] * inv_dy2

    c_c = -(a_e + a_w + a_n + a_s)
    lm, rm, bm, tm = _open_masks(state)
    c_c[lm, 0] -= 2.0 * bu[lm, 0] * inv_dx2
    c_c[rm, -1] -= 2.0 * bu[rm, -1] * inv_dx2
    c_c[0, bm] -= 2.0 * bv[0, bm] * inv_dy2
    c_c[-1, tm] -= 2.0 * bv[-1, tm] * inv_dy2
    return a_e, a_w, a_n, a_s, c_c


def _default_omega(grid: Grid2D) -> float:
    return 2.0 / (1.0 + math.sin(math.pi / max(grid.nx, grid.ny)))


def solve_pressure_increment(state: FlowState, rhs: np.ndarray):
    """Red-black SOR solve of the increment system; returns (q, sweeps,
    residual).  Raises ProjectionDiverged at the sweep cap.

    With no open boundary the system is singular (all-Neumann) and only
    compatible right-hand sides are solvable; the round-off component
    along the null space is projected out by subtracting the mean.
    """
    opts = state.options
    grid = state.grid
    a_e, a_w, a_n, a_s, c_c = poisson_coefficients(state)
    lm, rm, bm, tm = _open_masks(state)
    if not (lm.any() or rm.any() or bm.any() or tm.any()):
        rhs = rhs - rhs.mean()
    rhs_inf = float(np.max(np.abs(rhs))) if rhs.size else 0.0
    tol = max(opts.poisson_rtol * rhs_inf, opts.poisson_atol)
    q_pad = np.zeros((grid.ny + 2, grid.nx + 2))
    if rhs_inf == 0.0 or rhs_inf <= tol:
        return q_pad[1:-1, 1:-1], 0, rhs_inf
    omega = opts.omega if opts.omega is not None else _default_omega(grid)
    cap = opts.max_sweep_factor * grid.nx * grid.ny
    residual = rhs_inf
    for sweep in range(1, cap + 1):
        kernels.sor_sweep(q_pad, rhs, a_e, a_w, a_n, a_s, c_c, omega, 0)
        kernels.sor_sweep(q_pad, rhs, a_e, a_w, a_n, a_s, c_c, omega, 1)
        residual = kernels.poisson_residual(q_pad, rhs, a_e, a_w, a_n,
                                            a_s, c_c)
        if residual <= tol:
            state.diagnostics["total_sweeps"] += sweep
            state.diagnostics["last_sweeps"] = sweep
            state.diagnostics["last_residual"] = residual
            return q_pad[1:-1, 1:-1], sweep, residual
    raise ProjectionDiverged(
        f"pressure solve stalled: residual {residual:.3e} > tol {tol:.3e} "
        f"after {cap} sweep pairs (rhs_inf {rhs_inf:.3e})")


def project(state: FlowState, dt: float = 1.0) -> FlowState:
    """Make the face velocity field discretely divergence-free.

    Solves div((1/rho) grad q) = div(u) for the scaled increment
    q = dt * p_increment, corrects the faces, and accumulates q/dt into
    the pressure.  A divergence-free field returns unchanged (zero rhs
    short-circuits the solve).
    """
    grid = state.grid
    div = kernels.divergence(state.u, state.v, grid.dx, grid.dy)
    state.diagnostics["last_div_pre"] = float(np.max(np.abs(div)))
    q, _, _ = solve_pressure_increment(state, div)
    if np.any(q):
        q_pad = _pad_pressure(state, q, outlet_scale=0.0)
        rho_u, rho_v = face_densities(state)
        u_act, v_act = face_masks(state)
        state.u = kernels.correct_u(state.u, q_pad, rho_u, u_act, grid.dx)
        state.v = kernels.correct_v(state.v, q_pad, rho_v, v_act, grid.dy)
        state.p = state.p + q / dt
    post = kernels.divergence(state.u, state.v, grid.dx, grid.dy)
    state.diagnostics["last_div_post"] = float(np.max(np.abs(post)))
    return state


# ---------------------------------------------------------------------------
# Time stepping

def stable_dt(state: FlowState, cfl: float) -> float:
    """CFL-limited step: cfl times the tightest of the advective bounds
    dx/|u|, dy/|v| and the viscous bound min(dx,dy)^2 rho / (4 mu), all
    capped at options.dt_cap (the cap is what a field at rest gets)."""
    if not 0.0 < cfl <= 1.0:
        raise ValueError("cfl must be in (0, 1]")
    grid = state.grid
    umax = float(np.max(np.abs(state.u)))
    vmax = float(np.max(np.abs(state.v)))
    bound = math.inf
    if umax > 0.0:
        bound = grid.dx / umax
    if vmax > 0.0:
        bound = min(bound, grid.dy / vmax)
    nu_max = float(np.max(state.mu / state.rho))
    if nu_max > 0.0:
        bound = min(bound, min(grid.dx, grid.dy) ** 2 / (4.0 * nu_max))
    dt = cfl * bound if bound < math.inf else math.inf
    return min(dt, state.options.dt_cap)


def advect_scalar(state: FlowState, dt: float) -> FlowState:
    """Upwind advection and explicit diffusion of the passive scalar;
    uniform fields pass through untouched and pure diffusion conserves
    the integral of rho*T in a closed box."""
    grid = state.grid
    t_pad = _pad_copy(state.T)
    diff_pad = _pad_copy(state.diff)
    state.T = kernels.scalar_update(t_pad, diff_pad, state.rho, state.s_t,
                                    state.u, state.v, dt, grid.dx, grid.dy)
    return state


def step(state: FlowState, dt: float) -> FlowState:
    """Advance one time step of length dt (caller keeps dt within
    stable_dt)."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    grid = state.grid
    u_act, v_act = face_masks(state)
    u_pad = _pad_u(state.u)
    v_pad = _pad_v(state.v)
    p_pad = _pad_pressure(state, state.p)
    mu_pad = _pad_copy(state.mu)
    rho_pad = _pad_copy(state.rho)

    state.u = kernels.predict_u(u_pad, v_pad, p_pad, mu_pad, rho_pad,
                                state.s_u, u_act, dt, grid.dx, grid.dy, 0.0)
    state.v = kernels.predict_v(u_pad, v_pad, p_pad, mu_pad, rho_pad,
                                state.s_v, v_act, dt, grid.dx, grid.dy,
                                -state.props.gravity)
    project(state, dt)

    alpha_pad = _pad_alpha(state)
    alpha_new, clip_lo, clip_hi = kernels.vof_update(
        alpha_pad, state.u, state.v, dt, grid.dx, grid.dy)
    state.alpha = alpha_new
    state.diagnostics["clip_volume"] += (clip_lo + clip_hi) \
        * grid.cell_volume

    advect_scalar(state, dt)
    state.refresh_properties()
    state.time += dt
    return state


# ---------------------------------------------------------------------------
# Breach diagnostics and the scenario-level driver

def breach_outflow(state: FlowState,
                   breach=None) -> tuple[float, float]:
    """(oil_rate, total_rate) in m^3/s through the breach faces, positive
    outward; oil weights each face by the upwind fraction (interior cell
    for outflow, ambient for inflow)."""
    b = breach if breach is not None else state.breach
    if b is None:
        raise ValueError("state has no breach faces")
    dy = state.grid.dy
    sign = -1.0 if b.side == "left" else 1.0
    col = 0 if b.side == "left" else -1
    total = 0.0
    oil = 0.0
    for j in range(b.j_lo, b.j_hi):
        out = sign * state.u[j, col]
        total += out * dy
        a_up = state.alpha[j, col] if out > 0.0 else state.ambient_alpha
        oil += out * dy * a_up
    return oil, total


def breach_exit_speed(state: FlowState, breach=None) -> float:
    """Flux-weighted speed of the fluid leaving through the breach,
    m/s: sum(|V| u_n A) / sum(u_n A) over outflow faces.

    The jet through an orifice contracts, so the area-mean normal
    velocity under-reads the true efflux speed; the exiting streamlines
    themselves carry the full Bernoulli speed sqrt(2 g h), which this
    measure converges to under grid refinement."""
    b = breach if breach is not None else state.breach
    if b is None:
        raise ValueError("state has no breach faces")
    sign = -1.0 if b.side == "left" else 1.0
    col = 0 if b.side == "left" else -1
    flux = 0.0
    weighted = 0.0
    for j in range(b.j_lo, b.j_hi):
        out = sign * state.u[j, col]
        if out <= 0.0:
            continue
        v_here = 0.5 * (state.v[j, col] + state.v[j + 1, col])
        speed = math.sqrt(out * out + v_here * v_here)
        flux += out
        weighted += speed * out
    return weighted / flux if flux > 0.0 else 0.0


@dataclass
class CfdRun:
    """Scenario-level CFD result: leak series plus diagnostics."""

    series: LeakTimeSeries
    head: np.ndarray            # m, mean oil level above breach centre
    exit_speed: np.ndarray      # m/s, flux-weighted breach exit speed
    notes: dict[str, Any]
    snapshots: list[tuple[int, float, dict[str, np.ndarray]]]


def run_leak_simulation(s: Scenario, nx: int = 64, ny: int = 64,
                        cfl: float = 0.5, t_end: float = 2.0,
                        snapshot_every: int = 0,
                        series_stride: int = 1,
                        options: SolverOptions | None = None) -> CfdRun:
    """Drive the solver on a scenario and sample the breach outflow.

    The leak series reports efflux velocity (total outflow / effective
    breach area), the oil mass rate, and trapezoid-integrated cumulative
    spilled oil.  head[k] tracks the mean oil depth above the breach
    centre for cross-checks against sqrt(2 g h).
    """
    grid = grid_for_scenario(s, nx, ny)
    state = init_from_scenario(s, grid, options)
    b = state.breach
    area_eff = b.n_faces * grid.dy
    rho_oil = s.oil.density_oil
    width = grid.width
    hole_y = s.breach.height_above_keel

    times = [0.0]
    vels = [0.0]
    rates = [0.0]  # oil m^3/s
    heads = [state.oil_volume / width - hole_y]
    speeds = [0.0]
    snapshots: list[tuple[int, float, dict[str, np.ndarray]]] = []

    n_step = 0
    t_prev_sample = 0.0
    rate_prev = 0.0
    cum = [0.0]
    while state.time < t_end * (1.0 - 1e-12):
        dt = min(stable_dt(state, cfl), t_end - state.time)
        step(state, dt)
        n_step += 1
        if snapshot_every and n_step % snapshot_every == 0:
            snapshots.append((n_step, state.time, snapshot_fields(state)))
        if n_step % series_stride == 0 or state.time >= t_end * (1 - 1e-12):
            oil_rate, total_rate = breach_outflow(state)
            times.append(state.time)
            vels.append(total_rate / area_eff)
            rates.append(oil_rate)
            heads.append(state.oil_volume / width - hole_y)
            speeds.append(breach_exit_speed(state))
            cum.append(cum[-1] + 0.5 * (rate_prev + oil_rate)
                       * (state.time - t_prev_sample))
            t_prev_sample = state.time
            rate_prev = oil_rate

    t_arr = np.array(times)
    cum_arr = np.array(cum)
    series = LeakTimeSeries(
        times=t_arr,
        velocity=np.array(vels),
        mass_rate=np.array(rates) * rho_oil,
        cumulative_volume=cum_arr,
        cumulative_mass=cum_arr * rho_oil,
        phase=("cfd",) * len(t_arr),
    )
    notes = {
        "backend": BACKEND,
        "steps": n_step,
        "grid": f"{nx}x{ny}",
        "breach_area_effective_m2": area_eff,
        "clip_volume_m3": state.diagnostics["clip_volume"],
        "total_sweeps": state.diagnostics["total_sweeps"],
    }
    return CfdRun(series=series, head=np.array(heads),
                  exit_speed=np.array(speeds), notes=notes,
                  snapshots=snapshots)


# ---------------------------------------------------------------------------
# Snapshot I/O: plain-text blocks, one file per snapshot

def snapshot_fields(state: FlowState) -> dict[str, np.ndarray]:
    return {"u": state.u.copy(), "v": state.v.copy(), "p": state.p.copy(),
            "alpha": state.alpha.copy(), "T": state.T.copy()}


def write_snapshot(path: str | Path, grid: Grid2D, time: float,
                   fields: dict[str, np.ndarray]) -> None:
    """Plain-text snapshot: header with nx, ny, dx, dy, time, then one
    row-major block per field."""
    lines = ["# oilleak field snapshot",
             f"# nx={grid.nx} ny={grid.ny} dx={grid.dx!r} dy={grid.dy!r} "
             f"time={time!r}"]
    for name, arr in fields.items():
        lines.append(f"# field={name} rows={arr.shape[0]} cols={arr.shape[1]}")
        for row in arr:
            lines.append(" ".join(repr(float(x)) for x in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_snapshot(path: str | Path):
    """Inverse of write_snapshot: returns (meta, fields)."""
    meta: dict[str, float] = {}
    fields: dict[str, np.ndarray] = {}
    name = None
    rows: list[list[float]] = []
    want = 0

    def flush():
        if name is not None:
            fields[name] = np.array(rows)

    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("# oilleak"):
            continue
        if line.startswith("# nx="):
            for part in line[2:].split():
                key, val = part.split("=")
                meta[key] = float(val)
            continue
        if line.startswith("# field="):
            flush()
            parts = dict(p.split("=") for p in line[2:].split())
            name = parts["field"]
            want = int(parts["rows"])
            rows = []
            continue
        if line.strip():
            rows.append([float(x) for x in line.split()])
    flush()
    return meta, fields
