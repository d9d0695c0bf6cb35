"""Pure-numpy implementations of the solver's hot kernels.

These are the fallback path when numba is unavailable or disabled via
OILLEAK_BACKEND=numpy, and the reference the numba kernels are checked
against.  Per-element arithmetic is written in exactly the same order
as the numba loops so the two backends agree bit for bit.

Array conventions (ny cells tall, nx wide):

    u        (ny, nx+1)   u_pad    (ny+2, nx+3)
    v        (ny+1, nx)   v_pad    (ny+3, nx+2)
    cells    (ny, nx)     cell pad (ny+2, nx+2)

Padding places ghost layers around the physical arrays; callers fill
the ghosts according to the boundary conditions before invoking a
kernel.
"""

from __future__ import annotations

import numpy as np


def predict_u(u_pad, v_pad, p_pad, mu_pad, rho_pad, su, u_act,
              dt, dx, dy, gx):
    """Tentative u after upwind advection, viscous diffusion, pressure
    gradient of the current p, sources and body force."""
    uc = u_pad[1:-1, 1:-1]
    ue = u_pad[1:-1, 2:]
    uw = u_pad[1:-1, :-2]
    un = u_pad[2:, 1:-1]
    us = u_pad[:-2, 1:-1]

    vbar = 0.25 * (v_pad[1:-2, :-1] + v_pad[1:-2, 1:]
                   + v_pad[2:-1, :-1] + v_pad[2:-1, 1:])

    dudx = np.where(uc > 0.0, (uc - uw) / dx, (ue - uc) / dx)
    dudy = np.where(vbar > 0.0, (uc - us) / dy, (un - uc) / dy)
    adv = uc * dudx + vbar * dudy

    mu_e = mu_pad[1:-1, 1:]
    mu_w = mu_pad[1:-1, :-1]
    mu_n = 0.25 * (mu_pad[1:-1, :-1] + mu_pad[1:-1, 1:]
                   + mu_pad[2:, :-1] + mu_pad[2:, 1:])
    mu_s = 0.25 * (mu_pad[:-2, :-1] + mu_pad[:-2, 1:]
                   + mu_pad[1:-1, :-1] + mu_pad[1:-1, 1:])
    visc = (mu_e * (ue - uc) - mu_w * (uc - uw)) / (dx * dx) \
        + (mu_n * (un - uc) - mu_s * (uc - us)) / (dy * dy)

    rho_f = 0.5 * (rho_pad[1:-1, :-1] + rho_pad[1:-1, 1:])
    pg = (p_pad[1:-1, 1:] - p_pad[1:-1, :-1]) / dx

    u_new = uc + dt * (-adv + (visc - pg + su) / rho_f + gx)
    return np.where(u_act > 0, u_new, uc)


def predict_v(u_pad, v_pad, p_pad, mu_pad, rho_pad, sv, v_act,
              dt, dx, dy, gy):
    """Tentative v; mirror of predict_u with gravity along -y."""
    vc = v_pad[1:-1, 1:-1]
    ve = v_pad[1:-1, 2:]
    vw = v_pad[1:-1, :-2]
    vn = v_pad[2:, 1:-1]
    vs = v_pad[:-2, 1:-1]

    ubar = 0.25 * (u_pad[:-1, 1:-2] + u_pad[:-1, 2:-1]
                   + u_pad[1:, 1:-2] + u_pad[1:, 2:-1])

    dvdx = np.where(ubar > 0.0, (vc - vw) / dx, (ve - vc) / dx)
    dvdy = np.where(vc > 0.0, (vc - vs) / dy, (vn - vc) / dy)
    adv = ubar * dvdx + vc * dvdy

    mu_e = 0.25 * (mu_pad[:-1, 1:-1] + mu_pad[:-1, 2:]
                   + mu_pad[1:, 1:-1] + mu_pad[1:, 2:])
    mu_w = 0.25 * (mu_pad[:-1, :-2] + mu_pad[:-1, 1:-1]
                   + mu_pad[1:, :-2] + mu_pad[1:, 1:-1])
    mu_n = mu_pad[1:, 1:-1]
    mu_s = mu_pad[:-1, 1:-1]
    visc = (mu_e * (ve - vc) - mu_w * (vc - vw)) / (dx * dx) \
        + (mu_n * (vn - vc) - mu_s * (vc - vs)) / (dy * dy)

    rho_f = 0.5 * (rho_pad[:-1, 1:-1] + rho_pad[1:, 1:-1])
    pg = (p_pad[1:, 1:-1] - p_pad[:-1, 1:-1]) / dy

    v_new = vc + dt * (-adv + (visc - pg + sv) / rho_f + gy)
    return np.where(v_act > 0, v_new, vc)


def divergence(u, v, dx, dy):
    return (u[:, 1:] - u[:, :-1]) / dx + (v[1:, :] - v[:-1, :]) / dy


def sor_sweep(q_pad, rhs, a_e, a_w, a_n, a_s, c_c, omega, parity):
    """One red-black SOR half-sweep over cells with (i + j) % 2 == parity.

    q_pad is the (ny+2, nx+2) padded unknown updated in place; its ghost
    ring is all zeros (the boundary closures live in the coefficients).
    Cells of one colour only read the other colour, so the vectorized
    update equals a sequential Gauss-Seidel pass over that colour.
    """
    qe = q_pad[1:-1, 2:]
    qw = q_pad[1:-1, :-2]
    qn = q_pad[2:, 1:-1]
    qs = q_pad[:-2, 1:-1]
    qc = q_pad[1:-1, 1:-1]
    for r0, c0 in ((0, parity), (1, 1 - parity)):
        sl = (slice(r0, None, 2), slice(c0, None, 2))
        gs = (rhs[sl] - a_e[sl] * qe[sl] - a_w[sl] * qw[sl]
              - a_n[sl] * qn[sl] - a_s[sl] * qs[sl]) / c_c[sl]
        qc[sl] = qc[sl] + omega * (gs - qc[sl])


def poisson_residual(q_pad, rhs, a_e, a_w, a_n, a_s, c_c):
    """Max-norm residual of the 5-point system at the current iterate."""
    r = (rhs
         - a_e * q_pad[1:-1, 2:]
         - a_w * q_pad[1:-1, :-2]
         - a_n * q_pad[2:, 1:-1]
         - a_s * q_pad[:-2, 1:-1]
         - c_c * q_pad[1:-1, 1:-1])
    return float(np.max(np.abs(r)))


def correct_u(u, q_pad, rho_u, u_act, dx):
    corr = (q_pad[1:-1, 1:] - q_pad[1:-1, :-1]) / dx / rho_u
    return np.where(u_act > 0, u - corr, u)


def correct_v(v, q_pad, rho_v, v_act, dy):
    corr = (q_pad[1:, 1:-1] - q_pad[:-1, 1:-1]) / dy / rho_v
    return np.where(v_act > 0, v - corr, v)


def vof_update(alpha_pad, u, v, dt, dx, dy):
    """Bounded upwind transport of the oil fraction.

    Returns (alpha_new, clip_low, clip_high) where the clip values are
    the summed fraction mass removed/added by clamping to [0, 1]
    (multiply by the cell volume for a volume budget).
    """
    fx = u * np.where(u > 0.0, alpha_pad[1:-1, :-1], alpha_pad[1:-1, 1:])
    fy = v * np.where(v > 0.0, alpha_pad[:-1, 1:-1], alpha_pad[1:, 1:-1])
    alpha = alpha_pad[1:-1, 1:-1]
    a_new = alpha - dt / dx * (fx[:, 1:] - fx[:, :-1]) \
        - dt / dy * (fy[1:, :] - fy[:-1, :])
    clip_low = float(np.sum(np.where(a_new < 0.0, -a_new, 0.0)))
    clip_high = float(np.sum(np.where(a_new > 1.0, a_new - 1.0, 0.0)))
    return np.clip(a_new, 0.0, 1.0), clip_low, clip_high


def scalar_update(t_pad, diff_pad, rho, s_t, u, v, dt, dx, dy):
    """Upwind advection (constant-preserving flux-difference form) plus
    explicit diffusion and source of the scalar:

        dT/dt = -(div(u T_up) - T div u) + (div(Gamma grad T) + S_T)/rho

    Uniform T is untouched by any velocity field, and with zero
    velocity, d(rho T) = dt * div(Gamma grad T) conserves the integral
    of rho*T in a closed box exactly.
    """
    gx = u * np.where(u > 0.0, t_pad[1:-1, :-1], t_pad[1:-1, 1:])
    gy = v * np.where(v > 0.0, t_pad[:-1, 1:-1], t_pad[1:, 1:-1])
    t_c = t_pad[1:-1, 1:-1]
    div_u = (u[:, 1:] - u[:, :-1]) / dx + (v[1:, :] - v[:-1, :]) / dy
    adv = (gx[:, 1:] - gx[:, :-1]) / dx + (gy[1:, :] - gy[:-1, :]) / dy \
        - t_c * div_u

    df_x = 0.5 * (diff_pad[1:-1, :-1] + diff_pad[1:-1, 1:])
    df_y = 0.5 * (diff_pad[:-1, 1:-1] + diff_pad[1:, 1:-1])
    dx_flux = df_x * (t_pad[1:-1, 1:] - t_pad[1:-1, :-1]) / dx
    dy_flux = df_y * (t_pad[1:, 1:-1] - t_pad[:-1, 1:-1]) / dy
    diffusion = (dx_flux[:, 1:] - dx_flux[:, :-1]) / dx \
        + (dy_flux[1:, :] - dy_flux[:-1, :]) / dy

    return t_c + dt * (-adv + (diffusion + s_t) / rho)
