"""Numba-compiled twins of the kernels in kernels_numpy.

Every function mirrors its numpy counterpart expression for expression
(same operand order, no fastmath) so the two backends produce
bit-identical fields; the parity test in the suite enforces that.
Loops are sequential on purpose: determinism beats the last factor of
two here.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_JIT = dict(cache=True, fastmath=False)


@njit(**_JIT)
def predict_u(u_pad, v_pad, p_pad, mu_pad, rho_pad, su, u_act,
              dt, dx, dy, gx):
    ny = u_pad.shape[0] - 2
    nf = u_pad.shape[1] - 2  # nx + 1 faces
    out = np.empty((ny, nf))
    for j in range(ny):
        for i in range(nf):
            uc = u_pad[j + 1, i + 1]
            if u_act[j, i] <= 0:
                out[j, i] = uc
                continue
            ue = u_pad[j + 1, i + 2]
            uw = u_pad[j + 1, i]
            un = u_pad[j + 2, i + 1]
            us = u_pad[j, i + 1]

            vbar = 0.25 * (v_pad[j + 1, i] + v_pad[j + 1, i + 1]
                           + v_pad[j + 2, i] + v_pad[j + 2, i + 1])

            if uc > 0.0:
                dudx = (uc - uw) / dx
            else:
                dudx = (ue - uc) / dx
            if vbar > 0.0:
                dudy = (uc - us) / dy
            else:
                dudy = (un - uc) / dy
            adv = uc * dudx + vbar * dudy

            mu_e = mu_pad[j + 1, i + 1]
            mu_w = mu_pad[j + 1, i]
            mu_n = 0.25 * (mu_pad[j + 1, i] + mu_pad[j + 1, i + 1]
                           + mu_pad[j + 2, i] + mu_pad[j + 2, i + 1])
            mu_s = 0.25 * (mu_pad[j, i] + mu_pad[j, i + 1]
                           + mu_pad[j + 1, i] + mu_pad[j + 1, i + 1])
            visc = (mu_e * (ue - uc) - mu_w * (uc - uw)) / (dx * dx) \
                + (mu_n * (un - uc) - mu_s * (uc - us)) / (dy * dy)

            rho_f = 0.5 * (rho_pad[j + 1, i] + rho_pad[j + 1, i + 1])
            pg = (p_pad[j + 1, i + 1] - p_pad[j + 1, i]) / dx

            out[j, i] = uc + dt * (-adv + (visc - pg + su[j, i]) / rho_f + gx)
    return out


@njit(**_JIT)
def predict_v(u_pad, v_pad, p_pad, mu_pad, rho_pad, sv, v_act,
              dt, dx, dy, gy):
    nf = v_pad.shape[0] - 2  # ny + 1 faces
    nx = v_pad.shape[1] - 2
    out = np.empty((nf, nx))
    for j in range(nf):
        for i in range(nx):
            vc = v_pad[j + 1, i + 1]
            if v_act[j, i] <= 0:
                out[j, i] = vc
                continue
            ve = v_pad[j + 1, i + 2]
            vw = v_pad[j + 1, i]
            vn = v_pad[j + 2, i + 1]
            vs = v_pad[j, i + 1]

            ubar = 0.25 * (u_pad[j, i + 1] + u_pad[j, i + 2]
                           + u_pad[j + 1, i + 1] + u_pad[j + 1, i + 2])

            if ubar > 0.0:
                dvdx = (vc - vw) / dx
            else:
                dvdx = (ve - vc) / dx
            if vc > 0.0:
                dvdy = (vc - vs) / dy
            else:
                dvdy = (vn - vc) / dy
            adv = ubar * dvdx + vc * dvdy

            mu_e = 0.25 * (mu_pad[j, i + 1] + mu_pad[j, i + 2]
                           + mu_pad[j + 1, i + 1] + mu_pad[j + 1, i + 2])
            mu_w = 0.25 * (mu_pad[j, i] + mu_pad[j, i + 1]
                           + mu_pad[j + 1, i] + mu_pad[j + 1, i + 1])
            mu_n = mu_pad[j + 1, i + 1]
            mu_s = mu_pad[j, i + 1]
            visc = (mu_e * (ve - vc) - mu_w * (vc - vw)) / (dx * dx) \
                + (mu_n * (vn - vc) - mu_s * (vc - vs)) / (dy * dy)

            rho_f = 0.5 * (rho_pad[j, i + 1] + rho_pad[j + 1, i + 1])
            pg = (p_pad[j + 1, i + 1] - p_pad[j, i + 1]) / dy

            out[j, i] = vc + dt * (-adv + (visc - pg + sv[j, i]) / rho_f + gy)
    return out


@njit(**_JIT)
def divergence(u, v, dx, dy):
    ny, nx = u.shape[0], v.shape[1]
    out = np.empty((ny, nx))
    for j in range(ny):
        for i in range(nx):
            out[j, i] = (u[j, i + 1] - u[j, i]) / dx \
                + (v[j + 1, i] - v[j, i]) / dy
    return out


@njit(**_JIT)
def sor_sweep(q_pad, rhs, a_e, a_w, a_n, a_s, c_c, omega, parity):
    ny, nx = rhs.shape
    for j in range(ny):
        start = parity if j % 2 == 0 else 1 - parity
        for i in range(start, nx, 2):
            gs = (rhs[j, i]
                  - a_e[j, i] * q_pad[j + 1, i + 2]
                  - a_w[j, i] * q_pad[j + 1, i]
                  - a_n[j, i] * q_pad[j + 2, i + 1]
                  - a_s[j, i] * q_pad[j, i + 1]) / c_c[j, i]
            q_pad[j + 1, i + 1] = q_pad[j + 1, i + 1] \
                + omega * (gs - q_pad[j + 1, i + 1])


@njit(**_JIT)
def poisson_residual(q_pad, rhs, a_e, a_w, a_n, a_s, c_c):
    ny, nx = rhs.shape
    worst = 0.0
    for j in range(ny):
        for i in range(nx):
            r = (rhs[j, i]
                 - a_e[j, i] * q_pad[j + 1, i + 2]
                 - a_w[j, i] * q_pad[j + 1, i]
                 - a_n[j, i] * q_pad[j + 2, i + 1]
                 - a_s[j, i] * q_pad[j, i + 1]
                 - c_c[j, i] * q_pad[j + 1, i + 1])
            if abs(r) > worst:
                worst = abs(r)
    return worst


@njit(**_JIT)
def correct_u(u, q_pad, rho_u, u_act, dx):
    ny, nf = u.shape
    out = np.empty((ny, nf))
    for j in range(ny):
        for i in range(nf):
            if u_act[j, i] > 0:
                corr = (q_pad[j + 1, i + 1] - q_pad[j + 1, i]) / dx \
                    / rho_u[j, i]
                out[j, i] = u[j, i] - corr
            else:
                out[j, i] = u[j, i]
    return out


@njit(**_JIT)
def correct_v(v, q_pad, rho_v, v_act, dy):
    nf, nx = v.shape
    out = np.empty((nf, nx))
    for j in range(nf):
        for i in range(nx):
            if v_act[j, i] > 0:
                corr = (q_pad[j + 1, i + 1] - q_pad[j, i + 1]) / dy \
                    / rho_v[j, i]
                out[j, i] = v[j, i] - corr
            else:
                out[j, i] = v[j, i]
    return out


@njit(**_JIT)
def vof_update(alpha_pad, u, v, dt, dx, dy):
    ny = alpha_pad.shape[0] - 2
    nx = alpha_pad.shape[1] - 2
    fx = np.empty((ny, nx + 1))
    fy = np.empty((ny + 1, nx))
    for j in range(ny):
        for i in range(nx + 1):
            if u[j, i] > 0.0:
                fx[j, i] = u[j, i] * alpha_pad[j + 1, i]
            else:
                fx[j, i] = u[j, i] * alpha_pad[j + 1, i + 1]
    for j in range(ny + 1):
        for i in range(nx):
            if v[j, i] > 0.0:
                fy[j, i] = v[j, i] * alpha_pad[j, i + 1]
            else:
                fy[j, i] = v[j, i] * alpha_pad[j + 1, i + 1]
    out = np.empty((ny, nx))
    clip_low = 0.0
    clip_high = 0.0
    for j in range(ny):
        for i in range(nx):
            a_new = alpha_pad[j + 1, i + 1] \
                - dt / dx * (fx[j, i + 1] - fx[j, i]) \
                - dt / dy * (fy[j + 1, i] - fy[j, i])
            if a_new < 0.0:
                clip_low += -a_new
                a_new = 0.0
            elif a_new > 1.0:
                clip_high += a_new - 1.0
                a_new = 1.0
            out[j, i] = a_new
    return out, clip_low, clip_high


@njit(**_JIT)
def scalar_update(t_pad, diff_pad, rho, s_t, u, v, dt, dx, dy):
    ny = rho.shape[0]
    nx = rho.shape[1]
    gx = np.empty((ny, nx + 1))
    gy = np.empty((ny + 1, nx))
    dxf = np.empty((ny, nx + 1))
    dyf = np.empty((ny + 1, nx))
    for j in range(ny):
        for i in range(nx + 1):
            if u[j, i] > 0.0:
                gx[j, i] = u[j, i] * t_pad[j + 1, i]
            else:
                gx[j, i] = u[j, i] * t_pad[j + 1, i + 1]
            df = 0.5 * (diff_pad[j + 1, i] + diff_pad[j + 1, i + 1])
            dxf[j, i] = df * (t_pad[j + 1, i + 1] - t_pad[j + 1, i]) / dx
    for j in range(ny + 1):
        for i in range(nx):
            if v[j, i] > 0.0:
                gy[j, i] = v[j, i] * t_pad[j, i + 1]
            else:
                gy[j, i] = v[j, i] * t_pad[j + 1, i + 1]
            df = 0.5 * (diff_pad[j, i + 1] + diff_pad[j + 1, i + 1])
            dyf[j, i] = df * (t_pad[j + 1, i + 1] - t_pad[j, i + 1]) / dy
    out = np.empty((ny, nx))
    for j in range(ny):
        for i in range(nx):
            t_c = t_pad[j + 1, i + 1]
            div_u = (u[j, i + 1] - u[j, i]) / dx \
                + (v[j + 1, i] - v[j, i]) / dy
            adv = (gx[j, i + 1] - gx[j, i]) / dx \
                + (gy[j + 1, i] - gy[j, i]) / dy \
                - t_c * div_u
            diffusion = (dxf[j, i + 1] - dxf[j, i]) / dx \
                + (dyf[j + 1, i] - dyf[j, i]) / dy
            out[j, i] = t_c + dt * (-adv + (diffusion + s_t[j, i])
                                    / rho[j, i])
    return out
