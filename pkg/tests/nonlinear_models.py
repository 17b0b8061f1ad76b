"""Nonlinear time-domain inverter models used as a test oracle.

These are written directly as vector fields in the global dq frame.  The
equilibrium is found numerically with ``scipy.optimize.root`` and the
linearization is a central finite difference, so they share nothing with the
analytic Jacobians in the package except the physics.
"""

import numpy as np
from scipy.optimize import root


def _rotate_in(theta, v):
    # global frame -> controller frame
    c, s = np.cos(theta), np.sin(theta)
    return np.array([c * v[0] + s * v[1], -s * v[0] + c * v[1]])


def _rotate_out(theta, v):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


def _cross(v):
    # J v with J = [[0, -1], [1, 0]]
    return np.array([-v[1], v[0]])


def lcl(state, e, u_t, f):
    w0 = f.omega0
    i_f, u_c, i_g = state[0:2], state[2:4], state[4:6]
    di_f = w0 / f.l_f * (e - u_c) - w0 * _cross(i_f)
    du_c = w0 / f.c_f * (i_f - i_g) - w0 * _cross(u_c)
    di_g = w0 / f.l_g * (u_c - u_t) - w0 * _cross(i_g)
    return np.concatenate([di_f, du_c, di_g])


def _current_loop(g, f, i_ref, i_c, x_c, v_ff, decoupling=True):
    e_c = g.cc_kp * (i_ref - i_c) + g.cc_ki * x_c + v_ff
    if decoupling:
        e_c = e_c + f.l_f * _cross(i_c)
    return e_c


def gfl_field(x, u_t, f, g, ref):
    theta, x_pll, x_p, x_q = x[6], x[7], x[8], x[9]
    x_c, v_ff = x[10:12], x[12:14]
    i_f, i_g = x[0:2], x[4:6]
    v_ctl = _rotate_in(theta, u_t)
    i_ctl = _rotate_in(theta, i_f)
    p = u_t[0] * i_g[0] + u_t[1] * i_g[1]
    q = u_t[1] * i_g[0] - u_t[0] * i_g[1]
    i_ref = np.array([g.pq_kp * (ref["p"] - p) + g.pq_ki * x_p, -(g.pq_kp * (ref["q"] - q) + g.pq_ki * x_q)])
    e_c = _current_loop(g, f, i_ref, i_ctl, x_c, v_ff, g.decoupling)
    dx = np.empty(14)
    dx[0:6] = lcl(x, _rotate_out(theta, e_c), u_t, f)
    dx[6] = g.pll_kp * v_ctl[1] + g.pll_ki * x_pll
    dx[7] = v_ctl[1]
    dx[8] = ref["p"] - p
    dx[9] = ref["q"] - q
    dx[10:12] = i_ref - i_ctl
    dx[12:14] = (g.k_vf * v_ctl - v_ff) / g.t_vf_s
    return dx


def gfm_field(x, u_t, f, g, ref):
    theta, dw = x[6], x[7]
    x_v, x_c, v_ff = x[8:10], x[10:12], x[12:14]
    i_f, u_c, i_g = x[0:2], x[2:4], x[4:6]
    u_ctl = _rotate_in(theta, u_c)
    i_ctl = _rotate_in(theta, i_f)
    p = u_t[0] * i_g[0] + u_t[1] * i_g[1]
    i_ref = g.vc_kp * (ref["u"] - u_ctl) + g.vc_ki * x_v
    e_c = _current_loop(g, f, i_ref, i_ctl, x_c, v_ff, g.decoupling)
    dx = np.empty(14)
    dx[0:6] = lcl(x, _rotate_out(theta, e_c), u_t, f)
    dx[6] = f.omega0 * dw
    dx[7] = (ref["p"] - p - g.d_vsg * dw) / g.j_vsg
    dx[8:10] = ref["u"] - u_ctl
    dx[10:12] = i_ref - i_ctl
    dx[12:14] = (g.k_vf * u_ctl - v_ff) / g.t_vf_s
    return dx


def _physical_guess(f, op):
    u_t = np.array([op.u0, 0.0])
    i_g = np.array([op.p0, -op.q0]) / op.u0
    u_c = u_t + f.l_g * _cross(i_g)
    i_f = i_g + f.c_f * _cross(u_c)
    return u_t, i_g, u_c, i_f


def equilibrium(kind, f, g):
    """Numerical steady state with the terminal held at ``(u0, 0)``."""
    u_t, i_g, u_c, i_f = _physical_guess(f, g.op)
    x0 = np.zeros(14)
    x0[0:2], x0[2:4], x0[4:6] = i_f, u_c, i_g
    if kind == "gfl":
        ref = {"p": g.op.p0, "q": g.op.q0}
        field = gfl_field
        x0[8] = i_f[0] / max(g.pq_ki, 1e-12)
        x0[9] = -i_f[1] / max(g.pq_ki, 1e-12)
    else:
        ref = {"p": g.op.p0, "u": np.array([np.hypot(*u_c), 0.0])}
        field = gfm_field
        x0[6] = np.arctan2(u_c[1], u_c[0])
        x0[8:10] = _rotate_in(x0[6], i_f) / g.vc_ki
    sol = root(lambda x: field(x, u_t, f, g, ref), x0, method="hybr")
    if not sol.success or np.max(np.abs(field(sol.x, u_t, f, g, ref))) > 1e-9:
        raise RuntimeError(f"equilibrium search failed: {sol.message}")
    return sol.x, u_t, ref, field


def linearize(kind, f, g, h=1e-6):
    """Central-difference ``(A, B, C)`` with output ``-i_g``."""
    x0, u0, ref, field = equilibrium(kind, f, g)
    n = x0.size
    a = np.zeros((n, n))
    b = np.zeros((n, 2))
    for i in range(n):
        d = np.zeros(n)
        d[i] = h
        a[:, i] = (field(x0 + d, u0, f, g, ref) - field(x0 - d, u0, f, g, ref)) / (2 * h)
    for i in range(2):
        d = np.zeros(2)
        d[i] = h
        b[:, i] = (field(x0, u0 + d, f, g, ref) - field(x0, u0 - d, f, g, ref)) / (2 * h)
    c = np.zeros((2, n))
    c[:, 4:6] = -np.eye(2)
    return a, b, c


def response(abc, omegas):
    a, b, c = abc
    n = a.shape[0]
    return np.array([c @ np.linalg.solve(1j * w * np.eye(n) - a, b) for w in omegas])


def lcl_admittance(f, omega):
    """Passive LCL seen from the grid terminal (controller output shorted)."""
    s = 1j * omega
    w0 = f.omega0
    finv = np.array([[s, -w0], [w0, s]]) / w0
    fwd = np.linalg.inv(finv)
    z_g = f.l_g * finv
    y_shunt = f.c_f * finv + fwd / f.l_f
    return np.linalg.inv(z_g + np.linalg.inv(y_shunt))
