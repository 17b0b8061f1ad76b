"""Linearized dq-frame admittance models of grid-following and grid-forming inverters.

Both inverters sit behind the same LCL filter (inverter-side inductor ``l_f``,
capacitor ``c_f``, grid-side inductor ``l_g``).  Per-unit dynamics in the
global frame rotating at ``omega0``::

    (l_f/omega0) di_f/dt = e   - u_c - l_f J i_f
    (c_f/omega0) du_c/dt = i_f - i_g - c_f J u_c
    (l_g/omega0) di_g/dt = u_c - u_t - l_g J i_g        J = [[0, -1], [1, 0]]

GFL control: SRF-PLL on the terminal voltage, P/Q PI loops producing the
inverter-side current reference, current PI with cross decoupling and a
first-order terminal-voltage feedforward.

GFM control: virtual synchronous generator swing equation setting the frame
angle, capacitor-voltage PI producing the current reference, the same current
PI and a first-order capacitor-voltage feedforward.

The admittance maps a terminal-voltage deviation to the current drawn from
the network (``-i_g``), i.e. the inverter is seen by the grid as a shunt
element, so a passive LCL gives a positive admittance.  The models are
linearized analytically around the operating point; nothing here integrates
or perturbs the nonlinear equations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np

from . import _kernels

J2 = np.array([[0.0, -1.0], [1.0, 0.0]])
I2 = np.eye(2)
POLE_RTOL = 1e-6


class InverterError(ValueError):
    pass


class Kind(str, Enum):
    GFL = "gfl"
    GFM = "gfm"
    PASSIVE = "passive"


@dataclass(frozen=True)
class OperatingPoint:
    p0: float = 1.0
    q0: float = 0.0
    u0: float = 1.0

    def __post_init__(self):
        if not self.u0 > 0:
            raise InverterError(f"terminal voltage must be positive, got {self.u0}")


@dataclass(frozen=True)
class FilterParams:
    l_f: float = 0.05
    c_f: float = 0.05
    l_g: float = 0.05
    tau: float = 0.1  # grid-impedance R/L ratio; carried but unused (B is reactance-only)
    omega0: float = 2 * np.pi * 50.0

    def __post_init__(self):
        for name in ("l_f", "c_f", "l_g", "omega0"):
            if not getattr(self, name) > 0:
                raise InverterError(f"filter parameter {name} must be positive")


def _check_gains(obj, names):
    for name in names:
        if getattr(obj, name) < 0:
            raise InverterError(f"{type(obj).__name__}.{name} must be non-negative")


@dataclass(frozen=True)
class GflParams:
    cc_kp: float = 0.3
    cc_ki: float = 10.0
    k_vf: float = 1.0
    t_vf_s: float = 0.004
    pq_kp: float = 0.4
    pq_ki: float = 8.0
    pll_kp: float = 20.0
    pll_ki: float = 8020.0
    op: OperatingPoint = field(default_factory=OperatingPoint)
    decoupling: bool = True

    def __post_init__(self):
        _check_gains(self, ("cc_kp", "cc_ki", "k_vf", "pq_kp", "pq_ki", "pll_kp", "pll_ki"))
        if not self.t_vf_s > 0:
            raise InverterError("t_vf_s must be positive")


@dataclass(frozen=True)
class GfmParams:
    cc_kp: float = 0.3
    cc_ki: float = 10.0
    k_vf: float = 1.0
    t_vf_s: float = 0.004
    vc_kp: float = 6.0
    vc_ki: float = 20.0
    j_vsg: float = 2.0
    d_vsg: float = 25.0
    op: OperatingPoint = field(default_factory=OperatingPoint)
    decoupling: bool = True

    def __post_init__(self):
        _check_gains(self, ("cc_kp", "cc_ki", "k_vf", "vc_kp", "vc_ki"))
        if not (self.j_vsg > 0 and self.d_vsg > 0):
            raise InverterError("VSG inertia and damping must be positive")
        if not self.t_vf_s > 0:
            raise InverterError("t_vf_s must be positive")


@dataclass(frozen=True)
class InverterParams:
    filter: FilterParams
    gfl: GflParams
    gfm: GfmParams
    omega_star: float = 2 * np.pi * 5.0


@dataclass(frozen=True)
class AdmittanceModel:
    """Real state-space realization of a 2x2 dq admittance."""

    a: np.ndarray
    b_in: np.ndarray
    c_out: np.ndarray
    d: np.ndarray
    kind: Kind
    states: tuple[str, ...] = ()

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a, dtype=float))
        b = np.asarray(self.b_in, dtype=float).reshape(a.shape[0], 2)
        c = np.asarray(self.c_out, dtype=float).reshape(2, a.shape[0])
        d = np.asarray(self.d, dtype=float).reshape(2, 2)
        if a.shape[0] != a.shape[1]:
            raise InverterError("state matrix must be square")
        if self.kind in (Kind.GFL, Kind.GFM) and a.shape[0] < 1:
            raise InverterError("inverter models need at least one state")
        for name, arr in (("a", a), ("b_in", b), ("c_out", c), ("d", d)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_states(self) -> int:
        return self.a.shape[0]

    def response(self, omegas) -> np.ndarray:
        """``Y(jw)`` over an array of frequencies, shape ``(m, 2, 2)``."""
        return _kernels.freqresp(self.a, self.b_in, self.c_out, self.d, np.atleast_1d(omegas))


# ------------------------------------------------------------ network factor


def eval_network_factor(omega: float, omega0: float) -> np.ndarray:
    """``F(jw) = [[s, w0], [-w0, s]] / (s^2/w0 + w0)``: dq admittance of a unit susceptance."""
    if abs(abs(omega) - omega0) < POLE_RTOL * omega0:
        raise InverterError(f"F(jw) has a pole at w={omega0}; requested w={omega}")
    s = 1j * omega
    return np.array([[s, omega0], [-omega0, s]]) / (s * s / omega0 + omega0)


def eval_network_factor_inverse(omega: float, omega0: float) -> np.ndarray:
    """Closed-form ``F(jw)^-1 = [[s, -w0], [w0, s]] / w0`` (finite everywhere)."""
    s = 1j * omega
    return np.array([[s, -omega0], [omega0, s]]) / omega0


def network_factor_inverse_batch(omegas, omega0: float) -> np.ndarray:
    s = 1j * np.asarray(omegas, dtype=float)
    out = np.empty(s.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = out[..., 1, 1] = s / omega0
    out[..., 0, 1] = -1.0
    out[..., 1, 0] = 1.0
    return out


def network_factor_batch(omegas, omega0: float) -> np.ndarray:
    s = 1j * np.asarray(omegas, dtype=float)
    den = s * s / omega0 + omega0
    out = np.empty(s.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = out[..., 1, 1] = s / den
    out[..., 0, 1] = omega0 / den
    out[..., 1, 0] = -omega0 / den
    return out


# ------------------------------------------------------------ operating point


def _rot(theta: float) -> np.ndarray:
    """Global -> controller frame rotation."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


@dataclass(frozen=True)
class SteadyState:
    u_t: np.ndarray
    i_g: np.ndarray
    u_c: np.ndarray
    i_f: np.ndarray
    e: np.ndarray


def steady_state(f: FilterParams, op: OperatingPoint) -> SteadyState:
    """Filter voltages/currents with ``u_t = (u0, 0)`` delivering ``p0 + j q0``."""
    u_t = np.array([op.u0, 0.0])
    i_g = np.array([op.p0, -op.q0]) / op.u0
    u_c = u_t + f.l_g * J2 @ i_g
    i_f = i_g + f.c_f * J2 @ u_c
    e = u_c + f.l_f * J2 @ i_f
    return SteadyState(u_t, i_g, u_c, i_f, e)


# ------------------------------------------------------------ linearization


class _Jac:
    """Accumulates linear maps over the stacked vector ``[x; u_t]``."""

    def __init__(self, names):
        self.names = tuple(names)
        self.nx = len(self.names)
        self.nz = self.nx + 2
        self.pos = {n: i for i, n in enumerate(self.names)}
        self.rows = np.zeros((self.nx, self.nz))

    def var(self, *names) -> np.ndarray:
        out = np.zeros((len(names), self.nz))
        for r, n in enumerate(names):
            out[r, self.pos[n] if n in self.pos else self.nx + ("ut_d", "ut_q").index(n)] = 1.0
        return out

    def set(self, names, rows):
        for n, r in zip(names, np.atleast_2d(rows)):
            self.rows[self.pos[n]] = r

    def model(self, kind: Kind) -> AdmittanceModel:
        a = self.rows[:, : self.nx]
        b = self.rows[:, self.nx :]
        c = -self.var("ig_d", "ig_q")[:, : self.nx]
        return AdmittanceModel(a, b, c, np.zeros((2, 2)), kind, self.names)


def _filter_rows(jac: _Jac, f: FilterParams, de: np.ndarray) -> None:
    w0 = f.omega0
    i_f, u_c, i_g = jac.var("if_d", "if_q"), jac.var("uc_d", "uc_q"), jac.var("ig_d", "ig_q")
    u_t = jac.var("ut_d", "ut_q")
    jac.set(("if_d", "if_q"), w0 / f.l_f * (de - u_c) - w0 * J2 @ i_f)
    jac.set(("uc_d", "uc_q"), w0 / f.c_f * (i_f - i_g) - w0 * J2 @ u_c)
    jac.set(("ig_d", "ig_q"), w0 / f.l_g * (u_c - u_t) - w0 * J2 @ i_g)


_GFL_STATES = (
    "if_d", "if_q", "uc_d", "uc_q", "ig_d", "ig_q",
    "theta", "x_pll", "x_p", "x_q", "xc_d", "xc_q", "vff_d", "vff_q",
)

_GFM_STATES = (
    "if_d", "if_q", "uc_d", "uc_q", "ig_d", "ig_q",
    "theta", "dw", "xv_d", "xv_q", "xc_d", "xc_q", "vff_d", "vff_q",
)


def build_gfl_model(f: FilterParams, g: GflParams) -> AdmittanceModel:
    ss = steady_state(f, g.op)
    jac = _Jac(_GFL_STATES)
    rot = _rot(0.0)  # PLL aligned with the terminal voltage
    v_c0 = rot @ ss.u_t
    i_c0 = rot @ ss.i_f
    th = jac.var("theta")
    u_t, i_g, i_f = jac.var("ut_d", "ut_q"), jac.var("ig_d", "ig_q"), jac.var("if_d", "if_q")

    dv_c = rot @ u_t - np.outer(J2 @ v_c0, th)
    di_c = rot @ i_f - np.outer(J2 @ i_c0, th)
    dp = ss.i_g @ u_t + ss.u_t @ i_g
    dq = (ss.i_g[0] * u_t[1] - ss.i_g[1] * u_t[0]) + (ss.u_t[1] * i_g[0] - ss.u_t[0] * i_g[1])
    di_ref = np.vstack([-g.pq_kp * dp + g.pq_ki * jac.var("x_p")[0], g.pq_kp * dq - g.pq_ki * jac.var("x_q")[0]])
    de_c = (
        g.cc_kp * (di_ref - di_c)
        + g.cc_ki * jac.var("xc_d", "xc_q")
        + (f.l_f * J2 @ di_c if g.decoupling else 0.0)
        + jac.var("vff_d", "vff_q")
    )
    de = rot.T @ de_c + np.outer(J2 @ ss.e, th)

    _filter_rows(jac, f, de)
    jac.set(("theta",), g.pll_kp * dv_c[1] + g.pll_ki * jac.var("x_pll")[0])
    jac.set(("x_pll",), dv_c[1])
    jac.set(("x_p", "x_q"), np.vstack([-dp, -dq]))
    jac.set(("xc_d", "xc_q"), di_ref - di_c)
    jac.set(("vff_d", "vff_q"), (g.k_vf * dv_c - jac.var("vff_d", "vff_q")) / g.t_vf_s)
    return jac.model(Kind.GFL)


def build_gfm_model(f: FilterParams, g: GfmParams) -> AdmittanceModel:
    ss = steady_state(f, g.op)
    jac = _Jac(_GFM_STATES)
    rot = _rot(np.arctan2(ss.u_c[1], ss.u_c[0]))  # VSG frame aligned with the capacitor voltage
    u_cc0 = rot @ ss.u_c
    i_c0 = rot @ ss.i_f
    th = jac.var("theta")
    u_t, i_g, i_f, u_c = (jac.var(a + "_d", a + "_q") for a in ("ut", "ig", "if", "uc"))

    du_cc = rot @ u_c - np.outer(J2 @ u_cc0, th)
    di_c = rot @ i_f - np.outer(J2 @ i_c0, th)
    dp = ss.i_g @ u_t + ss.u_t @ i_g
    di_ref = -g.vc_kp * du_cc + g.vc_ki * jac.var("xv_d", "xv_q")
    de_c = (
        g.cc_kp * (di_ref - di_c)
        + g.cc_ki * jac.var("xc_d", "xc_q")
        + (f.l_f * J2 @ di_c if g.decoupling else 0.0)
        + jac.var("vff_d", "vff_q")
    )
    de = rot.T @ de_c + np.outer(J2 @ ss.e, th)

    _filter_rows(jac, f, de)
    jac.set(("theta",), f.omega0 * jac.var("dw")[0])
    jac.set(("dw",), (-dp - g.d_vsg * jac.var("dw")[0]) / g.j_vsg)
    jac.set(("xv_d", "xv_q"), -du_cc)
    jac.set(("xc_d", "xc_q"), di_ref - di_c)
    jac.set(("vff_d", "vff_q"), (g.k_vf * du_cc - jac.var("vff_d", "vff_q")) / g.t_vf_s)
    return jac.model(Kind.GFM)


def passive_branch(l: float, omega0: float = 2 * np.pi * 50.0) -> AdmittanceModel:
    """Shunt inductor of per-unit reactance ``l``: ``Y = F / l``."""
    if not l > 0:
        raise InverterError("inductance must be positive")
    return AdmittanceModel(-omega0 * J2, omega0 / l * I2, I2, np.zeros((2, 2)), Kind.PASSIVE, ("i_d", "i_q"))


def disabled_controls(g):
    """Copy of ``g`` with every controller action switched off (passive LCL limit).

    For the GFM the swing damping is made very large so the frame angle stays put.
    """
    if isinstance(g, GflParams):
        return replace(g, cc_kp=0.0, cc_ki=0.0, k_vf=0.0, pq_kp=0.0, pq_ki=0.0, pll_kp=0.0, pll_ki=0.0, decoupling=False)
    return replace(g, cc_kp=0.0, cc_ki=0.0, k_vf=0.0, vc_kp=0.0, vc_ki=0.0, d_vsg=1e15, decoupling=False)


# ------------------------------------------------------------ evaluation


def eval_admittance(m: AdmittanceModel, omega: float) -> np.ndarray:
    lhs = 1j * omega * np.eye(m.n_states) - m.a
    if m.n_states and np.linalg.cond(lhs) > 1e15:
        raise InverterError(f"admittance model resonates exactly at w={omega} rad/s")
    if m.n_states == 0:
        return m.d.astype(complex)
    return m.c_out @ np.linalg.solve(lhs, m.b_in.astype(complex)) + m.d


def estimate_beq(m: AdmittanceModel, omega_star: float, omega0: float = 2 * np.pi * 50.0) -> tuple[float, float]:
    """Best scalar ``b`` with ``b F(jw*) ~ Y(jw*)`` in the Frobenius norm.

    Returns ``(b_eq, relative fit error)``.
    """
    if m.kind is Kind.GFL:
        raise InverterError("equivalent susceptance is defined for grid-forming models only")
    fm = eval_network_factor(omega_star, omega0)
    y = eval_admittance(m, omega_star)
    b = float(np.real(np.vdot(fm, y)) / np.real(np.vdot(fm, fm)))
    if not b > 0:
        raise InverterError(f"projection of Y onto F is non-positive ({b:.3e}); no positive equivalent susceptance")
    err = float(np.linalg.norm(b * fm - y) / np.linalg.norm(y))
    return b, err


# ------------------------------------------------------------ parameter files


def load_params(path) -> InverterParams:
    data = json.loads(Path(path).read_text())
    f_base = float(data.get("base", {}).get("f_base_hz", 50.0))
    op = OperatingPoint(**{k: float(v) for k, v in data.get("operating_point", {}).items()})
    filt = FilterParams(**{k: float(v) for k, v in data["filter"].items()}, omega0=2 * np.pi * f_base)
    gfl = GflParams(**{k: float(v) for k, v in data["gfl"].items()}, op=op)
    gfm = GfmParams(**{k: float(v) for k, v in data["gfm"].items()}, op=op)
    omega_star = float(data.get("beq_omega_star", 2 * np.pi * 5.0))
    return InverterParams(filt, gfl, gfm, omega_star)
