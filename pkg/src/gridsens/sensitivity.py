"""Sensitivity peaks of multi-inverter systems.

The closed loop seen at the inverter terminals is ``L = Y_N^-1 Y_G`` with
``Y_N = B kron F``.  Every sweep works with the closed-form ``F^-1`` so the
network pole at the fundamental never appears, and ``sigma_max{S}`` is taken as
``1 / sigma_min{I + L}`` without forming the inverse.

Besides the direct sweep this module provides the modal (per-eigenvalue)
decomposition of homogeneous systems and the two-subsystem decoupling of
hybrid GFL/GFM systems, together with numerical checks of the identities
that connect them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import _kernels
from .gridstrength import Partition, eig_sym, schur_complement
from .inverters import (
    AdmittanceModel,
    InverterError,
    Kind,
    eval_network_factor,
    eval_network_factor_inverse,
    network_factor_inverse_batch,
)
from .netgraph import GroundedLaplacian

SINGULAR_TOL = 1e-13
DEFAULT_OMEGA0 = 2 * np.pi * 50.0


class SensitivityError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    """Log-spaced frequency grid in Hz (dq-frame frequency)."""

    f_min: float = 0.1
    f_max: float = 1000.0
    points: int = 2000

    def __post_init__(self):
        if not 0 < self.f_min < self.f_max:
            raise SensitivityError(f"need 0 < f_min < f_max, got {self.f_min}, {self.f_max}")
        if int(self.points) < 2:
            raise SensitivityError("grid needs at least two points")
        object.__setattr__(self, "points", int(self.points))

    def freqs_hz(self) -> np.ndarray:
        return np.logspace(np.log10(self.f_min), np.log10(self.f_max), self.points)

    def omegas(self) -> np.ndarray:
        return 2 * np.pi * self.freqs_hz()


def _as_matrix(b) -> np.ndarray:
    return b.b if isinstance(b, GroundedLaplacian) else np.atleast_2d(np.asarray(b, dtype=float))


@dataclass(frozen=True)
class SystemAssignment:
    """Grounded Laplacian plus the inverter kind at each of its nodes."""

    b: GroundedLaplacian
    kinds: tuple[Kind, ...]
    gfl: AdmittanceModel | None = None
    gfm: AdmittanceModel | None = None
    omega0: float = DEFAULT_OMEGA0

    def __post_init__(self):
        if not isinstance(self.b, GroundedLaplacian):
            object.__setattr__(self, "b", GroundedLaplacian.from_matrix(self.b))
        kinds = tuple(Kind(str(k.value if isinstance(k, Kind) else k).lower()) for k in self.kinds)
        if len(kinds) != self.b.n:
            raise SensitivityError(f"{len(kinds)} kinds given for a {self.b.n}-node network")
        for k in kinds:
            if k is Kind.PASSIVE:
                raise SensitivityError("node kinds must be gfl or gfm")
        for slot, model in ((Kind.GFL, self.gfl), (Kind.GFM, self.gfm)):
            if slot in kinds and model is None:
                raise SensitivityError(f"a {slot.value} model is required by the kind list")
            if model is not None and model.kind not in (slot, Kind.PASSIVE):
                raise SensitivityError(f"{slot.value} slot holds a {model.kind.value} model")
        object.__setattr__(self, "kinds", kinds)

    @property
    def n(self) -> int:
        return self.b.n

    @property
    def partition(self) -> Partition:
        return Partition.from_kinds([k.value for k in self.kinds])

    def model_at(self, i: int) -> AdmittanceModel:
        return self.gfl if self.kinds[i] is Kind.GFL else self.gfm

    def y_blocks(self, omegas) -> np.ndarray:
        """Admittances per frequency and node, shape ``(m, n, 2, 2)``."""
        omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
        cache = {}
        out = np.empty((omegas.size, self.n, 2, 2), dtype=complex)
        for i, k in enumerate(self.kinds):
            if k not in cache:
                cache[k] = self.model_at(i).response(omegas)
            out[:, i] = cache[k]
        return out

    def permuted(self, perm) -> "SystemAssignment":
        """Relabel nodes: new node ``j`` is old node ``perm[j]``."""
        perm = list(perm)
        b = self.b.b[np.ix_(perm, perm)]
        order = tuple(self.b.node_order[p] for p in perm)
        kinds = tuple(self.kinds[p] for p in perm)
        return SystemAssignment(GroundedLaplacian(b, order), kinds, self.gfl, self.gfm, self.omega0)


@dataclass(frozen=True)
class SweepResult:
    """``sigma_max{S(jw)}`` over a grid plus the refined peak.

    ``kappa_p_db`` is the refined peak and is never below the grid maximum.
    """

    omegas: np.ndarray
    sigma_max: np.ndarray
    kappa_p_db: float
    omega_peak: float
    singular_omegas: tuple[float, ...] = field(default=())

    @property
    def freqs_hz(self) -> np.ndarray:
        return self.omegas / (2 * np.pi)

    @property
    def freq_peak_hz(self) -> float:
        return self.omega_peak / (2 * np.pi)

    @property
    def sigma_max_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 20 * np.log10(self.sigma_max)

    @property
    def kappa_grid_db(self) -> float:
        return float(np.max(self.sigma_max_db))


@dataclass(frozen=True)
class SibsConfig:
    scr: float
    model: AdmittanceModel
    omega0: float = DEFAULT_OMEGA0

    def __post_init__(self):
        if not self.scr > 0:
            raise SensitivityError(f"SCR must be positive, got {self.scr}")

    def system(self) -> SystemAssignment:
        kind = Kind.GFM if self.model.kind is Kind.GFM else Kind.GFL
        slots = {"gfm": self.model} if kind is Kind.GFM else {"gfl": self.model}
        return SystemAssignment(GroundedLaplacian.from_matrix([[self.scr]]), (kind,), omega0=self.omega0, **slots)


# ------------------------------------------------------------ point evaluations


def _blockdiag(blocks) -> np.ndarray:
    n = len(blocks)
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    for i, y in enumerate(blocks):
        out[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = y
    return out


def open_loop_at(sys: SystemAssignment, omega: float) -> np.ndarray:
    """``(B^-1 kron F^-1(jw)) blockdiag(Y_i(jw))`` in the node order of ``sys.b``."""
    binv = np.linalg.inv(sys.b.b)
    finv = eval_network_factor_inverse(omega, sys.omega0)
    return np.kron(binv, finv) @ _blockdiag(sys.y_blocks([omega])[0])


def _sigma_from_min(smin):
    smin = np.asarray(smin, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(smin < SINGULAR_TOL, np.inf, 1.0 / np.where(smin > 0, smin, 1.0))


def sensitivity_sigma_max(sys: SystemAssignment, omega: float) -> float:
    """``1 / sigma_min{I + L(jw)}``; ``inf`` when ``I + L`` is numerically singular."""
    rd = np.eye(2 * sys.n) + open_loop_at(sys, omega)
    return float(_sigma_from_min(np.linalg.svd(rd, compute_uv=False)[-1]))


def _sigma_curve(sys: SystemAssignment, omegas: np.ndarray) -> np.ndarray:
    binv = np.linalg.inv(sys.b.b)
    binv = 0.5 * (binv + binv.T)
    finv = network_factor_inverse_batch(omegas, sys.omega0)
    return _sigma_from_min(_kernels.sensitivity_min_sv(binv, finv, sys.y_blocks(omegas)))


def _finish(omegas, sigma, point_eval) -> SweepResult:
    singular = tuple(float(w) for w in omegas[~np.isfinite(sigma)])
    k = int(np.argmax(sigma))
    peak, w_peak = float(sigma[k]), float(omegas[k])
    if np.isfinite(peak) and 0 < k < len(omegas) - 1:
        x = np.log(omegas[k - 1 : k + 2])
        res = minimize_scalar(
            lambda t: -point_eval(float(np.exp(t))),
            bracket=(x[0], x[1], x[2]),
            method="golden",
            options={"xtol": 1e-7},
        )
        if res.success and np.isfinite(res.fun) and -res.fun > peak and x[0] <= res.x <= x[2]:
            peak, w_peak = float(-res.fun), float(np.exp(res.x))
        elif not np.isfinite(res.fun):
            peak, w_peak = np.inf, float(np.exp(res.x))
    kappa = np.inf if not np.isfinite(peak) else 20 * np.log10(peak)
    return SweepResult(omegas, sigma, float(kappa), w_peak, singular)


def sweep(sys: SystemAssignment, grid: GridSpec | None = None, refine: bool = True) -> SweepResult:
    """Direct ``2n x 2n`` sweep with golden-section refinement of the coarse peak."""
    grid = grid or GridSpec()
    omegas = grid.omegas()
    sigma = _sigma_curve(sys, omegas)
    if not refine:
        k = int(np.argmax(sigma))
        with np.errstate(divide="ignore"):
            kappa = float(20 * np.log10(sigma[k]))
        return SweepResult(omegas, sigma, kappa, float(omegas[k]), tuple(omegas[~np.isfinite(sigma)]))
    return _finish(omegas, sigma, lambda w: float(_sigma_curve(sys, np.array([w]))[0]))


def sibs_sweep(cfg: SibsConfig, grid: GridSpec | None = None) -> SweepResult:
    """Single inverter behind an inductive line of susceptance ``scr``."""
    return sweep(cfg.system(), grid)


def sibs_kappa_db(model: AdmittanceModel, scr: float, grid: GridSpec | None = None) -> float:
    return sibs_sweep(SibsConfig(scr, model), grid).kappa_p_db


# ------------------------------------------------------------ modal decomposition


@dataclass(frozen=True)
class ModalResult:
    modes: tuple[SweepResult, ...]
    lambdas: np.ndarray
    combined: SweepResult
    argmax_mode: int


def modal_kappa(b, model: AdmittanceModel, grid: GridSpec | None = None, omega0: float = DEFAULT_OMEGA0) -> ModalResult:
    """Per-eigenvalue SIBS sweeps of a homogeneous system and their pointwise max.

    ``argmax_mode`` is the (ascending) eigenvalue index whose SIBS carries the
    combined peak.
    """
    grid = grid or GridSpec()
    omegas = grid.omegas()
    lambdas = eig_sym(_as_matrix(b)).lambdas
    if lambdas[0] <= 0:
        raise SensitivityError("modal decomposition needs a positive definite B")
    y = model.response(omegas)
    finv = network_factor_inverse_batch(omegas, omega0)
    modes = []
    for lam in lambdas:
        sigma = _sigma_from_min(_kernels.sensitivity_min_sv(np.array([[1.0 / lam]]), finv, y[:, None]))
        cfg = SibsConfig(float(lam), model, omega0)
        modes.append(_finish(omegas, sigma, lambda w, c=cfg: float(_sigma_curve(c.system(), np.array([w]))[0])))
    stack = np.vstack([m.sigma_max for m in modes])
    combined_sigma = stack.max(axis=0)
    best = int(np.argmax([m.kappa_p_db for m in modes]))
    top = modes[best]
    combined = SweepResult(omegas, combined_sigma, top.kappa_p_db, top.omega_peak,
                           tuple(omegas[~np.isfinite(combined_sigma)]))
    return ModalResult(tuple(modes), lambdas, combined, best)


# ------------------------------------------------------------ hybrid decoupling


def gfl_first(sys: SystemAssignment) -> tuple[SystemAssignment, np.ndarray]:
    """``sys`` relabeled with GFL nodes first; also returns the permutation used."""
    p = sys.partition
    perm = np.array(p.gfl_idx + p.gfm_idx, dtype=int)
    return sys.permuted(perm), perm


def _reduced_sub1(b: np.ndarray, n1: int, finv: np.ndarray, y_gfm: np.ndarray) -> np.ndarray:
    """``R`` with ``Y_N^sub1 = (I kron F) R``; pole-free at the fundamental."""
    n2 = b.shape[0] - n1
    b11, b12, b21, b22 = b[:n1, :n1], b[:n1, n1:], b[n1:, :n1], b[n1:, n1:]
    i2 = np.eye(2)
    if n2 == 0:
        return np.kron(b11, i2).astype(complex)
    m = np.kron(b22, i2) + np.kron(np.eye(n2), finv @ y_gfm)
    if np.linalg.cond(m) > 1e14:
        raise SensitivityError("inner GFM block is singular")
    return np.kron(b11, i2) - np.kron(b12, i2) @ np.linalg.solve(m, np.kron(b21, i2))


def hybrid_subsystem_networks(sys: SystemAssignment, omega: float, y_gfm=None):
    """Equivalent network admittances of the GFL side and of the GFM side.

    The GFL side sees ``B11 kron F - (B12 kron F)(B22 kron F + I kron Y_GFM)^-1 (B21 kron F)``;
    the GFM side sees ``(B / gfl) kron F``.  Rows follow the GFL-first order.
    ``y_gfm`` overrides the GFM admittance at ``omega``.
    """
    ordered, _ = gfl_first(sys)
    p = ordered.partition
    b = ordered.b.b
    try:
        fmat = eval_network_factor(omega, sys.omega0)
    except InverterError as exc:
        raise SensitivityError(f"subsystem networks are undefined at w={omega}: {exc}") from exc
    finv = eval_network_factor_inverse(omega, sys.omega0)
    if y_gfm is None:
        y_gfm = ordered.gfm.response([omega])[0] if p.n2 else np.zeros((2, 2))
    y_sub1 = None
    if p.n1:
        r = _reduced_sub1(b, p.n1, finv, np.asarray(y_gfm, dtype=complex))
        y_sub1 = np.kron(np.eye(p.n1), fmat) @ r
    y_sub2 = np.kron(schur_complement(b, range(p.n1)), fmat) if p.n2 else None
    return y_sub1, y_sub2


def _subsystem_loops(ordered: SystemAssignment, omega: float, y: np.ndarray):
    """``(I + L_sub1, I + L_sub2)`` at one frequency (either may be ``None``)."""
    p = ordered.partition
    b = ordered.b.b
    finv = eval_network_factor_inverse(omega, ordered.omega0)
    rd1 = rd2 = None
    if p.n1:
        r = _reduced_sub1(b, p.n1, finv, y[p.n1] if p.n2 else np.zeros((2, 2)))
        g1 = _blockdiag(y[: p.n1])
        rd1 = np.eye(2 * p.n1) + np.linalg.solve(r, np.kron(np.eye(p.n1), finv) @ g1)
    if p.n2:
        s = schur_complement(b, range(p.n1))
        rd2 = np.eye(2 * p.n2) + np.kron(np.linalg.inv(s), finv) @ _blockdiag(y[p.n1 :])
    return rd1, rd2


def verify_det_factorization(sys: SystemAssignment, grid: GridSpec | None = None) -> np.ndarray:
    """Relative error of ``det(I + L) = det(I + L_sub1) det(I + L_sub2)`` per grid point.

    The full-system determinant is formed with the loop ordered ``Y_G Y_N^-1``;
    the determinant does not depend on that choice.
    """
    grid = grid or GridSpec()
    ordered, _ = gfl_first(sys)
    omegas = grid.omegas()
    ys = ordered.y_blocks(omegas)
    binv = np.linalg.inv(ordered.b.b)
    errs = np.empty(omegas.size)
    for k, w in enumerate(omegas):
        finv = eval_network_factor_inverse(w, sys.omega0)
        full = np.linalg.det(np.eye(2 * sys.n) + _blockdiag(ys[k]) @ np.kron(binv, finv))
        rd1, rd2 = _subsystem_loops(ordered, w, ys[k])
        prod = (np.linalg.det(rd1) if rd1 is not None else 1.0) * (np.linalg.det(rd2) if rd2 is not None else 1.0)
        errs[k] = abs(full - prod) / abs(full) if abs(full) > 0 else np.inf
    return errs


@dataclass(frozen=True)
class SubsystemComparison:
    max_deviation: float
    kappa_subsystems_db: float
    kappa_direct_db: float

    @property
    def gap_db(self) -> float:
        return self.kappa_subsystems_db - self.kappa_direct_db


def verify_remark1_equality(sys: SystemAssignment, grid: GridSpec | None = None) -> SubsystemComparison:
    """Compare ``sigma_min{I + L}`` with the smaller of the two subsystem values.

    Measurement only; the direct value is authoritative everywhere else.
    """
    grid = grid or GridSpec()
    ordered, _ = gfl_first(sys)
    omegas = grid.omegas()
    ys = ordered.y_blocks(omegas)
    direct = 1.0 / _sigma_curve(ordered, omegas)
    sub = np.empty(omegas.size)
    for k, w in enumerate(omegas):
        vals = [np.linalg.svd(rd, compute_uv=False)[-1] for rd in _subsystem_loops(ordered, w, ys[k]) if rd is not None]
        sub[k] = min(vals)
    with np.errstate(divide="ignore"):
        k_sub = float(20 * np.log10(1.0 / sub.min()))
        k_dir = float(20 * np.log10(1.0 / direct.min()))
    return SubsystemComparison(float(np.max(np.abs(direct - sub))), k_sub, k_dir)


# ------------------------------------------------------------ headline comparison


@dataclass(frozen=True)
class InequalityVerdict:
    kappa_gfl_db: float
    kappa_gfm_db: float
    kappa_hybrid_db: float
    holds: bool
    degenerate: bool = False


def verify_main_inequality(b, gfl: AdmittanceModel, gfm: AdmittanceModel, partition: Partition,
                           grid: GridSpec | None = None, omega0: float = DEFAULT_OMEGA0) -> InequalityVerdict:
    """All-GFL, all-GFM and hybrid peaks on the same network.

    ``holds`` is ``kappa_hybrid < max(kappa_gfl, kappa_gfm)``; a partition with an
    empty side is flagged degenerate and never holds.
    """
    b = b if isinstance(b, GroundedLaplacian) else GroundedLaplacian.from_matrix(b)
    n = b.n
    kinds = [Kind.GFM if i in partition.gfm_idx else Kind.GFL for i in range(n)]
    k1 = sweep(SystemAssignment(b, (Kind.GFL,) * n, gfl, gfm, omega0), grid).kappa_p_db
    k2 = sweep(SystemAssignment(b, (Kind.GFM,) * n, gfl, gfm, omega0), grid).kappa_p_db
    k3 = sweep(SystemAssignment(b, tuple(kinds), gfl, gfm, omega0), grid).kappa_p_db
    degenerate = partition.n1 == 0 or partition.n2 == 0
    holds = (not degenerate) and k3 < max(k1, k2)
    return InequalityVerdict(k1, k2, k3, bool(holds), degenerate)


# ------------------------------------------------------------ closed-loop poles


def closed_loop_poles(sys: SystemAssignment) -> np.ndarray:
    """Eigenvalues of the interconnected state-space model (diagnostic only).

    The terminal voltages are eliminated through the network law
    ``(B kron F) u = -y`` written in the time domain.
    """
    models = [sys.model_at(i) for i in range(sys.n)]
    sizes = [m.n_states for m in models]
    nx = sum(sizes)
    a = np.zeros((nx, nx))
    bu = np.zeros((nx, 2 * sys.n))
    c = np.zeros((2 * sys.n, nx))
    ofs = 0
    for i, m in enumerate(models):
        sl = slice(ofs, ofs + m.n_states)
        a[sl, sl], bu[sl, 2 * i : 2 * i + 2], c[2 * i : 2 * i + 2, sl] = m.a, m.b_in, m.c_out
        if np.any(m.d):
            raise SensitivityError("closed-loop assembly assumes strictly proper admittances")
        ofs += m.n_states
    w0 = sys.omega0
    jblk = np.kron(np.eye(sys.n), np.array([[0.0, -1.0], [1.0, 0.0]]))
    lhs = w0 * np.kron(sys.b.b, np.eye(2)) + c @ bu
    k = -np.linalg.solve(lhs, c @ a + w0 * jblk @ c)
    return np.linalg.eigvals(a + bu @ k)


def is_closed_loop_stable(sys: SystemAssignment) -> bool:
    return bool(np.max(closed_loop_poles(sys).real) < 0.0)
