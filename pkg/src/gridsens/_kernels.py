"""Frequency-sweep inner loops.

Every kernel has a vectorized numpy implementation and a numba ``@njit``
implementation with identical signatures.  The numba path is used when numba
imports cleanly and ``GRIDSENS_DISABLE_NUMBA`` is unset (or ``0``).  Both are
always importable as ``numpy_impl`` / ``numba_impl`` so they can be compared.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def _env_disabled() -> bool:
    return os.environ.get("GRIDSENS_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")


# ---------------------------------------------------------------- numpy path


def _np_freqresp(a, b, c, d, omegas):
    nx = a.shape[0]
    m = omegas.shape[0]
    if nx == 0:
        return np.broadcast_to(d.astype(np.complex128), (m,) + d.shape).copy()
    lhs = 1j * omegas[:, None, None] * np.eye(nx) - a[None, :, :]
    x = np.linalg.solve(lhs, np.broadcast_to(b.astype(np.complex128), (m,) + b.shape))
    return c @ x + d


def _np_min_sv_2x2(mats):
    fro2 = np.sum(np.abs(mats) ** 2, axis=(1, 2))
    det = np.abs(mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0])
    disc = np.sqrt(np.maximum(fro2 * fro2 - 4.0 * det * det, 0.0))
    smax = np.sqrt(0.5 * (fro2 + disc))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(smax > 0.0, det / smax, 0.0)


def _np_min_sv(mats):
    return np.linalg.svd(mats, compute_uv=False)[:, -1]


def _np_return_difference(binv, finv, yblocks):
    # I + (Binv kron Finv) blockdiag(Y): block (i, j) = Binv[i, j] * Finv @ Y_j
    m, n = yblocks.shape[:2]
    fy = np.einsum("wab,wjbc->wjac", finv, yblocks)
    blocks = binv[None, :, :, None, None] * fy[:, None, :, :, :]
    mats = blocks.transpose(0, 1, 3, 2, 4).reshape(m, 2 * n, 2 * n)
    return mats + np.eye(2 * n)


def _np_sensitivity_min_sv(binv, finv, yblocks):
    mats = _np_return_difference(binv, finv, yblocks)
    if mats.shape[1] == 2:
        return _np_min_sv_2x2(mats)
    return _np_min_sv(mats)


numpy_impl = SimpleNamespace(
    freqresp=_np_freqresp,
    min_sv_2x2=_np_min_sv_2x2,
    min_sv=_np_min_sv,
    sensitivity_min_sv=_np_sensitivity_min_sv,
)


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:
    njit = numba.njit(cache=True, nogil=True)

    @njit
    def _nb_freqresp(a, b, c, d, omegas):
        nx = a.shape[0]
        m = omegas.shape[0]
        out = np.empty((m, c.shape[0], b.shape[1]), dtype=np.complex128)
        bc = b.astype(np.complex128)
        cc = c.astype(np.complex128)
        for k in range(m):
            lhs = -a.astype(np.complex128)
            for i in range(nx):
                lhs[i, i] += 1j * omegas[k]
            out[k] = cc @ np.linalg.solve(lhs, bc) + d
        return out

    @njit
    def _nb_min_sv_2x2(mats):
        m = mats.shape[0]
        out = np.empty(m)
        for k in range(m):
            a00 = mats[k, 0, 0]
            a01 = mats[k, 0, 1]
            a10 = mats[k, 1, 0]
            a11 = mats[k, 1, 1]
            fro2 = abs(a00) ** 2 + abs(a01) ** 2 + abs(a10) ** 2 + abs(a11) ** 2
            det = abs(a00 * a11 - a01 * a10)
            disc = fro2 * fro2 - 4.0 * det * det
            smax = np.sqrt(0.5 * (fro2 + np.sqrt(max(disc, 0.0))))
            out[k] = det / smax if smax > 0.0 else 0.0
        return out

    @njit
    def _nb_min_sv(mats):
        m = mats.shape[0]
        out = np.empty(m)
        for k in range(m):
            s = np.linalg.svd(np.ascontiguousarray(mats[k]))[1]
            out[k] = s[-1]
        return out

    @njit
    def _nb_sensitivity_min_sv(binv, finv, yblocks):
        m = yblocks.shape[0]
        n = yblocks.shape[1]
        out = np.empty(m)
        work = np.empty((2 * n, 2 * n), dtype=np.complex128)
        fy = np.empty((n, 2, 2), dtype=np.complex128)
        for k in range(m):
            for j in range(n):
                fy[j] = finv[k] @ yblocks[k, j]
            for i in range(n):
                for j in range(n):
                    for r in range(2):
                        for s in range(2):
                            v = binv[i, j] * fy[j, r, s]
                            if i == j and r == s:
                                v += 1.0
                            work[2 * i + r, 2 * j + s] = v
            if n == 1:
                fro2 = 0.0
                for r in range(2):
                    for s in range(2):
                        fro2 += abs(work[r, s]) ** 2
                det = abs(work[0, 0] * work[1, 1] - work[0, 1] * work[1, 0])
                smax = np.sqrt(0.5 * (fro2 + np.sqrt(max(fro2 * fro2 - 4.0 * det * det, 0.0))))
                out[k] = det / smax if smax > 0.0 else 0.0
            else:
                out[k] = np.linalg.svd(work)[1][-1]
        return out

    numba_impl = SimpleNamespace(
        freqresp=_nb_freqresp,
        min_sv_2x2=_nb_min_sv_2x2,
        min_sv=_nb_min_sv,
        sensitivity_min_sv=_nb_sensitivity_min_sv,
    )
else:  # pragma: no cover
    numba_impl = None


def active():
    """The implementation namespace selected by the environment."""
    if numba_impl is None or _env_disabled():
        return numpy_impl
    return numba_impl


def backend_name() -> str:
    return "numba" if active() is numba_impl else "numpy"


def _c128(x):
    return np.ascontiguousarray(x, dtype=np.complex128)


def _f64(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def freqresp(a, b, c, d, omegas):
    """``c (jw I - a)^-1 b + d`` for every ``w`` in ``omegas``; shape ``(m, p, q)``."""
    return active().freqresp(_f64(a), _f64(b), _f64(c), _c128(d), _f64(omegas))


def min_sv_2x2(mats):
    return active().min_sv_2x2(_c128(mats))


def min_sv(mats):
    return active().min_sv(_c128(mats))


def sensitivity_min_sv(binv, finv, yblocks):
    """Smallest singular value of ``I + (Binv kron Finv_w) blockdiag(Y_w)`` per frequency.

    ``finv`` has shape ``(m, 2, 2)``, ``yblocks`` ``(m, n, 2, 2)``.
    """
    return active().sensitivity_min_sv(_f64(binv), _c128(finv), _c128(yblocks))
