import numpy as np
import pytest

from gridsens import _kernels

pytestmark = pytest.mark.skipif(_kernels.numba_impl is None, reason="numba not installed")


def _random_system(rng, nx=7):
    a = rng.normal(size=(nx, nx)) - 3 * np.eye(nx)
    return a, rng.normal(size=(nx, 2)), rng.normal(size=(2, nx)), (rng.normal(size=(2, 2)) + 0j)


def test_freqresp_parity(rng):
    a, b, c, d = _random_system(rng)
    w = np.logspace(-1, 3, 50)
    np.testing.assert_allclose(
        _kernels.numba_impl.freqresp(a, b, c, d, w), _kernels.numpy_impl.freqresp(a, b, c, d, w), rtol=1e-12, atol=1e-13
    )


def test_freqresp_matches_direct_formula(rng):
    a, b, c, d = _random_system(rng)
    w = 3.7
    direct = c @ np.linalg.inv(1j * w * np.eye(a.shape[0]) - a) @ b + d
    np.testing.assert_allclose(_kernels.freqresp(a, b, c, d, [w])[0], direct, rtol=1e-12)


def test_min_sv_2x2_closed_form(rng):
    mats = rng.normal(size=(200, 2, 2)) + 1j * rng.normal(size=(200, 2, 2))
    ref = np.linalg.svd(mats, compute_uv=False)[:, -1]
    np.testing.assert_allclose(_kernels.numpy_impl.min_sv_2x2(mats), ref, rtol=1e-10)
    np.testing.assert_allclose(_kernels.numba_impl.min_sv_2x2(mats), ref, rtol=1e-10)
    assert _kernels.numpy_impl.min_sv_2x2(np.zeros((1, 2, 2), complex))[0] == 0.0


def test_min_sv_parity(rng):
    mats = rng.normal(size=(30, 6, 6)) + 1j * rng.normal(size=(30, 6, 6))
    np.testing.assert_allclose(_kernels.numba_impl.min_sv(mats), _kernels.numpy_impl.min_sv(mats), rtol=1e-12)


@pytest.mark.parametrize("n", [1, 3])
def test_sensitivity_kernel_parity_and_dense_oracle(rng, n):
    m = 40
    q = rng.normal(size=(n, n))
    binv = np.linalg.inv(q @ q.T + n * np.eye(n))
    finv = rng.normal(size=(m, 2, 2)) + 1j * rng.normal(size=(m, 2, 2))
    y = rng.normal(size=(m, n, 2, 2)) + 1j * rng.normal(size=(m, n, 2, 2))
    got_np = _kernels.numpy_impl.sensitivity_min_sv(binv, finv, y)
    got_nb = _kernels.numba_impl.sensitivity_min_sv(binv, finv, y)
    dense = []
    for k in range(m):
        g = np.zeros((2 * n, 2 * n), complex)
        for i in range(n):
            g[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = y[k, i]
        dense.append(np.linalg.svd(np.eye(2 * n) + np.kron(binv, finv[k]) @ g, compute_uv=False)[-1])
    np.testing.assert_allclose(got_np, dense, rtol=1e-10)
    np.testing.assert_allclose(got_nb, dense, rtol=1e-10)


def test_environment_flag_selects_backend(monkeypatch):
    monkeypatch.setenv("GRIDSENS_DISABLE_NUMBA", "1")
    assert _kernels.backend_name() == "numpy"
    monkeypatch.setenv("GRIDSENS_DISABLE_NUMBA", "0")
    assert _kernels.backend_name() == "numba"
    monkeypatch.delenv("GRIDSENS_DISABLE_NUMBA")
    assert _kernels.backend_name() == "numba"
