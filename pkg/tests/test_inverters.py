from dataclasses import replace

import numpy as np
import pytest

import nonlinear_models as nm
from gridsens.inverters import (
    AdmittanceModel,
    FilterParams,
    GflParams,
    GfmParams,
    InverterError,
    Kind,
    OperatingPoint,
    build_gfl_model,
    build_gfm_model,
    disabled_controls,
    estimate_beq,
    eval_admittance,
    eval_network_factor,
    eval_network_factor_inverse,
    load_params,
    network_factor_batch,
    network_factor_inverse_batch,
    passive_branch,
    steady_state,
)

W0 = 2 * np.pi * 50
ORACLE_W = 2 * np.pi * np.logspace(-1, 3, 20)


def _rel(a, b):
    return np.linalg.norm(a - b, axis=(-2, -1)) / np.linalg.norm(b, axis=(-2, -1))


# --- network factor


def test_factor_at_dc():
    np.testing.assert_allclose(eval_network_factor(0.0, W0), [[0, 1], [-1, 0]])
    np.testing.assert_allclose(eval_network_factor_inverse(0.0, W0), [[0, -1], [1, 0]])


def test_factor_half_fundamental_by_substitution():
    w = 0.5 * W0
    s = 1j * w
    den = s**2 / W0 + W0
    expected = np.array([[s / den, W0 / den], [-W0 / den, s / den]])
    np.testing.assert_allclose(eval_network_factor(w, W0), expected, rtol=1e-15)


@pytest.mark.parametrize("w", [W0, -W0, W0 * (1 + 1e-8)])
def test_factor_pole_is_an_error(w):
    with pytest.raises(InverterError, match="pole"):
        eval_network_factor(w, W0)


def test_inverse_finite_at_pole():
    np.testing.assert_allclose(eval_network_factor_inverse(W0, W0), [[1j, -1], [1, 1j]])


def test_inverse_identity(rng):
    for w in rng.uniform(-5 * W0, 5 * W0, 100):
        if abs(abs(w) - W0) < 1e-3 * W0:
            continue
        prod = eval_network_factor_inverse(w, W0) @ eval_network_factor(w, W0)
        assert np.abs(prod - np.eye(2)).max() < 1e-12


def test_batch_versions_agree(rng):
    ws = rng.uniform(0, 3 * W0, 30)
    np.testing.assert_allclose(network_factor_batch(ws, W0), [eval_network_factor(w, W0) for w in ws])
    np.testing.assert_allclose(network_factor_inverse_batch(ws, W0), [eval_network_factor_inverse(w, W0) for w in ws])


# --- parameters and validation


def test_table_values_loaded(params):
    f, gl, gm = params.filter, params.gfl, params.gfm
    assert (f.l_f, f.c_f, f.l_g, f.tau) == (0.05, 0.05, 0.05, 0.1)
    assert f.omega0 == pytest.approx(W0)
    assert (gl.cc_kp, gl.cc_ki, gl.pq_kp, gl.pq_ki, gl.pll_kp, gl.pll_ki) == (0.3, 10, 0.4, 8, 20, 8020)
    assert (gl.k_vf, gl.t_vf_s) == (1, 0.004)
    assert (gm.vc_kp, gm.vc_ki, gm.j_vsg, gm.d_vsg) == (6, 20, 2, 25)
    assert gl.op == OperatingPoint(1.0, 0.0, 1.0)
    assert params.omega_star == pytest.approx(2 * np.pi * 5)


@pytest.mark.parametrize(
    "factory",
    [
        lambda: FilterParams(l_f=0.0),
        lambda: FilterParams(omega0=-1.0),
        lambda: GflParams(pll_kp=-1.0),
        lambda: GfmParams(j_vsg=0.0),
        lambda: GfmParams(d_vsg=-2.0),
        lambda: OperatingPoint(u0=0.0),
    ],
)
def test_invalid_parameters(factory):
    with pytest.raises(InverterError):
        factory()


def test_model_dimension_checks():
    with pytest.raises(InverterError):
        AdmittanceModel(np.zeros((2, 3)), np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 2)), Kind.GFL)
    m = passive_branch(1.0)
    with pytest.raises(ValueError):
        m.a[0, 0] = 1.0


def test_steady_state_power_balance(params):
    ss = steady_state(params.filter, params.gfl.op)
    assert ss.u_t @ ss.i_g == pytest.approx(1.0)
    assert ss.u_t[1] * ss.i_g[0] - ss.u_t[0] * ss.i_g[1] == pytest.approx(0.0)


# --- analytic models against the nonlinear oracle


@pytest.mark.parametrize("kind", ["gfl", "gfm"])
def test_admittance_matches_finite_difference_oracle(params, kind):
    g = params.gfl if kind == "gfl" else params.gfm
    build = build_gfl_model if kind == "gfl" else build_gfm_model
    model = build(params.filter, g)
    oracle = nm.response(nm.linearize(kind, params.filter, g), ORACLE_W)
    assert np.max(_rel(model.response(ORACLE_W), oracle)) < 1e-4


@pytest.mark.parametrize("kind", ["gfl", "gfm"])
def test_oracle_at_other_operating_point(params, kind):
    op = OperatingPoint(0.6, 0.2, 1.02)
    g = replace(params.gfl if kind == "gfl" else params.gfm, op=op)
    build = build_gfl_model if kind == "gfl" else build_gfm_model
    oracle = nm.response(nm.linearize(kind, params.filter, g), ORACLE_W)
    assert np.max(_rel(build(params.filter, g).response(ORACLE_W), oracle)) < 1e-4


def test_controls_disabled_gives_passive_lcl(params):
    lcl = np.array([nm.lcl_admittance(params.filter, w) for w in ORACLE_W])
    y_gfl = build_gfl_model(params.filter, disabled_controls(params.gfl)).response(ORACLE_W)
    y_gfm = build_gfm_model(params.filter, disabled_controls(params.gfm)).response(ORACLE_W)
    assert np.abs(y_gfl - lcl).max() < 1e-9
    assert np.abs(y_gfm - lcl).max() < 1e-9
    assert np.abs(y_gfl - y_gfm).max() < 1e-9


@pytest.mark.parametrize("fixture_name", ["gfl_model", "gfm_model"])
def test_high_frequency_rolloff(request, params, fixture_name):
    model = request.getfixturevalue(fixture_name)
    w = W0 * np.logspace(2, 3, 40)
    y = model.response(w)
    grid_side = np.array([eval_network_factor(x, W0) / params.filter.l_g for x in w])
    mag = np.linalg.norm(y, 2, axis=(1, 2))
    assert np.all(np.diff(mag) < 0)
    assert _rel(y[-1:], grid_side[-1:])[0] < 1e-2


def test_conjugate_symmetry(gfl_model, gfm_model):
    for m in (gfl_model, gfm_model, passive_branch(0.3)):
        for w in ORACLE_W:
            np.testing.assert_allclose(eval_admittance(m, -w), np.conj(eval_admittance(m, w)), rtol=1e-12, atol=1e-14)


def test_both_models_open_loop_stable(gfl_model, gfm_model):
    assert np.linalg.eigvals(gfl_model.a).real.max() < 0
    assert np.linalg.eigvals(gfm_model.a).real.max() < 0


def test_gfm_near_dc_bounded(gfm_model):
    s = np.linalg.svd(eval_admittance(gfm_model, 1e-3), compute_uv=False)
    assert 0 < s[0] < 1e3


# --- evaluation helpers


def test_passive_branch_is_scaled_factor(rng):
    m = passive_branch(1.0)
    for w in rng.uniform(0.1, 3 * W0, 20):
        if abs(w - W0) < 1e-2 * W0:
            continue
        np.testing.assert_allclose(eval_admittance(m, w), eval_network_factor(w, W0), rtol=1e-12)
    with pytest.raises(InverterError):
        passive_branch(0.0)


def test_passive_branch_resonance_reported():
    with pytest.raises(InverterError, match="resonates"):
        eval_admittance(passive_branch(1.0), W0)


def test_dc_gain_formula(gfl_model):
    m = gfl_model
    np.testing.assert_allclose(eval_admittance(m, 0.0), -m.c_out @ np.linalg.solve(m.a, m.b_in), rtol=1e-10, atol=1e-12)


def test_response_matches_pointwise(gfm_model):
    np.testing.assert_allclose(gfm_model.response(ORACLE_W), [eval_admittance(gfm_model, w) for w in ORACLE_W], rtol=1e-10)


# --- equivalent susceptance


def test_beq_exact_multiple():
    b, err = estimate_beq(passive_branch(0.5), 2 * np.pi * 5)
    assert b == pytest.approx(2.0, rel=1e-12) and err < 1e-12


def test_beq_orthogonal_is_error():
    # a pure conductance is Frobenius-orthogonal to F at DC
    m = AdmittanceModel(-np.eye(1), np.zeros((1, 2)), np.zeros((2, 1)), np.eye(2), Kind.GFM)
    with pytest.raises(InverterError, match="non-positive"):
        estimate_beq(m, 1e-9)


def test_beq_rejects_gfl(gfl_model):
    with pytest.raises(InverterError):
        estimate_beq(gfl_model, 2 * np.pi * 5)


def test_beq_positive_at_default_frequency(params, gfm_model):
    b, _ = estimate_beq(gfm_model, params.omega_star)
    assert b > 0


def test_beq_positive_near_dc(gfm_model):
    b, err = estimate_beq(gfm_model, 2 * np.pi * 0.1)
    assert b > 0 and np.isfinite(err)


def test_load_params_round_trip(tmp_path, params):
    import json

    from gridsens.casecli import fixture_path

    data = json.loads(fixture_path("table_a1.json").read_text())
    data["beq_omega_star"] = 10.0
    p = tmp_path / "p.json"
    p.write_text(json.dumps(data))
    assert load_params(p).omega_star == 10.0
