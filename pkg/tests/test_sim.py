import numpy as np
import pytest

from usecb.errors import ConfigError
from usecb.sim import (NoiseConfig, _QuadObjective, build_ieee37_scenario,
                       metrics, observe, run_scheme)
from usecb.thermal import objective_coefficients, objective_f


@pytest.fixture(scope="module")
def static_scenario():
    return build_ieee37_scenario()


@pytest.fixture(scope="module")
def quiet_static():
    return build_ieee37_scenario(
        {"noise": {"sigma_temp": 0.0, "sigma_gen": 0.0}})


@pytest.fixture(scope="module")
def dynamic_scenario():
    return build_ieee37_scenario({"horizon": 200}, variant="dynamic")


# --- observation noise -------------------------------------------------------

def test_observe_zero_sigma_identity():
    vals = np.array([1.0, -2.0, 3.5])
    assert np.array_equal(observe(vals, 0.0, 3, 42), vals)


def test_observe_deterministic_per_seed_slot():
    vals = np.linspace(0, 1, 8)
    a = observe(vals, 0.5, 17, 99, stream=2)
    b = observe(vals, 0.5, 17, 99, stream=2)
    assert np.array_equal(a, b)
    c = observe(vals, 0.5, 18, 99, stream=2)
    assert not np.array_equal(a, c)


def test_observe_mean_near_truth():
    vals = np.full(100_000, 7.0)
    sigma = 2.0
    out = observe(vals, sigma, 0, 123)
    assert abs(out.mean() - 7.0) < 4.0 * sigma / np.sqrt(vals.size)


def test_observe_relative_mode_scales_with_value():
    vals = np.array([0.0, 10.0])
    out = observe(vals, 0.3, 5, 7, relative=True)
    assert out[0] == 0.0
    assert out[1] != 10.0


def test_observe_floor_clamps():
    vals = np.full(1000, 0.01)
    out = observe(vals, 1.0, 2, 11, floor=0.0)
    assert np.min(out) >= 0.0


def test_noise_config_validation():
    with pytest.raises(ConfigError):
        NoiseConfig(sigma_temp=-1.0)
    with pytest.raises(ConfigError):
        NoiseConfig(gen_mode="bogus")


# --- scenario construction -----------------------------------------------------

def test_ieee37_layout(static_scenario):
    scn = static_scenario
    assert scn.model.n_buses == 37
    assert [scn.bus_label(b) for b in scn.model.gen_buses] == ["725", "731", "741"]
    assert scn.bus_label(0) == "799"
    assert scn.n_loads == 33


def test_ieee37_box_is_ac_rating(static_scenario):
    fset = static_scenario.env_feasible_set()
    # 1.2 MW on a 10 MVA base.
    assert np.allclose(fset.p_max, 0.12)
    assert np.allclose(fset.p_min, 0.0)
    assert np.allclose(static_scenario.p_fixed, 0.06)


def test_ieee37_static_indoor_draw(static_scenario):
    c = static_scenario.c_in_init
    assert abs(c.mean() - 65.0) < 4.0 * 5.0 / np.sqrt(c.size)
    assert 2.5 < c.std() < 7.5


def test_static_profiles_frozen(static_scenario):
    assert np.ptp(static_scenario.p_g_true, axis=0).max() == 0.0
    assert np.ptp(static_scenario.c_out_true) == 0.0


def test_override_merges(static_scenario):
    scn = build_ieee37_scenario({"horizon": 7, "lambda_price": 2.5})
    assert scn.horizon == 7
    assert scn.lambda_price == 2.5
    assert scn.seed == static_scenario.seed


def test_fast_quadratic_matches_reference(static_scenario):
    scn = static_scenario
    quad = _QuadObjective(scn)
    state, objp = scn.true_objective()
    A, b = objective_coefficients(state, objp)
    assert np.allclose(quad.A, A, atol=1e-15)
    b_fast = quad.linear_term(state.c_in, state.c_out, objp.p_g)
    assert np.allclose(b_fast, b, atol=1e-12)
    x = np.full(scn.n_loads, 0.05)
    assert quad.value(x, b_fast) == pytest.approx(objective_f(state, x, objp),
                                                  abs=1e-12)


# --- closed-loop runs ------------------------------------------------------------

def test_unknown_scheme_rejected(static_scenario):
    with pytest.raises(ConfigError):
        run_scheme(static_scenario, "magic")


def test_seeded_runs_bit_identical(static_scenario):
    scn = build_ieee37_scenario({"horizon": 60})
    r1 = run_scheme(scn, "stochastic", seed=5)
    r2 = run_scheme(scn, "stochastic", seed=5)
    assert np.array_equal(r1.p_c, r2.p_c)
    assert np.array_equal(r1.f_true, r2.f_true)
    assert np.array_equal(r1.p_g_obs, r2.p_g_obs)


def test_conservation_identity_every_slot(static_scenario, dynamic_scenario):
    for scn in (static_scenario, dynamic_scenario):
        for scheme in ("stochastic", "exact", "oracle"):
            run = run_scheme(build_ieee37_scenario({"horizon": 40},
                                                   variant=scn.kind),
                             scheme)
            cons = run.p_c + run.scenario.p_fixed
            lhs = run.p_0
            rhs = cons.sum(axis=1) - run.p_g_true.sum(axis=1) + run.loss
            assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_all_controls_feasible(dynamic_scenario):
    for scheme in ("stochastic", "exact", "oracle"):
        run = run_scheme(dynamic_scenario, scheme)
        assert run.feasible.all()


def test_zero_noise_exact_equals_oracle(quiet_static):
    ex = run_scheme(quiet_static, "exact")
    orc = run_scheme(quiet_static, "oracle")
    assert np.max(np.abs(ex.f_true - orc.f_true)) < 1e-8
    assert np.max(np.abs(ex.p_c - orc.p_c)) < 1e-6


def test_zero_noise_stochastic_converges_to_oracle(quiet_static):
    st = run_scheme(quiet_static, "stochastic")
    orc = run_scheme(quiet_static, "oracle")
    f_star = orc.f_true[-1]
    gap = np.abs(st.f_true[100:] - f_star)
    assert np.max(gap) <= 0.01 * abs(f_star)


def test_oracle_not_above_exact_when_noiseless(quiet_static):
    ex = run_scheme(quiet_static, "exact")
    orc = run_scheme(quiet_static, "oracle")
    assert np.all(orc.f_true <= ex.f_true + 1e-9)


def test_static_thermal_state_frozen(static_scenario):
    run = run_scheme(build_ieee37_scenario({"horizon": 30}), "oracle")
    assert np.ptp(run.c_in_true, axis=0).max() == 0.0


def test_dynamic_thermal_drifts_toward_outdoor_without_ac():
    # Make AC useless (negligible cooling gain, so the price term pins the
    # control at zero); indoor temperatures must approach the (constant)
    # outdoor value monotonically.
    scn = build_ieee37_scenario(
        {"horizon": 150,
         "buildings": {"cooling_gain_mean": 1e-9, "cooling_gain_std": 0.0},
         "noise": {"sigma_temp": 0.0, "sigma_gen": 0.0}},
        variant="dynamic")
    scn.c_out_true[:] = 95.0
    run = run_scheme(scn, "oracle")
    gaps = 95.0 - run.c_in_after  # positive, shrinking
    assert np.all(gaps > 0)
    assert np.all(np.diff(gaps, axis=0) <= 1e-12)


def test_zero_generation_zero_load_run_is_all_zero():
    # No PV, no fixed load, and a price high enough to pin the AC at the
    # zero face: losses and intake vanish identically.
    scn = build_ieee37_scenario(
        {"horizon": 20,
         "generation": {"capacity_mw": 0.0},
         "load": {"fixed_mw": 0.0},
         "lambda_price": 1e6,
         "noise": {"sigma_temp": 0.0, "sigma_gen": 0.0}})
    run = run_scheme(scn, "oracle")
    m = metrics(run)
    assert m["loss_total"] == 0.0
    assert m["intake_total"] == 0.0
    assert np.max(np.abs(run.p_c)) == 0.0


def test_metrics_roundup(dynamic_scenario):
    run = run_scheme(dynamic_scenario, "stochastic")
    m = metrics(run)
    assert m["slots"] == dynamic_scenario.horizon
    assert m["all_feasible"] is True
    assert m["conservation_max_residual"] < 1e-9
    assert m["objective_trailing_variance"] >= 0.0
    assert m["mean_temp_deviation"] >= 0.0
