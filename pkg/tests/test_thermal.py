import numpy as np
import pytest

from usecb.errors import ModelError
from usecb.grid import SensitivityBlocks
from usecb.thermal import (BuildingParams, ObjectiveParams, ThermalState,
                           grad_f, objective_coefficients, objective_f,
                           satisfaction, thermal_step, usecb_profit)


def _empty_grid_blocks(n_loads, n_gens=0):
    """Blocks with no network coupling (Q = 0), for isolated-objective tests."""
    n = n_loads + n_gens
    return SensitivityBlocks(
        X_full=np.zeros((n + 1, n + 1), dtype=complex),
        Z_red=np.zeros((n, n), dtype=complex),
        M=np.zeros((n_gens, n_gens)), N=np.zeros((n_gens, n_loads)),
        Q=np.zeros((n_loads, n_loads)),
        gen_buses=tuple(range(1, n_gens + 1)),
        load_buses=tuple(range(n_gens + 1, n + 1)))


def _coupled_objective(rng=None, n=3):
    rng = np.random.default_rng(0) if rng is None else rng
    raw = rng.normal(size=(n, n)) * 0.01
    Q = raw @ raw.T
    blocks = SensitivityBlocks(
        X_full=np.zeros((n + 2, n + 2), dtype=complex),
        Z_red=np.zeros((n + 1, n + 1), dtype=complex),
        M=np.array([[0.02]]), N=rng.normal(size=(1, n)) * 0.005, Q=Q,
        gen_buses=(1,), load_buses=tuple(range(2, n + 2)))
    bp = BuildingParams(alpha1=rng.uniform(0, 2e-4, n),
                        alpha2=rng.uniform(0.1, 0.3, n),
                        beta=rng.uniform(0.2, 0.6, n),
                        c_set=rng.uniform(68, 74, n), dt=48.0)
    st = ThermalState(rng.uniform(70, 80, n), rng.uniform(85, 95, n))
    objp = ObjectiveParams(1.2, bp, blocks, 1.0, p_g=[0.5],
                           p_fixed=rng.uniform(0, 0.08, n))
    return st, objp


# --- thermal step ----------------------------------------------------------

def test_thermal_step_equilibrium():
    bp = BuildingParams(0.3, 0.5, 1.0, [70.0], dt=1.0)
    st = ThermalState([72.0], [72.0])
    assert thermal_step(st, [0.0], bp) == pytest.approx([72.0])


def test_thermal_step_hand_value():
    bp = BuildingParams(0.1, 0.5, 1.0, [75.0], dt=1.0)
    st = ThermalState([75.0], [95.0])
    assert thermal_step(st, [4.0], bp) == pytest.approx([75.0])


def test_thermal_step_insulated_building():
    bp = BuildingParams(0.0, 0.5, 1.0, [70.0], dt=1.0)
    st = ThermalState([80.0], [120.0])
    assert thermal_step(st, [0.0], bp) == pytest.approx([80.0])


def test_thermal_step_affine_superposition():
    bp = BuildingParams([1e-4, 2e-4], [0.2, 0.3], 1.0, [70.0, 71.0], dt=48.0)
    st = ThermalState([75.0, 76.0], [90.0, 91.0])
    p1 = np.array([0.04, 0.02])
    p2 = np.array([0.01, 0.05])
    lhs = thermal_step(st, 0.5 * (p1 + p2), bp)
    rhs = 0.5 * (thermal_step(st, p1, bp) + thermal_step(st, p2, bp))
    assert np.allclose(lhs, rhs, atol=1e-15)


def test_building_params_validation():
    with pytest.raises(ModelError):
        BuildingParams(0.1, 0.0, 1.0, [70.0], dt=1.0)
    with pytest.raises(ModelError):
        BuildingParams(-0.1, 0.5, 1.0, [70.0], dt=1.0)
    with pytest.raises(ModelError):
        BuildingParams(0.1, 0.5, 1.0, [70.0], dt=0.0)


# --- satisfaction ----------------------------------------------------------

def test_satisfaction_zero_at_set_point():
    bp = BuildingParams(0.1, 0.5, 2.0, [75.0], dt=1.0)
    st = ThermalState([75.0], [95.0])
    assert satisfaction(st, [4.0], bp) == pytest.approx([0.0])


def test_satisfaction_hand_value():
    # Predicted temperature 3 degrees off the set point at beta = 2.
    bp = BuildingParams(0.0, 1.0, 2.0, [70.0], dt=1.0)
    st = ThermalState([73.0], [73.0])
    assert satisfaction(st, [0.0], bp) == pytest.approx([-18.0])


def test_satisfaction_never_positive():
    rng = np.random.default_rng(1)
    bp = BuildingParams(1e-4, 0.2, 0.5, rng.uniform(65, 75, 4), dt=48.0)
    for _ in range(50):
        st = ThermalState(rng.uniform(60, 85, 4), rng.uniform(60, 100, 4))
        assert np.all(satisfaction(st, rng.uniform(0, 0.12, 4), bp) <= 0.0)


# --- profit ----------------------------------------------------------------

def test_profit_zero_at_balance():
    blocks = _empty_grid_blocks(1, n_gens=1)
    bp = BuildingParams(0.1, 0.5, 1.0, [75.0], dt=1.0)
    st = ThermalState([75.0], [95.0])
    objp = ObjectiveParams(1.0, bp, blocks, 1.0, p_g=np.array([4.0]))
    # Predicted temperature hits the set point and intake nets to zero.
    assert usecb_profit(st, [4.0], objp) == pytest.approx(0.0, abs=1e-12)


def test_profit_hand_value():
    # Predicted temperature 75 - 2 = 73, three degrees over the set point at
    # beta 2 (comfort -18), plus 2 units of intake at unit price: profit -20.
    blocks = _empty_grid_blocks(1, n_gens=1)
    bp = BuildingParams(0.0, 1.0, 2.0, [70.0], dt=1.0)
    st = ThermalState([75.0], [75.0])
    objp = ObjectiveParams(1.0, bp, blocks, 1.0, p_g=np.array([0.0]))
    assert usecb_profit(st, [2.0], objp) == pytest.approx(-20.0, abs=1e-12)


def test_profit_plus_lambda_f_constant():
    rng = np.random.default_rng(2)
    st, objp = _coupled_objective(rng)
    ref = None
    for _ in range(100):
        p = rng.uniform(0, 0.12, objp.buildings.n)
        total = usecb_profit(st, p, objp) + objp.lambda_price * objective_f(st, p, objp)
        if ref is None:
            ref = total
        assert total == pytest.approx(ref, abs=1e-9)


# --- objective -------------------------------------------------------------

def test_objective_one_dim_minimizer():
    # beta=1, alpha2=1, dt=1, lambda=1, no grid coupling, drive 2.5:
    # f(p) = p^2 - 4p with vertex at 2 inside [0, 4].
    blocks = _empty_grid_blocks(1)
    bp = BuildingParams(0.0, 1.0, 1.0, [7.5], dt=1.0)
    st = ThermalState([10.0], [10.0])
    objp = ObjectiveParams(1.0, bp, blocks, 1.0, p_g=np.zeros(0))
    A, b = objective_coefficients(st, objp)
    vertex = -b[0] / (2.0 * A[0, 0])
    assert vertex == pytest.approx(2.0, abs=1e-12)
    grid = np.linspace(0.0, 4.0, 40_001)
    vals = [objective_f(st, [g], objp) for g in grid]
    assert grid[int(np.argmin(vals))] == pytest.approx(2.0, abs=1e-4)


def test_objective_argmin_matches_profit_argmax():
    rng = np.random.default_rng(3)
    blocks = _empty_grid_blocks(1)
    bp = BuildingParams(0.0, 0.8, 1.5, [71.0], dt=1.0)
    st = ThermalState([76.0], [76.0])
    objp = ObjectiveParams(2.0, bp, blocks, 1.0, p_g=np.zeros(0))
    grid = np.linspace(0.0, 8.0, 4001)
    f_vals = np.array([objective_f(st, [g], objp) for g in grid])
    pi_vals = np.array([usecb_profit(st, [g], objp) for g in grid])
    assert np.argmin(f_vals) == np.argmax(pi_vals)


def test_objective_midpoint_convexity():
    rng = np.random.default_rng(4)
    st, objp = _coupled_objective(rng)
    n = objp.buildings.n
    for _ in range(1000):
        p1 = rng.uniform(-0.2, 0.3, n)
        p2 = rng.uniform(-0.2, 0.3, n)
        mid = objective_f(st, 0.5 * (p1 + p2), objp)
        avg = 0.5 * (objective_f(st, p1, objp) + objective_f(st, p2, objp))
        assert mid <= avg + 1e-12


def test_objective_rejects_non_psd_hessian():
    blocks = _empty_grid_blocks(1)
    blocks.Q = np.array([[-10.0]])
    bp = BuildingParams(0.0, 1.0, 1.0, [70.0], dt=1.0)
    with pytest.raises(ModelError, match="Hessian"):
        ObjectiveParams(1.0, bp, blocks, 1.0, p_g=np.zeros(0))


# --- gradient --------------------------------------------------------------

def test_grad_zero_at_unconstrained_minimizer():
    rng = np.random.default_rng(5)
    st, objp = _coupled_objective(rng)
    A, b = objective_coefficients(st, objp)
    p_star = np.linalg.solve(2.0 * A, -b)
    assert np.max(np.abs(grad_f(st, p_star, objp))) < 1e-9


def test_grad_matches_central_differences():
    rng = np.random.default_rng(6)
    st, objp = _coupled_objective(rng)
    n = objp.buildings.n
    h = 1e-5
    for _ in range(100):
        p = rng.uniform(0, 0.12, n)
        g = grad_f(st, p, objp)
        fd = np.empty(n)
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            fd[i] = (objective_f(st, p + e, objp)
                     - objective_f(st, p - e, objp)) / (2 * h)
        denom = max(np.max(np.abs(g)), 1e-12)
        assert np.max(np.abs(fd - g)) / denom < 1e-6


def test_grad_difference_is_hessian_action():
    rng = np.random.default_rng(7)
    st, objp = _coupled_objective(rng)
    n = objp.buildings.n
    A, _ = objective_coefficients(st, objp)
    p = rng.uniform(0, 0.12, n)
    delta = rng.normal(size=n) * 0.01
    lhs = grad_f(st, p + delta, objp) - grad_f(st, p, objp)
    assert np.allclose(lhs, 2.0 * (A @ delta), atol=1e-14)
