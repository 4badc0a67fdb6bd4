import numpy as np
import pytest

from sparse_sysid.estimation import GramState, gram_accumulate
from sparse_sysid.wlasso import (
    WeightedLassoProblem,
    adaptive_weights,
    kkt_residual,
    objective_value,
    solve_weighted_lasso,
    support_set,
)

from oracles import fista_weighted_lasso, weighted_l1_objective, zoom_grid_minimize


def scalar_problem(lam: float, weight: float = 1.0) -> WeightedLassoProblem:
    # data x = [1, 1], y = [1, 2]: gram = 2, cross = 3, y_sq = 5
    return WeightedLassoProblem(
        gram=np.array([[2.0]]),
        cross=np.array([3.0]),
        y_sq=5.0,
        weights=np.array([weight]),
        lam=lam,
    )


def random_problem(rng, r, n, lam_scale=1.0):
    design = rng.normal(size=(n, r))
    theta = rng.normal(size=r) * rng.integers(0, 2, size=r)
    y = design @ theta + 0.3 * rng.normal(size=n)
    weights = rng.uniform(0.5, 3.0, size=r)
    lam = lam_scale * float(rng.uniform(0.2, 4.0)) * np.sqrt(n)
    return WeightedLassoProblem(
        gram=design.T @ design,
        cross=design.T @ y,
        y_sq=float(y @ y),
        weights=weights,
        lam=lam,
    )


def test_adaptive_weights_reciprocal():
    np.testing.assert_allclose(adaptive_weights(np.array([2.0, -0.5])), [0.5, 2.0])
    np.testing.assert_allclose(adaptive_weights(np.array([1.0, 1.0, 1.0])), [1.0, 1.0, 1.0])


def test_adaptive_weights_cap_engages():
    weights = adaptive_weights(np.array([1e-15]), weight_cap=1e12)
    np.testing.assert_allclose(weights, [1e12])


def test_adaptive_weights_rejects_zero():
    with pytest.raises(ValueError, match="exact zeros"):
        adaptive_weights(np.array([1.0, 0.0]))


def test_scalar_soft_threshold_solution():
    # lam * w = 2: subgradient 4b - 6 + 2 = 0 at b = 1; objective 0 + 1 + 2 = 3
    sol = solve_weighted_lasso(scalar_problem(lam=2.0))
    assert sol.converged
    assert sol.beta[0] == pytest.approx(1.0, abs=1e-12)
    assert sol.objective == pytest.approx(3.0, abs=1e-10)
    assert sol.kkt_residual <= 1e-10


def test_scalar_threshold_boundary_gives_exact_zero():
    # lam * w = 6: |cross| = 3 equals the threshold lam*w/2 = 3 -> beta = 0
    sol = solve_weighted_lasso(scalar_problem(lam=6.0))
    assert sol.beta[0] == 0.0
    assert support_set(sol.beta) == frozenset({1})


def test_tiny_lambda_reduces_to_least_squares():
    rng = np.random.default_rng(0)
    design = rng.normal(size=(40, 5))
    y = design @ np.array([1.0, -2.0, 0.0, 0.5, 3.0]) + 0.1 * rng.normal(size=40)
    gram = design.T @ design
    cross = design.T @ y
    problem = WeightedLassoProblem(gram, cross, float(y @ y), np.ones(5), 1e-300)
    sol = solve_weighted_lasso(problem)
    np.testing.assert_allclose(sol.beta, np.linalg.solve(gram, cross), atol=1e-8)


def test_objective_matches_raw_residual_form():
    rng = np.random.default_rng(1)
    design = rng.normal(size=(30, 4))
    y = rng.normal(size=30)
    weights = rng.uniform(0.5, 2.0, size=4)
    lam = 3.7
    problem = WeightedLassoProblem(design.T @ design, design.T @ y, float(y @ y), weights, lam)
    for _ in range(10):
        beta = rng.normal(size=4)
        direct = float(np.sum((y - design @ beta) ** 2)) + lam * float(weights @ np.abs(beta))
        assert objective_value(problem, beta) == pytest.approx(direct, rel=1e-10)


def test_objective_at_zero_is_y_sq():
    problem = scalar_problem(lam=1.0)
    assert objective_value(problem, np.zeros(1)) == 5.0


def test_solution_beats_least_squares_and_zero():
    rng = np.random.default_rng(2)
    for _ in range(25):
        problem = random_problem(rng, r=5, n=30)
        sol = solve_weighted_lasso(problem)
        ls = np.linalg.solve(problem.gram, problem.cross)
        assert sol.objective <= objective_value(problem, ls) + 1e-9
        assert sol.objective <= objective_value(problem, np.zeros(5)) + 1e-9


def test_kkt_certificate_on_converged_instances():
    rng = np.random.default_rng(3)
    for _ in range(25):
        problem = random_problem(rng, r=6, n=40)
        sol = solve_weighted_lasso(problem)
        assert sol.converged
        assert sol.kkt_residual <= 1e-8 * (1.0 + float(np.max(np.abs(problem.cross))))


def test_monotone_descent_across_sweeps():
    rng = np.random.default_rng(4)
    problem = random_problem(rng, r=8, n=60)
    sol = solve_weighted_lasso(problem, record_history=True)
    history = np.array(sol.objective_history)
    assert np.all(np.diff(history) <= 1e-10 * (1.0 + np.abs(history[:-1])))


def test_exact_zero_property():
    rng = np.random.default_rng(5)
    zero_count = 0
    for _ in range(20):
        problem = random_problem(rng, r=6, n=30, lam_scale=4.0)
        sol = solve_weighted_lasso(problem)
        zeroed = sol.beta == 0.0
        zero_count += int(np.sum(zeroed))
        # support readout needs no tolerance
        assert support_set(sol.beta) == frozenset(int(i) + 1 for i in np.flatnonzero(zeroed))
    assert zero_count > 0  # the regime actually produced zeros


def test_matches_proximal_gradient_oracle():
    rng = np.random.default_rng(6)
    for _ in range(20):
        r = int(rng.integers(2, 11))
        problem = random_problem(rng, r=r, n=50)
        sol = solve_weighted_lasso(problem)
        oracle_beta = fista_weighted_lasso(
            problem.gram, problem.cross, problem.y_sq, problem.weights, problem.lam
        )
        oracle_obj = weighted_l1_objective(
            problem.gram, problem.cross, problem.y_sq, problem.weights, problem.lam, oracle_beta
        )
        assert sol.objective <= oracle_obj + 1e-7 * (1.0 + abs(oracle_obj))
        assert abs(sol.objective - oracle_obj) <= 1e-7 * (1.0 + abs(oracle_obj))


def test_matches_zoom_grid_oracle_three_dim():
    rng = np.random.default_rng(7)
    for _ in range(5):
        design = rng.normal(size=(25, 3))
        theta = rng.uniform(-1.2, 1.2, size=3)
        y = design @ theta + 0.2 * rng.normal(size=25)
        problem = WeightedLassoProblem(
            design.T @ design,
            design.T @ y,
            float(y @ y),
            rng.uniform(0.5, 2.0, size=3),
            float(rng.uniform(1.0, 10.0)),
        )
        sol = solve_weighted_lasso(problem)
        assert np.max(np.abs(sol.beta)) < 2.5  # minimizer inside the search box
        _, grid_obj, cell = zoom_grid_minimize(
            problem.gram, problem.cross, problem.y_sq, problem.weights, problem.lam
        )
        lip = float(np.linalg.eigvalsh(problem.gram)[-1])
        slack = lip * 3 * cell**2 / 4 + problem.lam * float(np.max(problem.weights)) * 3 * cell / 2
        assert sol.objective <= grid_obj + 1e-9 * (1.0 + abs(grid_obj))
        assert grid_obj - sol.objective <= slack


def test_warm_start_reaches_same_fixed_point():
    rng = np.random.default_rng(8)
    problem = random_problem(rng, r=6, n=45)
    cold = solve_weighted_lasso(problem)
    warm = solve_weighted_lasso(problem, warm_start=rng.normal(size=6))
    np.testing.assert_allclose(cold.beta, warm.beta, atol=1e-8)
    assert abs(cold.objective - warm.objective) <= 1e-9 * (1.0 + abs(cold.objective))


def test_unexcited_coordinate_with_signal_rejected():
    gram = np.array([[2.0, 0.0], [0.0, 0.0]])
    cross = np.array([1.0, 0.5])
    with pytest.raises(ValueError, match="never excited"):
        solve_weighted_lasso(WeightedLassoProblem(gram, cross, 1.0, np.ones(2), 1.0))


def test_unexcited_coordinate_without_signal_pinned_to_zero():
    gram = np.array([[2.0, 0.0], [0.0, 0.0]])
    cross = np.array([3.0, 0.0])
    sol = solve_weighted_lasso(WeightedLassoProblem(gram, cross, 5.0, np.ones(2), 2.0))
    assert sol.beta[1] == 0.0
    assert sol.beta[0] == pytest.approx(1.0, abs=1e-12)


def test_max_iters_reports_unconverged():
    rng = np.random.default_rng(9)
    problem = random_problem(rng, r=6, n=40)
    sol = solve_weighted_lasso(problem, max_iters=1)
    assert not sol.converged
    assert sol.iterations == 1


def test_kkt_residual_zero_coordinate_rule():
    problem = scalar_problem(lam=8.0)  # threshold 4 > |cross| = 3
    assert kkt_residual(problem, np.zeros(1)) == 0.0
    tight = scalar_problem(lam=4.0)  # threshold 2 < |cross| = 3 -> gap 2*3 - 4
    assert kkt_residual(tight, np.zeros(1)) == pytest.approx(2.0)


def test_support_set_examples():
    assert support_set(np.array([0.0, 1.0, 0.0])) == frozenset({1, 3})
    assert support_set(np.array([1.0, -2.0])) == frozenset()
    assert support_set(np.zeros(4)) == frozenset({1, 2, 3, 4})


def test_problem_from_state_round_trip():
    state = GramState.empty(2)
    rng = np.random.default_rng(10)
    for _ in range(12):
        state = gram_accumulate(state, rng.normal(size=2), float(rng.normal()))
    problem = WeightedLassoProblem.from_state(state, np.ones(2), 1.0)
    np.testing.assert_array_equal(problem.gram, state.gram)
    np.testing.assert_array_equal(problem.cross, state.cross)
    assert problem.y_sq == state.y_sq
