import numpy as np
import pytest

from sparse_sysid.estimation import (
    EigenExtremes,
    GramState,
    eigen_extremes,
    gram_accumulate,
    jacobi_eigh,
    ls_estimate,
    modified_estimate,
)

from oracles import gauss_solve


def test_accumulate_single_rank_one_term():
    state = GramState.empty(2)
    state = gram_accumulate(state, [1.0, 0.0], 2.0)
    np.testing.assert_array_equal(state.gram, [[1.0, 0.0], [0.0, 0.0]])
    np.testing.assert_array_equal(state.cross, [2.0, 0.0])
    assert state.count == 1
    assert state.y_sq == 4.0


def test_accumulate_two_identical_terms():
    state = GramState.empty(2)
    for _ in range(2):
        state = gram_accumulate(state, [1.0, 1.0], 1.0)
    np.testing.assert_array_equal(state.gram, [[2.0, 2.0], [2.0, 2.0]])
    np.testing.assert_array_equal(state.cross, [2.0, 2.0])
    assert state.count == 2


def test_accumulate_matches_dense_reconstruction():
    rng = np.random.default_rng(42)
    phis = rng.normal(size=(50, 5))
    ys = rng.normal(size=50)
    state = GramState.empty(5)
    for phi, y in zip(phis, ys):
        state = gram_accumulate(state, phi, y)
    dense_gram = phis.T @ phis
    dense_cross = phis.T @ ys
    np.testing.assert_allclose(state.gram, dense_gram, rtol=1e-12)
    np.testing.assert_allclose(state.cross, dense_cross, rtol=1e-12)
    assert state.count == 50
    # trace identity: sum of squared regressor norms
    assert np.trace(state.gram) == pytest.approx(float(np.sum(phis**2)), rel=1e-10)


def test_accumulate_rejects_bad_input():
    state = GramState.empty(3)
    with pytest.raises(ValueError, match="shape"):
        gram_accumulate(state, [1.0, 2.0], 1.0)
    with pytest.raises(ValueError, match="finite"):
        gram_accumulate(state, [1.0, np.nan, 0.0], 1.0)
    with pytest.raises(ValueError, match="finite"):
        gram_accumulate(state, [1.0, 2.0, 3.0], np.inf)


def test_accumulate_is_pure():
    state = GramState.empty(2)
    before = state.gram.copy()
    gram_accumulate(state, [1.0, 2.0], 3.0)
    np.testing.assert_array_equal(state.gram, before)
    assert state.count == 0


def test_eigen_extremes_identity_and_diagonal():
    assert eigen_extremes(np.eye(2)) == EigenExtremes(1.0, 1.0)
    ext = eigen_extremes(np.diag([1.0, 4.0]))
    assert ext.lambda_min == pytest.approx(1.0, abs=1e-12)
    assert ext.lambda_max == pytest.approx(4.0, abs=1e-12)


def test_eigen_extremes_analytic_two_by_two():
    ext = eigen_extremes(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert ext.lambda_min == pytest.approx(1.0, rel=1e-12)
    assert ext.lambda_max == pytest.approx(3.0, rel=1e-12)


def test_eigen_extremes_rejects_asymmetric():
    with pytest.raises(ValueError, match="symmetric"):
        eigen_extremes(np.array([[1.0, 2.0], [0.5, 1.0]]))


def test_jacobi_matches_lapack_on_random_symmetric():
    rng = np.random.default_rng(7)
    for n in (1, 2, 3, 8, 14, 20):
        base = rng.normal(size=(n, n))
        sym = base + base.T
        evals, evecs = jacobi_eigh(sym)
        np.testing.assert_allclose(evals, np.linalg.eigvalsh(sym), rtol=1e-10, atol=1e-10)
        # eigenvector residual against the dense matrix norm
        norm = np.linalg.norm(sym, 2)
        for i in range(n):
            residual = np.linalg.norm(sym @ evecs[:, i] - evals[i] * evecs[:, i])
            assert residual <= 1e-8 * max(norm, 1e-30)


def test_eigen_extremes_within_gershgorin_bounds():
    rng = np.random.default_rng(11)
    base = rng.normal(size=(6, 6))
    sym = base + base.T
    ext = eigen_extremes(sym)
    radii = np.sum(np.abs(sym), axis=1) - np.abs(np.diag(sym))
    lo = float(np.min(np.diag(sym) - radii))
    hi = float(np.max(np.diag(sym) + radii))
    assert lo - 1e-12 <= ext.lambda_min <= ext.lambda_max <= hi + 1e-12


def test_rayleigh_quotient_bracketed_by_extremes():
    rng = np.random.default_rng(3)
    base = rng.normal(size=(9, 9))
    sym = base @ base.T  # PSD
    ext = eigen_extremes(sym)
    for _ in range(100):
        v = rng.normal(size=9)
        quotient = float(v @ sym @ v) / float(v @ v)
        assert ext.lambda_min - 1e-9 <= quotient <= ext.lambda_max + 1e-9


def test_ls_noise_free_interpolation():
    # exact data from theta = [1, -2] on three regressors
    theta = np.array([1.0, -2.0])
    state = GramState.empty(2)
    for phi in ([1.0, 0.0], [0.0, 1.0], [1.0, 1.0]):
        state = gram_accumulate(state, phi, float(theta @ phi))
    result = ls_estimate(state)
    assert not result.regularized
    np.testing.assert_allclose(result.theta, theta, atol=1e-12)


def test_ls_scalar_mean():
    state = GramState.empty(1)
    for y in (1.0, 2.0, 3.0):
        state = gram_accumulate(state, [1.0], y)
    result = ls_estimate(state)
    assert result.theta[0] == pytest.approx(2.0, abs=1e-12)


def test_ls_matches_gaussian_elimination_on_example_system():
    from sparse_sysid.experiments import example1_spec
    from sparse_sysid.hammerstein import simulate_hammerstein

    ds = simulate_hammerstein(example1_spec(), 201, seed=5)  # 200 pairs
    state = GramState.empty(ds.dim)
    for phi, y in zip(ds.regressors, ds.outputs):
        state = gram_accumulate(state, phi, y)
    assert state.count == 200
    result = ls_estimate(state)
    reference = gauss_solve(state.gram, state.cross)
    np.testing.assert_allclose(result.theta, reference, rtol=1e-9)
    # normal-equation residual contract
    residual = np.linalg.norm(state.gram @ result.theta - state.cross)
    assert residual <= 1e-9 * max(1.0, np.linalg.norm(state.cross))


def test_ls_rejects_empty_state():
    with pytest.raises(ValueError, match="one observation"):
        ls_estimate(GramState.empty(2))


def test_ls_flags_rank_deficient_startup():
    state = GramState.empty(2)
    state = gram_accumulate(state, [1.0, 0.0], 1.0)  # rank 1 of 2
    result = ls_estimate(state)
    assert result.regularized


def test_modified_estimate_margin_and_signs():
    eig = EigenExtremes(lambda_min=1.0, lambda_max=float(np.e))
    # margin = sqrt(log(e)/1) = 1
    out = modified_estimate(np.array([0.0, 0.5, -0.5]), eig)
    np.testing.assert_allclose(out, [1.0, 1.5, -1.5], rtol=1e-15)
    margin = np.sqrt(np.log(eig.lambda_max) / eig.lambda_min)
    assert np.all(np.abs(out) >= margin - 1e-15)


def test_modified_estimate_preserves_nonzero_signs():
    rng = np.random.default_rng(9)
    eig = EigenExtremes(lambda_min=50.0, lambda_max=900.0)
    ls = rng.normal(size=12)
    out = modified_estimate(ls, eig)
    nonzero = ls != 0.0
    assert np.all(np.sign(out[nonzero]) == np.sign(ls[nonzero]))
    margin = np.sqrt(np.log(eig.lambda_max) / eig.lambda_min)
    assert np.min(np.abs(out)) >= margin - 1e-15


def test_modified_estimate_rejects_degenerate_spectra():
    with pytest.raises(ValueError, match="full rank"):
        modified_estimate(np.zeros(2), EigenExtremes(0.0, 10.0))
    with pytest.raises(ValueError, match="exceed 1"):
        modified_estimate(np.zeros(2), EigenExtremes(0.5, 1.0))
