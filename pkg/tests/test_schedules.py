import numpy as np
import pytest

from sparse_sysid.estimation import EigenExtremes
from sparse_sysid.schedules import (
    AssumptionReport,
    LambdaSchedule,
    assumption_report,
    irrepresentable_check,
    lambda_value,
)


def test_power_of_n_value():
    schedule = LambdaSchedule("power_of_n", 0.75)
    assert lambda_value(schedule, 100) == pytest.approx(31.6227766016838, rel=1e-12)


def test_power_of_lambda_min_value():
    schedule = LambdaSchedule("power_of_lambda_min", 0.25)
    # lambda_min^(1/2 + 1/4) = 16^0.75 = 8
    assert lambda_value(schedule, 10, lambda_min=16.0) == pytest.approx(8.0, rel=1e-12)


def test_decay_matched_exponent_value():
    # exponent 1 - 1.5 * 0.2 = 0.7 at N = 1000 -> 10^2.1
    schedule = LambdaSchedule("power_of_n", 1.0 - 1.5 * 0.2)
    assert lambda_value(schedule, 1000) == pytest.approx(125.89254117941675, rel=1e-12)


def test_schedule_validation():
    with pytest.raises(ValueError):
        LambdaSchedule("power_of_n", 1.0)
    with pytest.raises(ValueError):
        LambdaSchedule("power_of_n", 0.0)
    with pytest.raises(ValueError):
        LambdaSchedule("power_of_lambda_min", 0.5)
    with pytest.raises(ValueError):
        LambdaSchedule("no_such_kind", 0.5)


def test_power_of_lambda_min_needs_lambda_min():
    schedule = LambdaSchedule("power_of_lambda_min", 0.1)
    with pytest.raises(ValueError, match="lambda_min"):
        lambda_value(schedule, 10)
    with pytest.raises(ValueError, match="lambda_min"):
        lambda_value(schedule, 10, lambda_min=0.0)


def test_power_of_n_strictly_increasing():
    schedule = LambdaSchedule("power_of_n", 0.3)
    values = [lambda_value(schedule, n) for n in range(1, 200)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_schedule_json_round_trip():
    schedule = LambdaSchedule("power_of_lambda_min", 0.2)
    assert LambdaSchedule.from_dict(schedule.to_dict()) == schedule


def test_assumption_report_unit_case():
    report = assumption_report(EigenExtremes(1.0, float(np.e)), lambda_n=1.0, n=10)
    assert report.a3_ratio == pytest.approx(np.e, rel=1e-12)
    assert report.a4_ratio_1 == pytest.approx(1.0, rel=1e-12)
    assert report.a4_ratio_2 == pytest.approx(np.e, rel=1e-12)
    assert report.n == 10


def test_assumption_report_equal_extremes():
    e2 = float(np.e) ** 2
    report = assumption_report(EigenExtremes(e2, e2), lambda_n=float(np.e), n=5)
    assert report.a3_ratio == pytest.approx(np.sqrt(2.0) / np.e, rel=1e-12)


def test_assumption_report_is_bit_stable():
    eig = EigenExtremes(3.7, 41.25)
    first = assumption_report(eig, 2.5, 7)
    second = assumption_report(eig, 2.5, 7)
    assert first == second  # pure arithmetic, exact recomputation


def test_assumption_report_rejects_bad_inputs():
    with pytest.raises(ValueError):
        assumption_report(EigenExtremes(0.0, 2.0), 1.0, 1)
    with pytest.raises(ValueError):
        assumption_report(EigenExtremes(0.5, 0.9), 1.0, 1)
    with pytest.raises(ValueError):
        assumption_report(EigenExtremes(1.0, 2.0), 0.0, 1)


def test_irrepresentable_block_diagonal_passes():
    gram = np.diag([5.0, 3.0, 2.0, 1.0])
    result = irrepresentable_check(gram, support={1, 2}, theta_signs=np.ones(4), eta=0.9)
    assert result.passed
    assert result.max_violation == 0.0


def test_irrepresentable_scalar_fail():
    gram = np.array([[1.0, 0.95], [0.95, 1.0]])
    result = irrepresentable_check(gram, support={1}, theta_signs=np.ones(2), eta=0.1)
    assert not result.passed
    assert result.max_violation == pytest.approx(0.95, rel=1e-12)


def test_irrepresentable_scale_invariance():
    rng = np.random.default_rng(0)
    base = rng.normal(size=(20, 5))
    gram = base.T @ base
    signs = np.sign(rng.normal(size=5))
    signs[signs == 0] = 1.0
    a = irrepresentable_check(gram, {1, 3}, signs)
    b = irrepresentable_check(gram / 20.0, {1, 3}, signs)
    assert a.max_violation == pytest.approx(b.max_violation, rel=1e-12)
    assert a.passed == b.passed


def test_irrepresentable_invariant_to_nonsupport_permutation():
    rng = np.random.default_rng(1)
    base = rng.normal(size=(30, 6))
    gram = base.T @ base
    signs = np.ones(6)
    original = irrepresentable_check(gram, {1, 2}, signs)
    # permute the non-support block (coordinates 3..6) symmetrically
    perm = np.array([0, 1, 5, 3, 2, 4])
    permuted = gram[np.ix_(perm, perm)]
    swapped = irrepresentable_check(permuted, {1, 2}, signs)
    assert swapped.max_violation == pytest.approx(original.max_violation, rel=1e-12)


def test_irrepresentable_rejects_bad_support():
    gram = np.eye(3)
    with pytest.raises(ValueError, match="nonempty"):
        irrepresentable_check(gram, set(), np.ones(3))
    with pytest.raises(ValueError, match="proper subset"):
        irrepresentable_check(gram, {1, 2, 3}, np.ones(3))
    with pytest.raises(ValueError, match="1..3"):
        irrepresentable_check(gram, {0, 1}, np.ones(3))


def test_irrepresentable_rejects_singular_support_block():
    gram = np.zeros((3, 3))
    gram[2, 2] = 1.0
    with pytest.raises(ValueError, match="singular"):
        irrepresentable_check(gram, {1, 2}, np.ones(3))
