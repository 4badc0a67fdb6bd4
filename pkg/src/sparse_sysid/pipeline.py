"""The full two-step estimation pipeline applied at one checkpoint.

Given accumulated statistics, one checkpoint run is: least squares, spectral
extremes, zero-free preliminary estimate, reciprocal weights, weighted-L1
solve, support readout.  Both the open-loop harness and the closed-loop
runner call this; keeping it in one place guarantees the two paths agree
whenever they see identical statistics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .estimation import (
    DEFAULT_RIDGE_FLOOR,
    EigenExtremes,
    EstimateBundle,
    GramState,
    eigen_extremes,
    ls_estimate,
    modified_estimate,
)
from .wlasso import (
    DEFAULT_MAX_ITERS,
    DEFAULT_TOL,
    DEFAULT_WEIGHT_CAP,
    WeightedLassoProblem,
    adaptive_weights,
    solve_weighted_lasso,
    support_set,
)

FloatArray = NDArray[np.float64]

__all__ = ["CheckpointEstimate", "sparse_checkpoint"]


@dataclass(frozen=True)
class CheckpointEstimate:
    """Estimate bundle plus the solver/solve metadata behind it."""

    bundle: EstimateBundle
    eig: EigenExtremes
    ls_regularized: bool
    kkt_residual: float
    converged: bool
    iterations: int


def sparse_checkpoint(
    state: GramState,
    lambda_n: float,
    *,
    eig: EigenExtremes | None = None,
    ridge_floor: float = DEFAULT_RIDGE_FLOOR,
    weight_cap: float = DEFAULT_WEIGHT_CAP,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    warm_start: FloatArray | None = None,
) -> CheckpointEstimate | None:
    """Run the full pipeline on the current statistics.

    Returns ``None`` when the statistics cannot support the sparse step yet
    (smallest eigenvalue not positive, or largest eigenvalue not above 1, so
    the zero-free margin is undefined); callers skip such checkpoints.
    ``eig`` may be passed in when the caller already computed it.
    """
    if state.count < 1:
        return None
    if eig is None:
        eig = eigen_extremes(state.gram)
    if eig.lambda_min <= 0.0 or eig.lambda_max <= 1.0:
        return None

    ls = ls_estimate(state, ridge_floor=ridge_floor)
    modified = modified_estimate(ls.theta, eig)
    weights = adaptive_weights(modified, weight_cap=weight_cap)
    problem = WeightedLassoProblem.from_state(state, weights, lambda_n)
    solution = solve_weighted_lasso(
        problem, tol=tol, max_iters=max_iters, warm_start=warm_start
    )
    bundle = EstimateBundle(
        ls=ls.theta,
        modified=modified,
        sparse=solution.beta,
        support_zero=support_set(solution.beta),
        n=state.count,
        lambda_n=float(lambda_n),
    )
    return CheckpointEstimate(
        bundle=bundle,
        eig=eig,
        ls_regularized=ls.regularized,
        kkt_residual=solution.kkt_residual,
        converged=solution.converged,
        iterations=solution.iterations,
    )
