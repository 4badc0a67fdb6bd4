"""Accumulated regression statistics and the point estimators built on them.

The identification pipeline never stores raw data matrices.  Every observed
pair ``(phi, y)`` is folded into a :class:`GramState` holding
``sum(phi phi^T)``, ``sum(phi * y)``, ``sum(y^2)`` and the sample count; the
least-squares solve, the spectral diagnostics and the downstream sparse
refinement all operate on these sufficient statistics.  For the regressor
sizes this package targets (r <= 64, typically r <= 14) a dense O(r^3) batch
solve per request is cheaper and more transparent than recursive updates and
carries no approximation drift.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

FloatArray = NDArray[np.float64]

__all__ = [
    "GramState",
    "EigenExtremes",
    "EstimateBundle",
    "LsEstimate",
    "gram_accumulate",
    "jacobi_eigh",
    "eigen_extremes",
    "ls_estimate",
    "modified_estimate",
]

#: Largest regressor dimension the dense Jacobi eigenvalue path accepts.
MAX_DENSE_DIM = 64

#: Default relative ridge floor used by :func:`ls_estimate` during the startup
#: phase, before the accumulated Gram matrix reaches full numerical rank.
DEFAULT_RIDGE_FLOOR = 1e-10


@dataclass
class GramState:
    """Sufficient statistics for least squares over observed ``(phi, y)`` pairs.

    Attributes:
        dim: Regressor dimension ``r``.
        gram: ``r x r`` running sum of the outer products ``phi phi^T``.
        cross: Length-``r`` running sum of ``phi * y``.
        y_sq: Running sum of ``y**2``.
        count: Number of accumulated observation pairs.

    The state is a value type: :func:`gram_accumulate` returns a fresh state
    and never mutates its input, so states can be snapshotted or moved across
    workers freely.
    """

    dim: int
    gram: FloatArray
    cross: FloatArray
    y_sq: float = 0.0
    count: int = 0

    @classmethod
    def empty(cls, dim: int) -> "GramState":
        """A zero-observation state for regressors of dimension ``dim``."""
        if dim < 1:
            raise ValueError(f"regressor dimension must be >= 1, got {dim}")
        return cls(
            dim=dim,
            gram=np.zeros((dim, dim), dtype=np.float64),
            cross=np.zeros(dim, dtype=np.float64),
            y_sq=0.0,
            count=0,
        )

    def copy(self) -> "GramState":
        return GramState(self.dim, self.gram.copy(), self.cross.copy(), self.y_sq, self.count)


@dataclass(frozen=True)
class EigenExtremes:
    """Smallest and largest eigenvalue of a symmetric matrix.

    For accumulated Gram matrices both values are nonnegative up to roundoff;
    the fields report what the eigensolver found without clamping.
    """

    lambda_min: float
    lambda_max: float

    def __post_init__(self) -> None:
        if not (self.lambda_min <= self.lambda_max):
            raise ValueError(
                f"lambda_min={self.lambda_min} exceeds lambda_max={self.lambda_max}"
            )


@dataclass(frozen=True)
class LsEstimate:
    """Least-squares solve result.

    ``regularized`` is True when the Gram matrix was judged numerically rank
    deficient and a small ridge was added to make the solve well posed; such
    estimates belong to the startup phase and experiments typically discard
    them.
    """

    theta: FloatArray
    regularized: bool


@dataclass(frozen=True)
class EstimateBundle:
    """All estimates produced for one checkpoint of the pipeline.

    Attributes:
        ls: Plain least-squares estimate.
        modified: Least squares pushed away from zero by the spectral margin
            (see :func:`modified_estimate`); reciprocal source of the solver
            weights.
        sparse: Minimizer of the weighted-L1 criterion; zeros are exact.
        support_zero: 1-indexed set ``{j : sparse[j-1] == 0}``.
        n: Number of observation pairs behind the estimates.
        lambda_n: Regularization level used for ``sparse``.
    """

    ls: FloatArray
    modified: FloatArray
    sparse: FloatArray
    support_zero: frozenset[int]
    n: int
    lambda_n: float

    def __post_init__(self) -> None:
        r = len(self.ls)
        if len(self.modified) != r or len(self.sparse) != r:
            raise ValueError("estimate vectors must share one dimension")
        expected = frozenset(j + 1 for j in range(r) if self.sparse[j] == 0.0)
        if self.support_zero != expected:
            raise ValueError(
                f"support_zero {sorted(self.support_zero)} does not match the "
                f"exact zeros of sparse {sorted(expected)}"
            )


def _as_vector(phi: object, dim: int) -> FloatArray:
    arr = np.asarray(phi, dtype=np.float64)
    if arr.shape != (dim,):
        raise ValueError(f"regressor must have shape ({dim},), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("regressor contains non-finite entries")
    return arr


def gram_accumulate(state: GramState, phi: object, y: float) -> GramState:
    """Fold one observation pair into the running statistics.

    Returns a new state with ``gram += phi phi^T``, ``cross += phi * y``,
    ``y_sq += y**2`` and ``count += 1``.  Rejects dimension mismatches and
    non-finite inputs.
    """
    arr = _as_vector(phi, state.dim)
    y = float(y)
    if not np.isfinite(y):
        raise ValueError("output value is not finite")
    return GramState(
        dim=state.dim,
        gram=state.gram + np.outer(arr, arr),
        cross=state.cross + arr * y,
        y_sq=state.y_sq + y * y,
        count=state.count + 1,
    )


def jacobi_eigh(
    matrix: FloatArray,
    *,
    tol_factor: float = 1e-12,
    max_sweeps: int = 100,
) -> tuple[FloatArray, FloatArray]:
    """Full eigendecomposition of a small dense symmetric matrix.

    Cyclic Jacobi rotations, sweeping rows in order and annihilating one
    off-diagonal entry at a time, until the off-diagonal Frobenius norm drops
    below ``tol_factor`` times the Frobenius norm of the input (or
    ``max_sweeps`` is exhausted; for the matrix sizes accepted here that
    limit is never the binding constraint in practice).

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    ``eigenvectors[:, i]`` the unit eigenvector for ``eigenvalues[i]``.
    """
    a = np.array(matrix, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return a[0, :].copy(), v
    fro = float(np.linalg.norm(a, "fro"))
    threshold = tol_factor * fro
    for _ in range(max_sweeps):
        off = float(np.sqrt(np.sum(np.square(a - np.diag(np.diag(a))))))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                # Classic two-sided rotation that zeroes a[p, q].
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                row_p = a[:, p].copy()
                row_q = a[:, q].copy()
                a[:, p] = c * row_p - s * row_q
                a[:, q] = s * row_p + c * row_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                col_p = v[:, p].copy()
                col_q = v[:, q].copy()
                v[:, p] = c * col_p - s * col_q
                v[:, q] = s * col_p + c * col_q
    evals = np.diag(a).copy()
    order = np.argsort(evals, kind="stable")
    return evals[order], v[:, order]


def eigen_extremes(matrix: FloatArray) -> EigenExtremes:
    """Smallest and largest eigenvalue of a symmetric matrix.

    Rejects asymmetric input (relative asymmetry above 1e-10) and matrices
    larger than the dense-method cutoff.
    """
    a = np.asarray(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > MAX_DENSE_DIM:
        raise ValueError(f"dense eigenvalue path handles dim <= {MAX_DENSE_DIM}, got {n}")
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    asym = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if scale > 0.0 and asym > 1e-10 * scale:
        raise ValueError(
            f"matrix is not symmetric: max asymmetry {asym:.3e} vs scale {scale:.3e}"
        )
    evals, _ = jacobi_eigh(a)
    return EigenExtremes(lambda_min=float(evals[0]), lambda_max=float(evals[-1]))


def ls_estimate(state: GramState, ridge_floor: float = DEFAULT_RIDGE_FLOOR) -> LsEstimate:
    """Solve the normal equations ``gram @ theta = cross``.

    When the smallest eigenvalue of ``gram`` falls below
    ``ridge_floor * trace(gram) / dim`` the system is treated as numerically
    rank deficient: the solve uses ``gram + ridge * I`` instead and the
    result is flagged ``regularized=True``.  The returned estimate satisfies
    the (possibly ridged) normal equations with residual at most
    ``1e-9 * max(1, ||cross||)``; a system that cannot meet that even after
    one refinement pass is rejected as singular.
    """
    if state.count < 1:
        raise ValueError("least squares requires at least one observation")
    gram = state.gram
    mean_diag = float(np.trace(gram)) / state.dim
    extremes = eigen_extremes(gram)
    ridge = ridge_floor * mean_diag
    regularized = extremes.lambda_min < ridge
    system = gram + ridge * np.eye(state.dim) if regularized else gram

    try:
        theta = np.linalg.solve(system, state.cross)
    except np.linalg.LinAlgError as err:
        raise ValueError(f"normal equations are numerically singular: {err}") from err

    tol = 1e-9 * max(1.0, float(np.linalg.norm(state.cross)))
    residual = float(np.linalg.norm(system @ theta - state.cross))
    if residual > tol:
        # One step of iterative refinement recovers the last digits when the
        # first solve was dominated by cancellation.
        try:
            theta = theta + np.linalg.solve(system, state.cross - system @ theta)
        except np.linalg.LinAlgError as err:
            raise ValueError(f"normal equations are numerically singular: {err}") from err
        residual = float(np.linalg.norm(system @ theta - state.cross))
        if residual > tol:
            raise ValueError(
                f"normal-equation residual {residual:.3e} exceeds tolerance {tol:.3e}; "
                "system too ill conditioned even after ridge"
            )
    return LsEstimate(theta=theta, regularized=regularized)


def modified_estimate(ls: FloatArray, eig: EigenExtremes) -> FloatArray:
    """Push every least-squares coordinate away from zero by a spectral margin.

    Each coordinate moves by ``sqrt(log(lambda_max) / lambda_min)`` in its own
    sign direction (coordinates equal to zero count as positive), so the
    result is bounded away from zero by exactly that margin.  The margin
    shrinks as the data grows more informative, which makes the reciprocals
    usable as adaptive penalty weights: asymptotically negligible for
    coordinates the data supports, balanced otherwise.

    Requires ``lambda_min > 0`` (full-rank statistics) and ``lambda_max > 1``
    (positive logarithm); callers should skip sparse refinement at steps where
    these fail.
    """
    if eig.lambda_min <= 0.0:
        raise ValueError(
            f"lambda_min={eig.lambda_min} is not positive; statistics not yet full rank"
        )
    if eig.lambda_max <= 1.0:
        raise ValueError(
            f"lambda_max={eig.lambda_max} must exceed 1 for the margin to be defined"
        )
    arr = np.asarray(ls, dtype=np.float64)
    margin = float(np.sqrt(np.log(eig.lambda_max) / eig.lambda_min))
    signs = np.where(arr >= 0.0, 1.0, -1.0)
    return arr + signs * margin
