"""Regularization schedules and finite-sample excitation diagnostics.

The sparse refinement needs a regularization level ``lambda_N`` that grows
with the sample count but slower than the smallest Gram eigenvalue.  Two
schedule families are provided: a plain power of the sample count and a power
of the smallest eigenvalue itself.  The diagnostics report, for trend
inspection only, the spectral ratios whose decay the theory behind the
pipeline relies on; no finite-N value can verify an almost-sure limit, so the
reports never carry a verdict and the pipeline never aborts on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, NamedTuple

import numpy as np
from numpy.typing import NDArray

from .estimation import EigenExtremes

FloatArray = NDArray[np.float64]

__all__ = [
    "LambdaSchedule",
    "AssumptionReport",
    "IrrepresentableResult",
    "lambda_value",
    "assumption_report",
    "irrepresentable_check",
]

ScheduleKind = Literal["power_of_n", "power_of_lambda_min"]


@dataclass(frozen=True)
class LambdaSchedule:
    """Rule mapping a sample count to a regularization level.

    ``power_of_n``: ``lambda_N = N ** exponent`` with ``exponent`` in (0, 1).

    ``power_of_lambda_min``: ``lambda_N = lambda_min(N) ** (1/2 + exponent)``
    with ``exponent`` (the epsilon margin above the square root) in (0, 1/2).
    """

    kind: ScheduleKind
    exponent: float

    def __post_init__(self) -> None:
        if self.kind == "power_of_n":
            if not (0.0 < self.exponent < 1.0):
                raise ValueError(
                    f"power_of_n exponent must lie in (0, 1), got {self.exponent}"
                )
        elif self.kind == "power_of_lambda_min":
            if not (0.0 < self.exponent < 0.5):
                raise ValueError(
                    f"power_of_lambda_min epsilon must lie in (0, 1/2), got {self.exponent}"
                )
        else:
            raise ValueError(f"unknown schedule kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "exponent": self.exponent}

    @classmethod
    def from_dict(cls, data: dict) -> "LambdaSchedule":
        return cls(kind=data["kind"], exponent=float(data["exponent"]))


def lambda_value(schedule: LambdaSchedule, n: int, lambda_min: float | None = None) -> float:
    """Evaluate the schedule at sample count ``n``.

    ``lambda_min`` is required (and must be positive) for the
    ``power_of_lambda_min`` kind and ignored otherwise.
    """
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    if schedule.kind == "power_of_n":
        return float(n) ** schedule.exponent
    if lambda_min is None or not (lambda_min > 0.0):
        raise ValueError(
            "power_of_lambda_min schedule needs a positive lambda_min, "
            f"got {lambda_min}"
        )
    return float(lambda_min) ** (0.5 + schedule.exponent)


@dataclass(frozen=True)
class AssumptionReport:
    """Spectral ratios whose decay the sparse pipeline's guarantees rest on.

    ``a3_ratio = (lmax/lmin) * sqrt(log(lmax)/lmin)`` measures how balanced
    the excitation is; ``a4_ratio_1 = lambda_n/lmin`` and
    ``a4_ratio_2 = lmax * sqrt(log(lmax)/lmin) / lambda_n`` bracket the
    regularization level from above and below.  All three should trend to
    zero along a healthy trajectory.  Values only; no verdict.
    """

    a3_ratio: float
    a4_ratio_1: float
    a4_ratio_2: float
    n: int


class IrrepresentableResult(NamedTuple):
    passed: bool
    max_violation: float


def assumption_report(eig: EigenExtremes, lambda_n: float, n: int) -> AssumptionReport:
    """Compute the three diagnostic ratios from eigenvalue extremes."""
    if not (eig.lambda_min > 0.0):
        raise ValueError(f"lambda_min must be positive, got {eig.lambda_min}")
    if not (eig.lambda_max > 1.0):
        raise ValueError(f"lambda_max must exceed 1, got {eig.lambda_max}")
    if not (lambda_n > 0.0):
        raise ValueError(f"lambda_n must be positive, got {lambda_n}")
    root = float(np.sqrt(np.log(eig.lambda_max) / eig.lambda_min))
    return AssumptionReport(
        a3_ratio=(eig.lambda_max / eig.lambda_min) * root,
        a4_ratio_1=lambda_n / eig.lambda_min,
        a4_ratio_2=eig.lambda_max * root / lambda_n,
        n=n,
    )


def irrepresentable_check(
    gram: FloatArray,
    support: Iterable[int],
    theta_signs: FloatArray,
    eta: float = 0.1,
) -> IrrepresentableResult:
    """Check the classic lasso support-consistency condition on a Gram matrix.

    ``support`` holds the 1-indexed coordinates of the nonzero block;
    ``theta_signs`` is a full-length sign vector (only the support entries
    are read).  With the Gram partitioned so block 11 is the support block,
    the condition requires every entry of
    ``|C21 @ inv(C11) @ sgn|`` to be at most ``1 - eta``.  The common 1/N
    normalization cancels, so the raw accumulated Gram can be passed.

    This condition is *not* required by the weighted pipeline; it is computed
    for comparison, e.g. on closed-loop data where it typically degrades.
    """
    g = np.asarray(gram, dtype=np.float64)
    r = g.shape[0]
    if g.shape != (r, r):
        raise ValueError(f"gram must be square, got shape {g.shape}")
    if not (0.0 < eta < 1.0):
        raise ValueError(f"eta must lie in (0, 1), got {eta}")
    sup = sorted({int(j) for j in support})
    if not sup:
        raise ValueError("support must be nonempty")
    if any(j < 1 or j > r for j in sup):
        raise ValueError(f"support indices must lie in 1..{r}, got {sup}")
    if len(sup) == r:
        raise ValueError("support must be a proper subset of the coordinates")
    signs = np.asarray(theta_signs, dtype=np.float64)
    if signs.shape != (r,):
        raise ValueError(f"theta_signs must have shape ({r},), got {signs.shape}")

    idx = np.array([j - 1 for j in sup], dtype=np.intp)
    rest = np.array([j for j in range(r) if j + 1 not in set(sup)], dtype=np.intp)
    c11 = g[np.ix_(idx, idx)]
    c21 = g[np.ix_(rest, idx)]
    try:
        solved = np.linalg.solve(c11, signs[idx])
    except np.linalg.LinAlgError as err:
        raise ValueError(f"support block of the Gram matrix is singular: {err}") from err
    values = np.abs(c21 @ solved)
    max_violation = float(np.max(values)) if values.size else 0.0
    return IrrepresentableResult(passed=bool(max_violation <= 1.0 - eta), max_violation=max_violation)
