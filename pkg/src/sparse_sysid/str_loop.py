"""Closed-loop self-tuning regulation with diminishing excitation.

The loop estimates the plant parameters online by least squares, plugs the
current estimate into the one-step tracking equation (certainty equivalence)
to pick the next input, and adds an exogenous dither whose amplitude decays
with the accumulated regressor energy.  The decay keeps the closed loop
informative enough to identify without degrading asymptotic tracking.

Two plant families are supported: a linear ARX plant, whose tracking
equation solves in closed form, and a single-input-channel polynomial
Hammerstein plant of degree at most three, whose tracking equation is a
cubic solved for its real root of minimal magnitude.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from .estimation import (
    DEFAULT_RIDGE_FLOOR,
    EigenExtremes,
    EstimateBundle,
    GramState,
    eigen_extremes,
    gram_accumulate,
    ls_estimate,
)
from .hammerstein import Gaussian, HammersteinSpec, Law, Uniform, law_from_dict, _seeded_rng
from .pipeline import CheckpointEstimate, sparse_checkpoint
from .schedules import LambdaSchedule, lambda_value

FloatArray = NDArray[np.float64]

__all__ = [
    "ArxSpec",
    "SquareWave",
    "ConstantReference",
    "StrConfig",
    "CheckpointRecord",
    "RunRecord",
    "NoRealRootError",
    "str_control_linear",
    "cubic_real_solution",
    "diminishing_excitation",
    "run_str",
    "tracking_loss",
    "DEFAULT_CHECKPOINTS",
]

#: Dyadic-style checkpoint schedule keeping the per-run solve count small
#: while still tracing out estimate trajectories.
DEFAULT_CHECKPOINTS = (125, 250, 500, 1000, 2000, 3000)

OVERFLOW_GUARD = 1e12

#: Gram matrices with lambda_min below this fraction of the mean diagonal are
#: treated as not yet full rank during startup.
FULL_RANK_FRACTION = 1e-8


class NoRealRootError(ValueError):
    """Raised when a degenerate tracking polynomial has no real solution."""


@dataclass
class ArxSpec:
    """Linear ARX plant ``y_{k+1} = a.y_lags + b.u_lags + w_{k+1}``.

    Same direct sign convention as the Hammerstein spec: coefficients
    multiply lags directly in the one-step update.  Construction warns when
    the output recursion is unstable, when the input polynomial has a zero
    inside the closed unit disk (non-minimum-phase), or when the highest-lag
    coefficients both vanish (the nominal orders overstate the true ones).
    """

    a: FloatArray
    b: FloatArray
    noise_law: Law = field(default_factory=lambda: Gaussian(0.0, 1.0))

    def __post_init__(self) -> None:
        self.a = np.atleast_1d(np.asarray(self.a, dtype=np.float64))
        self.b = np.atleast_1d(np.asarray(self.b, dtype=np.float64))
        if self.a.size < 1 or self.b.size < 1:
            raise ValueError("need p, q >= 1")
        poles = np.roots(np.concatenate(([1.0], -self.a)))
        if poles.size and np.max(np.abs(poles)) >= 1.0:
            warnings.warn("output recursion is unstable", stacklevel=2)
        if self.b[0] == 0.0 and np.all(self.b == 0.0):
            warnings.warn("all input gains are zero", stacklevel=2)
        elif self.q > 1:
            zeros = np.roots(self.b[::-1])
            if zeros.size and np.min(np.abs(zeros)) <= 1.0:
                warnings.warn(
                    "input polynomial has a zero inside the unit disk "
                    "(non-minimum-phase); tracking control may misbehave",
                    stacklevel=2,
                )
        if abs(self.a[-1]) + abs(self.b[-1]) == 0.0:
            warnings.warn("highest-lag coefficients are both zero", stacklevel=2)

    @property
    def p(self) -> int:
        return int(self.a.size)

    @property
    def q(self) -> int:
        return int(self.b.size)

    @property
    def dim(self) -> int:
        return self.p + self.q

    @property
    def theta(self) -> FloatArray:
        return np.concatenate([self.a, self.b])

    def to_dict(self) -> dict:
        return {
            "kind": "arx",
            "a": self.a.tolist(),
            "b": self.b.tolist(),
            "noise_law": self.noise_law.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ArxSpec":
        return cls(
            a=np.asarray(data["a"], dtype=np.float64),
            b=np.asarray(data["b"], dtype=np.float64),
            noise_law=law_from_dict(data["noise_law"]),
        )


@dataclass(frozen=True)
class SquareWave:
    """Reference alternating between two levels with the given half period."""

    high: float = 1.0
    low: float = -1.0
    half_period: int = 500

    def __post_init__(self) -> None:
        if self.half_period < 1:
            raise ValueError(f"half_period must be >= 1, got {self.half_period}")

    def value(self, k: int) -> float:
        phase = (k - 1) % (2 * self.half_period)
        return self.high if phase < self.half_period else self.low

    def to_dict(self) -> dict:
        return {
            "kind": "square_wave",
            "high": self.high,
            "low": self.low,
            "half_period": self.half_period,
        }


@dataclass(frozen=True)
class ConstantReference:
    level: float = 0.0

    def value(self, k: int) -> float:
        return self.level

    def to_dict(self) -> dict:
        return {"kind": "constant", "level": self.level}


Reference = SquareWave | ConstantReference


def reference_from_dict(data: dict) -> Reference:
    kind = data.get("kind")
    if kind == "square_wave":
        return SquareWave(
            high=float(data["high"]),
            low=float(data["low"]),
            half_period=int(data["half_period"]),
        )
    if kind == "constant":
        return ConstantReference(level=float(data["level"]))
    raise ValueError(f"unknown reference kind {kind!r}")


@dataclass
class StrConfig:
    """Everything one closed-loop run needs besides the seed.

    ``epsilon_bar`` controls the dither decay ``r_{k-1}^(-epsilon_bar/2)``;
    construction checks it against the admissible window
    ``(0, 1/(2(t+1)))`` with ``t = max(p, q) + p - 1`` taken from the plant's
    nominal orders (for polynomial plants the window is nominal, computed
    from the same orders).  The plant's true parameters are only used to
    advance the simulated output; the controller sees estimates exclusively.
    """

    plant: ArxSpec | HammersteinSpec
    reference: Reference
    epsilon_bar: float
    horizon: int
    lambda_schedule: LambdaSchedule
    dither_law: Law = field(default_factory=lambda: Uniform(-0.1, 0.1))
    b1_floor: float = 1e-6
    ridge_floor: float = DEFAULT_RIDGE_FLOOR
    solver_tol: float = 1e-10
    solver_max_iters: int = 100_000
    weight_cap: float = 1e12

    def __post_init__(self) -> None:
        if isinstance(self.plant, HammersteinSpec):
            if self.plant.q != 1:
                raise ValueError("closed-loop polynomial plants must have q == 1")
            if self.plant.basis is not None:
                raise ValueError("closed-loop polynomial plants must use the power basis")
            if self.plant.s > 3:
                raise ValueError("tracking equation solver handles degree <= 3")
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.b1_floor <= 0.0:
            raise ValueError(f"b1_floor must be positive, got {self.b1_floor}")
        t = max(self.plant.p, self.plant.q) + self.plant.p - 1
        upper = 1.0 / (2.0 * (t + 1))
        if not (0.0 < self.epsilon_bar < upper):
            raise ValueError(
                f"epsilon_bar must lie in (0, {upper:.6g}) for plant orders "
                f"p={self.plant.p}, q={self.plant.q}, got {self.epsilon_bar}"
            )

    @property
    def phi_dim(self) -> int:
        if isinstance(self.plant, ArxSpec):
            return self.plant.dim
        return self.plant.p + self.plant.s

    def to_json(self) -> str:
        payload = {
            "plant": self.plant.to_dict(),
            "reference": self.reference.to_dict(),
            "epsilon_bar": self.epsilon_bar,
            "horizon": self.horizon,
            "lambda_schedule": self.lambda_schedule.to_dict(),
            "dither_law": self.dither_law.to_dict(),
            "b1_floor": self.b1_floor,
            "ridge_floor": self.ridge_floor,
            "solver_tol": self.solver_tol,
            "solver_max_iters": self.solver_max_iters,
            "weight_cap": self.weight_cap,
        }
        return json.dumps(payload, sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "StrConfig":
        data = json.loads(text)
        plant_data = data["plant"]
        if plant_data["kind"] == "arx":
            plant: ArxSpec | HammersteinSpec = ArxSpec.from_dict(plant_data)
        elif plant_data["kind"] == "hammerstein":
            plant = HammersteinSpec.from_dict(plant_data)
        else:
            raise ValueError(f"unknown plant kind {plant_data['kind']!r}")
        return cls(
            plant=plant,
            reference=reference_from_dict(data["reference"]),
            epsilon_bar=float(data["epsilon_bar"]),
            horizon=int(data["horizon"]),
            lambda_schedule=LambdaSchedule.from_dict(data["lambda_schedule"]),
            dither_law=law_from_dict(data["dither_law"]),
            b1_floor=float(data["b1_floor"]),
            ridge_floor=float(data["ridge_floor"]),
            solver_tol=float(data["solver_tol"]),
            solver_max_iters=int(data["solver_max_iters"]),
            weight_cap=float(data["weight_cap"]),
        )


def str_control_linear(
    theta_est: FloatArray,
    phi_with_u_zeroed: FloatArray,
    y_star_next: float,
    b1_floor: float,
    u_index: int,
) -> tuple[float, bool]:
    """Certainty-equivalence input for a linear plant.

    Solves ``theta_est . phi = y_star_next`` for the current-input slot
    (``phi_with_u_zeroed`` carries 0 there):

        u0 = (y_star_next - theta_est . phi|_{u=0}) / b1_hat.

    When the leading input-gain estimate ``b1_hat = theta_est[u_index]`` is
    smaller in magnitude than ``b1_floor`` it is replaced by
    ``sign(b1_hat) * b1_floor`` (zero counts as positive) so the input stays
    well defined; the second return value reports that the floor engaged.
    """
    theta = np.asarray(theta_est, dtype=np.float64)
    phi = np.asarray(phi_with_u_zeroed, dtype=np.float64)
    b1 = float(theta[u_index])
    clamped = abs(b1) < b1_floor
    if clamped:
        b1 = b1_floor if b1 >= 0.0 else -b1_floor
    u0 = (float(y_star_next) - float(theta @ phi)) / b1
    return u0, clamped


def cubic_real_solution(c3: float, c2: float, c1: float, c0: float) -> float:
    """Real root of ``c3 u^3 + c2 u^2 + c1 u + c0 = 0`` with minimal magnitude.

    Exact ties in magnitude break toward the nonnegative root.  Degenerate
    leading coefficients fall back to the quadratic and linear cases; a
    quadratic with negative discriminant has no real solution and raises
    :class:`NoRealRootError`.  The selected root gets one Newton polish and
    is required to satisfy ``|poly(u)| <= 1e-9 * scale``.
    """
    coeffs = np.array([c3, c2, c1, c0], dtype=np.float64)
    if not np.all(np.isfinite(coeffs)):
        raise ValueError(f"polynomial coefficients must be finite, got {coeffs}")
    if c3 == 0.0 and c2 == 0.0 and c1 == 0.0:
        raise ValueError("all of c3, c2, c1 are zero: not an equation in u")

    if c3 == 0.0 and c2 == 0.0:
        candidates = [-c0 / c1]
    elif c3 == 0.0:
        disc = c1 * c1 - 4.0 * c2 * c0
        if disc < 0.0:
            raise NoRealRootError(
                f"quadratic tracking equation has no real solution (disc={disc:.3e})"
            )
        root = np.sqrt(disc)
        candidates = [(-c1 + root) / (2.0 * c2), (-c1 - root) / (2.0 * c2)]
    else:
        roots = np.roots(coeffs)
        # A real cubic always has at least one real root; tolerate the tiny
        # imaginary dust the companion-matrix eigensolver leaves behind.
        scale_r = np.maximum(1.0, np.abs(roots))
        candidates = [float(z.real) for z, s in zip(roots, scale_r) if abs(z.imag) <= 1e-8 * s]
        if not candidates:
            candidates = [float(roots[np.argmin(np.abs(roots.imag))].real)]

    candidates.sort(key=lambda u: (abs(u), 0.0 if u >= 0.0 else 1.0))
    u = candidates[0]

    poly = np.polynomial.Polynomial([c0, c1, c2, c3])
    deriv = poly.deriv()
    slope = deriv(u)
    if slope != 0.0:
        u = u - poly(u) / slope
    scale = max(1.0, max(abs(c) for c in (c3, c2, c1, c0)), abs(u) ** 3)
    residual = abs(poly(u))
    if residual > 1e-9 * scale:
        # One more polish before giving up; np.roots is occasionally sloppy.
        slope = deriv(u)
        if slope != 0.0:
            u = u - poly(u) / slope
        residual = abs(poly(u))
        if residual > 1e-9 * scale:
            raise ValueError(
                f"root refinement stalled: residual {residual:.3e} at u={u!r}"
            )
    return float(u)


def diminishing_excitation(u0: float, dither: float, r_excite: float, epsilon_bar: float) -> float:
    """Add the decaying exogenous dither to the nominal input.

    ``u = u0 + dither / r_excite**(epsilon_bar / 2)`` with ``r_excite >= 1``
    the accumulated regressor energy, so the perturbation never exceeds the
    raw dither and shrinks as the loop gathers data.
    """
    if r_excite < 1.0:
        raise ValueError(f"r_excite must be >= 1, got {r_excite}")
    return float(u0) + float(dither) / r_excite ** (epsilon_bar / 2.0)


def tracking_loss(ys: FloatArray, y_stars: FloatArray) -> float:
    """Mean squared tracking error ``(1/k) sum (y_i - y*_i)^2``."""
    ys = np.asarray(ys, dtype=np.float64)
    y_stars = np.asarray(y_stars, dtype=np.float64)
    if ys.shape != y_stars.shape or ys.ndim != 1:
        raise ValueError("ys and y_stars must be 1-d arrays of equal length")
    if ys.size == 0:
        raise ValueError("tracking loss of an empty run is undefined")
    return float(np.mean(np.square(ys - y_stars)))


@dataclass
class StrLoopState:
    """Mutable state of one closed-loop run between steps.

    ``y_hist`` and ``u_hist`` are the lag windows, newest first; ``r_excite``
    is ``1 + sum of squared regressor norms`` so far (never decreasing, at
    least 1); ``k`` is the step about to execute; ``estimates`` holds the
    latest checkpoint bundle once one exists.
    """

    gram: GramState
    y_hist: FloatArray
    u_hist: FloatArray
    r_excite: float = 1.0
    k: int = 1
    estimates: EstimateBundle | None = None

    def __post_init__(self) -> None:
        if self.r_excite < 1.0:
            raise ValueError(f"r_excite must be >= 1, got {self.r_excite}")

    def absorb(self, phi: FloatArray, y_next: float) -> None:
        """Fold a finished step into the statistics and advance the clock."""
        self.gram = gram_accumulate(self.gram, phi, y_next)
        self.r_excite += float(phi @ phi)
        if self.y_hist.size > 1:
            self.y_hist[1:] = self.y_hist[:-1]
        self.y_hist[0] = y_next
        if self.u_hist.size:
            if self.u_hist.size > 1:
                self.u_hist[1:] = self.u_hist[:-1]
            # phi layout puts the current input right after the output lags
            self.u_hist[0] = phi[self.y_hist.size]
        self.k += 1


@dataclass(frozen=True)
class CheckpointRecord:
    """Sparse-pipeline output at one checkpoint of a closed-loop run."""

    n: int
    lambda_n: float
    eig: EigenExtremes
    bundle: EstimateBundle
    kkt_residual: float
    converged: bool
    ls_regularized: bool


@dataclass
class RunRecord:
    """Per-step trace and checkpoint estimates of one closed-loop run."""

    seed: int
    ks: NDArray[np.int64]
    y: FloatArray
    y_star: FloatArray
    u0: FloatArray
    u: FloatArray
    dither_scale: FloatArray
    tracking: FloatArray
    b1_clamped_steps: int
    cubic_fallback_steps: int
    startup_steps: int
    checkpoints: list[CheckpointRecord]
    skipped_checkpoints: list[tuple[int, str]]
    regressors: FloatArray
    outputs: FloatArray
    diverged: bool = False

    @property
    def final_tracking_loss(self) -> float:
        return float(self.tracking[-1])

    def summary(self) -> dict:
        """Compact run digest: tracking loss, per-checkpoint zero sets, flags."""
        return {
            "seed": self.seed,
            "steps": int(len(self.ks)),
            "diverged": self.diverged,
            "final_tracking_loss": self.final_tracking_loss,
            "startup_steps": self.startup_steps,
            "b1_clamped_steps": self.b1_clamped_steps,
            "cubic_fallback_steps": self.cubic_fallback_steps,
            "support_zero": {str(c.n): sorted(c.bundle.support_zero) for c in self.checkpoints},
            "skipped_checkpoints": [list(item) for item in self.skipped_checkpoints],
        }

    def to_gram_state(self) -> GramState:
        """Replay the recorded pairs into fresh statistics (offline view)."""
        state = GramState.empty(self.regressors.shape[1])
        for phi, y_next in zip(self.regressors, self.outputs):
            state = gram_accumulate(state, phi, y_next)
        return state

    def to_run_csv(self, path: str | Path) -> None:
        path = Path(path)
        lines = ["k,y,y_star,u0,u,dither_scale,tracking_loss"]
        for i in range(len(self.ks)):
            lines.append(
                f"{int(self.ks[i])},{float(self.y[i])!r},{float(self.y_star[i])!r},"
                f"{float(self.u0[i])!r},{float(self.u[i])!r},"
                f"{float(self.dither_scale[i])!r},{float(self.tracking[i])!r}"
            )
        path.write_text("\n".join(lines) + "\n")

    def to_checkpoint_csv(self, path: str | Path, truth: FloatArray | None = None) -> None:
        path = Path(path)
        header = "N,coord_index,ls,modified,sparse,in_support_zero"
        if truth is not None:
            header += ",truth"
        lines = [header]
        for record in self.checkpoints:
            bundle = record.bundle
            for j in range(len(bundle.ls)):
                row = (
                    f"{record.n},{j + 1},{float(bundle.ls[j])!r},"
                    f"{float(bundle.modified[j])!r},{float(bundle.sparse[j])!r},"
                    f"{1 if (j + 1) in bundle.support_zero else 0}"
                )
                if truth is not None:
                    row += f",{float(truth[j])!r}"
                lines.append(row)
        path.write_text("\n".join(lines) + "\n")


def _phi_arx(plant: ArxSpec, y_hist: FloatArray, u_hist: FloatArray, u_k: float) -> FloatArray:
    return np.concatenate([y_hist, [u_k], u_hist[: plant.q - 1]])


def _phi_poly(plant: HammersteinSpec, y_hist: FloatArray, u_k: float) -> FloatArray:
    powers = u_k ** np.arange(1, plant.s + 1)
    return np.concatenate([y_hist, powers])


def run_str(
    config: StrConfig,
    seed: int,
    checkpoint_schedule: tuple[int, ...] | None = None,
) -> RunRecord:
    """Run one closed-loop trajectory under (config, seed).

    Startup uses pure dither until at least ``max(p, q) + phi_dim`` pairs are
    in and the Gram matrix is numerically full rank; after that each step
    solves least squares on everything seen so far, forms the tracking input,
    adds the decaying dither, advances the true plant with fresh noise, and
    folds the new pair into the statistics.  At every checkpoint count the
    full sparse pipeline runs (warm started from the previous checkpoint).
    Identical ``(config, seed)`` reproduce the record exactly.  A trajectory
    that exceeds the overflow guard is cut short and flagged ``diverged``.
    """
    plant = config.plant
    is_arx = isinstance(plant, ArxSpec)
    p = plant.p
    q = plant.q
    r = config.phi_dim
    horizon = config.horizon
    theta_true = plant.theta
    if checkpoint_schedule is None:
        checkpoint_schedule = tuple(n for n in DEFAULT_CHECKPOINTS if n <= horizon)
    checkpoints_wanted = set(int(n) for n in checkpoint_schedule)
    if any(n > horizon for n in checkpoints_wanted):
        raise ValueError("checkpoint schedule exceeds the horizon")

    noise = plant.noise_law.draw(_seeded_rng(seed, 1), horizon + 1)
    dither = config.dither_law.draw(_seeded_rng(seed, 2), horizon)

    loop = StrLoopState(
        gram=GramState.empty(r),
        y_hist=np.zeros(p),  # newest first: [y_k, y_{k-1}, ...]
        u_hist=np.zeros(max(q - 1, 0)),  # newest first: [u_{k-1}, ...]
    )
    loop.y_hist[0] = noise[0]  # y_1 from zero initial state
    startup_min = max(p, q) + r
    in_startup = True
    startup_steps = 0
    warm: FloatArray | None = None
    prev_u0 = 0.0

    ks = np.arange(1, horizon + 1, dtype=np.int64)
    ys = np.zeros(horizon)
    y_stars = np.zeros(horizon)
    u0s = np.zeros(horizon)
    us = np.zeros(horizon)
    scales = np.zeros(horizon)
    tracking = np.zeros(horizon)
    regressors = np.zeros((horizon, r))
    outputs = np.zeros(horizon)
    checkpoints: list[CheckpointRecord] = []
    skipped: list[tuple[int, str]] = []
    b1_clamped_steps = 0
    cubic_fallback_steps = 0
    sq_err_sum = 0.0
    diverged = False
    steps_done = 0

    for k in range(1, horizon + 1):
        y_k = loop.y_hist[0]
        y_star_k = config.reference.value(k)
        y_star_next = config.reference.value(k + 1)

        if in_startup:
            if loop.gram.count >= startup_min:
                eig = eigen_extremes(loop.gram.gram)
                mean_diag = float(np.trace(loop.gram.gram)) / r
                if eig.lambda_min > FULL_RANK_FRACTION * mean_diag:
                    in_startup = False
            if in_startup:
                startup_steps += 1

        if in_startup:
            u0 = 0.0
        else:
            theta_est = ls_estimate(loop.gram, ridge_floor=config.ridge_floor).theta
            if is_arx:
                phi_zeroed = _phi_arx(plant, loop.y_hist, loop.u_hist, 0.0)
                u0, clamped = str_control_linear(
                    theta_est, phi_zeroed, y_star_next, config.b1_floor, u_index=p
                )
                if clamped:
                    b1_clamped_steps += 1
            else:
                s = plant.s
                c1 = float(theta_est[p])
                c2 = float(theta_est[p + 1]) if s >= 2 else 0.0
                c3 = float(theta_est[p + 2]) if s >= 3 else 0.0
                c0 = float(theta_est[:p] @ loop.y_hist) - y_star_next
                try:
                    u0 = cubic_real_solution(c3, c2, c1, c0)
                except (NoRealRootError, ValueError):
                    u0 = prev_u0
                    cubic_fallback_steps += 1

        scale = loop.r_excite ** (-config.epsilon_bar / 2.0)
        u_k = diminishing_excitation(u0, dither[k - 1], loop.r_excite, config.epsilon_bar)

        phi = (
            _phi_arx(plant, loop.y_hist, loop.u_hist, u_k)
            if is_arx
            else _phi_poly(plant, loop.y_hist, u_k)
        )
        y_next = float(theta_true @ phi) + noise[k]

        ys[k - 1] = y_k
        y_stars[k - 1] = y_star_k
        u0s[k - 1] = u0
        us[k - 1] = u_k
        scales[k - 1] = scale
        sq_err_sum += (y_k - y_star_k) ** 2
        tracking[k - 1] = sq_err_sum / k
        regressors[k - 1] = phi
        outputs[k - 1] = y_next
        steps_done = k
        prev_u0 = u0

        if abs(y_next) > OVERFLOW_GUARD:
            diverged = True
            break

        loop.absorb(phi, y_next)

        if loop.gram.count in checkpoints_wanted:
            eig = eigen_extremes(loop.gram.gram)
            lam_min = eig.lambda_min if eig.lambda_min > 0.0 else None
            try:
                lam = lambda_value(config.lambda_schedule, loop.gram.count, lam_min)
            except ValueError:
                skipped.append((loop.gram.count, "lambda schedule needs positive lambda_min"))
                lam = None
            if lam is not None:
                result = sparse_checkpoint(
                    loop.gram,
                    lam,
                    eig=eig,
                    ridge_floor=config.ridge_floor,
                    weight_cap=config.weight_cap,
                    tol=config.solver_tol,
                    max_iters=config.solver_max_iters,
                    warm_start=warm,
                )
                if result is None:
                    skipped.append((loop.gram.count, "statistics not ready for sparse step"))
                else:
                    warm = result.bundle.sparse
                    loop.estimates = result.bundle
                    checkpoints.append(
                        CheckpointRecord(
                            n=loop.gram.count,
                            lambda_n=float(lam),
                            eig=result.eig,
                            bundle=result.bundle,
                            kkt_residual=result.kkt_residual,
                            converged=result.converged,
                            ls_regularized=result.ls_regularized,
                        )
                    )

    n = steps_done
    return RunRecord(
        seed=int(seed),
        ks=ks[:n],
        y=ys[:n],
        y_star=y_stars[:n],
        u0=u0s[:n],
        u=us[:n],
        dither_scale=scales[:n],
        tracking=tracking[:n],
        b1_clamped_steps=b1_clamped_steps,
        cubic_fallback_steps=cubic_fallback_steps,
        startup_steps=startup_steps,
        checkpoints=checkpoints,
        skipped_checkpoints=skipped,
        regressors=regressors[:n],
        outputs=outputs[:n],
        diverged=diverged,
    )
