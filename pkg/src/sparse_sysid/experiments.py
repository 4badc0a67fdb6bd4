"""Seeded Monte Carlo experiments and their CSV/JSON artifacts.

Two canned experiments are provided: open-loop identification of a sparse
6th-degree polynomial Hammerstein system (``example1``) and closed-loop
identification of a cubic plant under self-tuning regulation with diminishing
excitation (``example2``).  Each runs a list of seeds, writes per-seed CSV
traces plus aggregate summaries, and is reproducible byte for byte from
``(config, seeds)``.

Reproducibility contract: every random stream is a NumPy PCG64 generator
keyed by ``SeedSequence([seed, stream_index])``, where ``stream_index``
separates input/noise/dither draws; variates use NumPy's standard
transformations.  Bit-exact outputs are promised within this implementation
only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from .estimation import GramState, eigen_extremes, gram_accumulate
from .hammerstein import (
    Dataset,
    Gaussian,
    HammersteinSpec,
    SimulationDiverged,
    Uniform,
    simulate_hammerstein,
)
from .pipeline import CheckpointEstimate, sparse_checkpoint
from .schedules import LambdaSchedule, assumption_report, irrepresentable_check, lambda_value
from .str_loop import RunRecord, SquareWave, StrConfig, run_str

FloatArray = NDArray[np.float64]

__all__ = [
    "ExperimentConfig",
    "SummaryReport",
    "OfflineCheckpoint",
    "example1_spec",
    "example1_truth",
    "example1_zero_coords",
    "example2_plant",
    "example2_truth",
    "example2_zero_coords",
    "example2_config",
    "default_config",
    "offline_checkpoints",
    "run_example1",
    "run_example2",
    "diagnose",
]

DEFAULT_SEEDS = tuple(range(1, 21))
DEFAULT_CHECKPOINTS = (125, 250, 500, 1000, 2000, 3000)
DEFAULT_HORIZON = 3000


def example1_spec() -> HammersteinSpec:
    """Sparse 6th-degree polynomial Hammerstein benchmark system.

    Two output lags (coefficients written in the direct one-step convention),
    two input channels, and a degree-6 polynomial nonlinearity whose even
    coefficients are zero; input uniform on [-5, 5], unit Gaussian noise.
    """
    return HammersteinSpec(
        a=np.array([1.5, -0.56]),
        b=np.array([1.0, -2.0]),
        d=np.array([1.0, 0.0, 0.2, 0.0, 0.009, 0.0]),
        basis=None,
        input_law=Uniform(-5.0, 5.0),
        noise_law=Gaussian(0.0, 1.0),
    )


def example1_truth() -> FloatArray:
    return example1_spec().theta


def example1_zero_coords() -> frozenset[int]:
    """1-indexed zero coordinates of the benchmark's coefficient vector."""
    truth = example1_truth()
    return frozenset(int(j) + 1 for j in np.flatnonzero(truth == 0.0))


def example2_plant() -> HammersteinSpec:
    """Cubic single-channel plant regulated in closed loop.

    One output lag, one input channel with gain 2, nonlinearity
    ``u + u^3`` (the quadratic coefficient is the zero to be discovered),
    Gaussian noise with variance 0.025.
    """
    return HammersteinSpec(
        a=np.array([0.5]),
        b=np.array([2.0]),
        d=np.array([1.0, 0.0, 1.0]),
        basis=None,
        input_law=Uniform(-1.0, 1.0),  # unused in closed loop
        noise_law=Gaussian(0.0, 0.025),
    )


def example2_truth() -> FloatArray:
    return example2_plant().theta


def example2_zero_coords() -> frozenset[int]:
    truth = example2_truth()
    return frozenset(int(j) + 1 for j in np.flatnonzero(truth == 0.0))


def example2_config(
    horizon: int = DEFAULT_HORIZON,
    lambda_schedule: LambdaSchedule | None = None,
    *,
    ridge_floor: float = 1e-10,
    solver_tol: float = 1e-10,
    solver_max_iters: int = 100_000,
    weight_cap: float = 1e12,
) -> StrConfig:
    """Closed-loop configuration for the cubic benchmark.

    Square-wave reference of levels +-1 with half period 500, dither uniform
    on [-0.1, 0.1] with decay exponent 1/15.  The default regularization
    exponent 0.8 equals ``1 - (3/2) * eps * (t + 1)`` for ``eps = 1/15`` and
    ``t = 1`` (the nominal order figure for this plant).
    """
    if lambda_schedule is None:
        lambda_schedule = LambdaSchedule("power_of_n", 0.8)
    return StrConfig(
        plant=example2_plant(),
        reference=SquareWave(high=1.0, low=-1.0, half_period=500),
        epsilon_bar=1.0 / 15.0,
        horizon=horizon,
        lambda_schedule=lambda_schedule,
        dither_law=Uniform(-0.1, 0.1),
        b1_floor=1e-6,
        ridge_floor=ridge_floor,
        solver_tol=solver_tol,
        solver_max_iters=solver_max_iters,
        weight_cap=weight_cap,
    )


@dataclass
class ExperimentConfig:
    """Seeded Monte Carlo experiment description (JSON round-trippable)."""

    experiment: str
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    horizon: int = DEFAULT_HORIZON
    checkpoint_schedule: tuple[int, ...] = DEFAULT_CHECKPOINTS
    lambda_schedule: LambdaSchedule | None = None
    ridge_floor: float = 1e-10
    solver_tol: float = 1e-10
    solver_max_iters: int = 100_000
    weight_cap: float = 1e12
    irrepresentable_eta: float = 0.1
    output_dir: str | None = None

    def __post_init__(self) -> None:
        if self.experiment not in ("example1", "example2"):
            raise ValueError(f"unknown experiment {self.experiment!r}")
        self.seeds = tuple(int(s) for s in self.seeds)
        if not self.seeds:
            raise ValueError("need at least one seed")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be distinct")
        self.checkpoint_schedule = tuple(sorted(int(n) for n in self.checkpoint_schedule))
        if not self.checkpoint_schedule:
            raise ValueError("need at least one checkpoint")
        if self.horizon < max(self.checkpoint_schedule):
            raise ValueError(
                f"horizon {self.horizon} is below the largest checkpoint "
                f"{max(self.checkpoint_schedule)}"
            )
        if self.lambda_schedule is None:
            exponent = 0.75 if self.experiment == "example1" else 0.8
            self.lambda_schedule = LambdaSchedule("power_of_n", exponent)

    def to_json(self) -> str:
        payload = {
            "experiment": self.experiment,
            "seeds": list(self.seeds),
            "horizon": self.horizon,
            "checkpoint_schedule": list(self.checkpoint_schedule),
            "lambda_schedule": self.lambda_schedule.to_dict(),
            "ridge_floor": self.ridge_floor,
            "solver_tol": self.solver_tol,
            "solver_max_iters": self.solver_max_iters,
            "weight_cap": self.weight_cap,
            "irrepresentable_eta": self.irrepresentable_eta,
            "output_dir": self.output_dir,
        }
        return json.dumps(payload, sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        schedule = data.get("lambda_schedule")
        return cls(
            experiment=data["experiment"],
            seeds=tuple(data.get("seeds", DEFAULT_SEEDS)),
            horizon=int(data.get("horizon", DEFAULT_HORIZON)),
            checkpoint_schedule=tuple(data.get("checkpoint_schedule", DEFAULT_CHECKPOINTS)),
            lambda_schedule=LambdaSchedule.from_dict(schedule) if schedule else None,
            ridge_floor=float(data.get("ridge_floor", 1e-10)),
            solver_tol=float(data.get("solver_tol", 1e-10)),
            solver_max_iters=int(data.get("solver_max_iters", 100_000)),
            weight_cap=float(data.get("weight_cap", 1e12)),
            irrepresentable_eta=float(data.get("irrepresentable_eta", 0.1)),
            output_dir=data.get("output_dir"),
        )


def default_config(experiment: str, **overrides) -> ExperimentConfig:
    return ExperimentConfig(experiment=experiment, **overrides)


@dataclass(frozen=True)
class OfflineCheckpoint:
    """One checkpoint of the offline pipeline over a fixed dataset."""

    n: int
    lambda_n: float | None
    eig: object  # EigenExtremes
    estimate: CheckpointEstimate | None
    skip_reason: str | None


def offline_checkpoints(
    dataset: Dataset,
    checkpoints: tuple[int, ...],
    lambda_schedule: LambdaSchedule,
    *,
    ridge_floor: float = 1e-10,
    solver_tol: float = 1e-10,
    solver_max_iters: int = 100_000,
    weight_cap: float = 1e12,
) -> list[OfflineCheckpoint]:
    """Stream a dataset through the statistics and run the pipeline at each checkpoint.

    Successive solves are warm started from the previous checkpoint's
    solution.  Checkpoints beyond the dataset length are ignored.
    """
    wanted = set(int(n) for n in checkpoints)
    state = GramState.empty(dataset.dim)
    warm = None
    records: list[OfflineCheckpoint] = []
    for i in range(len(dataset)):
        state = gram_accumulate(state, dataset.regressors[i], dataset.outputs[i])
        if state.count not in wanted:
            continue
        eig = eigen_extremes(state.gram)
        lam_min = eig.lambda_min if eig.lambda_min > 0.0 else None
        try:
            lam = lambda_value(lambda_schedule, state.count, lam_min)
        except ValueError:
            records.append(
                OfflineCheckpoint(state.count, None, eig, None, "lambda schedule needs positive lambda_min")
            )
            continue
        result = sparse_checkpoint(
            state,
            lam,
            eig=eig,
            ridge_floor=ridge_floor,
            weight_cap=weight_cap,
            tol=solver_tol,
            max_iters=solver_max_iters,
            warm_start=warm,
        )
        if result is None:
            records.append(
                OfflineCheckpoint(state.count, lam, eig, None, "statistics not ready for sparse step")
            )
            continue
        warm = result.bundle.sparse
        records.append(OfflineCheckpoint(state.count, lam, eig, result, None))
    return records


@dataclass
class SummaryReport:
    """Aggregate view of one Monte Carlo experiment (JSON serializable)."""

    experiment: str
    seeds: list[int]
    failed_seeds: list[int]
    checkpoints: list[int]
    # {checkpoint -> {seed -> sorted zero set}}
    support_sets: dict
    # {checkpoint -> {coord -> frequency the coord was reported zero among succeeded seeds}}
    zero_frequency: dict
    # {checkpoint -> fraction of succeeded seeds whose zero set equals the truth}
    exact_set_frequency: dict
    # abs error quantiles of the sparse estimate over true-nonzero coords, final checkpoint
    nonzero_error_quantiles: dict
    # {checkpoint -> median assumption ratios across seeds}
    assumption_trends: dict
    # example2 only: tracking-loss quantiles and stability data
    tracking_quantiles: dict | None = None
    extras: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n")


def _fmt(value: float) -> str:
    return repr(float(value))


def _checkpoint_csv_lines(records: list[OfflineCheckpoint], truth: FloatArray) -> list[str]:
    lines = ["N,coord_index,ls,modified,sparse,in_support_zero,truth"]
    for record in records:
        if record.estimate is None:
            continue
        bundle = record.estimate.bundle
        for j in range(len(bundle.ls)):
            lines.append(
                f"{record.n},{j + 1},{_fmt(bundle.ls[j])},{_fmt(bundle.modified[j])},"
                f"{_fmt(bundle.sparse[j])},{1 if (j + 1) in bundle.support_zero else 0},"
                f"{_fmt(truth[j])}"
            )
    return lines


def _diagnostic_rows(
    seed: int,
    records: list[OfflineCheckpoint],
    support: frozenset[int],
    signs: FloatArray,
    eta: float,
) -> list[str]:
    rows = []
    for record in records:
        n = record.n
        eig = record.eig
        available = (
            record.lambda_n is not None
            and eig.lambda_min > 0.0
            and eig.lambda_max > 1.0
        )
        if available:
            report = assumption_report(eig, record.lambda_n, n)
            a3, a41, a42 = report.a3_ratio, report.a4_ratio_1, report.a4_ratio_2
            ratios = f"{_fmt(a3)},{_fmt(a41)},{_fmt(a42)}"
        else:
            ratios = ",,"
        try:
            irrep = irrepresentable_check(
                _gram_of(record), support, signs, eta=eta
            )
            irrep_txt = f"{1 if irrep.passed else 0},{_fmt(irrep.max_violation)}"
        except ValueError:
            irrep_txt = ","
        rows.append(f"{seed},{n},{ratios},{irrep_txt},{1 if available else 0}")
    return rows


def _gram_of(record: OfflineCheckpoint):
    # Diagnostics need the Gram at the checkpoint; stash it on the record.
    return record.gram  # type: ignore[attr-defined]


@dataclass(frozen=True)
class _DiagCheckpoint(OfflineCheckpoint):
    gram: FloatArray = None  # type: ignore[assignment]


def _with_gram(record: OfflineCheckpoint, gram: FloatArray) -> "_DiagCheckpoint":
    return _DiagCheckpoint(
        n=record.n,
        lambda_n=record.lambda_n,
        eig=record.eig,
        estimate=record.estimate,
        skip_reason=record.skip_reason,
        gram=gram.copy(),
    )


def _example1_dataset(config: ExperimentConfig, seed: int) -> Dataset:
    spec = example1_spec()
    burn = max(spec.p, spec.q) - 1
    # horizon counts observation pairs, so extend the raw trajectory by the
    # lag-window fill.
    return simulate_hammerstein(spec, config.horizon + burn, seed)


def _offline_with_grams(
    dataset: Dataset, config: ExperimentConfig
) -> list[_DiagCheckpoint]:
    """offline_checkpoints, but each record also carries its Gram matrix."""
    wanted = set(int(n) for n in config.checkpoint_schedule)
    state = GramState.empty(dataset.dim)
    warm = None
    records: list[_DiagCheckpoint] = []
    for i in range(len(dataset)):
        state = gram_accumulate(state, dataset.regressors[i], dataset.outputs[i])
        if state.count not in wanted:
            continue
        eig = eigen_extremes(state.gram)
        lam_min = eig.lambda_min if eig.lambda_min > 0.0 else None
        try:
            lam = lambda_value(config.lambda_schedule, state.count, lam_min)
        except ValueError:
            records.append(
                _with_gram(
                    OfflineCheckpoint(state.count, None, eig, None, "lambda schedule needs positive lambda_min"),
                    state.gram,
                )
            )
            continue
        result = sparse_checkpoint(
            state,
            lam,
            eig=eig,
            ridge_floor=config.ridge_floor,
            weight_cap=config.weight_cap,
            tol=config.solver_tol,
            max_iters=config.solver_max_iters,
            warm_start=warm,
        )
        if result is None:
            records.append(
                _with_gram(
                    OfflineCheckpoint(state.count, lam, eig, None, "statistics not ready for sparse step"),
                    state.gram,
                )
            )
            continue
        warm = result.bundle.sparse
        records.append(_with_gram(OfflineCheckpoint(state.count, lam, eig, result, None), state.gram))
    return records


def _aggregate(
    experiment: str,
    config: ExperimentConfig,
    truth: FloatArray,
    zero_coords: frozenset[int],
    per_seed: dict[int, list[_DiagCheckpoint]],
    failed: list[int],
) -> SummaryReport:
    checkpoints = list(config.checkpoint_schedule)
    support_sets: dict = {}
    zero_freq: dict = {}
    exact_freq: dict = {}
    trends: dict = {}
    r = len(truth)
    for n in checkpoints:
        sets_here = {}
        counts = np.zeros(r)
        exact = 0
        solved = 0
        a3s, a41s, a42s = [], [], []
        for seed, records in per_seed.items():
            record = next((c for c in records if c.n == n), None)
            if record is None or record.estimate is None:
                continue
            solved += 1
            zero_set = record.estimate.bundle.support_zero
            sets_here[str(seed)] = sorted(zero_set)
            for j in zero_set:
                counts[j - 1] += 1
            if zero_set == zero_coords:
                exact += 1
            if record.eig.lambda_min > 0.0 and record.eig.lambda_max > 1.0:
                report = assumption_report(record.eig, record.lambda_n, n)
                a3s.append(report.a3_ratio)
                a41s.append(report.a4_ratio_1)
                a42s.append(report.a4_ratio_2)
        support_sets[str(n)] = sets_here
        if solved:
            zero_freq[str(n)] = {str(j + 1): counts[j] / solved for j in range(r)}
            exact_freq[str(n)] = exact / solved
        if a3s:
            trends[str(n)] = {
                "a3_ratio": float(np.median(a3s)),
                "a4_ratio_1": float(np.median(a41s)),
                "a4_ratio_2": float(np.median(a42s)),
            }

    final_n = checkpoints[-1]
    nonzero_idx = [j for j in range(r) if (j + 1) not in zero_coords]
    per_seed_max_err = []
    for seed, records in per_seed.items():
        record = next((c for c in records if c.n == final_n), None)
        if record is None or record.estimate is None:
            continue
        err = np.abs(record.estimate.bundle.sparse[nonzero_idx] - truth[nonzero_idx])
        per_seed_max_err.append(float(np.max(err)))
    quantiles = {}
    if per_seed_max_err:
        arr = np.array(per_seed_max_err)
        quantiles = {
            "q0": float(np.min(arr)),
            "q50": float(np.quantile(arr, 0.5)),
            "q90": float(np.quantile(arr, 0.9)),
            "q100": float(np.max(arr)),
        }

    return SummaryReport(
        experiment=experiment,
        seeds=list(config.seeds),
        failed_seeds=failed,
        checkpoints=checkpoints,
        support_sets=support_sets,
        zero_frequency=zero_freq,
        exact_set_frequency=exact_freq,
        nonzero_error_quantiles=quantiles,
        assumption_trends=trends,
    )


def run_example1(config: ExperimentConfig, out_dir: str | Path) -> SummaryReport:
    """Open-loop benchmark: simulate, estimate at checkpoints, aggregate.

    Writes, under ``out_dir``: per-seed ``seed_<s>_checkpoints.csv``,
    ``ls_vs_sparse.csv`` (the zero-coordinate comparison table),
    ``diagnostics.csv``, ``support_frequency.csv``, ``summary.json`` and
    ``config.json``.
    """
    if config.experiment != "example1":
        raise ValueError(f"config is for {config.experiment!r}, expected 'example1'")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    truth = example1_truth()
    zero_coords = example1_zero_coords()
    support = frozenset(j for j in range(1, len(truth) + 1) if j not in zero_coords)
    signs = np.where(truth >= 0.0, 1.0, -1.0)

    per_seed: dict[int, list[_DiagCheckpoint]] = {}
    failed: list[int] = []
    compare_lines = ["seed,N,coord_index,ls,sparse"]
    diag_lines = [
        "seed,n,a3_ratio,a4_ratio_1,a4_ratio_2,irrep_passed,irrep_max_violation,available"
    ]
    for seed in config.seeds:
        try:
            dataset = _example1_dataset(config, seed)
        except SimulationDiverged:
            failed.append(seed)
            continue
        records = _offline_with_grams(dataset, config)
        per_seed[seed] = records
        (out / f"seed_{seed}_checkpoints.csv").write_text(
            "\n".join(_checkpoint_csv_lines(records, truth)) + "\n"
        )
        for record in records:
            if record.estimate is None:
                continue
            bundle = record.estimate.bundle
            for j in sorted(zero_coords):
                compare_lines.append(
                    f"{seed},{record.n},{j},{_fmt(bundle.ls[j - 1])},{_fmt(bundle.sparse[j - 1])}"
                )
        diag_lines.extend(_diagnostic_rows(seed, records, support, signs, config.irrepresentable_eta))

    (out / "ls_vs_sparse.csv").write_text("\n".join(compare_lines) + "\n")
    (out / "diagnostics.csv").write_text("\n".join(diag_lines) + "\n")

    summary = _aggregate("example1", config, truth, zero_coords, per_seed, failed)
    freq_lines = ["N,coord_index,zero_frequency"]
    for n in config.checkpoint_schedule:
        freqs = summary.zero_frequency.get(str(n))
        if not freqs:
            continue
        for j in range(1, len(truth) + 1):
            freq_lines.append(f"{n},{j},{_fmt(freqs[str(j)])}")
    (out / "support_frequency.csv").write_text("\n".join(freq_lines) + "\n")
    summary.write(out / "summary.json")
    (out / "config.json").write_text(config.to_json() + "\n")
    return summary


def run_example2(config: ExperimentConfig, out_dir: str | Path) -> SummaryReport:
    """Closed-loop benchmark: run the regulator per seed and aggregate.

    Adds, on top of the example1 artifact set, per-seed ``seed_<s>_run.csv``
    traces and tracking/stability aggregates in the summary.
    """
    if config.experiment != "example2":
        raise ValueError(f"config is for {config.experiment!r}, expected 'example2'")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    truth = example2_truth()
    zero_coords = example2_zero_coords()
    support = frozenset(j for j in range(1, len(truth) + 1) if j not in zero_coords)
    signs = np.where(truth >= 0.0, 1.0, -1.0)

    str_config = example2_config(
        horizon=config.horizon,
        lambda_schedule=config.lambda_schedule,
        ridge_floor=config.ridge_floor,
        solver_tol=config.solver_tol,
        solver_max_iters=config.solver_max_iters,
        weight_cap=config.weight_cap,
    )

    per_seed: dict[int, list[_DiagCheckpoint]] = {}
    runs: dict[int, RunRecord] = {}
    failed: list[int] = []
    diag_lines = [
        "seed,n,a3_ratio,a4_ratio_1,a4_ratio_2,irrep_passed,irrep_max_violation,available"
    ]
    compare_lines = ["seed,N,coord_index,ls,sparse"]
    for seed in config.seeds:
        record = run_str(str_config, seed, checkpoint_schedule=config.checkpoint_schedule)
        if record.diverged:
            failed.append(seed)
            continue
        runs[seed] = record
        record.to_run_csv(out / f"seed_{seed}_run.csv")
        record.to_checkpoint_csv(out / f"seed_{seed}_checkpoints.csv", truth=truth)
        # Re-express the run's checkpoints in the offline record shape so the
        # aggregation and diagnostics code is shared with example1.
        state = GramState.empty(record.regressors.shape[1])
        offline: list[_DiagCheckpoint] = []
        by_n = {c.n: c for c in record.checkpoints}
        wanted = set(config.checkpoint_schedule)
        for i in range(len(record.outputs)):
            state = gram_accumulate(state, record.regressors[i], record.outputs[i])
            if state.count in wanted and state.count in by_n:
                c = by_n[state.count]
                estimate = CheckpointEstimate(
                    bundle=c.bundle,
                    eig=c.eig,
                    ls_regularized=c.ls_regularized,
                    kkt_residual=c.kkt_residual,
                    converged=c.converged,
                    iterations=0,
                )
                offline.append(
                    _with_gram(OfflineCheckpoint(c.n, c.lambda_n, c.eig, estimate, None), state.gram)
                )
        per_seed[seed] = offline
        for c in record.checkpoints:
            for j in sorted(zero_coords):
                compare_lines.append(
                    f"{seed},{c.n},{j},{_fmt(c.bundle.ls[j - 1])},{_fmt(c.bundle.sparse[j - 1])}"
                )
        diag_lines.extend(_diagnostic_rows(seed, offline, support, signs, config.irrepresentable_eta))

    (out / "ls_vs_sparse.csv").write_text("\n".join(compare_lines) + "\n")
    (out / "diagnostics.csv").write_text("\n".join(diag_lines) + "\n")

    summary = _aggregate("example2", config, truth, zero_coords, per_seed, failed)
    losses = [runs[s].final_tracking_loss for s in config.seeds if s in runs]
    if losses:
        arr = np.array(losses)
        summary.tracking_quantiles = {
            "q0": float(np.min(arr)),
            "q50": float(np.quantile(arr, 0.5)),
            "q90": float(np.quantile(arr, 0.9)),
            "q100": float(np.max(arr)),
        }
    stability = {}
    for seed, record in runs.items():
        energy = record.u**2 + record.y**2
        k = len(energy)
        half = k // 2
        if half >= 1:
            mean_half = float(np.mean(energy[:half]))
            mean_full = float(np.mean(energy))
            stability[str(seed)] = {
                "mean_energy_half": mean_half,
                "mean_energy_full": mean_full,
                "ratio": mean_full / mean_half if mean_half > 0 else float("inf"),
            }
    summary.extras = {
        "stability": stability,
        "b1_clamped_steps": {str(s): runs[s].b1_clamped_steps for s in runs},
        "cubic_fallback_steps": {str(s): runs[s].cubic_fallback_steps for s in runs},
        "startup_steps": {str(s): runs[s].startup_steps for s in runs},
    }
    summary.write(out / "summary.json")
    (out / "config.json").write_text(config.to_json() + "\n")
    return summary


def diagnose(config: ExperimentConfig, out_dir: str | Path) -> Path:
    """Emit only the assumption/irrepresentable diagnostic CSV for an experiment."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if config.experiment == "example1":
        truth = example1_truth()
        zero_coords = example1_zero_coords()
    else:
        truth = example2_truth()
        zero_coords = example2_zero_coords()
    support = frozenset(j for j in range(1, len(truth) + 1) if j not in zero_coords)
    signs = np.where(truth >= 0.0, 1.0, -1.0)

    diag_lines = [
        "seed,n,a3_ratio,a4_ratio_1,a4_ratio_2,irrep_passed,irrep_max_violation,available"
    ]
    str_config = None
    if config.experiment == "example2":
        str_config = example2_config(
            horizon=config.horizon,
            lambda_schedule=config.lambda_schedule,
            ridge_floor=config.ridge_floor,
            solver_tol=config.solver_tol,
            solver_max_iters=config.solver_max_iters,
            weight_cap=config.weight_cap,
        )
    for seed in config.seeds:
        if config.experiment == "example1":
            try:
                dataset = _example1_dataset(config, seed)
            except SimulationDiverged:
                continue
            records = _offline_with_grams(dataset, config)
        else:
            record = run_str(str_config, seed, checkpoint_schedule=config.checkpoint_schedule)
            if record.diverged:
                continue
            dataset = Dataset(
                regressors=record.regressors,
                outputs=record.outputs,
                ks=record.ks,
                meta={"seed": seed},
            )
            records = _offline_with_grams(dataset, config)
        diag_lines.extend(_diagnostic_rows(seed, records, support, signs, config.irrepresentable_eta))
    path = out / "diagnostics.csv"
    path.write_text("\n".join(diag_lines) + "\n")
    return path
