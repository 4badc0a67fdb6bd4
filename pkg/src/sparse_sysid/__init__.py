"""Sparse system identification toolkit.

Two-step estimation (least squares, then a weighted-L1 refinement whose
penalty weights come from a zero-free modification of the first step) with
exact-zero support readout, plus simulators for an open-loop Hammerstein
benchmark and a closed-loop self-tuning regulator with diminishing
excitation, and a seeded Monte Carlo experiment harness.
"""

from .estimation import (
    EigenExtremes,
    EstimateBundle,
    GramState,
    LsEstimate,
    eigen_extremes,
    gram_accumulate,
    jacobi_eigh,
    ls_estimate,
    modified_estimate,
)
from .hammerstein import (
    BdFactors,
    Dataset,
    Gaussian,
    HammersteinSpec,
    OverparamMatrix,
    SimulationDiverged,
    Uniform,
    column_support,
    overparam_vector,
    recover_bd,
    simulate_hammerstein,
)
from .pipeline import CheckpointEstimate, sparse_checkpoint
from .schedules import (
    AssumptionReport,
    IrrepresentableResult,
    LambdaSchedule,
    assumption_report,
    irrepresentable_check,
    lambda_value,
)
from .str_loop import (
    ArxSpec,
    CheckpointRecord,
    ConstantReference,
    NoRealRootError,
    RunRecord,
    SquareWave,
    StrConfig,
    StrLoopState,
    cubic_real_solution,
    diminishing_excitation,
    run_str,
    str_control_linear,
    tracking_loss,
)
from .wlasso import (
    LassoSolution,
    WeightedLassoProblem,
    adaptive_weights,
    objective_value,
    solve_weighted_lasso,
    support_set,
)

__version__ = "0.1.0"

__all__ = [
    "AssumptionReport",
    "ArxSpec",
    "BdFactors",
    "CheckpointEstimate",
    "CheckpointRecord",
    "ConstantReference",
    "Dataset",
    "EigenExtremes",
    "EstimateBundle",
    "Gaussian",
    "GramState",
    "HammersteinSpec",
    "IrrepresentableResult",
    "LambdaSchedule",
    "LassoSolution",
    "LsEstimate",
    "NoRealRootError",
    "OverparamMatrix",
    "RunRecord",
    "SimulationDiverged",
    "SquareWave",
    "StrConfig",
    "StrLoopState",
    "Uniform",
    "WeightedLassoProblem",
    "adaptive_weights",
    "assumption_report",
    "column_support",
    "cubic_real_solution",
    "diminishing_excitation",
    "eigen_extremes",
    "gram_accumulate",
    "irrepresentable_check",
    "jacobi_eigh",
    "lambda_value",
    "ls_estimate",
    "modified_estimate",
    "objective_value",
    "overparam_vector",
    "recover_bd",
    "run_str",
    "simulate_hammerstein",
    "solve_weighted_lasso",
    "sparse_checkpoint",
    "str_control_linear",
    "support_set",
    "tracking_loss",
]
