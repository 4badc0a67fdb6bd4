"""Open-loop sparse identification, end to end.

Simulates a polynomial Hammerstein system whose nonlinearity uses only the
odd powers (the even coefficients are exactly zero), then runs the two-step
pipeline - least squares, then the weighted-L1 refinement - at a handful of
checkpoints and prints how the redundant coordinates behave under each
estimator.  Finishes by factoring the estimated product matrix back into the
channel gains and basis coefficients.
"""

import numpy as np

from sparse_sysid import (
    GramState,
    OverparamMatrix,
    column_support,
    eigen_extremes,
    gram_accumulate,
    recover_bd,
    simulate_hammerstein,
    sparse_checkpoint,
)
from sparse_sysid.experiments import example1_spec, example1_truth, example1_zero_coords

spec = example1_spec()
truth = example1_truth()
zero_coords = sorted(example1_zero_coords())

print("true coefficient vector (output lags, then channel x basis products):")
print(" ", np.array2string(truth, precision=3, suppress_small=False))
print("coordinates that are exactly zero:", zero_coords)
print()

dataset = simulate_hammerstein(spec, 3001, seed=1)
print(f"simulated {len(dataset)} observation pairs, regressor dimension {dataset.dim}")

state = GramState.empty(dataset.dim)
warm = None
checkpoints = (250, 1000, 3000)
for i in range(len(dataset)):
    state = gram_accumulate(state, dataset.regressors[i], dataset.outputs[i])
    if state.count not in checkpoints:
        continue
    n = state.count
    result = sparse_checkpoint(state, lambda_n=float(n) ** 0.75, warm_start=warm)
    warm = result.bundle.sparse
    bundle = result.bundle
    eig = result.eig
    print(f"\n--- checkpoint N={n} (lambda={bundle.lambda_n:.1f}, "
          f"lambda_min={eig.lambda_min:.1f}, lambda_max={eig.lambda_max:.3g})")
    print("  coord  truth      least-squares   sparse")
    for j in zero_coords:
        marker = "zeroed" if j in bundle.support_zero else "kept"
        print(f"   {j:3d}   {truth[j-1]:+.3f}   {bundle.ls[j-1]:+12.2e}   "
              f"{bundle.sparse[j-1]:+12.2e}  ({marker})")
    nonzero = [j for j in range(1, dataset.dim + 1) if j not in zero_coords]
    worst = max(abs(bundle.sparse[j - 1] - truth[j - 1]) for j in nonzero)
    print(f"  reported zero set: {sorted(bundle.support_zero)}")
    print(f"  worst error over truly-nonzero coordinates: {worst:.4f}")

# Factor the product block of the final sparse estimate back into (b, d).
final = warm
m_est = OverparamMatrix.from_estimate(final, p=spec.p, q=spec.q, s=spec.s)
factors = recover_bd(m_est)
print("\nrank-1 factorization of the estimated product matrix:")
print("  channel gains   :", np.array2string(factors.b, precision=4))
print("  basis weights   :", np.array2string(factors.d, precision=4))
print("  reconstruction residual:", f"{factors.residual:.3e}")
print("  zero columns of the product matrix:", sorted(column_support(m_est)))
print("\nNote: with this input law the 6th-power coordinates carry enormous")
print("second moments, so their penalty-to-noise crossover sits far beyond")
print("N=3000; expect them to stay nonzero-but-tiny here and vanish only on")
print("much longer runs.")
