"""Self-tuning regulation of a cubic plant with diminishing excitation.

The controller never sees the true parameters: each step it re-estimates
them by least squares, solves the cubic tracking equation for the input that
would put the next output on the reference, and adds a small dither whose
amplitude decays with the accumulated regressor energy.  The script prints
the tracking performance and how the estimates (dense and sparse) evolve.
"""

import numpy as np

from sparse_sysid import run_str, tracking_loss
from sparse_sysid.experiments import example2_config, example2_truth

config = example2_config(horizon=3000)
truth = example2_truth()
print("true parameters [y-lag, u, u^2, u^3]:", truth)
print(f"reference: square wave +/-1, half period {config.reference.half_period}")
print(f"dither: uniform on [{config.dither_law.lo}, {config.dither_law.hi}] "
      f"with decay exponent {config.epsilon_bar:.4f}")
print()

record = run_str(config, seed=1)
print(f"ran {len(record.ks)} steps; startup (pure dither) lasted "
      f"{record.startup_steps} steps; cubic fallbacks: {record.cubic_fallback_steps}")

for k in (100, 500, 1000, 3000):
    window = slice(0, k)
    loss = tracking_loss(record.y[window], record.y_star[window])
    print(f"  mean squared tracking error over first {k:4d} steps: {loss:.4f}")
print(f"noise variance (the asymptotic floor): "
      f"{config.plant.noise_law.var:.4f}; the decaying dither adds a slowly "
      f"vanishing excess on top")
print()

print("estimates along the run (least squares | sparse):")
print("  N      y-lag        u          u^2        u^3     zero set")
for c in record.checkpoints:
    ls = c.bundle.ls
    sp = c.bundle.sparse
    print(f"  {c.n:4d}  "
          + "  ".join(f"{ls[j]:+.3f}/{sp[j]:+.3f}" for j in range(4))
          + f"   {sorted(c.bundle.support_zero)}")

final = record.checkpoints[-1]
print()
print("the quadratic coordinate (true value 0):")
print(f"  least squares keeps it at {final.bundle.ls[2]:+.4e}")
print(f"  the weighted-L1 refinement pins it to {final.bundle.sparse[2]:+.1e}")
print()
print("dither scale decayed from "
      f"{record.dither_scale[0]:.3f} to {record.dither_scale[-1]:.3f}; "
      "input/output energy per step:",
      f"{float(np.mean(record.u**2 + record.y**2)):.3f}")
