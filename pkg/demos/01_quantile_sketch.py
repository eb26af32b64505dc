"""Watch a constant-memory sketch track the quantiles of a scalar stream.

The sketch keeps 16 running estimates and never stores samples. We feed it
a lognormal stream, then compare its quantile curve and CDF reads against
exact values computed from a full buffer of the same data.
"""

import numpy as np

from streamtree import QuantileSketch

rng = np.random.default_rng(7)
stream = rng.lognormal(mean=0.0, sigma=0.75, size=30_000)

sketch = QuantileSketch(n_quantiles=16, step=0.01)
for x in stream:
    sketch.update(float(x))

print(f"absorbed {sketch.count} samples into {sketch.estimates.nbytes} bytes of state\n")

print(f"{'p':>6} {'sketch':>9} {'exact':>9} {'abs err':>9}")
for p in (0.1, 0.25, 0.5, 0.75, 0.9):
    approx = sketch.estimate(p)
    exact = float(np.quantile(stream, p))
    print(f"{p:>6.2f} {approx:>9.4f} {exact:>9.4f} {abs(approx - exact):>9.4f}")

print("\ninverse reads (estimated CDF vs empirical):")
for v in (0.5, 1.0, 2.0, 4.0):
    est = sketch.cdf_estimate(v)
    emp = float((stream <= v).mean())
    print(f"  P(x <= {v:.1f}): sketch={est:.3f} empirical={emp:.3f}")

print("\nnote: CDF reads clamp to the tracked target range "
      f"[{sketch.targets[0]:.3f}, {sketch.targets[-1]:.3f}]")
