"""Empirical root-n consistency of the Liu-rescaled LASSO.

With the l1 penalty vanishing at rate 1/n, the scaled estimation error
sqrt(n) * ||beta_hat - beta|| should stabilize as the sample grows.  The
harness reports its median over replications for increasing training
sizes; a bounded profile is the empirical signature of the root-n rate.
"""

from llasso import consistency_harness, design_example

rows = consistency_harness(design_example(1), [50, 100, 200, 400, 800],
                           reps=100, seed=99)
print(f"{'n':>6} {'median sqrt(n)*||error||':>26}")
for n, stat in rows:
    print(f"{n:6d} {stat:26.4f}")

stats = [s for _, s in rows]
print(f"\nmax/min ratio across sizes: {max(stats) / min(stats):.3f} "
      "(flat profile = root-n scaling)")
