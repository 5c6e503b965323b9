"""A scaled-down run of the Monte Carlo benchmark.

Runs all five simulation designs at 25 replications (the full study uses
250; see the CLI: `llasso simulate --examples 1-5 --reps 250`).  Each
replication draws a train/validation/test triple, tunes every estimator on
the validation set, and scores the noiseless test prediction error and the
coefficient error.  Results are pure functions of the seed.
"""

import os
import time

from llasso import design_example, run_benchmark

designs = [design_example(k) for k in (1, 2, 3, 4, 5)]
t0 = time.perf_counter()
report = run_benchmark(designs, reps=25, seed=2024,
                       workers=min(os.cpu_count() or 1, 4))
print(report.to_table())
print(f"elapsed: {time.perf_counter() - t0:.1f}s "
      f"(reps=25, workers <= 4, seed 2024)")

print("rows also available as CSV via report.to_csv(), and the raw")
print("per-replication vectors via report.to_raw_csv() for external plots")
