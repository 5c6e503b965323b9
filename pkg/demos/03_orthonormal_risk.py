"""Exact risk of the scaled soft threshold versus Monte Carlo.

Under an orthonormal design the Liu-rescaled LASSO acts coordinatewise as
c_d * soft(z, t).  This script sweeps the threshold for several biasing
parameters, prints the closed-form risk next to a Monte Carlo estimate,
and tabulates the per-coordinate risk bound in its valid small-mean range.
If matplotlib is importable, the risk curves are also saved as a PNG.
"""

import numpy as np

from llasso import OrthoConfig, coordinate_mse_mc, mc_risk, risk_bound, risk_closed_form

means = np.array([0.0, 1.0, 2.0])
thresholds = np.linspace(0.0, 2.5, 6)

print("risk of the scaled soft threshold about its scaled means")
print(f"{'threshold':>9} {'d':>5} {'closed form':>12} {'monte carlo':>12} {'3*se':>8}")
curves = {}
for d in (0.2, 0.6, 1.0):
    vals = []
    for t in thresholds:
        cfg = OrthoConfig(means=means, threshold=float(t), d=d)
        cf = risk_closed_form(cfg)
        est, se = mc_risk(cfg, 200_000, seed=int(1000 * t) + int(100 * d))
        vals.append(cf)
        print(f"{t:9.2f} {d:5.1f} {cf:12.5f} {est:12.5f} {3 * se:8.5f}")
    curves[d] = vals

print("\nper-coordinate bound at the tail-probability threshold "
      "(valid for small standardized means):")
delta = 0.1
t = np.sqrt(2 * np.log(1 / delta))
small_means = np.array([0.0, 0.5, 1.0])
for d in (0.2, 0.5, 0.8):
    cfg = OrthoConfig(means=small_means, threshold=t, d=d, tail_prob=delta)
    mse, se = coordinate_mse_mc(cfg, 100_000, seed=5)
    bound = risk_bound(cfg)
    rows = "  ".join(f"mean {m:g}: {v:.3f} <= {b:.3f}"
                     for m, v, b in zip(small_means, mse, bound))
    print(f"  d={d}: {rows}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\nmatplotlib not available; skipping the plot")
else:
    fig, ax = plt.subplots(figsize=(6, 4))
    for d, vals in curves.items():
        ax.plot(thresholds, vals, marker="o", label=f"d = {d}")
    ax.set_xlabel("soft threshold")
    ax.set_ylabel("risk")
    ax.set_title("closed-form risk of the scaled soft threshold")
    ax.legend()
    fig.tight_layout()
    fig.savefig("orthonormal_risk.png", dpi=120)
    print("\nsaved risk curves to orthonormal_risk.png")
