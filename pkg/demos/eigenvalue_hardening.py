#!/usr/bin/env python3
"""
Shows the principal eigenvalue of the cascaded Gram matrix hardening to
its deterministic prediction K/(K+1) * N_S * N_T as the Ricean K-factor
grows, at a fixed RIS size.  Prints one row per K with the Monte Carlo
mean and the normalized error.
"""
import numpy as np

from risopt import db2lin, preset_spec, run_experiment

SCALE = 0.5          # shrink the size grid; keep the full K sweep
TRIALS = 30

spec = preset_spec("fig1c", scale=SCALE, trials=TRIALS)
result = run_experiment(spec)

n_ris = spec.n_ris_list[0]
print(f"RIS elements: {n_ris}, array size: {spec.n_t}, trials: {TRIALS}")
print(f"{'K (dB)':>8} {'K (lin)':>9} {'predicted':>12} "
      f"{'empirical':>12} {'NMSE':>10}")
for agg in sorted(result.aggregates, key=lambda a: a["k_t_db"]):
    k_db = agg["k_t_db"]
    print(f"{k_db:8.2f} {db2lin(k_db):9.3f} {agg['predicted_1']:12.1f} "
          f"{agg['mean_lambda_1']:12.1f} {agg['nmse']:10.2e}")

errs = [a["nmse"] for a in sorted(result.aggregates, key=lambda a: a["k_t_db"])]
print("\nNMSE falls monotonically with K:", bool(np.all(np.diff(errs) < 0)))
print("Once K*N_T >= 10 the per-instance spread is tiny and a single")
print("draw is already close to the prediction (channel hardening).")
