#!/usr/bin/env python3
"""
Compares the channel gain reached by one-shot Sign Alignment against the
asymptotic quarter-law lower bound and against iterative manifold
optimization, on Rayleigh channels (K = 0 so the bound uses only array
sizes).  SA needs a single pass over the element gains; RMO runs a
projected-gradient ascent with line search and then quantizes to 1 bit.
"""
import math

from risopt import preset_spec, run_experiment

SCALE = 0.25         # 1024, 4096 -> 256, 1024 elements
TRIALS = 10

spec = preset_spec("fig2b", scale=SCALE, trials=TRIALS, rmo_max_iters=100)
result = run_experiment(spec)

print(f"arrays: {spec.n_t}x{spec.n_r}, trials per size: {TRIALS}")
print(f"{'N_S':>6} {'bound':>12} {'SA mean':>12} {'RMO mean':>12} "
      f"{'SA/bound':>9} {'SA/RMO':>8}")
for agg in result.aggregates:
    sa, rmo, lb = agg["mean_gain_sa"], agg["mean_gain_rmo"], agg["lower_bound"]
    print(f"{agg['n_ris']:>6} {lb:12.4g} {sa:12.4g} {rmo:12.4g} "
          f"{10 * math.log10(sa / lb):8.2f}dB "
          f"{10 * math.log10(sa / rmo):+7.2f}dB")

print("\nSA lands a couple of dB above the quarter-law bound and within")
print("a fraction of a dB of the iterative optimizer, at a tiny fraction")
print("of its cost (see demos/runtime_comparison.py).")
