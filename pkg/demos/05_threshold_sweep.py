"""
Threshold from a sweep
======================

Logical error rates for several block sizes are fitted with a scaled beta
CDF and the threshold is the mean of the pairwise crossings.  This small
sweep runs in seconds; ``interleaving run-sweep`` and
``interleaving reproduce-table2`` run the desk-scale versions.
"""

from interleaving.experiment import SweepSpec, csv_text, run_sweep

spec = SweepSpec.grid(L=1, distances=(6, 8), start=0.015, stop=0.045, step=0.0075,
                      trials=400, seed=1, n_boot=20)
result = run_sweep(spec)
print(csv_text(result.points))

th = result.threshold
for d, fit in th.fits.items():
    print(f"d={d}: " + ", ".join(f"{k}={v:.4g}" for k, v in fit.to_dict().items()))
print(f"threshold {100 * th.threshold:.2f}% +/- {100 * th.stderr:.2f} (bootstrap)")

###############################################################################
# The same data crossed by straight-line interpolation, as a cross-check.

from interleaving.fitting import interpolation_threshold

print(f"interpolated: {100 * interpolation_threshold(result.data()).threshold:.2f}%")
