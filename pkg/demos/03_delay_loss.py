"""
Loss in long delays
===================

Fiber at 0.2 dB/km with 1 ns bins loses a tiny fraction per bin, but z
fusions wait L^2 bins.  Loss turns into fusion erasure, which the
four-qubit encoding then suppresses.
"""

from interleaving.noise import (
    NoiseParams, delay_loss, directional_erasure, encoded_fusion_erasure, noise_table,
    per_bin_loss, physical_fusion_erasure,
)

p_clock = per_bin_loss(0.2, 0.2)
print(f"loss per bin: {p_clock:.3e}")

for L in (1, 32, 71, 100):
    print(f"L={L:3d}: longest delay {L * L:5d} bins loses {100 * delay_loss(p_clock, L * L):.4f}%")

###############################################################################
# Without loss a boosted fusion still fails a quarter of the time and then
# erases one of its two outcomes at random.

print("lossless p0:", physical_fusion_erasure(NoiseParams(0.0), 0))
print("encoded:", encoded_fusion_erasure(0.125), "= 11/256 =", 11 / 256)

###############################################################################
# Erasure probability per fusion direction at a baseline loss near threshold.

params = NoiseParams(0.02, p_clock)
for L in (1, 71, 100):
    e = directional_erasure(params, L)
    print(f"L={L:3d}: p_x={e.p_x:.4f} p_y={e.p_y:.4f} p_z={e.p_z:.4f}")

for row in noise_table(NoiseParams(0.0, p_clock), [1, 1024, 5041, 10000]):
    print(row)
