"""
Syndrome graphs and peeling
===========================

Checks sit on the cubes of the lattice, coloured like a 3D checkerboard.
Each fusion contributes one outcome to a primal and one to a dual check
graph.  An erased outcome is a coin flip; peeling a spanning forest of the
erased edges finds a correction and the residual is a logical error when it
crosses a membrane an odd number of times.
"""

import numpy as np

from interleaving.decoder import peel_decode, run_trial, sample_erasure, sample_errors, syndrome_of
from interleaving.experiment import estimate_rate
from interleaving.syndrome import build_syndrome_graphs, membrane_parity

primal, dual = build_syndrome_graphs(8)
print(primal.n_vertices, "checks,", primal.n_edges, "edges, degree", set(primal.degrees().tolist()))

rng = np.random.default_rng(7)
erasure = sample_erasure(primal, 0.1, rng)
error = sample_errors(erasure, rng)
syndrome = syndrome_of(primal, error)
correction = peel_decode(primal, erasure, syndrome)
print(f"{erasure.sum()} erased, {error.sum()} flipped, {syndrome.sum()} lit checks")
print("correction inside erasure:", not (correction & ~erasure).any())
print("membrane parity of residual:", membrane_parity(primal, correction ^ error))

###############################################################################
# A trial decodes both graphs.  Every trial owns its random stream, so the
# result depends only on (seed, point, trial index).

print(run_trial(primal, dual, 0.1, seed=3, point_id=(1,), trial=0))

for p in (0.08, 0.12, 0.16):
    pt = estimate_rate(1, 8, 0.0, 1000, probs=(p, p, p))
    print(f"erasure {p:.2f}: logical error rate {pt.rate:.3f} [{pt.ci_lo:.3f}, {pt.ci_hi:.3f}]")
