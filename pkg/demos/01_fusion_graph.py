"""
Cubic fusion graphs
===================

Every resource state is a vertex of a simple cubic lattice and each of its
six qubits is fused with a neighbour.  A slice of the lattice perpendicular
to z is what a row of RSGs emits in one clock cycle.
"""

from interleaving.fusion_graph import OPEN, PERIODIC, HalfEdge, build_cubic, slices

# a 4x4x4 block with periodic boundaries: three fusions per resource state
block = build_cubic((4, 4, 4))
print(block.n_vertices, "resource states,", len(block.edges), "fusions")

# the x- neighbour of the origin wraps around to the far face
print("x- partner of (0,0,0):", block.position(block.partner((0, 0, 0), "x-")))

###############################################################################
# Open boundaries leave unpaired qubits; they become single-qubit
# measurements (half-edges).

slab = build_cubic((8, 8, 3), (PERIODIC, PERIODIC, OPEN))
layers = slices(slab)
print(len(layers), "slices of", len(layers[0]), "resource states")

corner = slab.incident((0, 0, 0))
for port, item in corner.items():
    kind = "measured" if isinstance(item, HalfEdge) else f"fused with {slab.position(item.upper if port.sign > 0 else item.lower)}"
    print(f"  {port}: {kind}")

###############################################################################
# Edges come out in a fixed order so downstream indices are reproducible.

print(block.to_json()[:120], "...")
