"""
Interleaving schedules and hardware netlists
============================================

With rastering length L each RSG produces an L x L square of every slice,
one resource state per cycle.  Fusions between resource states made at
different times need delay lines; the netlist lists them and ``validate``
replays every fusion to check both photons meet in the same cycle.
"""

from collections import Counter

from interleaving.fusion_graph import OPEN, PERIODIC, build_cubic
from interleaving.scheduler import (
    Scheme, assign_coordinates, build_netlist, classify_fusion, delay_requirements,
    interleaving_ratio, validate,
)

L = 4
scheme = Scheme.rastered(L, 2, 2)
graph = build_cubic((2 * L, 2 * L, 4), (PERIODIC, PERIODIC, OPEN))
schedule = assign_coordinates(graph, scheme)

print("interleaving ratio:", interleaving_ratio(scheme))
print("(g, t) of vertex (5, 2, 1):", schedule[graph.vertex_id((5, 2, 1))])

classes = Counter(f"{e.direction} {classify_fusion(schedule, e)}" for e in graph.edges)
for name, count in sorted(classes.items()):
    print(f"  {count:4d} x {name}")

print("delay per port:", {str(p): n for p, n in delay_requirements(schedule, graph).items()})

###############################################################################
# Four modules with 1, L and L^2 delays realise the schedule exactly.

netlist = build_netlist(scheme)
for m in netlist.modules[:1]:
    print(f"module {m.index}: delays {m.delays}, {len(m.devices)} fusion devices, {m.switches} switches")
report = validate(netlist, schedule, graph)
print("violations:", len(report))

###############################################################################
# Shorten one z delay by a cycle and every z fusion of that module misses.

broken = validate(netlist.with_delay("m0/z+", L * L - 1), schedule, graph)
print("after mutation:", len(broken), "violations, e.g.", broken.violations[0])

###############################################################################
# Reversing the raster direction in alternate squares (the ABCD layout)
# makes every fusion between modules instantaneous.

abcd = Scheme.abcd(L, 2, 2)
sched = assign_coordinates(graph, abcd)
networked = [classify_fusion(sched, e) for e in graph.edges if not classify_fusion(sched, e).local]
print("ABCD networked fusions all instantaneous:", all(c.instantaneous for c in networked))
print("ABCD violations:", len(validate(build_netlist(abcd), sched, graph)))
