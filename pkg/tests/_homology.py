"""Independent winding oracle for syndrome-graph edge sets.

Each edge is given its shortest displacement between cube cells on the
torus.  A breadth-first search lifts every component of an edge set to the
infinite lattice; a non-tree edge whose lifted endpoints disagree closes a
cycle that winds around the torus.  No membrane information is used.
"""

from collections import deque

import numpy as np


def displacements(graph) -> np.ndarray:
    d = graph.d
    raw = graph.cells[graph.edge_v] - graph.cells[graph.edge_u]
    return (raw + d // 2 - 1) % d - (d // 2 - 1)


def fundamental_windings(graph, edges, disp=None) -> np.ndarray:
    """Winding vectors (in units of d) of the fundamental cycles of ``edges``."""
    disp = displacements(graph) if disp is None else disp
    mask = np.zeros(graph.n_edges, dtype=bool)
    mask[np.asarray(edges) if np.asarray(edges).dtype != bool else np.flatnonzero(edges)] = True
    adj = {}
    for e in np.flatnonzero(mask):
        u, v = int(graph.edge_u[e]), int(graph.edge_v[e])
        adj.setdefault(u, []).append((e, v, disp[e]))
        adj.setdefault(v, []).append((e, u, -disp[e]))
    lift, tree = {}, set()
    for root in adj:
        if root in lift:
            continue
        lift[root] = np.zeros(3, dtype=np.int64)
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for e, v, step in adj[u]:
                if v not in lift:
                    lift[v] = lift[u] + step
                    tree.add(e)
                    queue.append(v)
    out = []
    for e in np.flatnonzero(mask):
        if e in tree:
            continue
        u, v = int(graph.edge_u[e]), int(graph.edge_v[e])
        gap = lift[u] + disp[e] - lift[v]
        assert np.all(gap % graph.d == 0)
        out.append(gap // graph.d)
    return np.array(out, dtype=np.int64).reshape(-1, 3)


def has_noncontractible_cycle(graph, edges, disp=None) -> bool:
    return bool(np.any(fundamental_windings(graph, edges, disp)))
