"""Primal and dual syndrome graphs of the periodic 6-ring fusion network.

Checks live on the unit cubes of the resource-state lattice: cube ``(i, j, k)``
has the eight resource states ``(i..i+1, j..j+1, k..k+1)`` at its corners and
its 12 edges are the fusions whose outcomes it multiplies.  Cubes are
2-coloured by the parity of ``i + j + k``.  The four cubes around a fusion
are two of each colour sitting diagonally across it, so every fusion gives
one edge between its two primal cubes and one between its two dual cubes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .fusion_graph import AXES, build_cubic

PRIMAL, DUAL = "primal", "dual"


@dataclass(frozen=True, eq=False)
class SyndromeGraph:
    """Check vertices and outcome edges of one parity class.

    Edge ``e`` is sourced by fusion ``e`` of the ``d x d x d`` periodic fusion
    graph.  ``membranes[m]`` marks the edges crossing the plane between cube
    layers ``d - 1`` and ``0`` along axis ``m``.
    """

    d: int
    parity_class: str
    cells: np.ndarray       # (n_vertices, 3) cube coordinates
    edge_u: np.ndarray      # (n_edges,) int32
    edge_v: np.ndarray
    direction: np.ndarray   # (n_edges,) int8: 0, 1, 2 for x, y, z fusions
    membranes: np.ndarray   # (3, n_edges) bool
    fusion_lower: np.ndarray  # (n_edges, 3) position of the fusion's lower resource state

    @property
    def n_vertices(self) -> int:
        return len(self.cells)

    @property
    def n_edges(self) -> int:
        return len(self.edge_u)

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edge_u, minlength=self.n_vertices) + np.bincount(
            self.edge_v, minlength=self.n_vertices)

    def membranes_at(self, plane: int) -> np.ndarray:
        """Membranes through the plane between cube layers ``plane - 1`` and ``plane``."""
        plane %= self.d
        out = np.zeros((3, self.n_edges), dtype=bool)
        for m in range(3):
            out[m] = (self.fusion_lower[:, m] == plane) & (self.direction != m)
        return out

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "parity_class": self.parity_class,
            "cells": self.cells.tolist(),
            "edges": [
                [int(u), int(v), AXES[int(a)]]
                for u, v, a in zip(self.edge_u, self.edge_v, self.direction)
            ],
            "membranes": [np.flatnonzero(m).tolist() for m in self.membranes],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def cell_index(cell, d: int) -> int:
    """Vertex id of cube ``cell`` within its parity class."""
    i, j, k = (c % d for c in cell)
    return (i + d * (j + d * k)) // 2


def build_syndrome_graphs(d: int) -> tuple[SyndromeGraph, SyndromeGraph]:
    if d % 2 or d < 4:
        raise ValueError(f"block size must be even and >= 4, got {d}")
    fusion = build_cubic((d, d, d), "periodic")
    n_fusions = len(fusion.edges)
    lower = np.array([fusion.position(e.lower) for e in fusion.edges], dtype=np.int64)
    direction = np.array([AXES.index(e.direction) for e in fusion.edges], dtype=np.int8)

    # the two transverse axes of each fusion
    ta = np.where(direction == 0, 1, 0)
    tb = np.where(direction == 2, 1, 2)
    rows = np.arange(n_fusions)

    def around(da, db):
        cell = lower.copy()
        cell[rows, ta] -= da
        cell[rows, tb] -= db
        return cell % d

    # (0,0)/(1,1) offsets share a colour with the fusion's lower corner cube
    diag = (around(0, 0), around(1, 1))
    anti = (around(1, 0), around(0, 1))
    even = lower.sum(axis=1) % 2 == 0

    graphs = []
    for label, want_even in ((PRIMAL, True), (DUAL, False)):
        pick = even == want_even
        a = np.where(pick[:, None], diag[0], anti[0])
        b = np.where(pick[:, None], diag[1], anti[1])
        ids = lambda c: ((c[:, 0] + d * (c[:, 1] + d * c[:, 2])) // 2).astype(np.int32)
        flat = np.arange(d ** 3)
        cells = np.stack(np.unravel_index(flat, (d, d, d))[::-1], axis=1)
        cells = cells[(cells.sum(axis=1) % 2 == 0) == want_even]
        graph = SyndromeGraph(
            d=d,
            parity_class=label,
            cells=cells,
            edge_u=ids(a),
            edge_v=ids(b),
            direction=direction,
            membranes=np.zeros((3, n_fusions), dtype=bool),
            fusion_lower=lower,
        )
        object.__setattr__(graph, "membranes", graph.membranes_at(0))
        graphs.append(graph)
    return graphs[0], graphs[1]


def membrane_parity(graph: SyndromeGraph, residual, membranes: np.ndarray | None = None) -> np.ndarray:
    """Crossing parity of an edge set with each of the three logical membranes."""
    mask = _as_mask(residual, graph.n_edges)
    membranes = graph.membranes if membranes is None else membranes
    return (np.count_nonzero(membranes & mask, axis=1) % 2).astype(np.uint8)


def _as_mask(edges, n: int) -> np.ndarray:
    edges = np.asarray(edges)
    if edges.dtype == bool:
        if edges.shape != (n,):
            raise ValueError("edge mask has the wrong length")
        return edges
    mask = np.zeros(n, dtype=bool)
    mask[edges.astype(np.int64)] = True
    return mask
