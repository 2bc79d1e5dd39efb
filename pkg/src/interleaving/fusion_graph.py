"""Cubic 6-ring fusion graphs.

Vertices are resource states on an ``r_x x r_y x r_z`` lattice, edges are
two-qubit fusions and half-edges are single-qubit measurements.  Vertex ids
are canonical integers ``ix + r_x * (iy + r_y * iz)``.

Each axis carries a boundary flag:

``periodic``
    the last layer fuses with the first one.
``open``
    the extremal faces carry half-edges.
``shifted``
    (x or y only) wrapping around the axis also advances the next axis by
    one site, i.e. the lattice is traversed as a helix.  This is the torus
    produced by a single module with 1-, M- and M^2-delays.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

AXES = ("x", "y", "z")
PERIODIC, OPEN, SHIFTED = "periodic", "open", "shifted"
BOUNDARIES = (PERIODIC, OPEN, SHIFTED)


@dataclass(frozen=True, order=True)
class Port:
    """One of the six qubits of a 6-ring, named after its lattice direction."""

    axis: str
    sign: int  # +1 or -1

    def __post_init__(self):
        if self.axis not in AXES or self.sign not in (1, -1):
            raise ValueError(f"invalid port {self.axis!r}{self.sign!r}")

    def __str__(self) -> str:
        return f"{self.axis}{'+' if self.sign > 0 else '-'}"

    @property
    def opposite(self) -> "Port":
        return Port(self.axis, -self.sign)

    @classmethod
    def parse(cls, text: str) -> "Port":
        text = text.strip().replace("−", "-").replace("⁺", "+").replace("⁻", "-")
        if len(text) != 2 or text[1] not in "+-":
            raise ValueError(f"cannot parse port {text!r}")
        return cls(text[0], 1 if text[1] == "+" else -1)


PORTS = tuple(Port(a, s) for s in (1, -1) for a in AXES)


@dataclass(frozen=True)
class FusionEdge:
    """A fusion between the ``+`` port of ``lower`` and the ``-`` port of ``upper``.

    ``wraps`` is set when the edge closes a periodic boundary.
    """

    index: int
    direction: str
    lower: int
    upper: int
    wraps: bool = False

    @property
    def endpoints(self) -> tuple[tuple[int, Port], tuple[int, Port]]:
        return ((self.lower, Port(self.direction, 1)), (self.upper, Port(self.direction, -1)))


@dataclass(frozen=True)
class HalfEdge:
    vertex: int
    port: Port


@dataclass(frozen=True, eq=False)
class FusionGraph:
    dims: tuple[int, int, int]
    boundary: tuple[str, str, str]
    edges: tuple[FusionEdge, ...]
    half_edges: tuple[HalfEdge, ...]
    blocks: int = 1
    _ports: np.ndarray = field(repr=False, default=None)

    @property
    def n_vertices(self) -> int:
        rx, ry, rz = self.dims
        return rx * ry * rz

    def vertex_id(self, position: Sequence[int]) -> int:
        ix, iy, iz = (int(c) for c in position)
        rx, ry, rz = self.dims
        if not (0 <= ix < rx and 0 <= iy < ry and 0 <= iz < rz):
            raise KeyError(f"vertex {tuple(position)} outside lattice {self.dims}")
        return ix + rx * (iy + ry * iz)

    def position(self, vertex: int) -> tuple[int, int, int]:
        vertex = self._check_vertex(vertex)
        rx, ry, _ = self.dims
        return vertex % rx, (vertex // rx) % ry, vertex // (rx * ry)

    def _check_vertex(self, vertex) -> int:
        if isinstance(vertex, (tuple, list, np.ndarray)):
            return self.vertex_id(vertex)
        vertex = int(vertex)
        if not 0 <= vertex < self.n_vertices:
            raise KeyError(f"unknown vertex {vertex}")
        return vertex

    def incident(self, vertex) -> dict[Port, FusionEdge | HalfEdge]:
        """Map each of the six ports of ``vertex`` to its edge or half-edge."""
        v = self._check_vertex(vertex)
        out = {}
        for k, port in enumerate(PORTS):
            ref = int(self._ports[v, k])
            out[port] = self.edges[ref] if ref >= 0 else self.half_edges[-ref - 1]
        return out

    def partner(self, vertex, port: Port | str) -> int | None:
        """Vertex fused with ``vertex`` through ``port``; None for a half-edge."""
        port = Port.parse(port) if isinstance(port, str) else port
        item = self.incident(vertex)[port]
        if isinstance(item, HalfEdge):
            return None
        return item.upper if port.sign > 0 else item.lower

    def edges_along(self, axis: str) -> list[FusionEdge]:
        return [e for e in self.edges if e.direction == axis]

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "boundary": list(self.boundary),
            "blocks": self.blocks,
            "edges": [[int(e.lower), int(e.upper), e.direction] for e in self.edges],
            "half_edges": [[int(h.vertex), str(h.port)] for h in self.half_edges],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "FusionGraph":
        graph = build_cubic(data["dims"], data["boundary"], blocks=data.get("blocks", 1))
        stored = [[int(e.lower), int(e.upper), e.direction] for e in graph.edges]
        if "edges" in data and [list(e) for e in data["edges"]] != stored:
            raise ValueError("edge list does not match the declared lattice")
        return graph


def _normalize_boundary(boundary) -> tuple[str, str, str]:
    if isinstance(boundary, str):
        boundary = (boundary,) * 3
    flags = []
    for flag in boundary:
        if isinstance(flag, bool):
            flag = PERIODIC if flag else OPEN
        if flag not in BOUNDARIES:
            raise ValueError(f"unknown boundary flag {flag!r}")
        flags.append(flag)
    if len(flags) != 3:
        raise ValueError("boundary needs one flag per axis")
    if flags[2] == SHIFTED:
        raise ValueError("the z axis cannot be shifted")
    return tuple(flags)


def build_cubic(dims: Iterable[int], boundary="periodic", blocks: int = 1) -> FusionGraph:
    """Build the simple cubic fusion graph.

    ``blocks`` splits the z axis into that many disconnected cuboids of equal
    height (the output of layered interleaving); the faces between blocks
    become half-edges.
    """
    dims = tuple(int(r) for r in dims)
    if len(dims) != 3 or any(r < 1 for r in dims):
        raise ValueError(f"dims must be three positive integers, got {dims}")
    flags = _normalize_boundary(boundary)
    for r, flag, axis in zip(dims, flags, AXES):
        if flag != OPEN and r < 2:
            raise ValueError(f"{flag} axis {axis} needs at least 2 sites")
    blocks = int(blocks)
    if blocks < 1 or dims[2] % blocks:
        raise ValueError(f"z extent {dims[2]} is not divisible into {blocks} blocks")
    if blocks > 1 and flags[2] != OPEN:
        raise ValueError("z blocks require an open z axis")
    block_height = dims[2] // blocks

    rx, ry, rz = dims
    n = rx * ry * rz
    pos = np.stack(np.unravel_index(np.arange(n), (rz, ry, rx))[::-1], axis=1)

    def step(p, axis):
        """Neighbour one site along +axis, or None; second value flags a periodic wrap."""
        p = list(p)
        a = axis
        wrapped = False
        while True:
            p[a] += 1
            if p[a] < dims[a]:
                break
            flag = flags[a]
            if flag == OPEN:
                return None, False
            p[a] = 0
            if flag == PERIODIC:
                wrapped = True
                break
            a += 1  # shifted: carry into the next axis
        return p, wrapped

    edges: list[FusionEdge] = []
    ports = np.zeros((n, 6), dtype=np.int64)
    covered = np.zeros((n, 6), dtype=bool)
    halves: list[HalfEdge] = []
    for a, axis in enumerate(AXES):
        kplus, kminus = PORTS.index(Port(axis, 1)), PORTS.index(Port(axis, -1))
        for v in range(n):
            p = pos[v]
            q, wrapped = step(p, a)
            if q is not None and blocks > 1 and q[2] // block_height != p[2] // block_height:
                q = None
            if q is None:
                halves.append(HalfEdge(v, Port(axis, 1)))
                continue
            u = q[0] + rx * (q[1] + ry * q[2])
            edge = FusionEdge(len(edges), axis, v, u, wrapped)
            ports[v, kplus] = edge.index
            ports[u, kminus] = edge.index
            covered[v, kplus] = covered[u, kminus] = True
            edges.append(edge)
        for v in np.flatnonzero(~covered[:, kminus]):
            halves.append(HalfEdge(int(v), Port(axis, -1)))

    halves.sort(key=lambda h: (h.vertex, PORTS.index(h.port)))
    for i, h in enumerate(halves):
        ports[h.vertex, PORTS.index(h.port)] = -i - 1
    return FusionGraph(dims, flags, tuple(edges), tuple(halves), blocks, ports)


def slices(graph: FusionGraph) -> list[list[int]]:
    """Vertex ids of each 2D slice perpendicular to z, in z order."""
    rx, ry, rz = graph.dims
    per = rx * ry
    return [list(range(k * per, (k + 1) * per)) for k in range(rz)]


def expected_edge_count(dims: Sequence[int], boundary) -> int:
    """Edge count of a periodic/open lattice, counted axis by axis."""
    flags = _normalize_boundary(boundary)
    total = 0
    for a in range(3):
        r = list(dims)
        if flags[a] == OPEN:
            r[a] -= 1
        total += r[0] * r[1] * r[2]
    return total
