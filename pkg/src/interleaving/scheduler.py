"""Interleaving coordinates, fusion classification and hardware netlists.

A schedule assigns every resource state an RSG index ``g`` and an RSG cycle
``t``.  A netlist describes which delays, links and fusion devices a network
of interleaving modules provides; :func:`validate` replays every fusion of a
scheduled graph through the netlist and checks that both photons reach the
same device in the same cycle.
"""

from __future__ import annotations

import copy
import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .fusion_graph import AXES, OPEN, PERIODIC, PORTS, SHIFTED, FusionEdge, FusionGraph, Port

TRIVIAL = "trivial"
LAYERED = "layered"
RASTERED = "rastered"
ABCD = "abcd"
TORIC = "toric"
HYPER = "hyper"
GRID_KINDS = (TRIVIAL, LAYERED, RASTERED, ABCD, TORIC)


@dataclass(frozen=True)
class Scheme:
    """How fusion-graph vertices are distributed over RSGs and cycles.

    ``size`` is the scheme parameter: k for layered, L for rastered and ABCD,
    M for the single-module torus and L for hyper-rastered (with ``dim`` the
    slice dimension D).
    """

    kind: str
    size: int = 1
    module_grid: tuple[int, int] = (1, 1)
    dim: int = 2

    def __post_init__(self):
        if self.kind not in GRID_KINDS + (HYPER,):
            raise ValueError(f"unknown scheme {self.kind!r}")
        if self.size < 1:
            raise ValueError("scheme parameter must be positive")
        if min(self.module_grid) < 1:
            raise ValueError("module grid must be positive")
        if self.kind == HYPER and self.dim < 2:
            raise ValueError("hyper-rastered slices need D >= 2")

    @classmethod
    def trivial(cls, nx: int, ny: int) -> "Scheme":
        return cls(TRIVIAL, 1, (nx, ny))

    @classmethod
    def layered(cls, k: int, nx: int, ny: int) -> "Scheme":
        return cls(LAYERED, k, (nx, ny))

    @classmethod
    def rastered(cls, L: int, nx: int, ny: int) -> "Scheme":
        return cls(RASTERED, L, (nx, ny))

    @classmethod
    def abcd(cls, L: int, nx: int, ny: int) -> "Scheme":
        return cls(ABCD, L, (nx, ny))

    @classmethod
    def toric(cls, M: int) -> "Scheme":
        return cls(TORIC, M, (1, 1))

    @classmethod
    def hyper(cls, D: int, L: int) -> "Scheme":
        return cls(HYPER, L, (1, 1), D)

    @property
    def tile(self) -> int:
        """Side of the square of a slice produced by one RSG."""
        return self.size if self.kind in (RASTERED, ABCD, TORIC, HYPER) else 1

    @property
    def n_rsg(self) -> int:
        return self.module_grid[0] * self.module_grid[1]

    def slice_shape(self) -> tuple[int, int]:
        nx, ny = self.module_grid
        return nx * self.tile, ny * self.tile

    def to_dict(self) -> dict:
        return {"kind": self.kind, "size": self.size,
                "module_grid": list(self.module_grid), "dim": self.dim}

    @classmethod
    def from_dict(cls, data: dict) -> "Scheme":
        return cls(data["kind"], int(data.get("size", 1)),
                   tuple(data.get("module_grid", (1, 1))), int(data.get("dim", 2)))


@dataclass(frozen=True)
class InterleavingCoordinate:
    g: int
    t: int


@dataclass(frozen=True)
class FusionClassification:
    delay: int
    local: bool

    @property
    def instantaneous(self) -> bool:
        return self.delay == 0

    @property
    def networked(self) -> bool:
        return not self.local

    @property
    def timing(self) -> str:
        return "instantaneous" if self.delay == 0 else f"delayed({self.delay})"

    @property
    def locality(self) -> str:
        return "local" if self.local else "networked"

    def __str__(self) -> str:
        return f"{self.timing} {self.locality}"


@dataclass(frozen=True, eq=False)
class Schedule:
    """Interleaving coordinates of every vertex, indexed by vertex id."""

    scheme: Scheme
    dims: tuple[int, int, int]
    g: np.ndarray
    t: np.ndarray

    def __getitem__(self, vertex: int) -> InterleavingCoordinate:
        vertex = int(vertex)
        if not 0 <= vertex < len(self.g):
            raise KeyError(f"vertex {vertex} is not scheduled")
        return InterleavingCoordinate(int(self.g[vertex]), int(self.t[vertex]))

    def __len__(self) -> int:
        return len(self.g)

    def __iter__(self):
        return iter(range(len(self.g)))

    def to_dict(self) -> dict:
        return {"scheme": self.scheme.to_dict(), "dims": list(self.dims),
                "g": self.g.tolist(), "t": self.t.tolist()}


# --------------------------------------------------------------------------
# coordinates


def _positions(graph: FusionGraph) -> np.ndarray:
    rx, ry, rz = graph.dims
    return np.stack(np.unravel_index(np.arange(graph.n_vertices), (rz, ry, rx))[::-1], axis=1)


def _raster_bin(cx, cy, L, flip_x=False, flip_y=False):
    cx = np.where(flip_x, L - 1 - cx, cx)
    cy = np.where(flip_y, L - 1 - cy, cy)
    return cx + L * cy


def hyper_time(position, L: int) -> int:
    """Cycle of a vertex of a (D+1)-dimensional hypercubic graph; the last coordinate is time."""
    *space, z = (int(c) for c in position)
    D = len(space)
    return L ** D * z + sum((c % L) * L ** i for i, c in enumerate(space))


def hyper_rsg(position, L: int, grid) -> int:
    """RSG index of a hyper-rastered vertex on a module grid of shape ``grid``."""
    *space, _ = (int(c) for c in position)
    g, stride = 0, 1
    for c, n in zip(space, grid):
        g += (c // L) * stride
        stride *= n
    return g


def assign_coordinates(graph: FusionGraph, scheme: Scheme) -> Schedule:
    rx, ry, rz = graph.dims
    pos = _positions(graph)
    ix, iy, iz = pos[:, 0], pos[:, 1], pos[:, 2]
    nx, ny = scheme.module_grid
    kind = scheme.kind

    if kind == HYPER:
        if scheme.dim != 2:
            raise ValueError("a cubic fusion graph only carries D = 2 hyper-rastered slices")
        scheme = Scheme(RASTERED, scheme.size, (rx // scheme.size, ry // scheme.size))
        if rx % scheme.size or ry % scheme.size:
            raise ValueError(f"slice {rx}x{ry} is not divisible by L={scheme.size}")
        sched = assign_coordinates(graph, scheme)
        return Schedule(Scheme.hyper(2, scheme.size), graph.dims, sched.g, sched.t)

    if kind == TORIC:
        M = scheme.size
        if (rx, ry) != (M, M):
            raise ValueError(f"single-module torus needs {M}x{M} slices, got {rx}x{ry}")
        return Schedule(scheme, graph.dims, np.zeros_like(ix), ix + M * iy + M * M * iz)

    sx, sy = scheme.slice_shape()
    if (rx, ry) != (sx, sy):
        raise ValueError(
            f"slice {rx}x{ry} does not match {nx}x{ny} modules of tile {scheme.tile}")

    if kind == TRIVIAL:
        return Schedule(scheme, graph.dims, ix + nx * iy, iz.copy())

    if kind == LAYERED:
        k = scheme.size
        if rz % k:
            raise ValueError(f"z extent {rz} is not divisible into {k} layers")
        m = rz // k
        copy_index, layer = iz // m, iz % m
        return Schedule(scheme, graph.dims, ix + nx * iy, k * layer + copy_index)

    L = scheme.size
    g = ix // L + nx * (iy // L)
    if kind == RASTERED:
        b = _raster_bin(ix % L, iy % L, L)
    else:
        for n, flag, axis in ((nx, graph.boundary[0], "x"), (ny, graph.boundary[1], "y")):
            if flag == PERIODIC and n % 2:
                raise ValueError(f"ABCD squares need an even module count along periodic {axis}")
        b = _raster_bin(ix % L, iy % L, L, (ix // L) % 2 == 1, (iy // L) % 2 == 1)
    return Schedule(scheme, graph.dims, g, L * L * iz + b)


def square_label(g: int, scheme: Scheme) -> str:
    """A, B, C or D label of a module in the ABCD arrangement."""
    nx, _ = scheme.module_grid
    mx, my = g % nx, g // nx
    return "ABCD"[(mx % 2) + 2 * (my % 2)]


def classify_fusion(schedule: Schedule, edge: FusionEdge) -> FusionClassification:
    a, b = schedule[edge.lower], schedule[edge.upper]
    return FusionClassification(abs(a.t - b.t), a.g == b.g)


def delay_requirements(schedule: Schedule, graph: FusionGraph) -> dict[Port, int]:
    """Delay each port needs inside its own module, maximised over modules.

    For every on-module fusion the photon produced first waits for its
    partner.  Fusions between modules, or across a periodic seam, are routed
    over inter-module links and do not count toward module delays.
    """
    need = {port: 0 for port in PORTS}
    for edge in graph.edges:
        a, b = schedule[edge.lower], schedule[edge.upper]
        if a.g != b.g or edge.wraps:
            continue
        dt = b.t - a.t
        if dt > 0:
            port = Port(edge.direction, 1)
        elif dt < 0:
            port = Port(edge.direction, -1)
        else:
            continue
        need[port] = max(need[port], abs(dt))
    return need


def hyper_delays(D: int, L: int) -> dict[str, set[int]]:
    """Local-fusion time differences per axis of a D+1 dimensional rastered graph.

    Derived by enumerating every local fusion inside one L^D tile over two
    consecutive slices.
    """
    if D < 2 or L < 1:
        raise ValueError("need D >= 2 and L >= 1")
    out: dict[str, set[int]] = defaultdict(set)
    for point in itertools.product(range(L), repeat=D):
        here = (*point, 0)
        for axis in range(D + 1):
            there = list(here)
            there[axis] += 1
            if axis < D and there[axis] >= L:
                continue  # leaves the tile: networked
            out[f"axis{axis}"].add(hyper_time(there, L) - hyper_time(here, L))
    return dict(out)


def interleaving_ratio(scheme: Scheme) -> Fraction:
    """Slice size over number of RSGs."""
    if scheme.kind == HYPER:
        return Fraction(scheme.size ** scheme.dim)
    if scheme.kind not in GRID_KINDS:
        raise ValueError(f"no ratio for {scheme.kind}")
    sx, sy = scheme.slice_shape()
    return Fraction(sx * sy, scheme.n_rsg)


@dataclass(frozen=True)
class RateEstimate:
    V_comp: float
    n_RSG: int
    t_RSG: float
    t_comp: float


def estimate_time(V_comp: float, n_RSG: int, t_RSG: float) -> RateEstimate:
    """Run time of a computation of ``V_comp`` resource states."""
    if n_RSG < 1:
        raise ValueError("need at least one RSG")
    if t_RSG <= 0:
        raise ValueError("RSG cycle must be positive")
    return RateEstimate(V_comp, n_RSG, t_RSG, V_comp / n_RSG * t_RSG)


# --------------------------------------------------------------------------
# netlists


@dataclass(frozen=True)
class Route:
    """Path of a photon from the RSG of ``module`` through named delay components."""

    module: int
    port: Port
    via: tuple[str, ...] = ()


@dataclass(frozen=True)
class FusionDevice:
    name: str
    plus: Route
    minus: Route


@dataclass
class Module:
    index: int
    position: tuple[int, int]
    delays: dict[str, int]
    devices: list[FusionDevice] = field(default_factory=list)
    switches: int = 0
    label: str = ""


@dataclass
class Link:
    name: str
    source: int
    target: int
    direction: str
    delay: int


@dataclass
class HardwareNetlist:
    scheme: Scheme
    modules: list[Module]
    links: list[Link]

    def component_delay(self, name: str) -> int:
        if name.startswith("link:"):
            for link in self.links:
                if link.name == name:
                    return link.delay
        else:
            g, key = name.split("/", 1)
            return self.modules[int(g[1:])].delays[key]
        raise KeyError(name)

    def route_delay(self, route: Route) -> int:
        return sum(self.component_delay(name) for name in route.via)

    def devices(self):
        for module in self.modules:
            for device in module.devices:
                yield module.index, device

    def with_delay(self, component: str, length: int) -> "HardwareNetlist":
        """Copy with one delay component (module delay or link) set to ``length``."""
        out = copy.deepcopy(self)
        if component.startswith("link:"):
            for link in out.links:
                if link.name == component:
                    link.delay = length
                    return out
            raise KeyError(component)
        g, key = component.split("/", 1)
        delays = out.modules[int(g[1:])].delays
        if key not in delays:
            raise KeyError(component)
        delays[key] = length
        return out

    def delay_components(self) -> list[str]:
        names = [f"m{m.index}/{k}" for m in self.modules for k in m.delays]
        return names + [link.name for link in self.links]

    def to_dict(self) -> dict:
        def route(r):
            return {"module": r.module, "port": str(r.port), "via": list(r.via),
                    "delay": self.route_delay(r)}

        return {
            "scheme": self.scheme.to_dict(),
            "modules": [
                {
                    "index": m.index,
                    "position": list(m.position),
                    "label": m.label,
                    "delays": dict(m.delays),
                    "switches": m.switches,
                    "devices": [{"name": d.name, "inputs": [route(d.plus), route(d.minus)]}
                                for d in m.devices],
                }
                for m in self.modules
            ],
            "connections": [
                {"name": l.name, "source": l.source, "target": l.target,
                 "direction": l.direction, "delay": l.delay}
                for l in self.links
            ],
        }


def build_netlist(scheme: Scheme) -> HardwareNetlist:
    """Modules and links of the network realising ``scheme``.

    The module grid is closed into a torus so periodic slices can use the
    wrap-around links; open graphs simply never route over them.
    """
    if scheme.kind == HYPER:
        raise ValueError("hyper-rastered schemes support coordinates and delays only")
    nx, ny = scheme.module_grid
    kind, L = scheme.kind, scheme.size
    XP, XM, YP, YM, ZP, ZM = (Port.parse(p) for p in ("x+", "x-", "y+", "y-", "z+", "z-"))

    modules: list[Module] = []
    links: list[Link] = []

    if kind == TORIC:
        m = Module(0, (0, 0), {"x+": 1, "y+": L, "z+": L * L}, label="torus")
        m.devices = [
            FusionDevice("x", Route(0, XP, ("m0/x+",)), Route(0, XM)),
            FusionDevice("y", Route(0, YP, ("m0/y+",)), Route(0, YM)),
            FusionDevice("z", Route(0, ZP, ("m0/z+",)), Route(0, ZM)),
        ]
        return HardwareNetlist(scheme, [m], [])

    def east(g):
        return (g % nx + 1) % nx + nx * (g // nx)

    def south(g):
        return g % nx + nx * ((g // nx + 1) % ny)

    link_delay = {"W": 0, "N": 0}
    if kind == RASTERED:
        link_delay = {"W": L, "N": L * L}

    for g in range(nx * ny):
        links.append(Link(f"link:{east(g)}->{g}:W", east(g), g, "W", link_delay["W"]))
        links.append(Link(f"link:{south(g)}->{g}:N", south(g), g, "N", link_delay["N"]))

    for g in range(nx * ny):
        pos = (g % nx, g // nx)
        name = f"m{g}/"
        west_in = (f"link:{east(g)}->{g}:W",)
        north_in = (f"link:{south(g)}->{g}:N",)
        if kind in (TRIVIAL, LAYERED):
            m = Module(g, pos, {"z+": L if kind == LAYERED else 1})
            m.devices = [
                FusionDevice("z", Route(g, ZP, (name + "z+",)), Route(g, ZM)),
                FusionDevice("x", Route(g, XP), Route(east(g), XM, west_in)),
                FusionDevice("y", Route(g, YP), Route(south(g), YM, north_in)),
            ]
        elif kind == RASTERED:
            m = Module(g, pos, {"x+": 1, "y+": L, "z+": L * L})
            xp, yp = (name + "x+",), (name + "y+",)
            m.devices = [
                FusionDevice("z", Route(g, ZP, (name + "z+",)), Route(g, ZM)),
                FusionDevice("x_local", Route(g, XP, xp), Route(g, XM)),
                FusionDevice("x_net", Route(g, XP, xp), Route(east(g), XM, west_in)),
                FusionDevice("y_local", Route(g, YP, yp), Route(g, YM)),
                FusionDevice("y_net", Route(g, YP, yp), Route(south(g), YM, north_in)),
            ]
        else:  # ABCD: reversed raster direction moves the short delay to the minus port
            label = square_label(g, scheme)
            flip_x, flip_y = label in "BD", label in "CD"
            xd = "x-" if flip_x else "x+"
            yd = "y-" if flip_y else "y+"
            m = Module(g, pos, {xd: 1, yd: L, "z+": L * L}, label=label)
            xp = (name + xd,) if not flip_x else ()
            xm = (name + xd,) if flip_x else ()
            yp = (name + yd,) if not flip_y else ()
            ym = (name + yd,) if flip_y else ()
            # networked photons leave from the tile edge in the same cycle
            m.devices = [
                FusionDevice("z", Route(g, ZP, (name + "z+",)), Route(g, ZM)),
                FusionDevice("x_local", Route(g, XP, xp), Route(g, XM, xm)),
                FusionDevice("x_net", Route(g, XP), Route(east(g), XM, west_in)),
                FusionDevice("y_local", Route(g, YP, yp), Route(g, YM, ym)),
                FusionDevice("y_net", Route(g, YP), Route(south(g), YM, north_in)),
            ]
        modules.append(m)

    # a port feeding more than one device sits behind a switch
    fanout = defaultdict(set)
    for g, device in ((m.index, d) for m in modules for d in m.devices):
        for r in (device.plus, device.minus):
            fanout[(r.module, r.port)].add((g, device.name))
    for m in modules:
        m.switches = sum(1 for p in PORTS if len(fanout[(m.index, p)]) > 1)
    return HardwareNetlist(scheme, modules, links)


@dataclass
class Violation:
    kind: str
    edge: int
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} at edge {self.edge}: {self.detail}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    checked_edges: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def __len__(self) -> int:
        return len(self.violations)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checked_edges": self.checked_edges,
                "violations": [vars(v) for v in self.violations]}


def validate(netlist: HardwareNetlist, schedule: Schedule, graph: FusionGraph) -> ValidationReport:
    """Replay every fusion of ``graph`` through ``netlist``."""
    report = ValidationReport()
    by_inputs = defaultdict(list)
    for owner, device in netlist.devices():
        key = (device.plus.module, device.plus.port, device.minus.module, device.minus.port)
        by_inputs[key].append((owner, device))

    for module in netlist.modules:
        for name, length in module.delays.items():
            if int(length) != length or length < 0:
                report.violations.append(
                    Violation("bad-delay", -1, f"m{module.index}/{name} = {length}"))
    for link in netlist.links:
        if int(link.delay) != link.delay or link.delay < 0:
            report.violations.append(Violation("bad-delay", -1, f"{link.name} = {link.delay}"))

    events = {}
    for edge in graph.edges:
        report.checked_edges += 1
        lo, hi = schedule[edge.lower], schedule[edge.upper]
        plus, minus = Port(edge.direction, 1), Port(edge.direction, -1)
        candidates = by_inputs.get((lo.g, plus, hi.g, minus), [])
        if not candidates:
            report.violations.append(Violation(
                "unrouted", edge.index,
                f"no device fuses m{lo.g}:{plus} with m{hi.g}:{minus}"))
            continue
        arrivals = []
        for owner, device in candidates:
            a = lo.t + netlist.route_delay(device.plus)
            b = hi.t + netlist.route_delay(device.minus)
            arrivals.append((owner, device, a, b))
        matched = [(o, d, a) for o, d, a, b in arrivals if a == b]
        if not matched:
            _, device, a, b = arrivals[0]
            report.violations.append(Violation(
                "arrival-mismatch", edge.index,
                f"{device.name}: {plus} arrives at cycle {a}, {minus} at cycle {b}"))
            continue
        owner, device, cycle = matched[0]
        slot = (owner, device.name, cycle)
        if slot in events:
            report.violations.append(Violation(
                "collision", edge.index,
                f"m{owner}/{device.name} already fuses edge {events[slot]} in cycle {cycle}"))
        else:
            events[slot] = edge.index
    return report
