"""Road-network data model, file ingestion, validation and free-flow costs.

A network is a directed graph of intersections (nodes) and road edges.
Nodes and edges are identified by dense integer ids in ``[0, n_nodes)``
and ``[0, n_edges)``; the original string ids from the input file are
kept in ``node_names`` / ``edge_names`` so they can be reported back.

File format (UTF-8, line oriented, ``#`` starts a comment)::

    NODE <id> <lon> <lat> [regulated:0|1]
    EDGE <id> <from> <to> <length_m> <speed_mps> [lanes]

A node without the regulated flag defaults to unregulated.  Lanes
default to 1 and are carried for reporting only, never used in routing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import ParseError, ValidationError

NodeId = int
EdgeId = int


@dataclass(frozen=True)
class RoadNode:
    """A single intersection (materialized view of the network arrays)."""

    id: NodeId
    name: str
    lon: float
    lat: float
    regulated: bool


@dataclass(frozen=True)
class RoadEdge:
    """A single directed road edge (materialized view)."""

    id: EdgeId
    name: str
    from_node: NodeId
    to_node: NodeId
    length: float
    speed_limit: float
    lanes: int

    @property
    def free_flow_time(self) -> float:
        return self.length / self.speed_limit


@dataclass
class ValidationReport:
    """Findings of :func:`validate`; an empty report means a clean network."""

    dangling: list[str] = field(default_factory=list)
    nonpositive: list[str] = field(default_factory=list)
    unreachable_nodes: int = 0
    has_core_component: bool = True

    @property
    def ok(self) -> bool:
        return not self.dangling and not self.nonpositive and self.unreachable_nodes == 0


class RoadNetwork:
    """Immutable directed road graph backed by dense numpy arrays.

    After construction the network is safe to share between concurrent
    readers.  Weight overlays (travel costs) live outside the network,
    see :func:`free_flow_weights`.

    A well-formed network has every edge endpoint present, adjacency
    consistent with the edge list, and at least one strongly connected
    component of two or more nodes (reported by :func:`validate`, not
    enforced at load).
    """

    def __init__(self, node_names, lon, lat, regulated, edge_names,
                 edge_from, edge_to, length, speed_limit, lanes):
        self.node_names: list[str] = list(node_names)
        self.lon = np.asarray(lon, dtype=float)
        self.lat = np.asarray(lat, dtype=float)
        self.regulated = np.asarray(regulated, dtype=bool)
        self.edge_names: list[str] = list(edge_names)
        self.edge_from = np.asarray(edge_from, dtype=np.int64)
        self.edge_to = np.asarray(edge_to, dtype=np.int64)
        self.length = np.asarray(length, dtype=float)
        self.speed_limit = np.asarray(speed_limit, dtype=float)
        self.lanes = np.asarray(lanes, dtype=np.int64)
        self.name_to_node = {name: i for i, name in enumerate(self.node_names)}
        self.name_to_edge = {name: i for i, name in enumerate(self.edge_names)}
        # outgoing edge ids per node, sorted so traversal order is reproducible
        out: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for e in range(self.n_edges):
            out[self.edge_from[e]].append(e)
        self.out_edges: list[list[int]] = [sorted(lst) for lst in out]

    @property
    def n_nodes(self) -> int:
        return len(self.node_names)

    @property
    def n_edges(self) -> int:
        return len(self.edge_names)

    def node(self, i: NodeId) -> RoadNode:
        return RoadNode(i, self.node_names[i], float(self.lon[i]),
                        float(self.lat[i]), bool(self.regulated[i]))

    def edge(self, e: EdgeId) -> RoadEdge:
        return RoadEdge(e, self.edge_names[e], int(self.edge_from[e]),
                        int(self.edge_to[e]), float(self.length[e]),
                        float(self.speed_limit[e]), int(self.lanes[e]))

    def bounding_box(self) -> tuple[float, float, float, float]:
        """(min_lon, min_lat, max_lon, max_lat)."""
        return (float(self.lon.min()), float(self.lat.min()),
                float(self.lon.max()), float(self.lat.max()))

    def strongly_connected_labels(self) -> np.ndarray:
        """Strongly-connected-component label per node."""
        adj = csr_matrix((np.ones(self.n_edges), (self.edge_from, self.edge_to)),
                         shape=(self.n_nodes, self.n_nodes))
        _, labels = connected_components(adj, directed=True, connection="strong")
        return labels

    @classmethod
    def from_records(cls, nodes, edges) -> "RoadNetwork":
        """Build a network from in-memory records.

        ``nodes`` is an iterable of ``(name, lon, lat, regulated)``,
        ``edges`` of ``(name, from_name, to_name, length_m, speed_mps)``
        or the same with a trailing lane count.  Raises
        :class:`ValidationError` on duplicate ids, dangling endpoints or
        non-positive lengths/speeds.
        """
        node_names, lons, lats, regs = [], [], [], []
        seen = set()
        for name, lo, la, reg in nodes:
            if name in seen:
                raise ValidationError(f"duplicate node id {name!r}")
            seen.add(name)
            node_names.append(str(name))
            lons.append(float(lo))
            lats.append(float(la))
            regs.append(bool(reg))
        name_to_node = {n: i for i, n in enumerate(node_names)}

        edge_names, efrom, eto, lengths, speeds, lanes = [], [], [], [], [], []
        seen = set()
        for rec in edges:
            name, u, v, length, speed = rec[:5]
            lane = int(rec[5]) if len(rec) > 5 else 1
            if name in seen:
                raise ValidationError(f"duplicate edge id {name!r}")
            seen.add(name)
            for endpoint in (u, v):
                if endpoint not in name_to_node:
                    raise ValidationError(
                        f"edge {name!r} references unknown node {endpoint!r}")
            length = float(length)
            speed = float(speed)
            if length <= 0:
                raise ValidationError(f"edge {name!r} has non-positive length {length}")
            if speed <= 0:
                raise ValidationError(f"edge {name!r} has non-positive speed {speed}")
            if lane < 1:
                raise ValidationError(f"edge {name!r} has lane count {lane} < 1")
            edge_names.append(str(name))
            efrom.append(name_to_node[u])
            eto.append(name_to_node[v])
            lengths.append(length)
            speeds.append(speed)
            lanes.append(lane)
        return cls(node_names, lons, lats, regs, edge_names,
                   efrom, eto, lengths, speeds, lanes)


def load_network(path) -> RoadNetwork:
    """Parse and validate a network file.

    Raises :class:`ParseError` with line diagnostics on malformed input
    and :class:`ValidationError` on structural problems.
    """
    nodes, edges = [], []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ParseError(f"cannot read network file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind = fields[0].upper()
        try:
            if kind == "NODE":
                if len(fields) not in (4, 5):
                    raise ValueError("expected NODE <id> <lon> <lat> [regulated]")
                reg = False
                if len(fields) == 5:
                    if fields[4] not in ("0", "1"):
                        raise ValueError("regulated flag must be 0 or 1")
                    reg = fields[4] == "1"
                nodes.append((fields[1], float(fields[2]), float(fields[3]), reg))
            elif kind == "EDGE":
                if len(fields) not in (6, 7):
                    raise ValueError(
                        "expected EDGE <id> <from> <to> <length_m> <speed_mps> [lanes]")
                rec = [fields[1], fields[2], fields[3],
                       float(fields[4]), float(fields[5])]
                if len(fields) == 7:
                    rec.append(int(fields[6]))
                edges.append(tuple(rec))
            else:
                raise ValueError(f"unknown record type {fields[0]!r}")
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from exc
    if not nodes:
        raise ParseError(f"{path}: no NODE records")
    return RoadNetwork.from_records(nodes, edges)


def serialize_network(net: RoadNetwork, path) -> None:
    """Write a network back in the documented format (original ids).

    ``load_network(serialize_network(net))`` reproduces the network,
    including the dense-id assignment, because ids are densified in
    order of appearance.
    """
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(net.n_nodes):
            fh.write(f"NODE {net.node_names[i]} {float(net.lon[i])!r} "
                     f"{float(net.lat[i])!r} {1 if net.regulated[i] else 0}\n")
        for e in range(net.n_edges):
            fh.write(f"EDGE {net.edge_names[e]} {net.node_names[net.edge_from[e]]} "
                     f"{net.node_names[net.edge_to[e]]} {float(net.length[e])!r} "
                     f"{float(net.speed_limit[e])!r} {int(net.lanes[e])}\n")


def save_id_map(net: RoadNetwork, path) -> None:
    """Write the sidecar mapping between original and dense ids."""
    with open(path, "w", encoding="utf-8") as fh:
        for i, name in enumerate(net.node_names):
            fh.write(f"NODE {name} {i}\n")
        for e, name in enumerate(net.edge_names):
            fh.write(f"EDGE {name} {e}\n")


def free_flow_weights(net: RoadNetwork) -> np.ndarray:
    """Per-edge free-flow travel time in seconds: length / speed limit.

    Strictly positive for a valid network; this is the base cost every
    routing algorithm in this package starts from.
    """
    return net.length / net.speed_limit


def validate(net: RoadNetwork) -> ValidationReport:
    """Report structural problems without raising.

    Unreachable nodes are the ones outside the largest strongly
    connected component.
    """
    report = ValidationReport()
    n = net.n_nodes
    for e in range(net.n_edges):
        name = net.edge_names[e]
        if not (0 <= net.edge_from[e] < n) or not (0 <= net.edge_to[e] < n):
            report.dangling.append(name)
        if net.length[e] <= 0:
            report.nonpositive.append(f"{name}: length {net.length[e]}")
        if net.speed_limit[e] <= 0:
            report.nonpositive.append(f"{name}: speed {net.speed_limit[e]}")
    if n:
        labels = net.strongly_connected_labels()
        sizes = np.bincount(labels)
        largest = int(sizes.max())
        report.unreachable_nodes = int(n - largest)
        report.has_core_component = largest >= 2
    return report


def validate_weights(net: RoadNetwork, w) -> None:
    """Check a weight overlay against the network (length and positivity)."""
    w = np.asarray(w, dtype=float)
    if w.shape != (net.n_edges,):
        raise ValidationError(
            f"weight map has {w.shape} entries, network has {net.n_edges} edges")
    if not np.all(w > 0):
        raise ValidationError("weight map contains non-positive entries")
