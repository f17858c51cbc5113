"""Mobility demand: grid tiling, OD matrices and trip sampling.

Cities are split into square tiles (1 km by default).  An OD matrix
holds trip counts between tiles; demand generation draws matrix cells
with probability proportional to their count, then picks origin and
destination edges uniformly inside the drawn tiles and a start time
uniformly within one hour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyZone, ParseError
from .network import EdgeId, RoadNetwork

# local equirectangular projection constants (metres per degree)
M_PER_DEG_LAT = 110_574.0
M_PER_DEG_LON = 111_320.0

ZoneId = int


@dataclass
class Zoning:
    """Assignment of every node to one cell of a regular grid.

    The grid is anchored at the bounding-box minimum corner and uses a
    local equirectangular projection referenced at the minimum
    latitude.  Cells are half-open, so a node exactly on a boundary
    belongs to the higher-index cell.  Zone ids are dense row-major
    integers; ``label`` renders them as ``row:col``.
    """

    cell_size: float
    min_lon: float
    min_lat: float
    n_rows: int
    n_cols: int
    node_zone: np.ndarray  # per-node dense ZoneId

    @property
    def n_zones(self) -> int:
        return self.n_rows * self.n_cols

    def zone_index(self, row: int, col: int) -> ZoneId:
        return row * self.n_cols + col

    def zone_rc(self, zone: ZoneId) -> tuple[int, int]:
        return divmod(zone, self.n_cols)

    def label(self, zone: ZoneId) -> str:
        row, col = self.zone_rc(zone)
        return f"{row}:{col}"

    def contains_rc(self, row: int, col: int) -> bool:
        return 0 <= row < self.n_rows and 0 <= col < self.n_cols

    def edges_by_zone(self, net: RoadNetwork) -> list[list[EdgeId]]:
        """Edges grouped by the zone of their from-node (sorted ids)."""
        groups: list[list[EdgeId]] = [[] for _ in range(self.n_zones)]
        for e in range(net.n_edges):
            groups[self.node_zone[net.edge_from[e]]].append(e)
        return groups


def build_tiling(net: RoadNetwork, cell_size: float = 1000.0) -> Zoning:
    """Grid tiling of the network bounding box with ``cell_size`` metres."""
    min_lon, min_lat, _, _ = net.bounding_box()
    cos_ref = math.cos(math.radians(min_lat))
    x = (net.lon - min_lon) * M_PER_DEG_LON * cos_ref
    y = (net.lat - min_lat) * M_PER_DEG_LAT
    cols = np.floor(x / cell_size).astype(np.int64)
    rows = np.floor(y / cell_size).astype(np.int64)
    n_rows = int(rows.max()) + 1
    n_cols = int(cols.max()) + 1
    return Zoning(cell_size=float(cell_size), min_lon=min_lon, min_lat=min_lat,
                  n_rows=n_rows, n_cols=n_cols,
                  node_zone=rows * n_cols + cols)


@dataclass
class ODMatrix:
    """Sparse trip-count matrix keyed by ((row, col), (row, col)) tiles."""

    entries: dict[tuple[tuple[int, int], tuple[int, int]], float] = field(
        default_factory=dict)

    @property
    def total(self) -> float:
        return float(sum(self.entries.values()))

    def items_sorted(self):
        return sorted(self.entries.items())


def load_od_matrix(path) -> ODMatrix:
    """Parse ``<row:col> <row:col> <count>`` lines into an OD matrix."""
    entries: dict[tuple[tuple[int, int], tuple[int, int]], float] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ParseError(f"cannot read OD matrix {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ParseError(f"{path}:{lineno}: expected '<zone_o> <zone_d> <count>'")
        try:
            o = _parse_zone_label(fields[0])
            d = _parse_zone_label(fields[1])
            count = float(fields[2])
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from exc
        if count < 0:
            raise ParseError(f"{path}:{lineno}: negative trip count")
        if count > 0:
            entries[(o, d)] = entries.get((o, d), 0.0) + count
    if not entries:
        raise ParseError(f"{path}: no OD entries")
    return ODMatrix(entries=entries)


def save_od_matrix(matrix: ODMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for (o, d), count in matrix.items_sorted():
            c = int(count) if float(count).is_integer() else repr(count)
            fh.write(f"{o[0]}:{o[1]} {d[0]}:{d[1]} {c}\n")


def _parse_zone_label(label: str) -> tuple[int, int]:
    parts = label.split(":")
    if len(parts) != 2:
        raise ValueError(f"zone id {label!r} is not of the form row:col")
    return int(parts[0]), int(parts[1])


def synth_od_matrix(zoning: Zoning, hotspots, seed,
                    peak: float = 60.0, radius: float = 2.0,
                    background: float = 0.3) -> ODMatrix:
    """Synthetic OD matrix concentrating mass on hotspot cells.

    ``hotspots`` is a list of ``(row, col)`` grid cells.  Every zone
    gets an attraction score decaying exponentially with grid distance
    to its nearest hotspot; the deterministic part of each matrix cell
    is ``peak * a(o) * a(d)`` so the hotspot cells carry the largest
    mass by construction, plus seeded Poisson background noise.
    """
    rng = np.random.default_rng(seed)
    zones = [(r, c) for r in range(zoning.n_rows) for c in range(zoning.n_cols)]
    attract = {}
    for rc in zones:
        d = min(math.hypot(rc[0] - h[0], rc[1] - h[1]) for h in hotspots)
        attract[rc] = math.exp(-d / radius)
    entries = {}
    for o in zones:
        for d in zones:
            count = int(round(peak * attract[o] * attract[d]))
            count += int(rng.poisson(background))
            if count > 0:
                entries[(o, d)] = float(count)
    return ODMatrix(entries=entries)


@dataclass(frozen=True)
class TripRequest:
    """One vehicle trip: edge to edge, starting within the hour."""

    id: int
    origin_edge: EdgeId
    destination_edge: EdgeId
    start_offset: float  # seconds in [0, 3600)


@dataclass
class Demand:
    trips: list[TripRequest]
    seed: int

    @property
    def n(self) -> int:
        return len(self.trips)


def sample_demand(matrix: ODMatrix, zoning: Zoning, net: RoadNetwork,
                  n: int, seed: int, cell_retry: int = 20) -> Demand:
    """Draw ``n`` trips from the OD matrix.

    Matrix cells are drawn with replacement, proportionally to their
    counts; origin and destination edges uniformly within the drawn
    tiles (an edge belongs to the tile of its from-node).  A drawn tile
    without edges is redrawn up to ``cell_retry`` times before
    :class:`EmptyZone` is raised with the offending tile named.
    """
    rng = np.random.default_rng(seed)
    items = matrix.items_sorted()
    if not items:
        raise EmptyZone("OD matrix is empty")
    weights = np.array([c for _, c in items], dtype=float)
    cum = np.cumsum(weights / weights.sum())
    edges_by_zone = zoning.edges_by_zone(net)

    def zone_edges(rc: tuple[int, int]) -> list[EdgeId]:
        if not zoning.contains_rc(*rc):
            return []
        return edges_by_zone[zoning.zone_index(*rc)]

    trips: list[TripRequest] = []
    for trip_id in range(n):
        for attempt in range(cell_retry + 1):
            idx = int(np.searchsorted(cum, rng.random(), side="right"))
            idx = min(idx, len(items) - 1)
            (o_rc, d_rc), _ = items[idx]
            o_edges = zone_edges(o_rc)
            d_edges = zone_edges(d_rc)
            if not o_edges:
                bad, bad_rc = "origin", o_rc
            elif not d_edges:
                bad, bad_rc = "destination", d_rc
            else:
                e_o = o_edges[int(rng.integers(len(o_edges)))]
                e_d = d_edges[int(rng.integers(len(d_edges)))]
                if e_o == e_d:
                    continue
                trips.append(TripRequest(
                    id=trip_id, origin_edge=e_o, destination_edge=e_d,
                    start_offset=float(rng.uniform(0.0, 3600.0))))
                break
            if attempt == cell_retry:
                raise EmptyZone(
                    f"{bad} tile {bad_rc[0]}:{bad_rc[1]} contains no road edges "
                    f"(after {cell_retry} redraws)")
        else:
            raise EmptyZone(
                f"could not draw two distinct edges in {cell_retry} attempts")
    return Demand(trips=trips, seed=seed)


def save_demand(demand: Demand, net: RoadNetwork, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"DEMAND n={demand.n} seed={demand.seed}\n")
        for t in demand.trips:
            fh.write(f"{t.id} {net.edge_names[t.origin_edge]} "
                     f"{net.edge_names[t.destination_edge]} {t.start_offset!r}\n")


def load_demand(path, net: RoadNetwork) -> Demand:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ParseError(f"cannot read demand file {path}: {exc}") from exc
    if not lines or not lines[0].startswith("DEMAND"):
        raise ParseError(f"{path}: missing DEMAND header")
    header = dict(part.split("=", 1) for part in lines[0].split()[1:])
    trips = []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 4:
            raise ParseError(f"{path}:{lineno}: expected 4 fields")
        try:
            e_o = net.name_to_edge[fields[1]]
            e_d = net.name_to_edge[fields[2]]
        except KeyError as exc:
            raise ParseError(f"{path}:{lineno}: unknown edge {exc}") from exc
        trips.append(TripRequest(id=int(fields[0]), origin_edge=e_o,
                                 destination_edge=e_d,
                                 start_offset=float(fields[3])))
    return Demand(trips=trips, seed=int(header.get("seed", 0)))
