"""Road popularity: K_road, its layered computation and popularity classes.

K_road proxies how popular a road edge is by counting the *major driver
zones* of that edge: the smallest set of origin tiles that together
account for at least 80% of the traffic flow traversing it.  Formally
it is the degree of the edge in a bipartite road-usage network linking
edges to those zones.

Layers counter the feedback loop of popularity-based penalization:
after computing one K_road map from shortest routes, edge weights are
penalized by it and the next map is computed on the penalized network,
so later layers describe where traffic would shift once earlier layers
divert it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .demand import Zoning, build_tiling
from .errors import DegenerateDistribution, ParseError, SchemaMismatch
from .network import RoadNetwork, free_flow_weights
from .pathfinding import Route, sample_random_od, shortest_path

FLOW_SHARE_NUM = 4  # major driver zones cover >= 4/5 (80%) of edge flow
FLOW_SHARE_DEN = 5


class PopularityClass(IntEnum):
    LOW = 0
    MEDIUM = 1
    HIGH = 2


def compute_kroad(routes: list[Route], zoning: Zoning, n_edges: int) -> np.ndarray:
    """Per-edge K_road counts from a set of routes.

    Each route contributes one unit of flow, attributed to the zone of
    its origin node, to every edge it traverses.  For each edge, zones
    are ranked by flow (ties broken by smaller zone id) and K_road is
    the length of the shortest prefix whose cumulative flow reaches 80%
    of the edge total.  Untraversed edges get 0.
    """
    flows: dict[int, dict[int, int]] = {}
    node_zone = zoning.node_zone
    for route in routes:
        z = int(node_zone[route.origin])
        for e in route.edges:
            per_edge = flows.get(e)
            if per_edge is None:
                per_edge = flows[e] = {}
            per_edge[z] = per_edge.get(z, 0) + 1
    out = np.zeros(n_edges, dtype=np.int64)
    for e, per_edge in flows.items():
        total = sum(per_edge.values())
        ranked = sorted(per_edge.items(), key=lambda it: (-it[1], it[0]))
        cum = 0
        for i, (_, count) in enumerate(ranked, start=1):
            cum += count
            # integer comparison: cum/total >= 4/5, no float rounding
            if cum * FLOW_SHARE_DEN >= total * FLOW_SHARE_NUM:
                out[e] = i
                break
    return out


def min_max_normalize(values) -> np.ndarray:
    """Map values onto [0, 1]; a constant input maps to all zeros.

    The degenerate all-zeros output keeps weight penalization a no-op
    instead of undefined.  Idempotent: normalizing twice equals once.
    """
    values = np.asarray(values, dtype=float)
    lo = values.min()
    hi = values.max()
    if hi == lo:
        return np.zeros_like(values)
    return (values - lo) / (hi - lo)


@dataclass
class KRoadLayers:
    """Stack of m normalized K_road maps plus the sampling metadata."""

    values: np.ndarray  # shape (m, n_edges), entries in [0, 1]
    v: int
    seed: int

    @property
    def m(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_edges(self) -> int:
        return int(self.values.shape[1])

    def layer(self, i: int) -> np.ndarray:
        """Layer ``min(i, m - 1)``; indexes past the last layer clamp."""
        return self.values[min(i, self.m - 1)]

    def sliced(self, m: int) -> "KRoadLayers":
        """The first ``m`` layers.

        Valid because the layer loop is sequential: the first layers of
        a longer run are exactly a shorter run with the same seed.
        """
        if not 1 <= m <= self.m:
            raise ValueError(f"cannot slice {m} layers out of {self.m}")
        return KRoadLayers(values=self.values[:m], v=self.v, seed=self.seed)


def compute_kroad_layers(net: RoadNetwork, v: int, m: int, seed,
                         zoning: Zoning | None = None,
                         resample_per_layer: bool = True,
                         od_attempts: int = 1000) -> KRoadLayers:
    """Compute m K_road layers from v random-OD shortest routes each.

    Layer l is built by sampling v connected OD pairs, routing them on
    the current weights (free-flow for layer 0), computing K_road and
    min-max normalizing it.  Every edge weight is then multiplied by
    ``1 + K_l[e]`` before the next layer, so after layer l the working
    weights equal ``free_flow * prod_{j<=l}(1 + K_j)``.  The weight map
    is private to this call; the layers are the only output.

    ``resample_per_layer=False`` reuses layer 0's OD pairs for every
    layer instead of drawing fresh ones (sensitivity-analysis knob).
    """
    if v < 1:
        raise ValueError("v must be >= 1")
    if m < 1:
        raise ValueError("m must be >= 1")
    if zoning is None:
        zoning = build_tiling(net)
    rng = np.random.default_rng(seed)
    w = free_flow_weights(net)
    fixed_ods = None
    if not resample_per_layer:
        fixed_ods = [sample_random_od(net, rng, od_attempts) for _ in range(v)]
    layers = np.zeros((m, net.n_edges), dtype=float)
    for l in range(m):
        if fixed_ods is None:
            ods = [sample_random_od(net, rng, od_attempts) for _ in range(v)]
        else:
            ods = fixed_ods
        routes = [shortest_path(net, w, od.origin, od.destination) for od in ods]
        counts = compute_kroad(routes, zoning, net.n_edges)
        layers[l] = min_max_normalize(counts)
        w = w * (1.0 + layers[l])
    return KRoadLayers(values=layers, v=v, seed=int(seed))


def classify_popularity(layer0) -> np.ndarray:
    """Low/Medium/High classes from equal-width log-space bins.

    Bin edges are spaced evenly in log space between the smallest
    positive value and the maximum; a value on a boundary falls into
    the lower bin and zeros (log undefined) are Low.  Raises
    :class:`DegenerateDistribution` when fewer than two distinct
    positive values exist.
    """
    values = np.asarray(layer0, dtype=float)
    if np.any(values < 0):
        raise ValueError("popularity values must be non-negative")
    positive = values[values > 0]
    if np.unique(positive).size < 2:
        raise DegenerateDistribution(
            "need at least 2 distinct positive values for log binning")
    edges = np.logspace(np.log10(positive.min()), np.log10(positive.max()), 4)
    classes = np.zeros(values.shape, dtype=np.int8)
    mask = values > 0
    classes[mask] = np.digitize(values[mask], edges[1:3], right=True)
    return classes


def save_layers(layers: KRoadLayers, path) -> None:
    """Persist layers: header, then one line per edge with full precision."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"KROAD m={layers.m} v={layers.v} seed={layers.seed}\n")
        for e in range(layers.n_edges):
            row = " ".join(repr(float(x)) for x in layers.values[:, e])
            fh.write(f"{e} {row}\n")


def load_layers(path) -> KRoadLayers:
    """Inverse of :func:`save_layers`.

    Raises :class:`ParseError` on unreadable or malformed files and
    :class:`SchemaMismatch` when the body disagrees with the header
    (wrong per-edge value count, duplicate or missing edge ids).
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ParseError(f"cannot read layers file {path}: {exc}") from exc
    if not lines or not lines[0].startswith("KROAD"):
        raise ParseError(f"{path}: missing KROAD header")
    try:
        header = dict(part.split("=", 1) for part in lines[0].split()[1:])
        m = int(header["m"])
        v = int(header["v"])
        seed = int(header["seed"])
    except (KeyError, ValueError) as exc:
        raise ParseError(f"{path}: bad KROAD header: {exc}") from exc
    rows: dict[int, list[float]] = {}
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        try:
            edge = int(fields[0])
            vals = [float(x) for x in fields[1:]]
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from exc
        if len(vals) != m:
            raise SchemaMismatch(
                f"{path}:{lineno}: {len(vals)} values for edge {edge}, header says m={m}")
        if edge in rows:
            raise SchemaMismatch(f"{path}:{lineno}: duplicate edge id {edge}")
        rows[edge] = vals
    n_edges = len(rows)
    if not n_edges:
        raise ParseError(f"{path}: no edge rows")
    if sorted(rows) != list(range(n_edges)):
        raise SchemaMismatch(f"{path}: edge ids are not contiguous from 0")
    values = np.array([rows[e] for e in range(n_edges)], dtype=float).T
    return KRoadLayers(values=values, v=v, seed=seed)
