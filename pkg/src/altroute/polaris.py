"""Multi-layer edge-weight penalization routing (the polaris algorithm).

Each request works on a private copy of the free-flow weights.  At
iteration i the whole network is penalized with K_road layer
``min(i, m - 1)``, the shortest path is computed and collected, and the
edges of that path are re-penalized with layer 0.  The loop runs until
k distinct routes are found; because a path whose edges all carry zero
layer-0 popularity is never pushed away, an iteration cap converts such
non-progress into a typed error instead of an endless loop.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import IterationCapExceeded, SchemaMismatch
from .kroad import KRoadLayers
from .network import NodeId, RoadNetwork, free_flow_weights
from .pathfinding import Route, recost, shortest_path

DEFAULT_CAP_FACTOR = 10


@dataclass(frozen=True)
class PolarisRequest:
    origin: NodeId
    destination: NodeId
    k: int = 3

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.origin == self.destination:
            raise ValueError("origin and destination must differ")


@dataclass
class RouteSet:
    """Distinct routes in discovery order with per-route metadata.

    Route costs are re-evaluated under free-flow weights so they stay
    comparable across algorithms and iterations; ``iterations[i]`` is
    the loop iteration that produced ``routes[i]``.
    """

    routes: list[Route] = field(default_factory=list)
    iterations: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.routes)

    def edge_sequences(self) -> list[tuple[int, ...]]:
        return [r.edges for r in self.routes]


def polaris_routes(net: RoadNetwork, layers: KRoadLayers, req: PolarisRequest,
                   cap: int | None = None,
                   reset_per_iteration: bool = False) -> RouteSet:
    """k distinct alternative routes via multi-layer penalization.

    ``cap`` bounds the number of iterations (default ``10 * k``);
    :class:`IterationCapExceeded` is raised when fewer than k distinct
    routes emerge within it.  ``reset_per_iteration=True`` switches to
    an experimental variant where the global layer penalization is
    applied to fresh free-flow weights each iteration instead of
    compounding (path re-penalizations still accumulate).
    """
    if layers.n_edges != net.n_edges:
        raise SchemaMismatch(
            f"layers cover {layers.n_edges} edges, network has {net.n_edges}")
    if cap is None:
        cap = DEFAULT_CAP_FACTOR * req.k
    base = free_flow_weights(net)
    k0 = layers.values[0]
    w = base.copy()
    path_penalty = np.ones_like(base) if reset_per_iteration else None
    result = RouteSet()
    seen: set[tuple[int, ...]] = set()
    i = 0
    while len(result) < req.k:
        if i >= cap:
            raise IterationCapExceeded(
                f"found {len(result)} of {req.k} distinct routes in {cap} iterations")
        k_i = layers.layer(i)
        if reset_per_iteration:
            working = base * (1.0 + k_i) * path_penalty
        else:
            w *= 1.0 + k_i
            working = w
        route = shortest_path(net, working, req.origin, req.destination)
        if route.edges not in seen:
            seen.add(route.edges)
            result.routes.append(recost(route, base))
            result.iterations.append(i)
        edge_idx = list(route.edges)
        if edge_idx:
            if reset_per_iteration:
                path_penalty[edge_idx] *= 1.0 + k0[edge_idx]
            else:
                w[edge_idx] *= 1.0 + k0[edge_idx]
        i += 1
    return result
