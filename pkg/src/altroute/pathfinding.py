"""Shortest-path queries, random OD sampling and route-cost accounting.

These are the primitives every diversification algorithm in this
package is built on.  All functions are pure with respect to their
inputs: weight overlays are read, never mutated, and callers own their
copies, so arbitrarily many queries may run concurrently.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import RouteNotFound, SamplingExhausted
from .network import EdgeId, NodeId, RoadNetwork

DEFAULT_OD_ATTEMPTS = 1000


@dataclass(frozen=True)
class Route:
    """An ordered edge sequence from origin to destination.

    ``cost`` is the total travel time under the weight map the route
    was computed (or re-costed) with; consecutive edges are incident.
    An empty edge list is the degenerate origin == destination route.
    """

    edges: tuple[EdgeId, ...]
    origin: NodeId
    destination: NodeId
    cost: float

    def node_sequence(self, net: RoadNetwork) -> list[NodeId]:
        """Origin, every intermediate intersection, destination."""
        if not self.edges:
            return [self.origin]
        seq = [int(net.edge_from[self.edges[0]])]
        seq.extend(int(net.edge_to[e]) for e in self.edges)
        return seq

    def interior_nodes(self, net: RoadNetwork) -> list[NodeId]:
        """Intersections strictly between the endpoints."""
        return [int(net.edge_to[e]) for e in self.edges[:-1]]

    def edge_set(self) -> frozenset[EdgeId]:
        return frozenset(self.edges)


@dataclass(frozen=True)
class ODPair:
    origin: NodeId
    destination: NodeId


def shortest_path(net: RoadNetwork, w, origin: NodeId, destination: NodeId) -> Route:
    """Minimum-cost route under the strictly positive weight overlay ``w``.

    Dijkstra with deterministic tie-breaking: among equal-cost
    relaxations the smaller incoming edge id wins, and equal-distance
    heap entries pop in node-id order.  Together with the sorted
    adjacency lists this makes results reproducible bit for bit.

    Raises :class:`RouteNotFound` if the destination is unreachable.
    ``origin == destination`` returns the empty route of cost 0.
    """
    if origin == destination:
        return Route(edges=(), origin=origin, destination=destination, cost=0.0)
    wl = w.tolist() if isinstance(w, np.ndarray) else list(w)
    n = net.n_nodes
    out_edges = net.out_edges
    edge_to = net.edge_to
    inf = float("inf")
    dist = [inf] * n
    pred = [-1] * n
    settled = [False] * n
    dist[origin] = 0.0
    pq = [(0.0, origin)]
    while pq:
        du, u = heapq.heappop(pq)
        if settled[u]:
            continue
        settled[u] = True
        if u == destination:
            break
        for eid in out_edges[u]:
            v = edge_to[eid]
            nd = du + wl[eid]
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = eid
                heapq.heappush(pq, (nd, v))
            elif nd == dist[v] and eid < pred[v]:
                pred[v] = eid
    if not settled[destination]:
        raise RouteNotFound(
            f"no route from node {net.node_names[origin]} "
            f"to node {net.node_names[destination]}")
    edges = []
    v = destination
    edge_from = net.edge_from
    while v != origin:
        e = pred[v]
        edges.append(e)
        v = edge_from[e]
    edges.reverse()
    return Route(edges=tuple(edges), origin=origin, destination=destination,
                 cost=dist[destination])


def is_reachable(net: RoadNetwork, origin: NodeId, destination: NodeId) -> bool:
    """Breadth-first reachability test on the unweighted base graph."""
    if origin == destination:
        return True
    seen = bytearray(net.n_nodes)
    seen[origin] = 1
    queue = deque([origin])
    out_edges = net.out_edges
    edge_to = net.edge_to
    while queue:
        u = queue.popleft()
        for eid in out_edges[u]:
            v = edge_to[eid]
            if v == destination:
                return True
            if not seen[v]:
                seen[v] = 1
                queue.append(v)
    return False


def sample_random_od(net: RoadNetwork, rng: np.random.Generator,
                     attempts: int = DEFAULT_OD_ATTEMPTS) -> ODPair:
    """Uniformly sample a connected origin-destination node pair.

    Draws ordered node pairs uniformly, rejecting ``o == d`` and pairs
    whose destination is unreachable.  Each attempt consumes exactly
    two draws from ``rng``, so sampling sequences are reproducible.
    Raises :class:`SamplingExhausted` after ``attempts`` rejections,
    which usually signals a fragmented graph.
    """
    n = net.n_nodes
    if n < 2:
        raise SamplingExhausted("network has fewer than 2 nodes")
    for _ in range(attempts):
        o = int(rng.integers(n))
        d = int(rng.integers(n))
        if o == d:
            continue
        if is_reachable(net, o, d):
            return ODPair(origin=o, destination=d)
    raise SamplingExhausted(
        f"no connected OD pair found in {attempts} attempts")


def route_cost(route: Route, w) -> float:
    """Sum of ``w`` over the route's edges (0 for the empty route)."""
    if not route.edges:
        return 0.0
    if isinstance(w, np.ndarray):
        return float(w[list(route.edges)].sum())
    return float(sum(w[e] for e in route.edges))


def recost(route: Route, w) -> Route:
    """The same route with its cost re-evaluated under another overlay."""
    return Route(edges=route.edges, origin=route.origin,
                 destination=route.destination, cost=route_cost(route, w))
