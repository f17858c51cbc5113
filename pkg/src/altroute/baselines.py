"""Comparison algorithms: FAST, PP, GR, PR and a KMD approximation.

All of them return distinct routes re-costed under the base weights,
work on private weight copies and are safe for concurrent requests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientCandidates, IterationCapExceeded
from .evaluation import route_overlap
from .network import NodeId, RoadNetwork
from .pathfinding import Route, recost, route_cost, shortest_path
from .polaris import RouteSet

# explored parameter ranges (informative, not enforced: smaller or larger
# values are legitimate for experiments)
SWEEP_RANGES = {
    "p": (0.1, 0.5),
    "delta": (0.2, 0.5),
    "epsilon": (0.01, 0.3),
}

WEIGHT_FLOOR = 0.01          # perturbed weight >= floor * original weight
RANDOMIZED_CAP_FACTOR = 50   # GR/PR need many iterations to find new routes
PENALIZATION_CAP_FACTOR = 10
KMD_BUDGET_FACTOR = 40       # shortest-path calls for candidate pool building
KMD_SWEEP = (0.05, 0.1, 0.2, 0.4, 0.8)


@dataclass(frozen=True)
class AlgoParams:
    """Bundle of baseline parameters with reference defaults.

    Defaults mirror the best-performing values on large city networks
    (p = 0.1, delta = 0.2, epsilon = 0.1).
    """

    p: float = 0.1
    delta: float = 0.2
    epsilon: float = 0.1
    k: int = 3
    seed: int = 0

    def outside_sweep_ranges(self) -> list[str]:
        """Names of parameters outside the documented sweep ranges."""
        out = []
        for name in ("p", "delta", "epsilon"):
            lo, hi = SWEEP_RANGES[name]
            if not lo <= getattr(self, name) <= hi:
                out.append(name)
        return out


def fastest(net: RoadNetwork, w, origin: NodeId, destination: NodeId) -> Route:
    """The plain fastest route: shortest path under the given weights."""
    return shortest_path(net, w, origin, destination)


def path_penalization(net: RoadNetwork, w, origin: NodeId, destination: NodeId,
                      k: int, p: float, cap: int | None = None) -> RouteSet:
    """Cumulative path penalization.

    Each iteration computes the shortest path on the working weights
    and multiplies the weights of its edges by ``1 + p``; penalties
    compound when an edge keeps being selected.  The first route always
    equals the fastest path.
    """
    if p <= 0:
        raise ValueError("p must be > 0")
    if cap is None:
        cap = PENALIZATION_CAP_FACTOR * k
    base = np.asarray(w, dtype=float)
    working = base.copy()
    result = RouteSet()
    seen: set[tuple[int, ...]] = set()
    i = 0
    while len(result) < k:
        if i >= cap:
            raise IterationCapExceeded(
                f"found {len(result)} of {k} distinct routes in {cap} iterations")
        route = shortest_path(net, working, origin, destination)
        if route.edges not in seen:
            seen.add(route.edges)
            result.routes.append(recost(route, base))
            result.iterations.append(i)
        if route.edges:
            working[list(route.edges)] *= 1.0 + p
        i += 1
    return result


def graph_randomization(net: RoadNetwork, w, origin: NodeId, destination: NodeId,
                        k: int, delta: float, seed: int,
                        cap: int | None = None,
                        floor: float = WEIGHT_FLOOR) -> RouteSet:
    """Full-graph weight randomization.

    Before every shortest-path call each edge weight is freshly drawn
    as ``w(e) + Normal(0, w(e)^2 * delta^2)``, clamped below at
    ``floor * w(e)`` to keep weights positive.
    """
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if cap is None:
        cap = RANDOMIZED_CAP_FACTOR * k
    base = np.asarray(w, dtype=float)
    rng = np.random.default_rng(seed)
    result = RouteSet()
    seen: set[tuple[int, ...]] = set()
    i = 0
    while len(result) < k:
        if i >= cap:
            raise IterationCapExceeded(
                f"found {len(result)} of {k} distinct routes in {cap} iterations")
        working = base + rng.standard_normal(base.size) * (base * delta)
        np.maximum(working, floor * base, out=working)
        route = shortest_path(net, working, origin, destination)
        if route.edges not in seen:
            seen.add(route.edges)
            result.routes.append(recost(route, base))
            result.iterations.append(i)
        i += 1
    return result


def path_randomization(net: RoadNetwork, w, origin: NodeId, destination: NodeId,
                       k: int, delta: float, seed: int,
                       cap: int | None = None,
                       floor: float = WEIGHT_FLOOR) -> RouteSet:
    """Previous-path weight randomization.

    Only the edges of the previously computed route are perturbed, and
    the perturbations accumulate on the working weight map; the first
    route is therefore exactly the fastest path.
    """
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if cap is None:
        cap = RANDOMIZED_CAP_FACTOR * k
    base = np.asarray(w, dtype=float)
    rng = np.random.default_rng(seed)
    working = base.copy()
    result = RouteSet()
    seen: set[tuple[int, ...]] = set()
    previous: tuple[int, ...] = ()
    i = 0
    while len(result) < k:
        if i >= cap:
            raise IterationCapExceeded(
                f"found {len(result)} of {k} distinct routes in {cap} iterations")
        if previous:
            idx = list(previous)
            noise = rng.standard_normal(len(idx)) * (working[idx] * delta)
            working[idx] = np.maximum(working[idx] + noise, floor * base[idx])
        route = shortest_path(net, working, origin, destination)
        if route.edges not in seen:
            seen.add(route.edges)
            result.routes.append(recost(route, base))
            result.iterations.append(i)
        previous = route.edges
        i += 1
    return result


def kmd(net: RoadNetwork, w, origin: NodeId, destination: NodeId,
        k: int, epsilon: float, candidate_budget: int | None = None) -> RouteSet:
    """Approximate k most diverse near-shortest paths.

    A candidate pool of routes with free-flow cost within
    ``(1 + epsilon)`` of the fastest is generated by penalization
    sweeps over a fixed factor grid, spending at most
    ``candidate_budget`` shortest-path calls.  Greedy selection then
    starts from the fastest path and repeatedly adds the candidate
    maximizing the minimum pairwise Jaccard distance to the already
    selected routes (ties: lower cost, then discovery order).

    This is a documented approximation of exact diverse-path search:
    the cost bound is enforced exactly, diversity is greedy rather than
    optimal.  Raises :class:`InsufficientCandidates` when fewer than k
    near-shortest routes exist in the pool.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    if candidate_budget is None:
        candidate_budget = KMD_BUDGET_FACTOR * k
    base = np.asarray(w, dtype=float)
    fast = shortest_path(net, base, origin, destination)
    bound = (1.0 + epsilon) * fast.cost
    pool: list[Route] = [fast]
    seen: set[tuple[int, ...]] = {fast.edges}
    budget = candidate_budget
    for p in KMD_SWEEP:
        if budget <= 0:
            break
        working = base.copy()
        over_bound_streak = 0
        while budget > 0 and over_bound_streak < 3:
            route = shortest_path(net, working, origin, destination)
            budget -= 1
            cost = route_cost(route, base)
            if cost <= bound:
                over_bound_streak = 0
                if route.edges not in seen:
                    seen.add(route.edges)
                    pool.append(recost(route, base))
            else:
                over_bound_streak += 1
            if route.edges:
                working[list(route.edges)] *= 1.0 + p
    if len(pool) < k:
        raise InsufficientCandidates(
            f"only {len(pool)} routes within (1+{epsilon}) of the fastest cost, "
            f"{k} requested")
    selected = [pool[0]]
    selected_idx = [0]
    remaining = list(range(1, len(pool)))
    while len(selected) < k:
        best = None
        best_key = None
        for idx in remaining:
            cand = pool[idx]
            min_dist = min(1.0 - route_overlap(cand, s) for s in selected)
            key = (-min_dist, cand.cost, idx)
            if best_key is None or key < best_key:
                best_key = key
                best = idx
        selected.append(pool[best])
        selected_idx.append(best)
        remaining.remove(best)
    return RouteSet(routes=selected, iterations=selected_idx)
