"""Route-set measures: popular-edge usage, regulated intersections, CO2.

CO2 uses the standard instantaneous-emission polynomial in speed s and
acceleration a,

    E = c0 + c1*s*a + c2*s*a^2 + c3*s + c4*s^2 + c5*s^3,

with coefficients per emission/vehicle class read from a config file
(this package ships no database values).  Trajectories are synthesized
with a deterministic trapezoidal speed profile per edge, replacing
microsimulation; absolute emission totals are therefore only
comparable across algorithms on identical demand, never to published
simulator numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError
from .network import RoadNetwork
from .pathfinding import Route

SAMPLE_INTERVAL_S = 1.0  # trajectory sampling rate is fixed at 1 Hz


@dataclass(frozen=True)
class EmissionCoeffs:
    """c0..c5 of the emission polynomial, yielding mg/s for CO2."""

    c0: float
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float

    def as_tuple(self) -> tuple[float, ...]:
        return (self.c0, self.c1, self.c2, self.c3, self.c4, self.c5)


def load_emission_coeffs(path, vehicle_class: str = "default") -> EmissionCoeffs:
    """Read ``CO2 <class> c0 c1 c2 c3 c4 c5`` lines; pick one class."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ParseError(f"cannot read coefficients file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 8 or fields[0].upper() != "CO2":
            raise ParseError(f"{path}:{lineno}: expected 'CO2 <class> c0..c5'")
        if fields[1] == vehicle_class:
            try:
                return EmissionCoeffs(*(float(x) for x in fields[2:8]))
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
    raise ParseError(f"{path}: no CO2 row for class {vehicle_class!r}")


@dataclass(frozen=True)
class TrajectoryPoint:
    time: float
    speed: float          # m/s, >= 0
    acceleration: float   # m/s^2


@dataclass(frozen=True)
class KinematicProfile:
    """Deterministic per-edge speed profile parameters."""

    accel: float = 2.0        # m/s^2 when speeding up
    decel: float = 2.0        # m/s^2 when braking
    stop_speed: float = 0.0   # target speed at regulated interior intersections


def co2_rate_raw(speed: float, accel: float, c: EmissionCoeffs) -> float:
    """The emission polynomial without clamping (differentiable)."""
    s, a = speed, accel
    return c.c0 + c.c1 * s * a + c.c2 * s * a * a + c.c3 * s + c.c4 * s * s + c.c5 * s ** 3


def hbefa_co2(pt: TrajectoryPoint, c: EmissionCoeffs) -> float:
    """Instantaneous emission rate at a trajectory point, clamped at 0.

    Some coefficient sets go negative under strong deceleration; a
    negative emission rate is physically meaningless, so it clamps.
    """
    return max(0.0, co2_rate_raw(pt.speed, pt.acceleration, c))


def _edge_profile(v0: float, length: float, limit: float, v_exit: float,
                  prof: KinematicProfile) -> tuple[list[tuple[float, float, float]], float]:
    """Trapezoidal (accelerate, cruise, brake) segments for one edge.

    Returns ``(segments, exit_speed)`` where each segment is
    ``(duration, start_speed, acceleration)``.  Falls back to pure
    braking/throttle when the edge is too short for the requested exit
    speed.
    """
    a, b = prof.accel, prof.decel
    v_exit = min(v_exit, limit)
    if v0 * v0 > v_exit * v_exit + 2.0 * b * length:
        # cannot brake down to v_exit in time: brake the whole edge
        ve = math.sqrt(v0 * v0 - 2.0 * b * length)
        return [((v0 - ve) / b, v0, -b)], ve
    if v_exit * v_exit > v0 * v0 + 2.0 * a * length:
        # cannot reach v_exit: full throttle the whole edge
        ve = math.sqrt(v0 * v0 + 2.0 * a * length)
        return [((ve - v0) / a, v0, a)], ve
    vp = math.sqrt((2.0 * a * b * length + b * v0 * v0 + a * v_exit * v_exit) / (a + b))
    vp = min(vp, limit)
    d1 = (vp * vp - v0 * v0) / (2.0 * a)
    d3 = (vp * vp - v_exit * v_exit) / (2.0 * b)
    d2 = length - d1 - d3
    segments = []
    if vp > v0:
        segments.append(((vp - v0) / a, v0, a))
    if d2 > 0 and vp > 0:
        segments.append((d2 / vp, vp, 0.0))
    if vp > v_exit:
        segments.append(((vp - v_exit) / b, vp, -b))
    return segments, v_exit


def synth_trajectory(route: Route, net: RoadNetwork,
                     profile: KinematicProfile | None = None) -> list[TrajectoryPoint]:
    """1 Hz trajectory points for a route under the kinematic profile.

    The vehicle starts at rest, accelerates to each edge's speed limit,
    cruises, and brakes to ``stop_speed`` before regulated interior
    intersections (and to the next edge's limit where it is lower).
    One sample per started second of the total traversal time, so a
    12.5 s ride yields 13 points.  An empty route yields no points.
    """
    if profile is None:
        profile = KinematicProfile()
    if not route.edges:
        return []
    segments: list[tuple[float, float, float]] = []
    v = 0.0
    n = len(route.edges)
    for idx, e in enumerate(route.edges):
        limit = float(net.speed_limit[e])
        if idx < n - 1:
            end_node = net.edge_to[e]
            next_limit = float(net.speed_limit[route.edges[idx + 1]])
            v_exit = profile.stop_speed if net.regulated[end_node] else min(limit, next_limit)
        else:
            v_exit = limit
        segs, v = _edge_profile(min(v, limit), float(net.length[e]), limit, v_exit, profile)
        segments.extend(segs)
    total = sum(s[0] for s in segments)
    n_samples = math.ceil(total / SAMPLE_INTERVAL_S)
    points = []
    seg_idx = 0
    seg_start = 0.0
    for i in range(n_samples):
        t = i * SAMPLE_INTERVAL_S
        while seg_idx < len(segments) - 1 and t >= seg_start + segments[seg_idx][0]:
            seg_start += segments[seg_idx][0]
            seg_idx += 1
        dur, v_start, acc = segments[seg_idx]
        speed = max(0.0, v_start + acc * (t - seg_start))
        points.append(TrajectoryPoint(time=t, speed=speed, acceleration=acc))
    return points


def total_emissions(routes: list[Route], net: RoadNetwork, c: EmissionCoeffs,
                    profile: KinematicProfile | None = None) -> float:
    """Sum of clamped emission rates over all trips' trajectory points.

    Each 1 Hz point accounts for one sample interval; the result is
    additive over disjoint trip subsets and non-negative.
    """
    total = 0.0
    for route in routes:
        for pt in synth_trajectory(route, net, profile):
            total += hbefa_co2(pt, c) * SAMPLE_INTERVAL_S
    return total


def route_overlap(r1: Route, r2: Route) -> float:
    """Jaccard index of the two routes' edge sets (1 iff equal sets)."""
    a, b = r1.edge_set(), r2.edge_set()
    if not a and not b:
        return 1.0
    union = len(a | b)
    return len(a & b) / union


def highly_popular_fraction(routes: list[Route], classes,
                            counting: str = "traversal") -> float:
    """Percentage of High-popularity edge usage across a route set.

    ``counting="traversal"`` weights every edge traversal (an edge used
    by three routes counts three times); ``"unique"`` counts each
    distinct edge of the route set once.  Empty usage yields 0%.
    """
    classes = np.asarray(classes)
    if counting == "traversal":
        edge_ids = [e for r in routes for e in r.edges]
    elif counting == "unique":
        edge_ids = sorted({e for r in routes for e in r.edges})
    else:
        raise ValueError(f"unknown counting rule {counting!r}")
    if not edge_ids:
        return 0.0
    high = int(np.count_nonzero(classes[edge_ids] == 2))
    return 100.0 * high / len(edge_ids)


@dataclass
class RegulatedStats:
    regulated: int = 0
    interior: int = 0
    routes_without_interior: int = 0

    @property
    def pct(self) -> float:
        if self.interior == 0:
            return 0.0
        return 100.0 * self.regulated / self.interior


def regulated_stats(routes: list[Route], net: RoadNetwork) -> RegulatedStats:
    """Counts of regulated vs all interior intersections traversed.

    Endpoints are excluded; routes with no interior node (single-edge
    routes) contribute nothing and are tallied separately so the empty
    denominator stays visible.
    """
    stats = RegulatedStats()
    for route in routes:
        interior = route.interior_nodes(net)
        if not interior:
            stats.routes_without_interior += 1
            continue
        stats.interior += len(interior)
        stats.regulated += int(sum(1 for node in interior if net.regulated[node]))
    return stats


def regulated_fraction(routes: list[Route], net: RoadNetwork) -> float:
    """Percentage of regulated interior intersections (0% if none traversed)."""
    return regulated_stats(routes, net).pct


def mean_pairwise_overlap(routes: list[Route]) -> float | None:
    """Mean Jaccard overlap over all route pairs; None for < 2 routes."""
    if len(routes) < 2:
        return None
    total = 0.0
    pairs = 0
    for i in range(len(routes)):
        for j in range(i + 1, len(routes)):
            total += route_overlap(routes[i], routes[j])
            pairs += 1
    return total / pairs


@dataclass
class MeasureStat:
    """Mean and standard deviation over benchmark runs."""

    mean: float
    std: float

    @classmethod
    def from_values(cls, values) -> "MeasureStat":
        arr = np.asarray([v for v in values if v is not None], dtype=float)
        return cls(mean=float(arr.mean()), std=float(arr.std()))


@dataclass
class AlgorithmResult:
    """Aggregated measures for one algorithm across runs."""

    name: str
    highly_popular_pct: MeasureStat
    regulated_pct: MeasureStat
    mean_cost: MeasureStat
    total_co2: MeasureStat | None
    mean_overlap: MeasureStat | None
    failed_trips: int


@dataclass
class EvaluationReport:
    """Benchmark output: per-algorithm measures plus run metadata."""

    algorithms: dict[str, AlgorithmResult]
    config: dict
    run_seeds: list[int]
    sweep: dict | None = field(default=None)
