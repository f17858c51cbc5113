"""Desk-scale benchmark protocol: route a demand with several algorithms
and compare them on the three route-set measures.

Every run of the benchmark is a pure function of its configuration:
all randomness (demand sampling, per-request algorithm seeds, the
uniform pick among alternatives) derives from the configured seed via
per-trip seed sequences, so results do not depend on execution order
or worker count.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import baselines
from .demand import Demand, ODMatrix, Zoning, build_tiling, sample_demand
from .errors import AlgorithmError
from .evaluation import (AlgorithmResult, EmissionCoeffs, EvaluationReport,
                         KinematicProfile, MeasureStat, highly_popular_fraction,
                         mean_pairwise_overlap, regulated_fraction,
                         total_emissions)
from .kroad import KRoadLayers, classify_popularity, compute_kroad_layers
from .network import RoadNetwork, free_flow_weights
from .pathfinding import Route
from .polaris import PolarisRequest, RouteSet, polaris_routes

ALGORITHMS = ("fast", "pp", "gr", "pr", "kmd", "polaris")


@dataclass
class BenchmarkConfig:
    algorithms: tuple[str, ...] = ("fast", "pp", "polaris")
    n_trips: int = 500
    k: int = 3
    runs: int = 5
    seed: int = 0
    params: baselines.AlgoParams = field(default_factory=baselines.AlgoParams)
    pick: str = "uniform"          # or "first": which alternative a vehicle drives
    counting: str = "traversal"    # or "unique": popular-edge counting rule
    polaris_reset: bool = False
    threads: int = 1
    coeffs: EmissionCoeffs | None = None
    profile: KinematicProfile = field(default_factory=KinematicProfile)

    def __post_init__(self):
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {name!r}")
        # duplicate entries add nothing: results depend on the name only
        self.algorithms = tuple(dict.fromkeys(self.algorithms))
        if self.pick not in ("uniform", "first"):
            raise ValueError("pick must be 'uniform' or 'first'")


def _derive_seed(base: int, *key: int) -> int:
    seq = np.random.SeedSequence(entropy=base, spawn_key=tuple(key))
    return int(seq.generate_state(1, np.uint64)[0])


def _route_trip(algo: str, net: RoadNetwork, base_w, layers: KRoadLayers | None,
                origin: int, destination: int, cfg: BenchmarkConfig,
                seed: int) -> RouteSet:
    params = cfg.params
    if algo == "fast":
        route = baselines.fastest(net, base_w, origin, destination)
        return RouteSet(routes=[route], iterations=[0])
    if algo == "pp":
        return baselines.path_penalization(net, base_w, origin, destination,
                                           cfg.k, params.p)
    if algo == "gr":
        return baselines.graph_randomization(net, base_w, origin, destination,
                                             cfg.k, params.delta, seed)
    if algo == "pr":
        return baselines.path_randomization(net, base_w, origin, destination,
                                            cfg.k, params.delta, seed)
    if algo == "kmd":
        return baselines.kmd(net, base_w, origin, destination, cfg.k,
                             params.epsilon)
    if algo == "polaris":
        req = PolarisRequest(origin=origin, destination=destination, k=cfg.k)
        return polaris_routes(net, layers, req,
                              reset_per_iteration=cfg.polaris_reset)
    raise ValueError(f"unknown algorithm {algo!r}")


@dataclass
class _RunMeasures:
    high_pct: float
    regulated_pct: float
    mean_cost: float
    co2: float | None
    overlap: float | None
    failed: int


def _run_one(net, base_w, layers, classes, demand: Demand, algo: str,
             run_idx: int, cfg: BenchmarkConfig,
             route_sink=None) -> _RunMeasures:
    # seeds key on the stable registry index, so a row depends only on
    # the algorithm's name, never on its position in the config
    algo_idx = ALGORITHMS.index(algo)

    def handle(trip):
        origin = int(net.edge_from[trip.origin_edge])
        destination = int(net.edge_to[trip.destination_edge])
        if origin == destination:
            return None
        seed = _derive_seed(cfg.seed, run_idx, algo_idx, trip.id)
        try:
            routeset = _route_trip(algo, net, base_w, layers, origin,
                                   destination, cfg, seed)
        except AlgorithmError:
            return None
        if cfg.pick == "first" or len(routeset) == 1:
            selected = routeset.routes[0]
        else:
            pick_rng = np.random.default_rng(
                _derive_seed(cfg.seed, run_idx, algo_idx, trip.id, 1))
            selected = routeset.routes[int(pick_rng.integers(len(routeset)))]
        return selected, mean_pairwise_overlap(routeset.routes)

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            outcomes = list(pool.map(handle, demand.trips))
    else:
        outcomes = [handle(t) for t in demand.trips]

    selected_routes: list[Route] = []
    overlaps: list[float] = []
    failed = 0
    for trip, outcome in zip(demand.trips, outcomes):
        if outcome is None:
            failed += 1
            continue
        selected, overlap = outcome
        selected_routes.append(selected)
        if overlap is not None:
            overlaps.append(overlap)
        if route_sink is not None:
            route_sink(run_idx, algo, trip.id, selected)
    co2 = None
    if cfg.coeffs is not None:
        co2 = total_emissions(selected_routes, net, cfg.coeffs, cfg.profile)
    costs = [r.cost for r in selected_routes]
    return _RunMeasures(
        high_pct=highly_popular_fraction(selected_routes, classes, cfg.counting),
        regulated_pct=regulated_fraction(selected_routes, net),
        mean_cost=float(np.mean(costs)) if costs else 0.0,
        co2=co2,
        overlap=float(np.mean(overlaps)) if overlaps else None,
        failed=failed)


def run_benchmark(net: RoadNetwork, layers: KRoadLayers, matrix: ODMatrix,
                  cfg: BenchmarkConfig, zoning: Zoning | None = None,
                  route_sink=None) -> EvaluationReport:
    """Route seeded demands under every configured algorithm and
    aggregate the measures over ``cfg.runs`` runs (mean and std).

    Each vehicle drives one of its k alternatives, chosen by the
    ``pick`` rule.  ``route_sink(run_idx, algo, trip_id, route)``, when
    given, receives every selected route in deterministic order.
    """
    if zoning is None:
        zoning = build_tiling(net)
    classes = classify_popularity(layers.values[0])
    base_w = free_flow_weights(net)
    per_algo: dict[str, list[_RunMeasures]] = {a: [] for a in cfg.algorithms}
    run_seeds = []
    for run_idx in range(cfg.runs):
        demand_seed = _derive_seed(cfg.seed, run_idx)
        run_seeds.append(demand_seed)
        demand = sample_demand(matrix, zoning, net, cfg.n_trips, seed=demand_seed)
        for algo in cfg.algorithms:
            per_algo[algo].append(
                _run_one(net, base_w, layers, classes, demand, algo,
                         run_idx, cfg, route_sink))
    results = {}
    for algo in cfg.algorithms:
        runs = per_algo[algo]
        co2_values = [r.co2 for r in runs]
        overlap_values = [r.overlap for r in runs]
        results[algo] = AlgorithmResult(
            name=algo,
            highly_popular_pct=MeasureStat.from_values([r.high_pct for r in runs]),
            regulated_pct=MeasureStat.from_values([r.regulated_pct for r in runs]),
            mean_cost=MeasureStat.from_values([r.mean_cost for r in runs]),
            total_co2=(MeasureStat.from_values(co2_values)
                       if all(v is not None for v in co2_values) else None),
            mean_overlap=(MeasureStat.from_values(overlap_values)
                          if any(v is not None for v in overlap_values) else None),
            failed_trips=sum(r.failed for r in runs))
    return EvaluationReport(algorithms=results, config=_config_echo(cfg, layers),
                            run_seeds=run_seeds)


def sweep_benchmark(net: RoadNetwork, layers: KRoadLayers, matrix: ODMatrix,
                    cfg: BenchmarkConfig, param: str, values: list[int],
                    zoning: Zoning | None = None) -> EvaluationReport:
    """Benchmark the layered algorithm across a parameter sweep.

    ``param="m"`` slices the given layers (exact, because the layer
    loop is sequential); ``param="v"`` recomputes layers per value with
    the given layers' seed and layer count.  The report's ``sweep``
    section carries one row per value plus a monotone flag on the
    highly-popular-edge trend.
    """
    if param not in ("m", "v"):
        raise ValueError("sweep parameter must be 'm' or 'v'")
    sweep_cfg = BenchmarkConfig(**{**_cfg_dict(cfg), "algorithms": ("polaris",)})
    points = []
    high_means = []
    for value in values:
        if param == "m":
            point_layers = layers.sliced(value)
        else:
            point_layers = compute_kroad_layers(net, v=value, m=layers.m,
                                                seed=layers.seed, zoning=zoning)
        report = run_benchmark(net, point_layers, matrix, sweep_cfg, zoning)
        res = report.algorithms["polaris"]
        high_means.append(res.highly_popular_pct.mean)
        points.append({
            "value": value,
            "highly_popular_pct": asdict(res.highly_popular_pct),
            "regulated_pct": asdict(res.regulated_pct),
            "total_co2": asdict(res.total_co2) if res.total_co2 else None,
            "mean_cost": asdict(res.mean_cost),
        })
    monotone = all(b <= a + 1e-12 for a, b in zip(high_means, high_means[1:]))
    base_report = run_benchmark(net, layers, matrix, cfg, zoning)
    base_report.sweep = {
        "param": param,
        "points": points,
        "high_pct_monotone_nonincreasing": monotone,
    }
    return base_report


def _cfg_dict(cfg: BenchmarkConfig) -> dict:
    return {f: getattr(cfg, f) for f in cfg.__dataclass_fields__}


def _config_echo(cfg: BenchmarkConfig, layers: KRoadLayers) -> dict:
    return {
        "algorithms": list(cfg.algorithms),
        "n_trips": cfg.n_trips,
        "k": cfg.k,
        "runs": cfg.runs,
        "seed": cfg.seed,
        "pick": cfg.pick,
        "counting": cfg.counting,
        "polaris_reset": cfg.polaris_reset,
        "params": {"p": cfg.params.p, "delta": cfg.params.delta,
                   "epsilon": cfg.params.epsilon},
        "layers": {"m": layers.m, "v": layers.v, "seed": layers.seed},
    }


def report_to_json(report: EvaluationReport) -> str:
    """Deterministic machine-readable rendering of a report."""
    def stat(s: MeasureStat | None):
        return None if s is None else {"mean": s.mean, "std": s.std}

    doc = {
        "config": report.config,
        "run_seeds": report.run_seeds,
        "algorithms": {
            name: {
                "highly_popular_pct": stat(res.highly_popular_pct),
                "regulated_pct": stat(res.regulated_pct),
                "mean_cost": stat(res.mean_cost),
                "total_co2": stat(res.total_co2),
                "mean_overlap": stat(res.mean_overlap),
                "failed_trips": res.failed_trips,
            }
            for name, res in report.algorithms.items()
        },
    }
    if report.sweep is not None:
        doc["sweep"] = report.sweep
    return json.dumps(doc, indent=2, sort_keys=True)


def report_to_table(report: EvaluationReport) -> str:
    """Aligned plain-text table: algorithm by the three measures."""
    headers = ["algo", "high edges (%)", "total co2", "regulated (%)",
               "mean cost (s)"]
    rows = []
    for name, res in report.algorithms.items():
        def cell(s: MeasureStat | None) -> str:
            if s is None:
                return "-"
            return f"{s.mean:.2f} ({s.std:.2f})"

        rows.append([name, cell(res.highly_popular_pct), cell(res.total_co2),
                     cell(res.regulated_pct), cell(res.mean_cost)])
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(r[i].ljust(widths[i]) for i in range(len(headers))))
    if report.sweep is not None:
        lines.append("")
        lines.append(f"sweep over {report.sweep['param']}: "
                     f"high-edge % monotone non-increasing = "
                     f"{report.sweep['high_pct_monotone_nonincreasing']}")
        for point in report.sweep["points"]:
            lines.append(f"  {report.sweep['param']}={point['value']}: "
                         f"high={point['highly_popular_pct']['mean']:.2f}% "
                         f"regulated={point['regulated_pct']['mean']:.2f}%")
    return "\n".join(lines) + "\n"
