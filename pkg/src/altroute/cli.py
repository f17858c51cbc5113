"""Command-line frontend: layer precomputation, routing, demand
generation and desk-scale benchmarks.

Exit codes: 0 success, 1 usage error, 2 data/validation error,
3 algorithmic failure (no route, iteration cap, insufficient
candidates).  Progress goes to stderr; data goes to stdout or the
``--out`` files, so pipelines stay clean.  Every stochastic command
requires an explicit ``--seed`` and identical invocations produce
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import baselines
from .benchmark import (ALGORITHMS, BenchmarkConfig, report_to_json,
                        report_to_table, run_benchmark, sweep_benchmark)
from .demand import (build_tiling, load_demand, load_od_matrix, sample_demand,
                     save_demand, synth_od_matrix)
from .errors import AlgorithmError, DataError, ValidationError
from .evaluation import (highly_popular_fraction, load_emission_coeffs)
from .kroad import (classify_popularity, compute_kroad_layers, load_layers,
                    save_layers)
from .network import free_flow_weights, load_network, save_id_map
from .polaris import PolarisRequest, polaris_routes

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ALGORITHM = 3


class _Parser(argparse.ArgumentParser):
    """argparse variant using exit code 1 for usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr)


def _out_stream(path):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="altroute",
                     description="Popularity-aware alternative routing toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_kroad = sub.add_parser("kroad", parents=[], help="precompute popularity layers")
    p_kroad.add_argument("--net", required=True, help="network file")
    p_kroad.add_argument("--v", type=_positive_int, default=1000,
                         help="OD pairs per layer (default 1000)")
    p_kroad.add_argument("--m", type=_positive_int, default=3,
                         help="number of layers (default 3)")
    p_kroad.add_argument("--seed", type=int, required=True)
    p_kroad.add_argument("--out", required=True, help="layers output file")
    p_kroad.add_argument("--cell-size", type=float, default=1000.0,
                         help="tiling cell size in metres (default 1000)")
    p_kroad.add_argument("--no-resample", action="store_true",
                         help="reuse layer 0's OD pairs for every layer")

    p_route = sub.add_parser("route", help="route one OD pair or a demand file")
    p_route.add_argument("--net", required=True)
    p_route.add_argument("--algo", required=True, choices=ALGORITHMS)
    p_route.add_argument("--layers", help="popularity layers file")
    p_route.add_argument("--od", help="origin,destination node ids")
    p_route.add_argument("--demand", help="demand file to route")
    p_route.add_argument("--k", type=_positive_int, default=3)
    p_route.add_argument("--p", type=float, default=baselines.AlgoParams.p)
    p_route.add_argument("--delta", type=float, default=baselines.AlgoParams.delta)
    p_route.add_argument("--epsilon", type=float,
                         default=baselines.AlgoParams.epsilon)
    p_route.add_argument("--seed", type=int)
    p_route.add_argument("--polaris-reset", action="store_true",
                         help="reset global penalization each iteration")
    p_route.add_argument("--out", help="route dump file (default stdout)")

    p_demand = sub.add_parser("demand", help="sample a trip demand from an OD matrix")
    p_demand.add_argument("--net", required=True)
    p_demand.add_argument("--matrix", required=True, help="OD matrix file")
    p_demand.add_argument("--n", type=_positive_int, required=True)
    p_demand.add_argument("--seed", type=int, required=True)
    p_demand.add_argument("--cell-size", type=float, default=1000.0)
    p_demand.add_argument("--out", required=True)

    p_bench = sub.add_parser("bench", help="run the comparison benchmark")
    p_bench.add_argument("--net", required=True)
    p_bench.add_argument("--layers", help="popularity layers file")
    p_bench.add_argument("--matrix", help="OD matrix file (default: synthetic hotspot)")
    p_bench.add_argument("--algos", default="fast,pp,polaris",
                         help="comma-separated algorithm names")
    p_bench.add_argument("--n", type=_positive_int, default=500,
                         help="trips per run")
    p_bench.add_argument("--k", type=_positive_int, default=3)
    p_bench.add_argument("--runs", type=_positive_int, default=5)
    p_bench.add_argument("--seed", type=int, required=True)
    p_bench.add_argument("--p", type=float, default=baselines.AlgoParams.p)
    p_bench.add_argument("--delta", type=float, default=baselines.AlgoParams.delta)
    p_bench.add_argument("--epsilon", type=float,
                         default=baselines.AlgoParams.epsilon)
    p_bench.add_argument("--pick", choices=("uniform", "first"), default="uniform",
                         help="which of the k alternatives a vehicle drives")
    p_bench.add_argument("--counting", choices=("traversal", "unique"),
                         default="traversal", help="popular-edge counting rule")
    p_bench.add_argument("--polaris-reset", action="store_true")
    p_bench.add_argument("--threads", type=_positive_int,
                         default=int(os.environ.get("ALTROUTE_THREADS", "1")),
                         help="worker cap (results independent of this)")
    p_bench.add_argument("--emissions", help="emission coefficients file")
    p_bench.add_argument("--vehicle-class", default="default")
    p_bench.add_argument("--cell-size", type=float, default=1000.0)
    p_bench.add_argument("--sweep", help="parameter sweep, e.g. m=1,2,3,4")
    p_bench.add_argument("--out", help="JSON report file (default stdout)")
    p_bench.add_argument("--table", help="plain-text table file")
    p_bench.add_argument("--dump", help="selected-route dump file")
    return parser


def _cmd_kroad(args) -> int:
    net = load_network(args.net)
    zoning = build_tiling(net, args.cell_size)
    _progress(f"computing {args.m} layers from {args.v} OD pairs each "
              f"({net.n_nodes} nodes, {net.n_edges} edges)")
    layers = compute_kroad_layers(net, v=args.v, m=args.m, seed=args.seed,
                                  zoning=zoning,
                                  resample_per_layer=not args.no_resample)
    save_layers(layers, args.out)
    save_id_map(net, args.out + ".idmap")
    for l in range(layers.m):
        vals = layers.values[l]
        _progress(f"layer {l}: min={vals.min():.6f} max={vals.max():.6f} "
                  f"mean={vals.mean():.6f}")
    _progress(f"wrote {args.out}")
    return EXIT_OK


def _route_one(args, net, base_w, layers, origin, destination):
    if args.algo == "fast":
        return [baselines.fastest(net, base_w, origin, destination)]
    if args.algo == "pp":
        return baselines.path_penalization(net, base_w, origin, destination,
                                           args.k, args.p).routes
    if args.algo == "gr":
        return baselines.graph_randomization(net, base_w, origin, destination,
                                             args.k, args.delta, args.seed).routes
    if args.algo == "pr":
        return baselines.path_randomization(net, base_w, origin, destination,
                                            args.k, args.delta, args.seed).routes
    if args.algo == "kmd":
        return baselines.kmd(net, base_w, origin, destination, args.k,
                             args.epsilon).routes
    req = PolarisRequest(origin=origin, destination=destination, k=args.k)
    return polaris_routes(net, layers, req,
                          reset_per_iteration=args.polaris_reset).routes


def _cmd_route(args) -> int:
    if (args.od is None) == (args.demand is None):
        raise ValidationError("exactly one of --od and --demand is required")
    if args.algo in ("gr", "pr") and args.seed is None:
        raise ValidationError(f"--seed is required for --algo {args.algo}")
    if args.algo == "polaris" and not args.layers:
        raise ValidationError("--layers is required for --algo polaris")
    net = load_network(args.net)
    base_w = free_flow_weights(net)
    layers = load_layers(args.layers) if args.layers else None
    classes = classify_popularity(layers.values[0]) if layers is not None else None

    requests: list[tuple[str, int, int]] = []
    if args.od is not None:
        parts = args.od.split(",")
        if len(parts) != 2:
            raise ValidationError("--od must be '<origin>,<destination>'")
        for name in parts:
            if name not in net.name_to_node:
                raise ValidationError(f"unknown node id {name!r}")
        requests.append(("0", net.name_to_node[parts[0]],
                         net.name_to_node[parts[1]]))
    else:
        demand = load_demand(args.demand, net)
        for t in demand.trips:
            requests.append((str(t.id), int(net.edge_from[t.origin_edge]),
                             int(net.edge_to[t.destination_edge])))

    stream, close = _out_stream(args.out)
    try:
        for trip_id, origin, destination in requests:
            routes = _route_one(args, net, base_w, layers, origin, destination)
            for alt, route in enumerate(routes):
                high = ""
                if classes is not None:
                    pct = highly_popular_fraction([route], classes)
                    high = f" high_pct={pct:.2f}"
                stream.write(f"# {trip_id}.{alt} cost={route.cost!r}{high}\n")
                names = " ".join(net.edge_names[e] for e in route.edges)
                stream.write(f"{trip_id}.{alt} {args.algo} {names}\n")
    finally:
        if close:
            stream.close()
    return EXIT_OK


def _cmd_demand(args) -> int:
    net = load_network(args.net)
    zoning = build_tiling(net, args.cell_size)
    matrix = load_od_matrix(args.matrix)
    demand = sample_demand(matrix, zoning, net, args.n, seed=args.seed)
    save_demand(demand, net, args.out)
    _progress(f"wrote {demand.n} trips to {args.out}")
    return EXIT_OK


def _parse_sweep(text: str) -> tuple[str, list[int]]:
    if "=" not in text:
        raise ValidationError("--sweep must look like m=1,2,3")
    param, _, values = text.partition("=")
    param = param.strip()
    if param not in ("m", "v"):
        raise ValidationError("--sweep parameter must be 'm' or 'v'")
    try:
        parsed = [int(x) for x in values.split(",") if x.strip()]
    except ValueError as exc:
        raise ValidationError(f"bad sweep values: {exc}") from exc
    if not parsed or any(x < 1 for x in parsed):
        raise ValidationError("sweep values must be positive integers")
    return param, parsed


def _cmd_bench(args) -> int:
    algos = tuple(a.strip() for a in args.algos.split(",") if a.strip())
    for a in algos:
        if a not in ALGORITHMS:
            raise ValidationError(f"unknown algorithm {a!r}")
    net = load_network(args.net)
    zoning = build_tiling(net, args.cell_size)

    sweep = _parse_sweep(args.sweep) if args.sweep else None
    needs_layers = "polaris" in algos or sweep is not None
    if needs_layers and not args.layers:
        raise ValidationError(
            "a popularity layers file (--layers) is required for the layered "
            "algorithm; compute one with 'altroute kroad'")
    layers = None
    if args.layers:
        if not os.path.exists(args.layers):
            raise ValidationError(f"layers file not found: {args.layers}")
        layers = load_layers(args.layers)
    else:
        # measures still need popularity classes; derive single-layer values
        _progress("no --layers given: computing a single layer for classification")
        layers = compute_kroad_layers(net, v=min(1000, 10 * net.n_nodes), m=1,
                                      seed=args.seed, zoning=zoning)

    if args.matrix:
        matrix = load_od_matrix(args.matrix)
    else:
        _progress("no --matrix given: synthesizing a central-hotspot OD matrix")
        center = (zoning.n_rows // 2, zoning.n_cols // 2)
        matrix = synth_od_matrix(zoning, [center], seed=args.seed)

    coeffs = None
    if args.emissions:
        coeffs = load_emission_coeffs(args.emissions, args.vehicle_class)

    cfg = BenchmarkConfig(
        algorithms=algos, n_trips=args.n, k=args.k, runs=args.runs,
        seed=args.seed,
        params=baselines.AlgoParams(p=args.p, delta=args.delta,
                                    epsilon=args.epsilon, k=args.k,
                                    seed=args.seed),
        pick=args.pick, counting=args.counting,
        polaris_reset=args.polaris_reset, threads=args.threads, coeffs=coeffs)

    dump_lines: list[str] = []

    def route_sink(run_idx, algo, trip_id, route):
        names = " ".join(net.edge_names[e] for e in route.edges)
        dump_lines.append(f"{run_idx}:{trip_id} {algo} {names}\n")

    sink = route_sink if args.dump else None
    _progress(f"benchmark: {len(algos)} algorithms, {args.runs} runs of "
              f"{args.n} trips (k={args.k}, seed={args.seed})")
    if sweep is not None:
        param, values = sweep
        if param == "m" and max(values) > layers.m:
            raise ValidationError(
                f"sweep needs m={max(values)} layers but {args.layers} has "
                f"m={layers.m}")
        report = sweep_benchmark(net, layers, matrix, cfg, param, values,
                                 zoning)
    else:
        report = run_benchmark(net, layers, matrix, cfg, zoning,
                               route_sink=sink)

    stream, close = _out_stream(args.out)
    try:
        stream.write(report_to_json(report) + "\n")
    finally:
        if close:
            stream.close()
    if args.table:
        with open(args.table, "w", encoding="utf-8") as fh:
            fh.write(report_to_table(report))
    if args.dump:
        with open(args.dump, "w", encoding="utf-8") as fh:
            fh.writelines(dump_lines)
    _progress("benchmark done")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"kroad": _cmd_kroad, "route": _cmd_route,
                "demand": _cmd_demand, "bench": _cmd_bench}
    try:
        return handlers[args.command](args)
    except DataError as exc:
        print(f"altroute: {exc}", file=sys.stderr)
        return EXIT_DATA
    except AlgorithmError as exc:
        print(f"altroute: {exc}", file=sys.stderr)
        return EXIT_ALGORITHM


if __name__ == "__main__":
    sys.exit(main())
