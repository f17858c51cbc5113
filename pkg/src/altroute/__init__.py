"""Popularity-aware alternative routing on road networks.

The package provides the road-network model, shortest-path substrate,
the layered road-popularity measure (K_road), the multi-layer
penalization router (polaris) and its comparison baselines, synthetic
mobility demand, and the three-measure evaluation harness.
"""

from .baselines import (AlgoParams, fastest, graph_randomization, kmd,
                        path_penalization, path_randomization)
from .benchmark import (BenchmarkConfig, report_to_json, report_to_table,
                        run_benchmark, sweep_benchmark)
from .demand import (Demand, ODMatrix, TripRequest, Zoning, build_tiling,
                     load_demand, load_od_matrix, sample_demand, save_demand,
                     save_od_matrix, synth_od_matrix)
from .errors import (AlgorithmError, AltRouteError, DataError,
                     DegenerateDistribution, EmptyZone, InsufficientCandidates,
                     IterationCapExceeded, ParseError, RouteNotFound,
                     SamplingExhausted, SchemaMismatch, ValidationError)
from .evaluation import (EmissionCoeffs, EvaluationReport, KinematicProfile,
                         TrajectoryPoint, co2_rate_raw, hbefa_co2,
                         highly_popular_fraction, load_emission_coeffs,
                         mean_pairwise_overlap, regulated_fraction,
                         regulated_stats, route_overlap, synth_trajectory,
                         total_emissions)
from .kroad import (KRoadLayers, PopularityClass, classify_popularity,
                    compute_kroad, compute_kroad_layers, load_layers,
                    min_max_normalize, save_layers)
from .network import (RoadEdge, RoadNetwork, RoadNode, ValidationReport,
                      free_flow_weights, load_network, save_id_map,
                      serialize_network, validate, validate_weights)
from .pathfinding import (ODPair, Route, is_reachable, recost, route_cost,
                          sample_random_od, shortest_path)
from .polaris import PolarisRequest, RouteSet, polaris_routes
from .synthetic import grid_network

__version__ = "0.1.0"

__all__ = [
    "AlgoParams", "AlgorithmError", "AltRouteError", "BenchmarkConfig",
    "DataError", "DegenerateDistribution", "Demand", "EmissionCoeffs",
    "EmptyZone", "EvaluationReport", "InsufficientCandidates",
    "IterationCapExceeded", "KinematicProfile", "KRoadLayers", "ODMatrix",
    "ODPair", "ParseError", "PolarisRequest", "PopularityClass", "RoadEdge",
    "RoadNetwork", "RoadNode", "Route", "RouteNotFound", "RouteSet",
    "SamplingExhausted", "SchemaMismatch", "TrajectoryPoint", "TripRequest",
    "ValidationError", "ValidationReport", "Zoning", "build_tiling",
    "classify_popularity", "co2_rate_raw", "compute_kroad",
    "compute_kroad_layers", "fastest", "free_flow_weights",
    "graph_randomization", "grid_network", "hbefa_co2",
    "highly_popular_fraction", "is_reachable", "kmd", "load_demand",
    "load_emission_coeffs", "load_layers", "load_network", "load_od_matrix",
    "mean_pairwise_overlap", "min_max_normalize", "path_penalization",
    "path_randomization", "polaris_routes", "recost", "regulated_fraction",
    "regulated_stats", "report_to_json", "report_to_table", "route_cost",
    "route_overlap", "run_benchmark", "sample_demand", "sample_random_od",
    "save_demand", "save_id_map", "save_layers", "save_od_matrix",
    "serialize_network", "shortest_path", "sweep_benchmark", "synth_od_matrix",
    "synth_trajectory", "total_emissions", "validate", "validate_weights",
]
