import numpy as np
import pytest

import altroute as ar


@pytest.fixture
def tri_net():
    """Bidirectional triangle: A-B 5 s, A-C 3 s, C-B 1 s."""
    nodes = [("A", 0.0, 0.0, False), ("B", 0.004, 0.0, True),
             ("C", 0.002, 0.002, False)]
    edges = [("ab", "A", "B", 50.0, 10.0), ("ba", "B", "A", 50.0, 10.0),
             ("ac", "A", "C", 30.0, 10.0), ("ca", "C", "A", 30.0, 10.0),
             ("cb", "C", "B", 10.0, 10.0), ("bc", "B", "C", 10.0, 10.0)]
    return ar.RoadNetwork.from_records(nodes, edges)


@pytest.fixture
def diamond():
    """Two o->d paths: top (edges 0, 1) costs 10 s, bottom (2, 3) 11 s."""
    nodes = [("o", 0.0, 0.0, False), ("a", 0.001, 0.001, False),
             ("b", 0.001, -0.001, True), ("d", 0.002, 0.0, False)]
    edges = [("oa", "o", "a", 50.0, 10.0), ("ad", "a", "d", 50.0, 10.0),
             ("ob", "o", "b", 55.0, 10.0), ("bd", "b", "d", 55.0, 10.0)]
    return ar.RoadNetwork.from_records(nodes, edges)


def make_layers(values, v=0, seed=0):
    return ar.KRoadLayers(values=np.asarray(values, dtype=float), v=v, seed=seed)


TOP = (0, 1)     # diamond top path edge ids
BOTTOM = (2, 3)  # diamond bottom path edge ids


def far_od(net, rng, cols, min_offset=2):
    """A random OD pair on a grid network offset by at least min_offset
    cells in both grid directions, so many near-shortest alternative
    routes exist (a straight-line pair has only one short path)."""
    while True:
        od = ar.sample_random_od(net, rng)
        r1, c1 = divmod(od.origin, cols)
        r2, c2 = divmod(od.destination, cols)
        if abs(r1 - r2) >= min_offset and abs(c1 - c2) >= min_offset:
            return od


@pytest.fixture(scope="session")
def grid10():
    return ar.grid_network(rows=10, cols=10, spacing_m=250.0, corridor_rows=(5,))


@pytest.fixture(scope="session")
def grid20():
    """The benchmark network: 20x20 lattice with a fast central corridor."""
    return ar.grid_network(rows=20, cols=20, spacing_m=250.0, corridor_rows=(10,))


@pytest.fixture(scope="session")
def grid20_layers(grid20):
    return ar.compute_kroad_layers(grid20, v=1000, m=3, seed=2024)


@pytest.fixture(scope="session")
def grid20_matrix(grid20):
    zoning = ar.build_tiling(grid20)
    center = (zoning.n_rows // 2, zoning.n_cols // 2)
    return ar.synth_od_matrix(zoning, [center], seed=99)
