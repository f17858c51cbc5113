import numpy as np
import pytest

import altroute as ar

CYCLE3 = """\
# three-node directed cycle
NODE A 0.0 0.0 0
NODE B 0.001 0.0 1
NODE C 0.0005 0.001 0
EDGE ab A B 100 10
EDGE bc B C 80 8 2
EDGE ca C A 60 10
"""


def write(tmp_path, text, name="net.txt"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_load_triangle(tmp_path):
    net = ar.load_network(write(tmp_path, CYCLE3))
    assert net.n_nodes == 3
    assert net.n_edges == 3
    assert net.node_names == ["A", "B", "C"]
    assert net.name_to_edge["bc"] == 1
    assert net.lanes.tolist() == [1, 2, 1]
    assert net.regulated.tolist() == [False, True, False]


def test_load_unknown_node(tmp_path):
    bad = CYCLE3 + "EDGE ax A X 10 10\n"
    with pytest.raises(ar.ValidationError, match="unknown node 'X'"):
        ar.load_network(write(tmp_path, bad))


def test_load_nonpositive_attributes(tmp_path):
    with pytest.raises(ar.ValidationError, match="non-positive length"):
        ar.load_network(write(tmp_path, CYCLE3.replace("EDGE ab A B 100 10",
                                                       "EDGE ab A B 0 10")))
    with pytest.raises(ar.ValidationError, match="non-positive speed"):
        ar.load_network(write(tmp_path, CYCLE3.replace("EDGE ab A B 100 10",
                                                       "EDGE ab A B 100 -3")))


def test_parse_errors(tmp_path):
    with pytest.raises(ar.ParseError, match=":1"):
        ar.load_network(write(tmp_path, "WHAT is this\n"))
    with pytest.raises(ar.ParseError, match="regulated flag"):
        ar.load_network(write(tmp_path, "NODE A 0 0 7\n"))
    with pytest.raises(ar.ParseError):
        ar.load_network(tmp_path / "missing.txt")
    with pytest.raises(ar.ParseError, match="no NODE records"):
        ar.load_network(write(tmp_path, "# only a comment\n"))


def test_regulation_defaults_to_unregulated(tmp_path):
    net = ar.load_network(write(tmp_path, "NODE A 0 0\nNODE B 0.1 0 1\nEDGE ab A B 5 5\n"))
    assert net.regulated.tolist() == [False, True]


def test_duplicate_ids_rejected(tmp_path):
    with pytest.raises(ar.ValidationError, match="duplicate node"):
        ar.load_network(write(tmp_path, "NODE A 0 0\nNODE A 1 1\n"))
    with pytest.raises(ar.ValidationError, match="duplicate edge"):
        ar.load_network(write(tmp_path, CYCLE3 + "EDGE ab A B 5 5\n"))


def test_serialize_round_trip(tmp_path, tri_net):
    path = tmp_path / "out.txt"
    ar.serialize_network(tri_net, path)
    again = ar.load_network(path)
    assert again.node_names == tri_net.node_names
    assert again.edge_names == tri_net.edge_names
    assert np.array_equal(again.lon, tri_net.lon)
    assert np.array_equal(again.lat, tri_net.lat)
    assert np.array_equal(again.regulated, tri_net.regulated)
    assert np.array_equal(again.edge_from, tri_net.edge_from)
    assert np.array_equal(again.edge_to, tri_net.edge_to)
    assert np.array_equal(again.length, tri_net.length)
    assert np.array_equal(again.speed_limit, tri_net.speed_limit)
    # serializing the reload reproduces the exact bytes
    path2 = tmp_path / "out2.txt"
    ar.serialize_network(again, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_free_flow_weights():
    nodes = [("A", 0, 0, 0), ("B", 0.001, 0, 0), ("C", 0.002, 0, 0)]
    edges = [("e1", "A", "B", 100.0, 10.0), ("e2", "B", "C", 50.0, 25.0)]
    net = ar.RoadNetwork.from_records(nodes, edges)
    assert ar.free_flow_weights(net).tolist() == [10.0, 2.0]


def test_free_flow_strictly_positive(grid10):
    assert np.all(ar.free_flow_weights(grid10) > 0)


def test_validate_clean(tri_net):
    report = ar.validate(tri_net)
    assert report.ok
    assert report.unreachable_nodes == 0
    assert report.has_core_component


def test_validate_isolated_node(tri_net):
    nodes = [(n, 0.001 * i, 0.0, False) for i, n in enumerate("ABC")]
    nodes.append(("Z", 0.5, 0.5, False))
    edges = [("ab", "A", "B", 10, 10), ("ba", "B", "A", 10, 10),
             ("bc", "B", "C", 10, 10), ("cb", "C", "B", 10, 10)]
    net = ar.RoadNetwork.from_records(nodes, edges)
    report = ar.validate(net)
    assert report.unreachable_nodes == 1
    assert not report.ok


def test_validate_flags_negative_length():
    # bypass the strict constructor to exercise the reporting path
    net = ar.RoadNetwork(["A", "B"], [0, 0.001], [0, 0], [False, False],
                         ["ab"], [0], [1], [-5.0], [10.0], [1])
    report = ar.validate(net)
    assert any("length" in item for item in report.nonpositive)


def test_node_and_edge_views(tri_net):
    node = tri_net.node(1)
    assert (node.name, node.regulated) == ("B", True)
    edge = tri_net.edge(tri_net.name_to_edge["cb"])
    assert edge.length == 10.0
    assert edge.free_flow_time == 1.0


def test_id_map_sidecar(tmp_path, tri_net):
    path = tmp_path / "net.idmap"
    ar.save_id_map(tri_net, path)
    lines = path.read_text().splitlines()
    assert "NODE A 0" in lines
    assert "EDGE cb 4" in lines


def test_validate_weights(tri_net):
    ar.validate_weights(tri_net, ar.free_flow_weights(tri_net))
    with pytest.raises(ar.ValidationError, match="entries"):
        ar.validate_weights(tri_net, np.ones(3))
    bad = ar.free_flow_weights(tri_net)
    bad[0] = 0.0
    with pytest.raises(ar.ValidationError, match="non-positive"):
        ar.validate_weights(tri_net, bad)
