import json

import numpy as np
import pytest

import varprop as vp
from conftest import D00, build_net, diamond_structure, random_loopy
from varprop.model import _is_forest, _skeleton_edges


def test_parse_two_node_paper_document(paper_net):
    assert len(paper_net.nodes) == 2
    f = paper_net.node("F")
    assert len(f.cpd) == 2
    assert f.parents == ("E",)
    assert all(s.kind == "dirichlet" and s.dirichlet == (0, 0) for s in f.cpd)


def test_parse_degenerate_point_root():
    net = build_net("deg", [("A", 2, [], [{"point": [1.0, 0.0]}])])
    assert net.node("A").cpd[0].point == (1.0, 0.0)


def test_parse_missing_cpd_row():
    doc = {"name": "bad", "nodes": [
        {"name": "E", "alternatives": ["e1", "e2"], "parents": [], "cpd": [D00]},
        {"name": "F", "alternatives": ["f1", "f2"], "parents": ["E"], "cpd": [D00]},
    ]}
    with pytest.raises(vp.NetworkFormatError, match="cpd"):
        vp.parse_network(json.dumps(doc))


def test_parse_syntax_error_reports_position():
    with pytest.raises(vp.NetworkFormatError, match="line"):
        vp.parse_network('{"name": "x", "nodes": [')


def test_serialize_round_trip(paper_net, urn_net, chain_net):
    for net in (paper_net, urn_net, chain_net):
        again = vp.parse_network(vp.serialize_network(net))
        assert again == net
        assert again.node_names() == net.node_names()


def test_validate_diamond_clean(diamond_point_net):
    assert vp.validate_network(diamond_point_net) == []


def test_validate_simplex_violation_names_row():
    doc = {"name": "bad", "nodes": [
        {"name": "E", "alternatives": ["e1", "e2"], "parents": [],
         "cpd": [{"point": [0.5, 0.6]}]}]}
    from varprop.model import network_from_obj
    violations = vp.validate_network(network_from_obj(doc))
    assert len(violations) == 1
    v = violations[0]
    assert v.rule == "simplex" and v.node == "E" and v.row == 0


def test_validate_self_parent_cycle():
    doc = {"name": "bad", "nodes": [
        {"name": "E", "alternatives": ["e1", "e2"], "parents": ["E"],
         "cpd": [D00, D00]}]}
    from varprop.model import network_from_obj
    rules = {v.rule for v in vp.validate_network(network_from_obj(doc))}
    assert "cycle" in rules


def test_validate_directed_cycle():
    doc = {"name": "bad", "nodes": [
        {"name": "A", "alternatives": ["a1", "a2"], "parents": ["B"], "cpd": [D00, D00]},
        {"name": "B", "alternatives": ["b1", "b2"], "parents": ["A"], "cpd": [D00, D00]},
    ]}
    from varprop.model import network_from_obj
    rules = {v.rule for v in vp.validate_network(network_from_obj(doc))}
    assert "cycle" in rules


def test_validate_is_pure(diamond_point_net):
    first = vp.validate_network(diamond_point_net)
    second = vp.validate_network(diamond_point_net)
    assert first == second == []


def test_classify_chain_is_tree(chain_net):
    rep = vp.classify_topology(chain_net)
    assert rep.topology_class == "tree"
    assert rep.suggested_cutset == ()
    assert rep.node_count == 3
    assert rep.value_count == 2 + 4 + 4


def test_classify_diamond(diamond_point_net):
    rep = vp.classify_topology(diamond_point_net)
    assert rep.topology_class == "multiply_connected"
    assert rep.suggested_cutset == ("C",)
    assert rep.root_cutset_available


def test_classify_two_roots_common_child():
    net = build_net("vee", [
        ("D", 2, [], [D00]),
        ("E", 2, [], [D00]),
        ("F", 2, ["D", "E"], [D00] * 4),
    ])
    rep = vp.classify_topology(net)
    assert rep.topology_class == "singly_connected"
    assert rep.max_parents == 2 and rep.min_parents == 0


def test_classify_no_root_cutset():
    # the loop B-C-E-D-B contains no root, so no root cutset can break it
    net = build_net("loop", [
        ("A", 2, [], [D00]),
        ("B", 2, ["A"], [D00] * 2),
        ("C", 2, ["B"], [D00] * 2),
        ("D", 2, ["B"], [D00] * 2),
        ("E", 2, ["C", "D"], [D00] * 4),
    ])
    rep = vp.classify_topology(net)
    assert rep.topology_class == "multiply_connected"
    assert not rep.root_cutset_available
    assert rep.suggested_cutset == ()


@pytest.mark.parametrize("seed", range(10))
def test_suggested_cutset_breaks_all_loops(seed):
    rng = np.random.default_rng(seed)
    net = random_loopy(rng, 5)
    rep = vp.classify_topology(net)
    assert rep.topology_class == "multiply_connected"
    assert rep.root_cutset_available
    removed = set(rep.suggested_cutset)
    names = [n for n in net.node_names() if n not in removed]
    edges = {(a, b) for a, b in _skeleton_edges(net)
             if a not in removed and b not in removed}
    assert _is_forest(names, edges)


def test_parse_evidence(chain_net):
    ev = vp.parse_evidence('{"evidence": {"D": "d1"}}', chain_net)
    assert ev.as_dict() == {"D": 0}
    with pytest.raises(vp.NetworkFormatError):
        vp.parse_evidence('{"evidence": {"X": "x1"}}', chain_net)
    with pytest.raises(vp.NetworkFormatError):
        vp.parse_evidence('{"evidence": {"D": "nope"}}', chain_net)
