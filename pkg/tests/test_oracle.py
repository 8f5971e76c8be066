import itertools

import numpy as np
import pytest

import varprop as vp
from conftest import build_net, random_polytree


def test_urn_value_set(urn_net):
    # enumerate the 8 coin combinations directly and collect P(F=f1)
    rows = [(node, r) for node in urn_net.nodes for r in range(len(node.cpd))]
    values = {}
    for combo in itertools.product(range(2), repeat=len(rows)):
        choice = dict(zip(rows, combo))

        def rows_fn(node, r, _c=choice):
            key = next(k for k in _c if k[0].name == node.name and k[1] == r)
            return np.asarray(node.cpd[r].finite[_c[key]][0])

        pnet = vp.point_network(urn_net, rows_fn)
        x = round(float(vp.query_marginal(pnet, vp.EMPTY_EVIDENCE, "F")[0]), 10)
        values[x] = values.get(x, 0) + 1
    assert set(values) == {0.25, 0.375, 0.625, 0.75}
    assert all(c == 2 for c in values.values())

    om = vp.enumerate_exact_moments(urn_net, vp.EMPTY_EVIDENCE, "F")
    assert om.mean[0] == pytest.approx(0.5, abs=1e-15)
    assert vp.variance_of(om, 0) == pytest.approx(0.0390625, abs=1e-15)


def test_all_point_network_single_combination(diamond_point_net):
    om = vp.enumerate_all_moments(diamond_point_net)
    for m in om.values():
        assert np.allclose(m.variance, 0.0, atol=1e-14)


def test_oracle_equals_propagation_both_ways():
    rng = np.random.default_rng(77)
    net = random_polytree(rng, 5)
    oracle = vp.enumerate_all_moments(net)
    prop = vp.propagate_prior_moments(net)
    for name in net.node_names():
        assert np.max(np.abs(oracle[name].mean - prop[name].mean)) < 1e-12
        assert np.max(np.abs(oracle[name].second - prop[name].second)) < 1e-12


def test_oracle_rejects_dirichlet(paper_net):
    with pytest.raises(vp.OracleError):
        vp.enumerate_exact_moments(paper_net, vp.EMPTY_EVIDENCE, "F")


def test_oracle_combination_cap():
    many = {"finite": [{"probs": [0.5, 0.5], "weight": 0.1}] * 10}
    nodes = [("N%d" % i, 2, [], [many]) for i in range(7)]
    net = build_net("big", nodes)
    with pytest.raises(vp.OracleError):
        vp.enumerate_all_moments(net)


def test_oracle_moments_satisfy_invariants():
    rng = np.random.default_rng(11)
    net = random_polytree(rng, 4)
    for m in vp.enumerate_all_moments(net).values():
        assert m.check(1e-10) == []


def test_oracle_unknown_node(urn_net):
    with pytest.raises(vp.OracleError):
        vp.enumerate_exact_moments(urn_net, vp.EMPTY_EVIDENCE, "X")
