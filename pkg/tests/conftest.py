import json

import numpy as np
import pytest

import varprop as vp


def build_net(name, nodes):
    """nodes: list of (name, n_alts, parents, cpd_specs)."""
    doc = {"name": name, "nodes": [
        {"name": n, "alternatives": [f"{n.lower()}{k+1}" for k in range(t)],
         "parents": ps, "cpd": cpd}
        for n, t, ps, cpd in nodes]}
    return vp.parse_network(json.dumps(doc))


D00 = {"dirichlet": [0, 0]}
URN = {"finite": [{"probs": [0.25, 0.75], "weight": 0.5},
                  {"probs": [0.75, 0.25], "weight": 0.5}]}


@pytest.fixture
def paper_net():
    """Two-node tree E -> F, everything symmetric Dirichlet(0,0)."""
    return build_net("paper", [
        ("E", 2, [], [D00]),
        ("F", 2, ["E"], [D00, D00]),
    ])


@pytest.fixture
def urn_net():
    """Urn/coin network: the finite-support two-node example."""
    return build_net("urn", [
        ("E", 2, [], [URN]),
        ("F", 2, ["E"], [URN, URN]),
    ])


@pytest.fixture
def chain_net():
    """D -> E -> F, all Dirichlet(0,0)."""
    return build_net("chain", [
        ("D", 2, [], [D00]),
        ("E", 2, ["D"], [D00, D00]),
        ("F", 2, ["E"], [D00, D00]),
    ])


def diamond_structure():
    return [("C", 2, []), ("D", 2, ["C"]), ("E", 2, ["C"]), ("F", 2, ["D", "E"])]


@pytest.fixture
def diamond_point_net():
    rows = {"C": 1, "D": 2, "E": 2, "F": 4}
    rng = np.random.default_rng(7)
    nodes = []
    for n, t, ps in diamond_structure():
        cpd = [{"point": list(random_simplex(rng, t))} for _ in range(rows[n])]
        nodes.append((n, t, ps, cpd))
    return build_net("diamond", nodes)


def random_simplex(rng, t):
    v = rng.dirichlet(np.ones(t))
    v = v / v.sum()
    v[-1] = 1.0 - v[:-1].sum()
    return v


def random_finite_spec(rng, t, max_atoms, budget):
    """A finite spec with at most max_atoms atoms, atom count <= budget."""
    k = int(rng.integers(1, min(max_atoms, max(budget, 1)) + 1))
    if k == 1:
        return {"point": list(random_simplex(rng, t))}, 1
    w = rng.dirichlet(np.ones(k))
    w = w / w.sum()
    w[-1] = 1.0 - w[:-1].sum()
    atoms = [{"probs": list(random_simplex(rng, t)), "weight": float(wi)}
             for wi in w]
    return {"finite": atoms}, k


def random_polytree(rng, n_nodes, max_alts=3, max_atoms=3, combo_cap=1500):
    """Random polytree with finite-support specs, combination count capped."""
    alts = [int(rng.integers(2, max_alts + 1)) for _ in range(n_nodes)]
    parents = [[] for _ in range(n_nodes)]
    for i in range(1, n_nodes):
        j = int(rng.integers(0, i))
        if rng.random() < 0.5:
            parents[i].append(j)
        else:
            parents[j].append(i)
    names = [f"N{i}" for i in range(n_nodes)]
    combos = 1
    nodes = []
    for i in range(n_nodes):
        n_rows = int(np.prod([alts[p] for p in parents[i]])) if parents[i] else 1
        cpd = []
        for _ in range(n_rows):
            budget = combo_cap // max(combos, 1)
            spec, k = random_finite_spec(rng, alts[i], max_atoms, budget)
            combos *= k
            cpd.append(spec)
        nodes.append((names[i], alts[i], [names[p] for p in parents[i]], cpd))
    return build_net("rand", nodes)


def random_loopy(rng, n_nodes, max_alts=3, max_atoms=3, combo_cap=1500):
    """Random polytree plus one extra root pointing at two nodes, so the
    skeleton gains exactly one loop breakable by that root."""
    base = random_polytree(rng, n_nodes, max_alts, max_atoms, combo_cap // 4)
    alts = {n.name: n.n_alternatives for n in base.nodes}
    t_r = int(rng.integers(2, max_alts + 1))
    targets = [str(s) for s in rng.choice(base.node_names(), size=2, replace=False)]
    combos = combo_cap // 4

    nodes = []
    root_cpd, k = random_finite_spec(rng, t_r, max_atoms, combo_cap)
    combos *= k
    nodes.append(("R", t_r, [], [root_cpd]))
    for n in base.nodes:
        ps = list(n.parents)
        if n.name in targets:
            ps = ["R"] + ps
            n_rows = t_r * len(n.cpd)
            cpd = []
            for _ in range(n_rows):
                budget = combo_cap // max(combos, 1)
                spec, k = random_finite_spec(rng, alts[n.name], max_atoms, budget)
                combos *= k
                cpd.append(spec)
        else:
            from varprop.model import _spec_to_obj
            cpd = [_spec_to_obj(s) for s in n.cpd]
        nodes.append((n.name, alts[n.name], ps, cpd))
    return build_net("randloop", nodes)
