"""Brute-force ground truth by atom enumeration.

For networks whose stored distributions all have finite support, every
joint choice of atoms (one per stored row) determines a point network.
Enumerating the choices, weighting each by the product of atom weights,
and running exact inference in each yields the exact distribution (and
hence exact moments) of any node probability, prior or conditional. This
is the independent oracle the propagation code is validated against.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import OracleError, ZeroProbabilityEvidenceError
from .model import EMPTY_EVIDENCE, Evidence, Network
from .propagation import NodeMoments

COMBINATION_CAP = 10**6


def _atom_rows(net: Network):
    """Per stored row: (node index, row index, [(vector, weight), ...])."""
    rows = []
    for ni, node in enumerate(net.nodes):
        for ri, spec in enumerate(node.cpd):
            if spec.kind == "dirichlet":
                raise OracleError(
                    f"node {node.name!r} row {ri} is Dirichlet; the oracle "
                    "enumerates finite-support specs only")
            rows.append((ni, ri, spec.atoms()))
    return rows


def _joint_for_combo(net: Network, rows, combo, shapes, alts):
    ndim = len(net.nodes)
    joint = np.ones(alts)
    chosen: list[list[np.ndarray]] = [[] for _ in net.nodes]
    for (ni, _, atoms), k in zip(rows, combo):
        chosen[ni].append(atoms[k][0])
    for ni, node in enumerate(net.nodes):
        cpt = np.asarray(chosen[ni]).reshape(shapes[ni])
        axes = [net.node_index(p) for p in node.parents] + [ni]
        perm = sorted(range(len(axes)), key=lambda i: axes[i])
        full = [1] * ndim
        src = np.transpose(cpt, perm)
        for ax in sorted(axes):
            full[ax] = alts[ax]
        joint = joint * src.reshape(full)
    return joint


def _all_marginals(joint, ev_idx, alts):
    """Conditional marginal vector per node index for one combination."""
    sub = joint
    kept = list(range(len(alts)))
    for ax in sorted(ev_idx, reverse=True):
        sub = np.take(sub, ev_idx[ax], axis=kept.index(ax))
        kept.remove(ax)
    z = float(sub.sum())
    if z <= 0.0:
        raise ZeroProbabilityEvidenceError(
            "evidence has probability zero in an enumerated combination")
    out = {}
    for ni in range(len(alts)):
        if ni in ev_idx:
            vec = np.zeros(alts[ni])
            vec[ev_idx[ni]] = 1.0
            out[ni] = vec
        else:
            ax = kept.index(ni)
            others = tuple(a for a in range(sub.ndim) if a != ax)
            out[ni] = sub.sum(axis=others) / z
    return out


def enumerate_all_moments(net: Network,
                          ev: Evidence = EMPTY_EVIDENCE) -> dict[str, NodeMoments]:
    """Exact moments of every node's (conditional) marginal by enumeration."""
    rows = _atom_rows(net)
    n_combos = 1
    for _, _, atoms in rows:
        n_combos *= len(atoms)
        if n_combos > COMBINATION_CAP:
            raise OracleError(f"combination count exceeds {COMBINATION_CAP}")
    alts = tuple(n.n_alternatives for n in net.nodes)
    if int(np.prod(alts)) > COMBINATION_CAP:
        raise OracleError("joint state space too large to enumerate")
    shapes = [tuple(net.node(p).n_alternatives for p in node.parents)
              + (node.n_alternatives,) for node in net.nodes]
    ev_idx = {net.node_index(k): v for k, v in ev.as_dict().items()}

    mu = [np.zeros(t) for t in alts]
    sec = [np.zeros((t, t)) for t in alts]
    total_weight = 0.0
    for combo in itertools.product(*[range(len(a)) for _, _, a in rows]):
        weight = 1.0
        for (_, _, atoms), k in zip(rows, combo):
            weight *= atoms[k][1]
        joint = _joint_for_combo(net, rows, combo, shapes, alts)
        marg = _all_marginals(joint, ev_idx, alts)
        for ni in range(len(alts)):
            x = marg[ni]
            mu[ni] += weight * x
            sec[ni] += weight * np.outer(x, x)
        total_weight += weight
    if abs(total_weight - 1.0) > 1e-10:
        raise OracleError(f"combination weights sum to {total_weight!r}")
    return {node.name: NodeMoments(node=node.name, mean=mu[ni], second=sec[ni])
            for ni, node in enumerate(net.nodes)}


def enumerate_exact_moments(net: Network, ev: Evidence, node: str) -> NodeMoments:
    """Exact moments of one node's (conditional) marginal by enumeration."""
    if node not in net.node_names():
        raise OracleError(f"unknown node {node!r}")
    return enumerate_all_moments(net, ev)[node]
