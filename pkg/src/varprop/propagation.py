"""Moment propagation: means, second moments, and variances of node
marginals under parameter uncertainty.

Every stored probability vector is a random vector with known first and
second moments; distinct stored vectors are mutually independent. For a
child F with independent parents, E(p(f_i) p(f_j)) expands over pairs of
parent configurations: coinciding configurations contribute the stored
row's cross moment times the parents' joint second moment, differing
configurations factor into means. One engine handles three cases:

* prior moments on singly connected networks (downward pass);
* moments under evidence that lies strictly upstream (evidence nodes are
  removed, their children's sliced rows become the new conditionals);
* prior moments on loopy networks by conditioning on a cutset of roots,
  tracking per-condition means and cross-condition joint moments so that
  shared stored rows correlate conditions correctly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CutsetError, UnsupportedAnalysisError, UnsupportedEvidenceError
from .kernels import mix_second_moments
from .model import Evidence, Network, _is_forest, _skeleton_edges
from .moments import MomentTable, spec_moments


@dataclass(frozen=True)
class NodeMoments:
    """Propagated moments of one node's marginal probability vector."""

    node: str
    mean: np.ndarray      # mu_i = E(p(x_i))
    second: np.ndarray    # S_ij = E(p(x_i) p(x_j))
    term_products: int = 0

    @property
    def variance(self) -> np.ndarray:
        return np.diag(self.second) - self.mean**2

    def check(self, tol: float = 1e-10) -> list[str]:
        return MomentTable(mean=self.mean, second=self.second).check(tol)


@dataclass(frozen=True)
class ConditionedMoments:
    """Per-condition moments of one node while conditioning on a cutset.

    cond_mean[m, i]    = E(p(x_i | c_m))
    joint[m, n, i, j]  = E(p(x_i | c_m) p(x_j | c_n))
    """

    node: str
    cond_mean: np.ndarray
    joint: np.ndarray
    term_products: int = 0


def variance_of(m: NodeMoments, i: int) -> float:
    """V(p(x_i)) = E(p(x_i)^2) - E(p(x_i))^2."""
    if not 0 <= i < len(m.mean):
        raise IndexError(f"alternative index {i} out of range for {m.node!r}")
    return float(m.second[i, i] - m.mean[i] ** 2)


def mix_child_moments(parent_moments: list[NodeMoments],
                      cpt: list[MomentTable], node: str = "") -> NodeMoments:
    """Moments of a child from independent parents' moments and its CPT.

    ``cpt`` holds one MomentTable per parent configuration in canonical
    row-major order (last parent fastest).
    """
    sizes = [len(pm.mean) for pm in parent_moments]
    n_cfg = int(np.prod(sizes)) if sizes else 1
    if len(cpt) != n_cfg:
        raise ValueError(f"{len(cpt)} cpt rows for {n_cfg} parent configurations")
    t = cpt[0].size
    if any(mt.size != t for mt in cpt):
        raise ValueError("cpt rows have inconsistent lengths")

    row_mean = np.asarray([mt.mean for mt in cpt])
    row_second = np.asarray([mt.second for mt in cpt])
    row_ids = np.arange(n_cfg, dtype=np.int64).reshape(1, n_cfg)

    mean_factor = np.ones((1, 1))
    pair_factor = np.ones((1, 1, 1, 1))
    for pm in parent_moments:
        tp = len(pm.mean)
        mean_factor = (mean_factor[:, :, None] * pm.mean[None, None, :]).reshape(1, -1)
        pair_factor = (pair_factor[:, :, :, None, :, None]
                       * pm.second[None, None, None, :, None, :])
        c = pair_factor.shape[2] * tp
        pair_factor = pair_factor.reshape(1, 1, c, c)

    mu, joint, terms = mix_second_moments(row_ids, row_mean, row_second,
                                          mean_factor, pair_factor)
    return NodeMoments(node=node, mean=mu[0], second=joint[0, 0], term_products=terms)


# ---------------------------------------------------------------------------
# Conditioned engine


def _node_row_tables(node):
    means = np.asarray([spec_moments(s).mean for s in node.cpd])
    seconds = np.asarray([spec_moments(s).second for s in node.cpd])
    return means, seconds


def _propagate_conditioned(net: Network, removed_values: dict[str, np.ndarray],
                           n_conditions: int) -> dict[str, ConditionedMoments]:
    """Per-condition moments for all nodes not in ``removed_values``.

    removed_values[name][m] is the alternative index the removed node
    takes under joint condition m. Requires the reduced network (removed
    nodes deleted, children's rows sliced) to be singly connected with
    mutually independent parents, which the public entry points check.
    """
    K = n_conditions
    result: dict[str, ConditionedMoments] = {}
    for name in net.topological_order():
        if name in removed_values:
            continue
        node = net.node(name)
        free = [p for p in node.parents if p not in removed_values]
        row_mean, row_second = _node_row_tables(node)

        sizes = [net.node(p).n_alternatives for p in free]
        n_cfg = int(np.prod(sizes)) if sizes else 1
        row_ids = np.empty((K, n_cfg), dtype=np.int64)
        for m in range(K):
            for c in range(n_cfg):
                digits = np.unravel_index(c, sizes) if sizes else ()
                assign = dict(zip(free, (int(d) for d in digits)))
                for p in node.parents:
                    if p in removed_values:
                        assign[p] = int(removed_values[p][m])
                row_ids[m, c] = net.config_index(node, assign)

        mean_factor = np.ones((K, 1))
        pair_factor = np.ones((K, K, 1, 1))
        for p in free:
            pm = result[p]
            tp = pm.cond_mean.shape[1]
            mean_factor = (mean_factor[:, :, None]
                           * pm.cond_mean[:, None, :]).reshape(K, -1)
            pair_factor = (pair_factor[:, :, :, None, :, None]
                           * pm.joint[:, :, None, :, None, :])
            c = pair_factor.shape[2] * tp
            pair_factor = pair_factor.reshape(K, K, c, c)

        mu, joint, terms = mix_second_moments(row_ids, row_mean, row_second,
                                              mean_factor, pair_factor)
        result[name] = ConditionedMoments(node=name, cond_mean=mu, joint=joint,
                                          term_products=terms)
    return result


def _require_singly_connected(net: Network, op: str) -> None:
    if not _is_forest(net.node_names(), _skeleton_edges(net)):
        raise UnsupportedAnalysisError(
            f"{op} requires a singly connected network; "
            "use conditioned_prior_moments with a root cutset")


# ---------------------------------------------------------------------------
# Public operations


def propagate_prior_moments(net: Network) -> dict[str, NodeMoments]:
    """Prior moments of every node's marginal, singly connected networks."""
    _require_singly_connected(net, "prior moment propagation")
    cond = _propagate_conditioned(net, {}, 1)
    return {name: NodeMoments(node=name, mean=cm.cond_mean[0],
                              second=cm.joint[0, 0],
                              term_products=cm.term_products)
            for name, cm in cond.items()}


def _ancestors(net: Network, name: str) -> set[str]:
    out: set[str] = set()
    stack = list(net.node(name).parents)
    while stack:
        p = stack.pop()
        if p not in out:
            out.add(p)
            stack.extend(net.node(p).parents)
    return out


def downstream_evidence_moments(net: Network, ev: Evidence) -> dict[str, NodeMoments]:
    """Moments of remaining nodes' conditionals given strictly upstream evidence.

    Every ancestor of an evidence node must itself be in evidence; the
    evidence nodes are then removed and their children's sliced rows act
    as the new stored conditionals. Evidence elsewhere (diagnostic
    direction) has no exact downward scheme; Monte Carlo estimation
    covers it.
    """
    _require_singly_connected(net, "downstream-evidence propagation")
    ev_map = ev.as_dict()
    for w in ev_map:
        for anc in sorted(_ancestors(net, w)):
            if anc not in ev_map:
                raise UnsupportedEvidenceError(
                    f"node {anc!r} is an uninstantiated ancestor of evidence node "
                    f"{w!r}; only upstream evidence supports exact moments "
                    "(use Monte Carlo estimation instead)", node=anc)
    removed = {name: np.asarray([val]) for name, val in ev_map.items()}
    cond = _propagate_conditioned(net, removed, 1)
    return {name: NodeMoments(node=name, mean=cm.cond_mean[0],
                              second=cm.joint[0, 0],
                              term_products=cm.term_products)
            for name, cm in cond.items()}


def conditioned_prior_moments(net: Network, cutset: list[str]) -> dict[str, NodeMoments]:
    """Prior moments via conditioning on a cutset of root nodes.

    For each joint cutset configuration the reduced network is propagated
    while tracking cross-condition joint moments; results combine as
    mu_i = sum_m mu_i^(m) E(p(c_m)) and
    S_ij = sum_{m,n} J_ij^(m,n) E(p(c_m) p(c_n)).
    """
    if not cutset:
        raise CutsetError("cutset must name at least one root node")
    if len(set(cutset)) != len(cutset):
        raise CutsetError("cutset names repeat")
    for name in cutset:
        if name not in net.node_names():
            raise CutsetError(f"cutset node {name!r} is not in the network")
        if net.node(name).parents:
            raise CutsetError(f"cutset node {name!r} is not a root")
    remaining = [n for n in net.node_names() if n not in cutset]
    rem_edges = {(a, b) for a, b in _skeleton_edges(net)
                 if a not in cutset and b not in cutset}
    if not _is_forest(remaining, rem_edges):
        raise CutsetError("removing the cutset leaves an undirected cycle")

    sizes = [net.node(c).n_alternatives for c in cutset]
    K = int(np.prod(sizes))
    grids = np.unravel_index(np.arange(K), sizes)
    removed = {name: grids[i].astype(np.int64) for i, name in enumerate(cutset)}
    cond = _propagate_conditioned(net, removed, K)

    # E(p(c_m)) and E(p(c_m) p(c_n)) over the joint cutset configuration,
    # cutset roots mutually independent.
    w = np.ones(1)
    W = np.ones((1, 1))
    for name in cutset:
        mt = spec_moments(net.node(name).cpd[0])
        w = np.kron(w, mt.mean)
        W = np.kron(W, mt.second)

    out: dict[str, NodeMoments] = {}
    for name in net.node_names():
        if name in cutset:
            mt = spec_moments(net.node(name).cpd[0])
            out[name] = NodeMoments(node=name, mean=mt.mean, second=mt.second)
        else:
            cm = cond[name]
            mean = w @ cm.cond_mean
            second = np.einsum("mn,mnij->ij", W, cm.joint)
            out[name] = NodeMoments(node=name, mean=mean, second=second,
                                    term_products=cm.term_products)
    return out
