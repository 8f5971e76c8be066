"""Exact inference on a fully determined (point-valued) network.

Variable elimination over the joint factorization, min-degree ordering
with declaration-order tie-breaking. One engine covers trees, polytrees
and loopy graphs; networks here are desk-scale, so no log-space or
treewidth heuristics beyond min-degree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroProbabilityEvidenceError
from .model import EMPTY_EVIDENCE, Evidence, Network
from .moments import spec_moments


@dataclass(frozen=True)
class PointNetwork:
    """A network whose cpd rows are plain probability vectors.

    ``cpts[i]`` has shape (*parent alternative counts, t_i), axes in
    declared parent order (matching the canonical row-major row index).
    """

    name: str
    node_names: tuple[str, ...]
    alternatives: tuple[tuple[str, ...], ...]
    parents: tuple[tuple[str, ...], ...]
    cpts: tuple[np.ndarray, ...]

    def index(self, name: str) -> int:
        return self.node_names.index(name)

    def n_alternatives(self, name: str) -> int:
        return len(self.alternatives[self.index(name)])


def point_network(net: Network, rows_fn) -> PointNetwork:
    """Build a PointNetwork with per-row vectors supplied by ``rows_fn(node, r)``."""
    names, alts, parents, cpts = [], [], [], []
    for node in net.nodes:
        t = node.n_alternatives
        shape = tuple(net.node(p).n_alternatives for p in node.parents) + (t,)
        rows = np.asarray([rows_fn(node, r) for r in range(len(node.cpd))], dtype=float)
        names.append(node.name)
        alts.append(node.alternatives)
        parents.append(node.parents)
        cpts.append(rows.reshape(shape))
    return PointNetwork(name=net.name, node_names=tuple(names),
                        alternatives=tuple(alts), parents=tuple(parents),
                        cpts=tuple(cpts))


def instantiate_expected(net: Network) -> PointNetwork:
    """Replace every stored distribution by its mean vector."""
    return point_network(net, lambda node, r: spec_moments(node.cpd[r]).mean)


# ---------------------------------------------------------------------------
# Variable elimination

class _Factor:
    __slots__ = ("vars", "table")

    def __init__(self, vars, table):
        self.vars = tuple(vars)  # node indices, ascending
        self.table = table       # ndarray, one axis per var in order

    def restrict(self, var, value):
        axis = self.vars.index(var)
        return _Factor(self.vars[:axis] + self.vars[axis + 1:],
                       np.take(self.table, value, axis=axis))


def _multiply(a: _Factor, b: _Factor) -> _Factor:
    out_vars = tuple(sorted(set(a.vars) | set(b.vars)))

    def expand(f):
        shape = [1] * len(out_vars)
        src = f.table
        # move axes into out_vars order, then broadcast missing ones
        perm = sorted(range(len(f.vars)), key=lambda i: out_vars.index(f.vars[i]))
        src = np.transpose(src, perm)
        k = 0
        for i, v in enumerate(out_vars):
            if v in f.vars:
                shape[i] = src.shape[k]
                k += 1
        return src.reshape(shape)

    return _Factor(out_vars, expand(a) * expand(b))


def _sum_out(f: _Factor, var) -> _Factor:
    axis = f.vars.index(var)
    return _Factor(f.vars[:axis] + f.vars[axis + 1:], f.table.sum(axis=axis))


def _base_factors(pnet: PointNetwork, ev: dict[str, int]) -> list[_Factor]:
    ev_idx = {pnet.index(k): v for k, v in ev.items()}
    factors = []
    for i, name in enumerate(pnet.node_names):
        vars = tuple(pnet.index(p) for p in pnet.parents[i]) + (i,)
        # reorder axes to ascending node index
        order = sorted(range(len(vars)), key=lambda k: vars[k])
        f = _Factor(tuple(sorted(vars)), np.transpose(pnet.cpts[i], order))
        for v in sorted(set(f.vars) & set(ev_idx)):
            f = f.restrict(v, ev_idx[v])
        factors.append(f)
    return factors


def _elimination_order(factors: list[_Factor], keep: set[int]) -> list[int]:
    # min-degree on the factor interaction graph, ties by node index
    neighbors: dict[int, set[int]] = {}
    for f in factors:
        for v in f.vars:
            neighbors.setdefault(v, set()).update(f.vars)
    todo = [v for v in sorted(neighbors) if v not in keep]
    order = []
    while todo:
        v = min(todo, key=lambda u: (len(neighbors[u]), u))
        order.append(v)
        todo.remove(v)
        nbrs = neighbors.pop(v) - {v}
        for u in nbrs:
            if u in neighbors:
                neighbors[u] = (neighbors[u] | nbrs) - {v}
    return order


def _eliminate(factors: list[_Factor], order: list[int]) -> _Factor:
    factors = list(factors)
    for v in order:
        touching = [f for f in factors if v in f.vars]
        rest = [f for f in factors if v not in f.vars]
        if not touching:
            continue
        prod = touching[0]
        for f in touching[1:]:
            prod = _multiply(prod, f)
        factors = rest + [_sum_out(prod, v)]
    result = factors[0]
    for f in factors[1:]:
        result = _multiply(result, f)
    return result


def query_marginal(pnet: PointNetwork, ev: Evidence, node: str,
                   order: list[int] | None = None) -> np.ndarray:
    """Exact P(node | ev) as a probability vector."""
    ev_map = ev.as_dict()
    degenerate = node in ev_map
    idx = pnet.index(node)
    factors = _base_factors(pnet, ev_map)
    if order is None:
        order = _elimination_order(factors, keep={idx})
    result = _eliminate(factors, [v for v in order if v != idx])
    vec = result.table
    if degenerate:
        # evidence pins the query node; the table has collapsed to P(ev)
        total = float(np.asarray(vec).sum())
        if total <= 0.0:
            raise ZeroProbabilityEvidenceError(
                f"evidence {ev_map!r} has probability zero")
        out = np.zeros(pnet.n_alternatives(node))
        out[ev_map[node]] = 1.0
        return out
    z = float(vec.sum())
    if z <= 0.0:
        raise ZeroProbabilityEvidenceError(
            f"evidence {ev_map!r} has probability zero")
    return vec / z


def exact_marginals(pnet: PointNetwork, ev: Evidence = EMPTY_EVIDENCE) -> dict[str, np.ndarray]:
    """Exact conditional marginal of every node given ``ev``."""
    return {name: query_marginal(pnet, ev, name) for name in pnet.node_names}
