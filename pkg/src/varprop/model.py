"""Uncertain-network data model: file format, validation, topology.

A network is a DAG of discrete nodes. Each node stores, per parent
configuration, a distribution over its conditional probability vector
(a Dirichlet, a fixed point vector, or a finite mixture of vectors).
Parent configurations are indexed in row-major order over parent
alternative indices in the declared parent order (last parent varies
fastest); this ordering is canonical throughout the package.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import NetworkFormatError

SIMPLEX_TOL = 1e-12


@dataclass(frozen=True)
class DistributionSpec:
    """Uncertainty over one stored probability vector.

    Exactly one of the three representations is populated:

    * ``dirichlet``: tuple of non-negative integer counts a_1..a_t.
    * ``point``: a fixed probability vector (no uncertainty).
    * ``finite``: tuple of (probability vector, weight) atoms, weights
      positive and summing to 1.
    """

    kind: str  # 'dirichlet' | 'point' | 'finite'
    dirichlet: tuple[int, ...] | None = None
    point: tuple[float, ...] | None = None
    finite: tuple[tuple[tuple[float, ...], float], ...] | None = None

    @property
    def size(self) -> int:
        if self.kind == "dirichlet":
            return len(self.dirichlet)
        if self.kind == "point":
            return len(self.point)
        return len(self.finite[0][0])

    def atoms(self):
        """The spec as a list of (vector, weight) atoms.

        Only valid for point/finite specs; used by the enumeration oracle.
        """
        if self.kind == "point":
            return [(np.asarray(self.point, dtype=float), 1.0)]
        if self.kind == "finite":
            return [(np.asarray(v, dtype=float), w) for v, w in self.finite]
        raise ValueError("dirichlet specs have no finite atom decomposition")


def dirichlet_spec(counts) -> DistributionSpec:
    return DistributionSpec(kind="dirichlet", dirichlet=tuple(int(c) for c in counts))


def point_spec(probs) -> DistributionSpec:
    return DistributionSpec(kind="point", point=tuple(float(p) for p in probs))


def finite_spec(atoms) -> DistributionSpec:
    return DistributionSpec(
        kind="finite",
        finite=tuple((tuple(float(p) for p in v), float(w)) for v, w in atoms),
    )


@dataclass(frozen=True)
class NodeSpec:
    """One node: alternatives, parents, and one DistributionSpec per
    parent configuration (cpd rows in canonical row-major order)."""

    name: str
    alternatives: tuple[str, ...]
    parents: tuple[str, ...]
    cpd: tuple[DistributionSpec, ...]

    @property
    def n_alternatives(self) -> int:
        return len(self.alternatives)


@dataclass(frozen=True)
class Network:
    """Immutable uncertain network. Node order follows the document."""

    name: str
    nodes: tuple[NodeSpec, ...]
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {n.name: i for i, n in enumerate(self.nodes)})

    def node(self, name: str) -> NodeSpec:
        return self.nodes[self._index[name]]

    def node_index(self, name: str) -> int:
        return self._index[name]

    def node_names(self) -> list[str]:
        return [n.name for n in self.nodes]

    def parent_config_count(self, node: NodeSpec) -> int:
        count = 1
        for p in node.parents:
            count *= self.node(p).n_alternatives
        return count

    def config_index(self, node: NodeSpec, assignment: dict[str, int]) -> int:
        """Row index for a full parent assignment (row-major, declared order)."""
        idx = 0
        for p in node.parents:
            idx = idx * self.node(p).n_alternatives + assignment[p]
        return idx

    def topological_order(self) -> list[str]:
        order, seen = [], set()

        def visit(name):
            if name in seen:
                return
            seen.add(name)
            for p in self.node(name).parents:
                visit(p)
            order.append(name)

        for n in self.nodes:
            visit(n.name)
        return order


@dataclass(frozen=True)
class Evidence:
    """Observed alternatives: node name -> alternative index."""

    assignments: tuple[tuple[str, int], ...]

    @classmethod
    def of(cls, mapping: dict[str, int]) -> "Evidence":
        return cls(assignments=tuple(mapping.items()))

    def as_dict(self) -> dict[str, int]:
        return dict(self.assignments)

    def __bool__(self) -> bool:
        return bool(self.assignments)


EMPTY_EVIDENCE = Evidence(assignments=())


@dataclass(frozen=True)
class Violation:
    node: str | None
    row: int | None
    rule: str
    message: str

    def __str__(self):
        loc = self.node or "<network>"
        if self.row is not None:
            loc += f"[row {self.row}]"
        return f"{loc}: {self.rule}: {self.message}"


@dataclass(frozen=True)
class TopologyReport:
    """Structural class plus the size figures cost statements refer to."""

    topology_class: str  # 'tree' | 'singly_connected' | 'multiply_connected'
    suggested_cutset: tuple[str, ...]
    root_cutset_available: bool
    max_alternatives: int
    min_parents: int
    max_parents: int
    node_count: int
    value_count: int


# ---------------------------------------------------------------------------
# Simplex checks


def check_simplex(vec, tol: float = SIMPLEX_TOL) -> str | None:
    """Return a human-readable defect description, or None if valid."""
    v = np.asarray(vec, dtype=float)
    if v.ndim != 1 or len(v) == 0:
        return "not a vector"
    if np.any(v < 0):
        return f"negative entry {v.min():.6g}"
    s = float(v.sum())
    if abs(s - 1.0) > tol:
        return f"entries sum to {s!r}, not 1"
    return None


# ---------------------------------------------------------------------------
# Validation


def validate_network(net: Network) -> list[Violation]:
    """All invariant violations in ``net``; empty list iff valid.

    Pure: never raises on bad data, never mutates.
    """
    out: list[Violation] = []
    names = [n.name for n in net.nodes]
    seen = set()
    for n in names:
        if n in seen:
            out.append(Violation(n, None, "duplicate-node", "node name declared twice"))
        seen.add(n)
    known = set(names)

    for node in net.nodes:
        if node.n_alternatives < 2:
            out.append(Violation(node.name, None, "too-few-alternatives",
                                 f"{node.n_alternatives} alternatives, need >= 2"))
        if len(set(node.alternatives)) != len(node.alternatives):
            out.append(Violation(node.name, None, "duplicate-alternative",
                                 "alternative labels not unique"))
        if len(set(node.parents)) != len(node.parents):
            out.append(Violation(node.name, None, "duplicate-parent",
                                 "parent list has duplicates"))
        for p in node.parents:
            if p not in known:
                out.append(Violation(node.name, None, "unknown-parent",
                                     f"parent {p!r} is not a node"))
            if p == node.name:
                out.append(Violation(node.name, None, "cycle", "node is its own parent"))

        if any(p not in known for p in node.parents):
            continue  # cannot size the cpd
        expected_rows = net.parent_config_count(node)
        if len(node.cpd) != expected_rows:
            out.append(Violation(node.name, None, "cpd-size",
                                 f"{len(node.cpd)} cpd rows, expected {expected_rows}"))
        for r, spec in enumerate(node.cpd):
            out.extend(_validate_spec(node, r, spec))

    out.extend(_check_acyclic(net))
    return out


def _validate_spec(node: NodeSpec, row: int, spec: DistributionSpec) -> list[Violation]:
    out = []
    t = node.n_alternatives
    if spec.size != t:
        out.append(Violation(node.name, row, "vector-length",
                             f"length {spec.size}, node has {t} alternatives"))
        return out
    if spec.kind == "dirichlet":
        if any(c < 0 for c in spec.dirichlet):
            out.append(Violation(node.name, row, "dirichlet-counts",
                                 "counts must be non-negative integers"))
    elif spec.kind == "point":
        defect = check_simplex(spec.point)
        if defect:
            out.append(Violation(node.name, row, "simplex", defect))
    else:
        wsum = sum(w for _, w in spec.finite)
        if not spec.finite:
            out.append(Violation(node.name, row, "finite-empty", "no atoms"))
        if any(w <= 0 for _, w in spec.finite):
            out.append(Violation(node.name, row, "finite-weights", "weights must be positive"))
        elif abs(wsum - 1.0) > SIMPLEX_TOL:
            out.append(Violation(node.name, row, "finite-weights",
                                 f"weights sum to {wsum!r}, not 1"))
        for a, (v, _) in enumerate(spec.finite):
            defect = check_simplex(v)
            if defect:
                out.append(Violation(node.name, row, "simplex", f"atom {a}: {defect}"))
    return out


def _check_acyclic(net: Network) -> list[Violation]:
    known = {n.name for n in net.nodes}
    state: dict[str, int] = {}  # 0 visiting, 1 done

    def visit(name) -> bool:
        if state.get(name) == 1:
            return False
        if state.get(name) == 0:
            return True
        state[name] = 0
        hit = any(visit(p) for p in net.node(name).parents if p in known and p != name)
        state[name] = 1
        return hit

    for n in net.nodes:
        if n.name not in state and visit(n.name):
            return [Violation(n.name, None, "cycle", "parent references form a directed cycle")]
    return []


# ---------------------------------------------------------------------------
# Parsing / serialization (JSON)


def parse_network(text: str) -> Network:
    """Parse a network document; raises NetworkFormatError on any defect."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise NetworkFormatError(
            f"syntax error at line {e.lineno}, column {e.colno}: {e.msg}") from e
    net = network_from_obj(doc)
    violations = validate_network(net)
    if violations:
        raise NetworkFormatError("; ".join(str(v) for v in violations))
    return net


def network_from_obj(doc) -> Network:
    if not isinstance(doc, dict) or "nodes" not in doc:
        raise NetworkFormatError("document must be an object with a 'nodes' list")
    nodes = []
    for nd in doc["nodes"]:
        try:
            cpd = tuple(_spec_from_obj(d) for d in nd["cpd"])
            nodes.append(NodeSpec(
                name=str(nd["name"]),
                alternatives=tuple(str(a) for a in nd["alternatives"]),
                parents=tuple(str(p) for p in nd.get("parents", [])),
                cpd=cpd,
            ))
        except (KeyError, TypeError) as e:
            raise NetworkFormatError(f"malformed node entry: {e!r}") from e
    return Network(name=str(doc.get("name", "")), nodes=tuple(nodes))


def _spec_from_obj(d) -> DistributionSpec:
    if not isinstance(d, dict) or len(d) != 1:
        raise NetworkFormatError(
            "distribution must be exactly one of {'dirichlet','point','finite'}")
    (key, val), = d.items()
    if key == "dirichlet":
        if any(not isinstance(c, int) or isinstance(c, bool) for c in val):
            raise NetworkFormatError("dirichlet counts must be integers")
        return dirichlet_spec(val)
    if key == "point":
        return point_spec(val)
    if key == "finite":
        return finite_spec([(a["probs"], a["weight"]) for a in val])
    raise NetworkFormatError(f"unknown distribution kind {key!r}")


def network_to_obj(net: Network) -> dict:
    return {
        "name": net.name,
        "nodes": [
            {
                "name": n.name,
                "alternatives": list(n.alternatives),
                "parents": list(n.parents),
                "cpd": [_spec_to_obj(s) for s in n.cpd],
            }
            for n in net.nodes
        ],
    }


def _spec_to_obj(spec: DistributionSpec):
    if spec.kind == "dirichlet":
        return {"dirichlet": list(spec.dirichlet)}
    if spec.kind == "point":
        return {"point": list(spec.point)}
    return {"finite": [{"probs": list(v), "weight": w} for v, w in spec.finite]}


def serialize_network(net: Network) -> str:
    return json.dumps(network_to_obj(net), indent=2)


def parse_evidence(text: str, net: Network) -> Evidence:
    """Parse an evidence document ({"evidence": {node: label}}) against a network."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise NetworkFormatError(
            f"syntax error at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(doc, dict) or "evidence" not in doc:
        raise NetworkFormatError("evidence document must be {\"evidence\": {...}}")
    assignments = {}
    for name, label in doc["evidence"].items():
        if name not in net.node_names():
            raise NetworkFormatError(f"evidence names unknown node {name!r}")
        node = net.node(name)
        if label not in node.alternatives:
            raise NetworkFormatError(
                f"evidence names unknown alternative {label!r} of node {name!r}")
        assignments[name] = node.alternatives.index(label)
    return Evidence.of(assignments)


# ---------------------------------------------------------------------------
# Topology


def _skeleton_edges(net: Network) -> set[tuple[str, str]]:
    edges = set()
    for n in net.nodes:
        for p in n.parents:
            edges.add((min(p, n.name), max(p, n.name)))
    return edges


def _is_forest(names: list[str], edges: set[tuple[str, str]]) -> bool:
    # acyclic undirected graph <=> |E| = |V| - #components
    parent = {n: n for n in names}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = len(names)
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
        comps -= 1
    return True


def classify_topology(net: Network) -> TopologyReport:
    """Classify the undirected skeleton and size the network.

    For multiply connected networks, searches root subsets (up to size 3,
    smallest first) whose removal leaves a singly connected skeleton; if
    none exists, ``root_cutset_available`` is False.
    """
    names = net.node_names()
    edges = _skeleton_edges(net)
    every_single_parent = all(len(n.parents) <= 1 for n in net.nodes)
    forest = _is_forest(names, edges)

    if forest:
        cls = "tree" if every_single_parent else "singly_connected"
        cutset: tuple[str, ...] = ()
        available = True
    else:
        cls = "multiply_connected"
        roots = [n.name for n in net.nodes if not n.parents]
        cutset, available = (), False
        for size in range(1, min(len(roots), 3) + 1):
            for combo in itertools.combinations(roots, size):
                removed = set(combo)
                rem_names = [n for n in names if n not in removed]
                rem_edges = {(a, b) for a, b in edges
                             if a not in removed and b not in removed}
                if _is_forest(rem_names, rem_edges):
                    cutset, available = combo, True
                    break
            if available:
                break

    value_count = sum(len(n.cpd) * n.n_alternatives for n in net.nodes)
    return TopologyReport(
        topology_class=cls,
        suggested_cutset=cutset,
        root_cutset_available=available,
        max_alternatives=max(n.n_alternatives for n in net.nodes),
        min_parents=min(len(n.parents) for n in net.nodes),
        max_parents=max(len(n.parents) for n in net.nodes),
        node_count=len(net.nodes),
        value_count=value_count,
    )
