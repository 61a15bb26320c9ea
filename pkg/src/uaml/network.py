"""Bayesian network structures with opinion-valued or point-valued conditionals,
count-based learning from full instantiations, and ancestral sampling."""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .errors import MalformedRecordError, UnsupportedStructureError
from .opinions import Opinion, opinion_from_counts
from .rng import Stream

#: One full assignment of every network variable to a state name.
InstantiationRecord = dict


@dataclass(frozen=True)
class Node:
    name: str
    states: tuple[str, str]
    parents: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "parents", tuple(self.parents))


def row_parents(node: Node) -> tuple[str, ...]:
    """Canonical parent order for CPT rows: alphabetical by parent name."""
    return tuple(sorted(node.parents))


def row_keys(node: Node, nodes_by_name: dict[str, Node]) -> list[tuple[str, ...]]:
    """All parent configurations in lexicographic order (states as declared)."""
    keys = [()]
    for parent in row_parents(node):
        states = nodes_by_name[parent].states
        keys = [k + (s,) for k in keys for s in states]
    return keys


@dataclass
class NetworkSpec:
    """Network whose conditionals are opinions (learned from sparse data)."""

    nodes: list[Node]
    cpts: dict[str, dict[tuple[str, ...], Opinion]]

    def node(self, name: str) -> Node:
        return self._by_name[name]

    @property
    def _by_name(self) -> dict[str, Node]:
        return {n.name: n for n in self.nodes}


@dataclass
class PointNetwork:
    """Same structure, point probability rows (e.g. a ground truth)."""

    nodes: list[Node]
    cpts: dict[str, dict[tuple[str, ...], tuple[float, float]]]

    def node(self, name: str) -> Node:
        return self._by_name[name]

    @property
    def _by_name(self) -> dict[str, Node]:
        return {n.name: n for n in self.nodes}


@dataclass
class ValidationReport:
    entries: list[dict] = field(default_factory=list)

    def add(self, check: str, ok: bool, detail: str = ""):
        self.entries.append({"check": check, "ok": ok, "detail": detail})

    @property
    def valid(self) -> bool:
        return all(e["ok"] for e in self.entries)

    def failures(self) -> list[dict]:
        return [e for e in self.entries if not e["ok"]]


def topological_order(nodes: list[Node]) -> list[Node]:
    """Kahn's algorithm; raises on cyclic structures."""
    by_name = {n.name: n for n in nodes}
    indeg = {n.name: len(n.parents) for n in nodes}
    children: dict[str, list[str]] = {n.name: [] for n in nodes}
    for n in nodes:
        for p in n.parents:
            children[p].append(n.name)
    ready = [n.name for n in nodes if indeg[n.name] == 0]
    order = []
    while ready:
        name = ready.pop()
        order.append(by_name[name])
        for c in children[name]:
            indeg[c] -= 1
            if indeg[c] == 0:
                ready.append(c)
    if len(order) != len(nodes):
        raise UnsupportedStructureError("directed edges contain a cycle")
    return order


def validate_network(net: NetworkSpec | PointNetwork) -> ValidationReport:
    """Structural report: DAG, polytree skeleton, binary domains, table shape."""
    report = ValidationReport()
    names = {n.name for n in net.nodes}

    unknown = [p for n in net.nodes for p in n.parents if p not in names]
    try:
        topological_order(net.nodes)
        dag_ok = not unknown
        detail = f"unknown parents: {unknown}" if unknown else ""
    except UnsupportedStructureError as exc:
        dag_ok, detail = False, str(exc)
    report.add("dag", dag_ok, detail)

    g = nx.Graph()
    g.add_nodes_from(names)
    for n in net.nodes:
        for p in n.parents:
            if p in names:
                g.add_edge(p, n.name)
    forest = nx.is_forest(g) if len(g) else True
    report.add("polytree", forest, "" if forest else "undirected skeleton has a cycle")

    nonbinary = [n.name for n in net.nodes if len(n.states) != 2]
    report.add("binary", not nonbinary, f"non-binary nodes: {nonbinary}" if nonbinary else "")

    table_problems = []
    if dag_ok:
        by_name = net._by_name
        for n in net.nodes:
            expected = set(row_keys(n, by_name))
            rows = net.cpts.get(n.name, {})
            if set(rows) != expected:
                table_problems.append(f"{n.name}: rows {sorted(rows)} != expected {sorted(expected)}")
                continue
            for key, value in rows.items():
                if isinstance(value, Opinion):
                    if value.k != 2:
                        table_problems.append(f"{n.name}{key}: opinion domain != 2")
                else:
                    p = tuple(value)
                    if len(p) != 2 or any(x < 0 for x in p) or abs(sum(p) - 1.0) > 1e-9:
                        table_problems.append(f"{n.name}{key}: row {p} is not a distribution")
    report.add("tables", not table_problems, "; ".join(table_problems))
    return report


def learn_conditionals(nodes: list[Node], records: list[InstantiationRecord]) -> NetworkSpec:
    """Count matching records per parent configuration and convert to opinions.

    Rows with no matching records come out vacuous.
    """
    by_name = {n.name: n for n in nodes}
    for i, rec in enumerate(records):
        if set(rec) != set(by_name):
            raise MalformedRecordError(
                f"record {i} variables {sorted(rec)} != network variables {sorted(by_name)}")
        for name, state in rec.items():
            if state not in by_name[name].states:
                raise MalformedRecordError(f"record {i}: unknown state {state!r} for {name}")

    cpts: dict[str, dict[tuple[str, ...], Opinion]] = {}
    for n in nodes:
        parents = row_parents(n)
        counts = {key: [0, 0] for key in row_keys(n, by_name)}
        for rec in records:
            key = tuple(rec[p] for p in parents)
            counts[key][n.states.index(rec[n.name])] += 1
        cpts[n.name] = {key: opinion_from_counts(c) for key, c in counts.items()}
    return NetworkSpec(nodes=list(nodes), cpts=cpts)


def sample_instantiations(pn: PointNetwork, n: int, seed: int) -> list[InstantiationRecord]:
    """Ancestral sampling; record i is drawn from substream (seed, i)."""
    order = topological_order(pn.nodes)
    records = []
    for i in range(n):
        stream = Stream(seed, i)
        rec: InstantiationRecord = {}
        for node in order:
            key = tuple(rec[p] for p in row_parents(node))
            p0 = pn.cpts[node.name][key][0]
            rec[node.name] = node.states[0] if stream.uniform() < p0 else node.states[1]
        records.append(rec)
    return records


def mean_network(spec: NetworkSpec) -> PointNetwork:
    """Collapse opinion rows to their projected probabilities."""
    cpts = {
        name: {key: _projected_pair(op) for key, op in rows.items()}
        for name, rows in spec.cpts.items()
    }
    return PointNetwork(nodes=list(spec.nodes), cpts=cpts)


def dogmatic_spec(pn: PointNetwork) -> NetworkSpec:
    """Treat point probabilities as certain (dogmatic) opinions."""
    cpts = {
        name: {key: Opinion(beliefs=tuple(p), uncertainty=0.0) for key, p in rows.items()}
        for name, rows in pn.cpts.items()
    }
    return NetworkSpec(nodes=list(pn.nodes), cpts=cpts)


def _projected_pair(op: Opinion) -> tuple[float, float]:
    p0 = op.beliefs[0] + op.base_rate[0] * op.uncertainty
    p1 = op.beliefs[1] + op.base_rate[1] * op.uncertainty
    return p0, p1


# --- JSON wire format -------------------------------------------------------

_KEY_SEP = ","


def network_to_dict(net: NetworkSpec | PointNetwork) -> dict:
    nodes = []
    for n in net.nodes:
        rows = {}
        for key, value in net.cpts[n.name].items():
            skey = _KEY_SEP.join(key)
            rows[skey] = value.to_dict() if isinstance(value, Opinion) else list(value)
        nodes.append({
            "name": n.name,
            "states": list(n.states),
            "parents": list(n.parents),
            "cpt": rows,
        })
    return {"nodes": nodes}


def network_from_dict(d: dict) -> NetworkSpec | PointNetwork:
    nodes = [Node(e["name"], tuple(e["states"]), tuple(e.get("parents", ()))) for e in d["nodes"]]
    opinion_rows = any(isinstance(v, dict) for e in d["nodes"] for v in e["cpt"].values())
    cpts: dict = {}
    for e in d["nodes"]:
        rows = {}
        for skey, value in e["cpt"].items():
            key = tuple(skey.split(_KEY_SEP)) if skey else ()
            if isinstance(value, dict):
                rows[key] = Opinion.from_dict(value)
            elif opinion_rows:
                rows[key] = Opinion(beliefs=tuple(value), uncertainty=0.0)
            else:
                rows[key] = tuple(float(x) for x in value)
        cpts[e["name"]] = rows
    cls = NetworkSpec if opinion_rows else PointNetwork
    return cls(nodes=nodes, cpts=cpts)
