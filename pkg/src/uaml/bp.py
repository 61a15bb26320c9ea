"""Pearl's message passing on binary polytrees, with hard and soft evidence.

Soft evidence enters as a likelihood vector from a pseudo-child (a lambda
message proportional to the observation opinion's projected probabilities).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (InconsistentEvidenceError, UnknownNodeError,
                     UnsupportedStructureError)
from .network import Node, PointNetwork, validate_network
from .opinions import Opinion


@dataclass(frozen=True)
class EvidenceSet:
    hard: dict = field(default_factory=dict)    # node -> observed state name
    soft: dict = field(default_factory=dict)    # node -> Opinion (binary)

    def __post_init__(self):
        overlap = set(self.hard) & set(self.soft)
        if overlap:
            raise InconsistentEvidenceError(
                f"nodes with both hard and soft evidence: {sorted(overlap)}")

    def to_dict(self) -> dict:
        return {
            "hard": dict(self.hard),
            "soft": {name: op.to_dict() for name, op in self.soft.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvidenceSet":
        return cls(
            hard=dict(d.get("hard") or {}),
            soft={k: Opinion.from_dict(v) for k, v in (d.get("soft") or {}).items()},
        )


def check_evidence(nodes: list, ev: EvidenceSet):
    """Raise UnknownNodeError if the evidence names a node or state the
    network does not have."""
    by_name = {n.name: n for n in nodes}
    for name, state in ev.hard.items():
        if name not in by_name:
            raise UnknownNodeError(f"unknown node in hard evidence: {name!r}", name)
        if state not in by_name[name].states:
            raise UnknownNodeError(
                f"unknown state {state!r} for node {name!r} "
                f"(expected one of {list(by_name[name].states)})", name)
    for name in ev.soft:
        if name not in by_name:
            raise UnknownNodeError(f"unknown node in soft evidence: {name!r}", name)


class _Engine:
    """One BP pass over a polytree with fixed numeric rows.

    rows: (node name, parent-state key) -> (p0, p1); parents in alphabetical
    order per the canonical row layout.
    """

    def __init__(self, nodes: list[Node], rows: dict, hard: dict, soft_lik: dict):
        self.by_name = {n.name: n for n in nodes}
        self.rows = rows
        self.hard = hard
        self.soft_lik = soft_lik
        self.children: dict[str, list[str]] = {n.name: [] for n in nodes}
        for n in nodes:
            for p in n.parents:
                self.children[p].append(n.name)
        self._pi_msg: dict = {}
        self._lam_msg: dict = {}

    def _local(self, name: str) -> tuple[float, float]:
        node = self.by_name[name]
        if name in self.hard:
            idx = node.states.index(self.hard[name])
            return (1.0, 0.0) if idx == 0 else (0.0, 1.0)
        if name in self.soft_lik:
            return self.soft_lik[name]
        return (1.0, 1.0)

    def _row(self, name: str, key: tuple) -> tuple[float, float]:
        return self.rows[(name, key)]

    def _parent_configs(self, node: Node):
        parents = tuple(sorted(node.parents))
        configs = [()]
        for p in parents:
            states = self.by_name[p].states
            configs = [c + ((p, s),) for c in configs for s in states]
        return configs

    def _pi_value(self, name: str) -> tuple[float, float]:
        node = self.by_name[name]
        if not node.parents:
            return self._row(name, ())
        total = [0.0, 0.0]
        msgs = {p: self.pi_msg(p, name) for p in node.parents}
        for config in self._parent_configs(node):
            w = 1.0
            for p, s in config:
                w *= msgs[p][self.by_name[p].states.index(s)]
            row = self._row(name, tuple(s for _, s in config))
            total[0] += w * row[0]
            total[1] += w * row[1]
        return (total[0], total[1])

    def _lam_value(self, name: str) -> tuple[float, float]:
        v = list(self._local(name))
        for c in self.children[name]:
            m = self.lam_msg(c, name)
            v[0] *= m[0]
            v[1] *= m[1]
        return (v[0], v[1])

    def pi_msg(self, u: str, x: str) -> tuple[float, float]:
        if (u, x) in self._pi_msg:
            return self._pi_msg[(u, x)]
        pi = self._pi_value(u)
        v = list(self._local(u))
        for c in self.children[u]:
            if c == x:
                continue
            m = self.lam_msg(c, u)
            v[0] *= m[0]
            v[1] *= m[1]
        msg = (pi[0] * v[0], pi[1] * v[1])
        msg = _normalize(msg)
        self._pi_msg[(u, x)] = msg
        return msg

    def lam_msg(self, y: str, x: str) -> tuple[float, float]:
        if (y, x) in self._lam_msg:
            return self._lam_msg[(y, x)]
        node = self.by_name[y]
        lam = self._lam_value(y)
        msgs = {p: self.pi_msg(p, y) for p in node.parents if p != x}
        out = [0.0, 0.0]
        x_states = self.by_name[x].states
        for xi, xs in enumerate(x_states):
            acc = 0.0
            for config in self._parent_configs(node):
                w = 1.0
                skip = False
                for p, s in config:
                    if p == x:
                        if s != xs:
                            skip = True
                            break
                    else:
                        w *= msgs[p][self.by_name[p].states.index(s)]
                if skip:
                    continue
                row = self._row(y, tuple(s for _, s in config))
                acc += w * (lam[0] * row[0] + lam[1] * row[1])
            out[xi] = acc
        total = out[0] + out[1]
        if total > 0.0:
            out = [out[0] / total, out[1] / total]
        msg = (out[0], out[1])
        self._lam_msg[(y, x)] = msg
        return msg

    def posterior(self, name: str) -> tuple[float, float]:
        pi = self._pi_value(name)
        lam = self._lam_value(name)
        b0, b1 = pi[0] * lam[0], pi[1] * lam[1]
        total = b0 + b1
        if total <= 0.0:
            raise InconsistentEvidenceError(f"evidence has zero probability at node {name}")
        return (b0 / total, b1 / total)


def _normalize(v: tuple[float, float]) -> tuple[float, float]:
    total = v[0] + v[1]
    if total <= 0.0:
        return v
    return (v[0] / total, v[1] / total)


def soft_likelihoods(soft: dict) -> dict:
    """Likelihood vectors proportional to the soft opinions' projected probabilities."""
    lik = {}
    for name, op in soft.items():
        p0 = op.beliefs[0] + op.base_rate[0] * op.uncertainty
        lik[name] = (p0, 1.0 - p0)
    return lik


def bp_point_rows(nodes: list[Node], rows: dict, hard: dict, soft_lik: dict) -> dict:
    """BP over explicit numeric rows; returns posteriors for every node."""
    engine = _Engine(nodes, rows, hard, soft_lik)
    out = {}
    for n in nodes:
        if n.name in hard:
            idx = n.states.index(hard[n.name])
            out[n.name] = (1.0, 0.0) if idx == 0 else (0.0, 1.0)
        else:
            out[n.name] = engine.posterior(n.name)
    return out


def bp_point(pn: PointNetwork, ev: EvidenceSet) -> dict:
    """Exact posteriors on a binary polytree; equals enumeration to 1e-9."""
    report = validate_network(pn)
    if not report.valid:
        raise UnsupportedStructureError("; ".join(e["detail"] or e["check"] for e in report.failures()))
    rows = {(name, key): p for name, table in pn.cpts.items() for key, p in table.items()}
    return bp_point_rows(pn.nodes, rows, dict(ev.hard), soft_likelihoods(ev.soft))
