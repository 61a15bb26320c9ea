"""Ground-truth validation engine: exact enumeration posteriors and
Monte-Carlo reference opinions over Dirichlet-distributed conditionals.

Deliberately independent of the BP engine: correctness here comes from
summing the joint over every world.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bp import EvidenceSet, soft_likelihoods
from .errors import InconsistentEvidenceError, TooLargeError
from .kernels import enumerate_worlds, oracle_samples
from .network import NetworkSpec, Node, PointNetwork, row_keys, row_parents
from .opinions import Opinion, moment_fit_flagged, project
from .subjective import soft_evidence_message

_MAX_NODES = 20


@dataclass(frozen=True)
class OracleConfig:
    n_samples: int = 10_000
    seed: int = 0
    targets: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n_samples < 100:
            raise ValueError(f"n_samples must be >= 100, got {self.n_samples}")


@dataclass
class _Compiled:
    nodes: list[Node]
    states: np.ndarray        # (W, N) int8, hard-consistent worlds only
    rows_idx: np.ndarray      # (W, N) int64
    row_index: dict           # (node, key) -> flat row id
    soft_idx: np.ndarray      # (M,) int64 node columns
    soft_names: list[str]


def _compile(nodes: list[Node], hard: dict, soft_names: list[str]) -> _Compiled:
    n = len(nodes)
    if n > _MAX_NODES:
        raise TooLargeError(f"enumeration limited to {_MAX_NODES} nodes, got {n}")
    by_name = {nd.name: nd for nd in nodes}
    col = {nd.name: i for i, nd in enumerate(nodes)}

    states = ((np.arange(2 ** n, dtype=np.int64)[:, None] >> np.arange(n)) & 1).astype(np.int8)
    if hard:
        mask = np.ones(states.shape[0], dtype=bool)
        for name, state in hard.items():
            mask &= states[:, col[name]] == by_name[name].states.index(state)
        states = states[mask]

    row_index: dict = {}
    for nd in nodes:
        for key in row_keys(nd, by_name):
            row_index[(nd.name, key)] = len(row_index)

    rows_idx = np.zeros((states.shape[0], n), dtype=np.int64)
    for j, nd in enumerate(nodes):
        parents = row_parents(nd)
        idx = np.zeros(states.shape[0], dtype=np.int64)
        for p in parents:
            idx = idx * 2 + states[:, col[p]].astype(np.int64)
        base = row_index[(nd.name, tuple(by_name[p].states[0] for p in parents))]
        rows_idx[:, j] = base + idx

    soft_cols = np.array([col[s] for s in soft_names], dtype=np.int64)
    return _Compiled(nodes=nodes, states=states, rows_idx=rows_idx,
                     row_index=row_index, soft_idx=soft_cols, soft_names=soft_names)


def enumerate_posterior(pn: PointNetwork, ev: EvidenceSet) -> dict:
    """Exact posteriors by summation over all evidence-consistent worlds."""
    soft_lik = soft_likelihoods(ev.soft)
    comp = _compile(pn.nodes, dict(ev.hard), sorted(soft_lik))
    row_p = np.zeros(len(comp.row_index))
    for (name, key), r in comp.row_index.items():
        row_p[r] = pn.cpts[name][key][0]
    soft_p = np.array([soft_lik[s][0] for s in comp.soft_names])
    out = np.zeros(len(pn.nodes))
    total = enumerate_worlds(comp.states, comp.rows_idx, row_p, comp.soft_idx, soft_p, out)
    if total <= 0.0:
        raise InconsistentEvidenceError("evidence has zero probability")
    return {nd.name: (float(out[j]), float(1.0 - out[j])) for j, nd in enumerate(pn.nodes)}


def oracle_infer(net: NetworkSpec, ev: EvidenceSet, cfg: OracleConfig) -> dict:
    """Reference opinions: sample every uncertain probability from its beta,
    enumerate the exact posterior per sample, and moment-fit the target's
    sample distribution."""
    soft_names = sorted(ev.soft)
    comp = _compile(net.nodes, dict(ev.hard), soft_names)

    n_rows = len(comp.row_index)
    row_alpha = np.ones((n_rows, 2))
    row_fixed = np.zeros(n_rows, dtype=np.uint8)
    row_value = np.zeros(n_rows)
    for (name, key), r in comp.row_index.items():
        op = net.cpts[name][key]
        probs, _ = project(op)
        if op.is_dogmatic:
            row_fixed[r] = 1
            row_value[r] = probs[0]
        else:
            a = op.alphas
            row_alpha[r, 0] = a[0]
            row_alpha[r, 1] = a[1]

    n_soft = len(soft_names)
    soft_alpha = np.ones((n_soft, 2))
    soft_fixed = np.zeros(n_soft, dtype=np.uint8)
    soft_value = np.zeros(n_soft)
    for m, name in enumerate(soft_names):
        op = ev.soft[name]
        msg = soft_evidence_message(op)
        if op.is_dogmatic:
            soft_fixed[m] = 1
            soft_value[m] = msg.p
        else:
            a = op.alphas
            soft_alpha[m, 0] = a[0]
            soft_alpha[m, 1] = a[1]

    out = np.empty((cfg.n_samples, len(net.nodes)))
    oracle_samples(comp.states, comp.rows_idx, row_alpha, row_fixed, row_value,
                   comp.soft_idx, soft_alpha, soft_fixed, soft_value,
                   np.uint64(cfg.seed), cfg.n_samples, out)

    valid = ~np.isnan(out[:, 0])
    if not valid.any():
        raise InconsistentEvidenceError("evidence has zero probability in every sample")
    samples = out[valid]

    targets = list(cfg.targets) or [nd.name for nd in net.nodes if nd.name not in ev.hard]
    col = {nd.name: j for j, nd in enumerate(net.nodes)}
    result: dict[str, Opinion] = {}
    for t in targets:
        vals = samples[:, col[t]]
        mean = float(vals.mean())
        var = float(vals.var(ddof=1)) if len(vals) > 1 else 0.0
        op, _ = moment_fit_flagged(mean, var)
        result[t] = op
    return result
