"""Shared operator-surface plumbing: model loading and the single inference
code path used by both the CLI and the HTTP API, so their outputs are
byte-identical for identical inputs."""

from __future__ import annotations

from . import jsonio
from .bp import EvidenceSet, check_evidence
from .network import (NetworkSpec, PointNetwork, dogmatic_spec,
                      network_from_dict)
from .opinions import beta_interval, project
from .subjective import attribute_uncertainty, infer_subjective


def load_model(path: str | None) -> NetworkSpec:
    """Load a network file; point networks become dogmatic opinion networks.
    Without a path, fall back to the learned route-scenario network."""
    if path is None:
        from .scenario import learn_scenario_network
        return learn_scenario_network(seed=0, n_instantiations=100)
    net = network_from_dict(jsonio.load_path(path))
    return dogmatic_spec(net) if isinstance(net, PointNetwork) else net


def infer_payload(net: NetworkSpec, ev: EvidenceSet,
                  targets: list[str] | None = None) -> dict:
    """Inference result payload: opinions + diagnostics + attribution."""
    check_evidence(net.nodes, ev)
    result = infer_subjective(net, ev)
    chosen = targets or sorted(result.opinions)
    attribution = {t: attribute_uncertainty(net, ev, t, result=result)
                   for t in chosen}
    if targets:
        result.opinions = {t: result.opinions[t] for t in chosen}
    # derived display values, so clients never recompute anything
    summary = {}
    for t, op in result.opinions.items():
        probs, _ = project(op)
        lo, hi = beta_interval(op, 0, 0.9)
        summary[t] = {"projected": list(probs), "interval90": [lo, hi]}
    result.diagnostics["summary"] = summary
    return jsonio.result_payload(result, attribution)


def scenario_rows_payload() -> list[dict]:
    from .scenario import ROW_LABELS, evidence_row
    return [{"row": row, "observations": ROW_LABELS[row],
             "evidence": evidence_row(row).to_dict()}
            for row in (1, 2, 3, 4, 5)]
