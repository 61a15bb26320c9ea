"""Uncertainty-aware inference: first-order moment propagation through the
exact BP map.

Every uncertain input (one free probability per CPT row, one per soft
observation) is an independent beta variable with mean equal to its projected
probability and the predictive variance of its opinion. The posterior map g
is evaluated at the means; output variance is the delta method
sum_i (dg/dtheta_i)^2 * var_i with central finite differences. The output mean
carries the second-order correction g(means) + 1/2 sum_i g''_ii * var_i (the
same three g evaluations give the curvature for free), which removes most of
the Jensen bias that a first-order mean keeps on low-strength inputs. The
output opinion is the beta moment fit of the corrected mean and the variance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bp import EvidenceSet, bp_point_rows, soft_likelihoods
from .errors import UnsupportedStructureError
from .network import NetworkSpec, validate_network
from .opinions import S_MAX, Opinion, moment_fit_flagged, project

_FD_STEP = 1e-5


@dataclass(frozen=True)
class MessageOpinion:
    """A message characterized by projected probability and Dirichlet strength."""

    p: float
    s: float


@dataclass
class InferenceResult:
    opinions: dict[str, Opinion]
    diagnostics: dict = field(default_factory=dict)
    # per target: {input label: variance contribution}; feeds attribution
    contributions: dict = field(default_factory=dict)
    means: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "opinions": {k: v.to_dict() for k, v in self.opinions.items()},
            "diagnostics": self.diagnostics,
        }


def soft_evidence_message(op: Opinion) -> MessageOpinion:
    """Binary likelihood opinion -> (projected probability, strength)."""
    p = op.beliefs[0] + op.base_rate[0] * op.uncertainty
    s = S_MAX if op.uncertainty <= 2.0 / S_MAX else 2.0 / op.uncertainty
    return MessageOpinion(p=p, s=s)


@dataclass
class _Input:
    label: str
    kind: str            # "cpt" or "soft"
    node: str
    key: tuple
    mean: float
    var: float


def _collect_inputs(net: NetworkSpec, ev: EvidenceSet) -> list[_Input]:
    inputs = []
    for node in net.nodes:
        for key, op in net.cpts[node.name].items():
            probs, variances = project(op)
            inputs.append(_Input(
                label=_cpt_label(node.name, key),
                kind="cpt", node=node.name, key=key,
                mean=probs[0],
                var=0.0 if op.is_dogmatic else variances[0],
            ))
    for name, op in ev.soft.items():
        msg = soft_evidence_message(op)
        var = 0.0 if msg.s >= S_MAX else msg.p * (1.0 - msg.p) / (msg.s + 1.0)
        inputs.append(_Input(
            label=f"soft evidence on {name}",
            kind="soft", node=name, key=(),
            mean=msg.p, var=var,
        ))
    return inputs


def _cpt_label(name: str, key: tuple) -> str:
    if not key:
        return f"CPT {name} (prior)"
    return f"CPT {name} | " + ",".join(key)


def _posterior_map(net: NetworkSpec, ev: EvidenceSet, inputs: list[_Input], targets: list[str]):
    """g(theta): BP posteriors (first state) of the targets as a function of
    the flat input vector."""
    nodes = net.nodes
    hard = dict(ev.hard)

    def g(theta: list[float]) -> list[float]:
        rows = {}
        soft = {}
        for value, inp in zip(theta, inputs):
            if inp.kind == "cpt":
                rows[(inp.node, inp.key)] = (value, 1.0 - value)
            else:
                soft[inp.node] = (value, 1.0 - value)
        post = bp_point_rows(nodes, rows, hard, soft)
        return [post[t][0] for t in targets]

    return g


def infer_subjective(net: NetworkSpec, ev: EvidenceSet) -> InferenceResult:
    report = validate_network(net)
    if not report.valid:
        raise UnsupportedStructureError(
            "; ".join(e["detail"] or e["check"] for e in report.failures()))

    targets = [n.name for n in net.nodes if n.name not in ev.hard]
    inputs = _collect_inputs(net, ev)
    g = _posterior_map(net, ev, inputs, targets)

    theta0 = [inp.mean for inp in inputs]
    g0 = g(theta0)

    contributions: dict[str, dict[str, float]] = {t: {} for t in targets}
    curvature = {t: 0.0 for t in targets}
    for i, inp in enumerate(inputs):
        if inp.var <= 0.0:
            continue
        h = min(_FD_STEP, inp.mean / 2.0, (1.0 - inp.mean) / 2.0)
        hi = list(theta0)
        lo = list(theta0)
        hi[i] = inp.mean + h
        lo[i] = inp.mean - h
        g_hi = g(hi)
        g_lo = g(lo)
        for t, a, b, g0_t in zip(targets, g_hi, g_lo, g0):
            d = (a - b) / (2.0 * h)
            if d != 0.0:
                contributions[t][inp.label] = d * d * inp.var
            curvature[t] += 0.5 * (a - 2.0 * g0_t + b) / (h * h) * inp.var

    opinions = {}
    diagnostics = {"flags": {}}
    means = {}
    for t, g0_t in zip(targets, g0):
        mean = min(1.0, max(0.0, g0_t + curvature[t]))
        var = sum(contributions[t].values())
        op, flags = moment_fit_flagged(mean, var)
        opinions[t] = op
        means[t] = mean
        if flags:
            diagnostics["flags"][t] = flags
    return InferenceResult(
        opinions=opinions,
        diagnostics=diagnostics,
        contributions=contributions,
        means=means,
    )


def attribute_uncertainty(net: NetworkSpec, ev: EvidenceSet, target: str,
                          result: InferenceResult | None = None) -> list[tuple[str, float]]:
    """Rank uncertain input groups by how much making each dogmatic at its mean
    would lower the target's uncertainty."""
    if result is None:
        result = infer_subjective(net, ev)
    contribs = result.contributions[target]
    mean = result.means[target]
    total_var = sum(contribs.values())
    u_full = result.opinions[target].uncertainty
    ranked = []
    for label, contrib in contribs.items():
        op_ablated, _ = moment_fit_flagged(mean, total_var - contrib)
        ranked.append((label, u_full - op_ablated.uncertainty))
    ranked.sort(key=lambda pair: -pair[1])
    return ranked
