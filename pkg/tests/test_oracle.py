"""Monte-Carlo reference engine: identity cases, sampling stability, limits."""

from __future__ import annotations

import pytest

from uaml.bp import EvidenceSet
from uaml.errors import TooLargeError
from uaml.network import Node, NetworkSpec
from uaml.opinions import opinion_from_counts, project
from uaml.oracle import OracleConfig, enumerate_posterior, oracle_infer
from uaml.scenario import build_ground_truth, evidence_row


def single_node_net() -> NetworkSpec:
    return NetworkSpec(nodes=[Node("X", ("y", "n"))],
                       cpts={"X": {(): opinion_from_counts((18.0, 2.0))}})


class TestIdentity:
    def test_single_node_recovers_input(self):
        # with no structure the posterior equals the prior beta draw, so the
        # fitted opinion must match the input's mean and strength
        ref = oracle_infer(single_node_net(), EvidenceSet(),
                           OracleConfig(n_samples=50_000, seed=0))
        op = ref["X"]
        probs, _ = project(op)
        assert probs[0] == pytest.approx(19.0 / 22.0, abs=0.005)
        assert op.strength == pytest.approx(22.0, rel=0.10)

    def test_sample_doubling_stability(self):
        net = single_node_net()
        a = oracle_infer(net, EvidenceSet(), OracleConfig(n_samples=20_000, seed=3))
        b = oracle_infer(net, EvidenceSet(), OracleConfig(n_samples=40_000, seed=3))
        pa, _ = project(a["X"])
        pb, _ = project(b["X"])
        assert pa[0] == pytest.approx(pb[0], abs=0.01)
        assert a["X"].strength == pytest.approx(b["X"].strength, rel=0.15)


class TestEnumeration:
    def test_route_network_prior(self):
        post = enumerate_posterior(build_ground_truth(), EvidenceSet())
        assert post["RA"][0] == pytest.approx(0.82, abs=1e-12)

    def test_evidence_rows_consistent_pairs(self):
        post = enumerate_posterior(build_ground_truth(), evidence_row(2))
        for pair in post.values():
            assert sum(pair) == pytest.approx(1.0, abs=1e-12)

    def test_too_many_nodes(self):
        nodes = [Node("N0", ("y", "n"))]
        nodes += [Node(f"N{i}", ("y", "n"), (f"N{i-1}",)) for i in range(1, 25)]
        cpts = {"N0": {(): (0.5, 0.5)}}
        for i in range(1, 25):
            cpts[f"N{i}"] = {("y",): (0.5, 0.5), ("n",): (0.5, 0.5)}
        from uaml.network import PointNetwork
        with pytest.raises(TooLargeError):
            enumerate_posterior(PointNetwork(nodes=nodes, cpts=cpts), EvidenceSet())

    def test_rejects_tiny_sample_budget(self):
        with pytest.raises(ValueError):
            OracleConfig(n_samples=10)


class TestDeterminism:
    def test_same_seed_identical(self):
        net = single_node_net()
        cfg = OracleConfig(n_samples=5_000, seed=9)
        assert oracle_infer(net, EvidenceSet(), cfg) == oracle_infer(net, EvidenceSet(), cfg)

    def test_targets_subset_matches_full(self):
        net = build_ground_truth()
        from uaml.network import dogmatic_spec
        spec = dogmatic_spec(net)
        cfg_all = OracleConfig(n_samples=1_000, seed=4)
        cfg_sub = OracleConfig(n_samples=1_000, seed=4, targets=("RA",))
        assert oracle_infer(spec, EvidenceSet(), cfg_sub)["RA"] == \
            oracle_infer(spec, EvidenceSet(), cfg_all)["RA"]
