"""Evidential toy classifier: closed-form loss against numeric integration,
analytic gradients against finite differences, and probe-point behavior."""

from __future__ import annotations

import math
import random

import numpy as np
import pytest

from uaml.edl import (Dataset, ToyClassifier, TrainConfig, accuracy, classify,
                      edl_expected_sse, edl_regularizer, make_synthetic,
                      mean_loss, probe_report, scatter_svg, train_toy,
                      _loss_and_grads)
from uaml.errors import InvalidLabelError, TrainingDivergedError


def _beta_pdf(p: np.ndarray, a: float, b: float) -> np.ndarray:
    log_norm = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
    return np.exp(log_norm + (a - 1) * np.log(p) + (b - 1) * np.log1p(-p))


def integrate_expected_sse(alpha: tuple[float, float], y: tuple[float, float],
                           n: int = 2_000_000) -> float:
    """Expected sum of squared errors under Beta(alpha) by midpoint
    integration over p in (0, 1); valid for alpha >= 1."""
    a, b = alpha
    p = (np.arange(n) + 0.5) / n
    vals = _beta_pdf(p, a, b) * ((y[0] - p) ** 2 + (y[1] - (1 - p)) ** 2)
    return float(vals.mean())


def integrate_kl_to_uniform(a: float, b: float, n: int = 2_000_000) -> float:
    """KL(Beta(a, b) || Beta(1, 1)) by midpoint integration of f ln f."""
    p = (np.arange(n) + 0.5) / n
    f = _beta_pdf(p, a, b)
    vals = np.where(f > 0.0, f * np.log(np.maximum(f, 1e-300)), 0.0)
    return float(vals.mean())


class TestExpectedSse:
    def test_uniform_case(self):
        assert edl_expected_sse(np.array([1.0, 1.0]), np.array([1.0, 0.0])) \
            == pytest.approx(2.0 / 3.0, abs=1e-9)

    def test_confident_right(self):
        assert edl_expected_sse(np.array([100.0, 1.0]), np.array([1.0, 0.0])) \
            == pytest.approx(0.000388, abs=5e-6)

    def test_confident_wrong(self):
        assert edl_expected_sse(np.array([1.0, 100.0]), np.array([1.0, 0.0])) \
            == pytest.approx(1.96079, abs=1e-5)

    def test_against_integration_random(self):
        rng = random.Random(8)
        for _ in range(100):
            a = 1.0 + rng.uniform(0.0, 20.0)
            b = 1.0 + rng.uniform(0.0, 20.0)
            y = (1.0, 0.0) if rng.random() < 0.5 else (0.0, 1.0)
            closed = edl_expected_sse(np.array([a, b]), np.array(y))
            numeric = integrate_expected_sse((a, b), y, n=200_000)
            assert closed == pytest.approx(numeric, abs=1e-4)

    def test_minimized_by_true_class_mass(self):
        # at fixed total S = 10, the best alpha piles everything on the truth
        y = np.array([1.0, 0.0])
        losses = {a: edl_expected_sse(np.array([a, 10.0 - a]), y)
                  for a in np.linspace(1.0, 9.0, 33)}
        assert min(losses, key=losses.get) == 9.0

    def test_rejects_non_one_hot(self):
        with pytest.raises(InvalidLabelError):
            edl_expected_sse(np.array([2.0, 2.0]), np.array([0.5, 0.5]))


class TestRegularizer:
    def test_zero_when_no_misleading_evidence(self):
        assert edl_regularizer(np.array([5.0, 1.0]), np.array([1.0, 0.0])) \
            == pytest.approx(0.0, abs=1e-12)
        assert edl_regularizer(np.array([1.0, 1.0]), np.array([1.0, 0.0])) \
            == pytest.approx(0.0, abs=1e-12)

    def test_positive_case_matches_integration(self):
        got = edl_regularizer(np.array([1.0, 10.0]), np.array([1.0, 0.0]))
        assert got > 0.0
        assert got == pytest.approx(integrate_kl_to_uniform(1.0, 10.0), abs=1e-4)

    def test_grows_with_misleading_evidence(self):
        y = np.array([1.0, 0.0])
        vals = [edl_regularizer(np.array([1.0, b]), y) for b in (2.0, 5.0, 20.0)]
        assert vals == sorted(vals)


class TestGradients:
    def test_analytic_matches_finite_differences(self):
        ds = make_synthetic(seed=0)
        rng = np.random.default_rng(3)
        model = ToyClassifier(
            w1=rng.normal(size=(2, 6)), b1=rng.normal(size=6),
            w2=0.3 * rng.normal(size=(6, 2)))
        x, y = ds.x[:40], ds.y[:40]
        _, grads = _loss_and_grads(model, x, y, lam=0.7)
        eps = 1e-4
        checks = 0
        rng2 = random.Random(0)
        while checks < 20:
            name = rng2.choice(["w1", "b1", "w2"])
            arr = getattr(model, name)
            idx = tuple(rng2.randrange(d) for d in arr.shape)
            orig = arr[idx]
            arr[idx] = orig + eps
            hi, _ = _loss_and_grads(model, x, y, lam=0.7)
            arr[idx] = orig - eps
            lo, _ = _loss_and_grads(model, x, y, lam=0.7)
            arr[idx] = orig
            numeric = (hi - lo) / (2 * eps)
            analytic = grads[name][idx]
            rel = abs(numeric - analytic) / max(1e-8, abs(numeric), abs(analytic))
            assert rel <= 1e-4, (name, idx, numeric, analytic)
            checks += 1


class TestSynthetic:
    def test_deterministic(self):
        a, b = make_synthetic(3), make_synthetic(3)
        assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)

    def test_cluster_means(self):
        ds = make_synthetic(0)
        m1 = ds.x[:100].mean(axis=0)
        m2 = ds.x[100:].mean(axis=0)
        assert np.allclose(m1, [-2.0, 0.0], atol=0.2)
        assert np.allclose(m2, [2.0, 0.0], atol=0.2)

    def test_far_probe_distance(self):
        ds = make_synthetic(0)
        far = ds.probes[list(ds.probe_labels).index("far-away")]
        dists = np.linalg.norm(ds.x - far, axis=1)
        assert dists.min() >= 5 * 0.7


class TestTraining:
    @pytest.mark.parametrize("seed", range(5))
    def test_probe_behavior(self, seed):
        ds = make_synthetic(seed)
        model = train_toy(ds, TrainConfig(seed=seed))
        ops = {label: classify(model, probe)
               for label, probe in zip(ds.probe_labels, ds.probes)}
        assert ops["far-away"].uncertainty >= 0.8
        for label, cls in (("centroid-1", 0), ("centroid-2", 1)):
            op = ops[label]
            assert op.uncertainty <= 0.3
            assert max(range(2), key=lambda j: op.beliefs[j]) == cls
        mid = ops["midpoint"]
        assert abs(mid.beliefs[0] - mid.beliefs[1]) <= 0.15
        assert accuracy(model, ds) >= 0.95

    def test_loss_decreases(self):
        ds = make_synthetic(0)
        near_initial = mean_loss(train_toy(ds, TrainConfig(seed=0, epochs=1)), ds)
        final = mean_loss(train_toy(ds, TrainConfig(seed=0, epochs=500)), ds)
        assert final < near_initial

    def test_annealed_regularizer_raises_off_data_uncertainty(self):
        ds = make_synthetic(0)
        reg = train_toy(ds, TrainConfig(seed=0))
        noreg = train_toy(ds, TrainConfig(seed=0, regularizer_scale=0.0))
        off = [i for i, lab in enumerate(ds.probe_labels)
               if lab in ("midpoint", "far-away")]
        u_reg = np.mean([classify(reg, ds.probes[i]).uncertainty for i in off])
        u_noreg = np.mean([classify(noreg, ds.probes[i]).uncertainty for i in off])
        assert u_reg > u_noreg

    def test_divergence_raises(self):
        # the bounded bump features keep the loss finite for any learning
        # rate, so trip the guard with a non-finite feature instead
        ds = make_synthetic(0)
        bad = Dataset(x=ds.x.copy(), y=ds.y, probes=ds.probes,
                      probe_labels=ds.probe_labels)
        bad.x[0, 0] = float("nan")
        with np.errstate(invalid="ignore"), pytest.raises(TrainingDivergedError):
            train_toy(bad, TrainConfig(seed=0, epochs=5))

    def test_determinism(self):
        ds = make_synthetic(1)
        cfg = TrainConfig(seed=1, epochs=50)
        m1, m2 = train_toy(ds, cfg), train_toy(ds, cfg)
        assert np.array_equal(m1.w2, m2.w2)

    def test_save_load_round_trip(self):
        ds = make_synthetic(0)
        model = train_toy(ds, TrainConfig(seed=0, epochs=50))
        back = ToyClassifier.from_dict(model.to_dict())
        assert np.array_equal(back.w1, model.w1)
        assert classify(back, ds.probes[0]) == classify(model, ds.probes[0])

    def test_evidence_nonnegative_everywhere(self):
        ds = make_synthetic(0)
        model = train_toy(ds, TrainConfig(seed=0, epochs=50))
        grid = np.array([[x, y] for x in np.linspace(-20, 20, 9)
                         for y in np.linspace(-20, 20, 9)])
        assert (model.evidence(grid) >= 0.0).all()


class TestReporting:
    def test_probe_report_shape(self):
        ds = make_synthetic(0)
        model = train_toy(ds, TrainConfig(seed=0, epochs=50))
        rep = probe_report(model, ds)
        assert set(rep["probes"]) == set(ds.probe_labels)
        assert 0.0 <= rep["train_accuracy"] <= 1.0

    def test_scatter_svg_is_svg(self):
        ds = make_synthetic(0)
        svg = scatter_svg(ds)
        assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
