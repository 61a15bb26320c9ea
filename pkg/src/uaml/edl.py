"""Minimal evidential classifier: a two-layer network whose head emits
nonnegative evidence, trained with the expected sum-square-error loss plus a
KL regularizer that pulls misleading evidence toward the uniform Dirichlet.

alpha = evidence + 1; beliefs e_j / S and uncertainty n / S form the opinion.

Hidden units are radial bumps exp(-t^2) with t = |x|^2 + w.x + b, so each
unit lives on a disk or ring and dies off far from the data in every
direction. Plain affine-band units cannot do this: a band wide enough to
cover a class blob extends to infinity and keeps feeding evidence to
arbitrarily remote inputs, which defeats the far-away probe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidLabelError, TrainingDivergedError
from .opinions import Opinion
from .rng import Stream
from .specialfn import digamma, log_gamma, trigamma

#: Fixed evidence offset of the head: with every hidden unit silent the
#: evidence is softplus(EVIDENCE_BIAS) per class, i.e. near-total uncertainty.
EVIDENCE_BIAS = -4.0


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.5
    epochs: int = 800
    anneal_epochs: int | None = None   # default min(10, epochs)
    regularizer_scale: float = 1.0     # 0 disables the KL term entirely
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0 or self.epochs <= 0:
            raise ValueError("learning rate and epochs must be positive")
        if self.regularizer_scale < 0:
            raise ValueError("regularizer_scale must be >= 0")

    @property
    def anneal(self) -> int:
        return self.anneal_epochs if self.anneal_epochs is not None else min(10, self.epochs)


@dataclass
class ToyClassifier:
    """Radial-bump hidden layer, softplus evidence head (outputs always >= 0)."""

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray

    @property
    def n_classes(self) -> int:
        return self.w2.shape[1]

    def evidence(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        t = np.sum(x ** 2, axis=1, keepdims=True) + x @ self.w1 + self.b1
        h = np.exp(-t ** 2)
        return _softplus(h @ self.w2 + EVIDENCE_BIAS)

    def to_dict(self) -> dict:
        return {
            "dims": [self.w1.shape[0], self.w1.shape[1], self.w2.shape[1]],
            "w1": self.w1.tolist(), "b1": self.b1.tolist(), "w2": self.w2.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ToyClassifier":
        return cls(w1=np.array(d["w1"]), b1=np.array(d["b1"]), w2=np.array(d["w2"]))


def _softplus(z):
    return np.logaddexp(0.0, z)


def _check_one_hot(y: np.ndarray):
    y = np.asarray(y, dtype=float)
    ok = np.all(np.isin(y, (0.0, 1.0))) and np.all(y.sum(axis=-1) == 1.0)
    if not ok:
        raise InvalidLabelError(f"labels must be one-hot, got {y}")


def edl_expected_sse(alpha: np.ndarray, y: np.ndarray) -> float:
    """Closed form of the expected sum-square error under Dirichlet(alpha)."""
    _check_one_hot(y)
    alpha = np.asarray(alpha, dtype=float)
    s = alpha.sum()
    p = alpha / s
    return float(np.sum((y - p) ** 2 + p * (1.0 - p) / (s + 1.0)))


def edl_regularizer(alpha: np.ndarray, y: np.ndarray) -> float:
    """KL( Dir(alpha with the true class's evidence removed) || Dir(1) )."""
    _check_one_hot(y)
    alpha = np.asarray(alpha, dtype=float)
    y = np.asarray(y, dtype=float)
    a = y + (1.0 - y) * alpha
    s = a.sum()
    n = len(a)
    kl = log_gamma(s) - log_gamma(float(n)) - sum(log_gamma(v) for v in a)
    psi_s = digamma(s)
    kl += sum((v - 1.0) * (digamma(v) - psi_s) for v in a)
    return float(kl)


def classify(model: ToyClassifier, x) -> Opinion:
    """Subjective opinion for one input: beliefs e_j/S, uncertainty n/S."""
    e = model.evidence(x)[0]
    n = len(e)
    s = float(e.sum() + n)
    return Opinion(beliefs=tuple(float(v) / s for v in e), uncertainty=n / s)


@dataclass
class Dataset:
    x: np.ndarray                # (m, 2)
    y: np.ndarray                # (m, n) one-hot
    probes: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    probe_labels: tuple = ()


def make_synthetic(seed: int) -> Dataset:
    """Two isotropic Gaussian clusters plus the four canonical probe points:
    each centroid, their midpoint, and a far-away outlier."""
    centers = np.array([[-2.0, 0.0], [2.0, 0.0]])
    sigma = 0.7
    stream = Stream(seed, 0)
    xs, ys = [], []
    for c, center in enumerate(centers):
        for _ in range(100):
            xs.append([center[0] + sigma * stream.normal(),
                       center[1] + sigma * stream.normal()])
            ys.append([1.0, 0.0] if c == 0 else [0.0, 1.0])
    probes = np.array([[-2.0, 0.0], [2.0, 0.0], [0.0, 0.0], [0.0, 12.0]])
    return Dataset(x=np.array(xs), y=np.array(ys), probes=probes,
                   probe_labels=("centroid-1", "centroid-2", "midpoint", "far-away"))


def _init_model(x: np.ndarray, hidden: int, n_out: int, seed: int) -> ToyClassifier:
    """Bumps start centered on random training points with radius about 1:
    t = |x|^2 - 2 c.x + |c|^2 = |x - c|^2."""
    stream = Stream(seed, 1)
    centers = np.array([x[int(stream.uniform() * len(x))] for _ in range(hidden)])
    w1 = (-2.0 * centers).T.copy()
    b1 = np.array([c @ c + 0.3 * stream.normal() for c in centers])
    w2 = np.array([[0.25 * stream.normal() for _ in range(n_out)]
                   for _ in range(hidden)])
    return ToyClassifier(w1=w1, b1=b1, w2=w2)


def _loss_and_grads(model: ToyClassifier, x: np.ndarray, y: np.ndarray, lam: float):
    """Mean loss over the batch and analytic gradients for every parameter."""
    m = x.shape[0]
    t = np.sum(x ** 2, axis=1, keepdims=True) + x @ model.w1 + model.b1
    h = np.exp(-t ** 2)
    z = h @ model.w2 + EVIDENCE_BIAS
    e = _softplus(z)
    alpha = e + 1.0
    s = alpha.sum(axis=1, keepdims=True)
    p = alpha / s
    n = y.shape[1]

    sse = np.sum((y - p) ** 2 + p * (1.0 - p) / (s + 1.0), axis=1)

    a_til = y + (1.0 - y) * alpha
    s_til = a_til.sum(axis=1, keepdims=True)
    lgam = np.vectorize(log_gamma)
    dgam = np.vectorize(digamma)
    tgam = np.vectorize(trigamma)
    kl = (lgam(s_til[:, 0]) - log_gamma(float(n)) - lgam(a_til).sum(axis=1)
          + np.sum((a_til - 1.0) * (dgam(a_til) - dgam(s_til)), axis=1))
    loss = float(np.mean(sse + lam * kl))

    # d(sse)/d(alpha)
    coef = -2.0 * (y - p) + (1.0 - 2.0 * p) / (s + 1.0)
    v = np.sum(p * (1.0 - p), axis=1, keepdims=True)
    dsse = (coef - np.sum(coef * p, axis=1, keepdims=True)) / s - v / (s + 1.0) ** 2

    # d(kl)/d(alpha): zero for the true class (its evidence is removed)
    dkl = (1.0 - y) * ((a_til - 1.0) * tgam(a_til) - (s_til - n) * tgam(s_til))

    dalpha = (dsse + lam * dkl) / m
    dz = dalpha * _sigmoid(z)          # softplus' = sigmoid
    dw2 = h.T @ dz
    dh = dz @ model.w2.T
    dt = dh * (-2.0 * t * h)
    dw1 = x.T @ dt
    db1 = dt.sum(axis=0)
    return loss, {"w1": dw1, "b1": db1, "w2": dw2}


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))


def train_toy(dataset: Dataset, cfg: TrainConfig, hidden: int = 16) -> ToyClassifier:
    """Full-batch gradient descent with the regularizer ramped linearly from 0
    to 1 over the annealing horizon."""
    for row in dataset.y:
        _check_one_hot(row)
    model = _init_model(dataset.x, hidden, dataset.y.shape[1], cfg.seed)
    for epoch in range(cfg.epochs):
        lam = cfg.regularizer_scale * (min(1.0, epoch / cfg.anneal) if cfg.anneal > 0 else 1.0)
        loss, grads = _loss_and_grads(model, dataset.x, dataset.y, lam)
        if not math.isfinite(loss):
            raise TrainingDivergedError(epoch)
        model.w1 = model.w1 - cfg.learning_rate * grads["w1"]
        model.b1 = model.b1 - cfg.learning_rate * grads["b1"]
        model.w2 = model.w2 - cfg.learning_rate * grads["w2"]
    return model


def mean_loss(model: ToyClassifier, dataset: Dataset, lam: float = 1.0) -> float:
    loss, _ = _loss_and_grads(model, dataset.x, dataset.y, lam)
    return loss


def accuracy(model: ToyClassifier, dataset: Dataset) -> float:
    e = model.evidence(dataset.x)
    pred = np.argmax(e + 1.0, axis=1)
    truth = np.argmax(dataset.y, axis=1)
    return float(np.mean(pred == truth))


def scatter_svg(dataset: Dataset, model: ToyClassifier | None = None,
                size: int = 480) -> str:
    """Feature-space scatter: training points colored by class, probes as
    diamonds annotated with uncertainty when a model is given."""
    xs = dataset.x
    pts = np.vstack([xs, dataset.probes]) if len(dataset.probes) else xs
    lo = pts.min(axis=0) - 1.0
    hi = pts.max(axis=0) + 1.0
    span = float(max(hi - lo))

    def sx(v):
        return 20 + (v - lo[0]) / span * (size - 40)

    def sy(v):
        return size - 20 - (v - lo[1]) / span * (size - 40)

    colors = ("#4c72b0", "#dd8452")
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           f'<rect width="{size}" height="{size}" fill="white"/>']
    for point, label in zip(dataset.x, dataset.y):
        c = colors[int(np.argmax(label))]
        out.append(f'<circle cx="{sx(point[0]):.1f}" cy="{sy(point[1]):.1f}" '
                   f'r="3" fill="{c}" fill-opacity="0.6"/>')
    for name, point in zip(dataset.probe_labels, dataset.probes):
        x, y = sx(point[0]), sy(point[1])
        out.append(f'<path d="M {x:.1f} {y - 6:.1f} L {x + 6:.1f} {y:.1f} '
                   f'L {x:.1f} {y + 6:.1f} L {x - 6:.1f} {y:.1f} Z" fill="black"/>')
        text = name
        if model is not None:
            text += f" (u={classify(model, point).uncertainty:.2f})"
        out.append(f'<text x="{x + 9:.1f}" y="{y + 4:.1f}" font-size="11" '
                   f'font-family="sans-serif">{text}</text>')
    out.append("</svg>")
    return "\n".join(out)


def probe_report(model: ToyClassifier, dataset: Dataset) -> dict:
    """Probe label -> opinion, plus training accuracy."""
    probes = {}
    for label, point in zip(dataset.probe_labels, dataset.probes):
        op = classify(model, point)
        probes[label] = {"x": [float(v) for v in point], "opinion": op.to_dict()}
    return {"probes": probes, "train_accuracy": accuracy(model, dataset)}
