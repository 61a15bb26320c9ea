"""Subjective opinion algebra.

An opinion over a K-valued domain is a tuple of belief masses, an explicit
uncertainty mass, and a base rate; it is bijective with a Dirichlet
distribution under a uniform prior: alpha_x = n_x + 1, strength
s = sum(alpha), beliefs b_x = n_x / s, uncertainty u = K / s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainTooSmallError, InvalidCountsError, InvalidLevelError, InvalidOpinionError
from .specialfn import beta_ppf

#: Strength ceiling for dogmatic opinions (point probabilities treated as
#: certain). Keeps divisions finite while preserving the strength ordering.
S_MAX = 1e9

_SUM_TOL = 1e-9

#: Files default to 6 significant digits, so reloaded opinions may miss the
#: sum-to-one invariant by ~1e-6; such near-misses are renormalized.
_ROUNDING_TOL = 1e-5


@dataclass(frozen=True)
class Opinion:
    beliefs: tuple[float, ...]
    uncertainty: float
    base_rate: tuple[float, ...] = ()

    def __post_init__(self):
        beliefs = tuple(float(b) for b in self.beliefs)
        k = len(beliefs)
        if k < 2:
            raise DomainTooSmallError(f"opinion domain needs K >= 2, got K={k}")
        base = self.base_rate or tuple(1.0 / k for _ in range(k))
        base = tuple(float(a) for a in base)
        object.__setattr__(self, "beliefs", beliefs)
        object.__setattr__(self, "base_rate", base)
        object.__setattr__(self, "uncertainty", float(self.uncertainty))
        if len(base) != k:
            raise InvalidOpinionError("base_rate length does not match beliefs")
        if abs(sum(base) - 1.0) > _SUM_TOL:
            raise InvalidOpinionError(f"base rate must sum to 1, got {sum(base)}")
        if any(b < -_SUM_TOL or b > 1.0 + _SUM_TOL for b in beliefs):
            raise InvalidOpinionError(f"beliefs outside [0, 1]: {beliefs}")
        if self.uncertainty < -_SUM_TOL or self.uncertainty > 1.0 + _SUM_TOL:
            raise InvalidOpinionError(f"uncertainty outside [0, 1]: {self.uncertainty}")
        total = sum(beliefs) + self.uncertainty
        if abs(total - 1.0) > _ROUNDING_TOL:
            raise InvalidOpinionError(f"beliefs + uncertainty must sum to 1, got {total}")
        if abs(total - 1.0) > _SUM_TOL:
            object.__setattr__(self, "beliefs", tuple(b / total for b in beliefs))
            object.__setattr__(self, "uncertainty", self.uncertainty / total)

    @property
    def k(self) -> int:
        return len(self.beliefs)

    @property
    def strength(self) -> float:
        """Dirichlet strength s = K / u, capped at S_MAX for dogmatic opinions."""
        if self.uncertainty <= self.k / S_MAX:
            return S_MAX
        return self.k / self.uncertainty

    @property
    def alphas(self) -> tuple[float, ...]:
        s = self.strength
        return tuple(b * s + a * self.k for b, a in zip(self.beliefs, self.base_rate))

    @property
    def is_dogmatic(self) -> bool:
        return self.strength >= S_MAX

    def to_dict(self) -> dict:
        return {
            "beliefs": list(self.beliefs),
            "uncertainty": self.uncertainty,
            "base_rate": list(self.base_rate),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Opinion":
        return cls(
            beliefs=tuple(d["beliefs"]),
            uncertainty=d["uncertainty"],
            base_rate=tuple(d.get("base_rate") or ()),
        )

    @classmethod
    def vacuous(cls, k: int = 2) -> "Opinion":
        return cls(beliefs=(0.0,) * k, uncertainty=1.0)


@dataclass(frozen=True)
class EvidenceCounts:
    counts: tuple[float, ...]

    def __post_init__(self):
        counts = tuple(float(c) for c in self.counts)
        object.__setattr__(self, "counts", counts)
        if len(counts) < 2:
            raise DomainTooSmallError(f"need counts for K >= 2 values, got {len(counts)}")
        if any(c < 0 for c in counts):
            raise InvalidCountsError(f"counts must be nonnegative: {counts}")

    @property
    def total(self) -> float:
        return sum(self.counts)


@dataclass(frozen=True)
class DirichletParams:
    alpha: tuple[float, ...]

    def __post_init__(self):
        alpha = tuple(float(a) for a in self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if len(alpha) < 2:
            raise DomainTooSmallError(f"need K >= 2 parameters, got {len(alpha)}")
        if any(a <= 0 for a in alpha):
            raise InvalidCountsError(f"Dirichlet parameters must be positive: {alpha}")

    @property
    def strength(self) -> float:
        return sum(self.alpha)


def opinion_from_counts(counts: EvidenceCounts | tuple | list) -> Opinion:
    """Map evidence counts to an opinion: b_x = n_x / s, u = K / s, s = N + K."""
    if not isinstance(counts, EvidenceCounts):
        counts = EvidenceCounts(tuple(counts))
    k = len(counts.counts)
    s = counts.total + k
    return Opinion(
        beliefs=tuple(c / s for c in counts.counts),
        uncertainty=k / s,
    )


def opinion_to_dirichlet(op: Opinion) -> DirichletParams:
    return DirichletParams(op.alphas)


def opinion_to_counts(op: Opinion) -> EvidenceCounts:
    """Inverse of opinion_from_counts via n_x = alpha_x - 1 (uniform base rate)."""
    return EvidenceCounts(tuple(max(0.0, a - 1.0) for a in op.alphas))


def project(op: Opinion) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Projected (pignistic) probabilities and their predictive variances."""
    s = op.strength
    probs = tuple(b + a * op.uncertainty for b, a in zip(op.beliefs, op.base_rate))
    variances = tuple(p * (1.0 - p) / (s + 1.0) for p in probs)
    return probs, variances


def moment_fit(mean: float, variance: float) -> Opinion:
    """Binary opinion whose projected probability and variance match (mean, variance).

    Inverse of the predictive-variance relation: s = mean(1-mean)/variance - 1,
    clamped into [K, S_MAX] and raised where needed so both Dirichlet
    parameters stay >= 1 (representability of belief masses).
    """
    op, _ = moment_fit_flagged(mean, variance)
    return op


def moment_fit_flagged(mean: float, variance: float) -> tuple[Opinion, list[str]]:
    flags: list[str] = []
    eps = 1e-9
    m = float(mean)
    if m < eps or m > 1.0 - eps:
        m = min(max(m, eps), 1.0 - eps)
        flags.append("mean-clamped")
    if variance <= 0.0:
        s = S_MAX
        flags.append("dogmatic")
    else:
        s = m * (1.0 - m) / variance - 1.0
        if s < 2.0:
            flags.append("strength-clamped-low")
            s = 2.0
        elif s > S_MAX:
            flags.append("strength-clamped-high")
            s = S_MAX
    # keep alpha_x >= 1 so belief masses stay nonnegative
    s_rep = max(1.0 / m, 1.0 / (1.0 - m))
    if s < s_rep:
        s = min(s_rep, S_MAX)
        flags.append("strength-raised-representable")
    b1 = max(0.0, m - 1.0 / s)
    b2 = max(0.0, (1.0 - m) - 1.0 / s)
    u = 1.0 - b1 - b2
    return Opinion(beliefs=(b1, b2), uncertainty=u), flags


def opinion_from_mean_strength(mean: float, strength: float) -> Opinion:
    """Binary opinion with projected probability ``mean`` and strength ``strength``."""
    s = min(max(strength, 2.0), S_MAX)
    var = mean * (1.0 - mean) / (s + 1.0)
    op, _ = moment_fit_flagged(mean, var)
    return op


def beta_interval(op: Opinion, value_index: int, level: float) -> tuple[float, float]:
    """Equal-tailed credible interval of the marginal Beta for one domain value.

    level = 0 is accepted as the median limit (both endpoints F^-1(1/2)).
    """
    if not 0.0 <= level < 1.0 or math.isnan(level):
        raise InvalidLevelError(f"confidence level must be in [0, 1), got {level}")
    alphas = op.alphas
    a = alphas[value_index]
    b = op.strength - a
    if op.is_dogmatic:
        # the marginal collapses to a point; skip the numeric inversion,
        # which loses convergence at alphas near S_MAX
        p = a / op.strength
        return p, p
    lo = beta_ppf((1.0 - level) / 2.0, a, b)
    hi = beta_ppf((1.0 + level) / 2.0, a, b)
    return lo, hi
