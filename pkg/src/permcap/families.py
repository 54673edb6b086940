"""The regular, maximal, and normal configuration families.

All three families are normalized to the common radius sqrt(q(q^2-1)/12),
the norm of the centered evenly-spaced configuration.  The maximal family is
built from the weights b_k = sqrt(3k(q-k)/(q(q+1))) via first differences;
it is the unique empty-cap-threshold maximizer at fixed norm, which
``verify_maximal_optimality`` checks by random search over the ordered cone.
The normal family uses standard normal quantiles at levels k/(q+1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .capfun import normal_quantile
from .geometry import CenteredConfiguration, ray_inner_products, simplex_vertex

__all__ = [
    "FamilyTag",
    "MaximalWeights",
    "NormalWeights",
    "NormBounds",
    "OptimalityReport",
    "regular",
    "maximal",
    "normal",
    "configuration",
    "common_norm",
    "maximal_norm_bounds",
    "verify_maximal_optimality",
    "quantile_tail_diagnostic",
]


class FamilyTag(str, Enum):
    REGULAR = "regular"
    MAXIMAL = "maximal"
    NORMAL = "normal"
    SIMPLEX = "simplex"
    CUSTOM = "custom"


@dataclass(frozen=True)
class MaximalWeights:
    """Weights b_k, their differences a_hat, and |a_hat| for the maximal family."""

    q: int
    b: np.ndarray
    a_hat: np.ndarray
    norm_a: float


@dataclass(frozen=True)
class NormalWeights:
    """Normal quantiles at k/(q+1) and their norm."""

    q: int
    a_breve: np.ndarray
    norm_a: float


@dataclass(frozen=True)
class NormBounds:
    lower: float
    exact: float
    upper: float


def common_norm(q: int) -> float:
    """sqrt(q(q^2-1)/12): the radius shared by all three families."""
    return math.sqrt(q * (q * q - 1.0) / 12.0)


def regular(q: int) -> CenteredConfiguration:
    """Centered evenly spaced entries -(q-1)/2, ..., (q-1)/2."""
    if q < 2:
        raise ValueError(f"regular configuration needs q >= 2, got {q}")
    e = np.arange(1, q + 1, dtype=float) - 0.5 * (q + 1)
    return CenteredConfiguration(e)


def maximal_weights(q: int) -> MaximalWeights:
    if q < 2:
        raise ValueError(f"maximal configuration needs q >= 2, got {q}")
    k = np.arange(0, q + 1, dtype=float)
    b = np.sqrt(3.0 * k * (q - k) / (q * (q + 1.0)))  # b[0] = b[q] = 0
    a_hat = b[:-1] - b[1:]
    # np.sum/np.dot use pairwise accumulation, which controls the cancellation
    # in the b-differences up to q ~ 1e6
    norm_a = math.sqrt(float(np.dot(a_hat, a_hat)))
    return MaximalWeights(q=q, b=b[1:].copy(), a_hat=a_hat, norm_a=norm_a)


def maximal(q: int) -> tuple[CenteredConfiguration, MaximalWeights]:
    """The empty-cap-optimal configuration at the common radius."""
    w = maximal_weights(q)
    y = common_norm(q) * w.a_hat / w.norm_a
    return CenteredConfiguration(y), w


def normal_weights(q: int) -> NormalWeights:
    if q < 2:
        raise ValueError(f"normal configuration needs q >= 2, got {q}")
    a = np.array([normal_quantile(k / (q + 1.0)) for k in range(1, q + 1)])
    return NormalWeights(q=q, a_breve=a, norm_a=float(np.linalg.norm(a)))


def normal(q: int) -> tuple[CenteredConfiguration, NormalWeights]:
    """Normal-quantile entries scaled to the common radius."""
    w = normal_weights(q)
    y = common_norm(q) * w.a_breve / w.norm_a
    return CenteredConfiguration(y), w


def configuration(family, q: int) -> CenteredConfiguration:
    """Build a family member by tag: regular, maximal, normal, or simplex."""
    tag = FamilyTag(family)
    if tag is FamilyTag.REGULAR:
        return regular(q)
    if tag is FamilyTag.MAXIMAL:
        return maximal(q)[0]
    if tag is FamilyTag.NORMAL:
        return normal(q)[0]
    if tag is FamilyTag.SIMPLEX:
        return CenteredConfiguration(simplex_vertex(q, q).entries)
    raise ValueError(f"no generator for family {family!r}")


def maximal_norm_bounds(q: int) -> NormBounds:
    """Logarithmic envelope for |a_hat|: strict two-sided bounds for q >= 4.

    At q = 3 the lower bound's bracket log(2q+1) - 2 is negative; it is
    clamped to zero there, preserving lower < exact.
    """
    if q < 3:
        raise ValueError(f"norm bounds need q >= 3, got {q}")
    lo_inner = max(math.log(2 * q + 1.0) - 2.0, 0.0)
    lower = math.sqrt(3.0 * lo_inner / (2.0 * (q + 1.0)))
    upper = math.sqrt(3.0 * (2.0 * math.log(2 * q - 1.0) + 1.0) / (2.0 * (q + 1.0)))
    return NormBounds(lower=lower, exact=maximal_weights(q).norm_a, upper=upper)


@dataclass(frozen=True)
class OptimalityReport:
    q: int
    trials: int
    seed: int
    lambda_hat: float
    max_objective: float
    gap: float
    violations: int
    z_hat_objectives_equal: bool
    majorization_checked: int
    majorization_ok: bool

    @property
    def holds(self) -> bool:
        return self.violations == 0 and self.z_hat_objectives_equal and self.majorization_ok


def verify_maximal_optimality(q: int, trials: int, seed: int) -> OptimalityReport:
    """Random search for violations of the max-min optimality of the maximal
    direction.

    Samples `trials` unit vectors of the ordered cone slice (standard normal,
    centered, sorted, normalized: full support on the slice) and checks that
    no sample's min ray product exceeds lambda_hat = sqrt(3/(q+1))/|a_hat| by
    more than 1e-12.  Near-optimal samples (within 1e-9) additionally have
    their suffix sums checked against the optimizer's, the partial-sum
    dominance that forces uniqueness.
    """
    if q < 3 or trials < 1:
        raise ValueError("need q >= 3 and trials >= 1")
    w = maximal_weights(q)
    lambda_hat = math.sqrt(3.0 / (q + 1.0)) / w.norm_a
    z_hat = w.a_hat / w.norm_a
    zh_obj = ray_inner_products(z_hat)
    z_hat_equal = bool(np.max(np.abs(zh_obj - lambda_hat)) <= 1e-12)

    rng = np.random.default_rng(np.random.Philox(key=np.array([seed % 2**64, 0], dtype=np.uint64)))
    max_obj = -math.inf
    violations = 0
    near, near_ok = 0, True
    suffix_hat = np.cumsum(z_hat[::-1])[::-1]
    chunk = 4096
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        z = rng.standard_normal((m, q))
        z -= z.mean(axis=1, keepdims=True)
        z.sort(axis=1)
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        suffix = np.cumsum(z[:, ::-1], axis=1)[:, ::-1]
        kk = np.arange(1, q, dtype=float)
        objs = (np.sqrt(q / (kk * (q - kk))) * suffix[:, 1:]).min(axis=1)
        max_obj = max(max_obj, float(objs.max()))
        violations += int(np.sum(objs > lambda_hat + 1e-12))
        near_idx = np.nonzero(objs >= lambda_hat - 1e-9)[0]
        for i in near_idx:
            near += 1
            s = np.cumsum(z[i, ::-1])[::-1]
            if np.any(s[1:] < suffix_hat[1:] - 1e-12):
                near_ok = False
        done += m
    return OptimalityReport(
        q=q,
        trials=trials,
        seed=seed,
        lambda_hat=lambda_hat,
        max_objective=max_obj,
        gap=lambda_hat - max_obj,
        violations=violations,
        z_hat_objectives_equal=z_hat_equal,
        majorization_checked=near,
        majorization_ok=near_ok,
    )


def quantile_tail_diagnostic(q: int) -> tuple[float, float, float]:
    """Exact top quantile of the normal family versus sqrt(2 log(q+1)).

    Returns (exact, approximation, approximation/exact); the ratio decreases
    toward 1 only sub-logarithmically.
    """
    if q < 10:
        raise ValueError(f"diagnostic expects q >= 10, got {q}")
    exact = normal_quantile(q / (q + 1.0))
    approx = math.sqrt(2.0 * math.log(q + 1.0))
    return exact, approx, approx / exact
