"""Permutohedron volumes and volume ratios.

The convex hull of a permutation orbit admits an exact membership test:
a zero-sum point lies inside iff its sorted partial sums are dominated by
the configuration's (majorization).  The evenly-spaced hull has the closed
form q^(q-3/2); other hulls get Monte Carlo ratios against the circumscribed
ball, with volumes handled in log space beyond q = 30.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .capfun import log_gamma
from .families import FamilyTag, common_norm, configuration
from .geometry import CenteredConfiguration
from .sampling import DEFAULT_CHUNK, McEstimate, map_chunks, proportion_estimate

__all__ = [
    "VolumeReport",
    "RegularRatio",
    "hull_contains",
    "hull_contains_many",
    "regular_volume",
    "regular_volume_log",
    "ball_volume",
    "ball_volume_log",
    "regular_ratio",
    "cube_ratio",
    "cube_ratio_asymptote",
    "mc_volume_ratio",
    "volume_report",
]

_MEMBERSHIP_SLACK = 1e-10


@dataclass(frozen=True)
class VolumeReport:
    q: int
    family: str
    hull_volume: float | None      # closed form when available
    ball_volume: float
    ratio: float | McEstimate
    closed_form_used: bool


@dataclass(frozen=True)
class RegularRatio:
    exact: float
    paper_asymptote: float
    ratio: float                   # exact / asymptote


def _descending_cumsum(v: np.ndarray) -> np.ndarray:
    return np.cumsum(np.sort(v)[::-1])


def hull_contains(y: CenteredConfiguration, v) -> bool:
    """Membership of a zero-sum point in the hull of the orbit of y.

    True iff every top-k partial sum of v is at most that of y (slack 1e-10
    absolute); the k = q sums agree by the zero-sum precondition.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (y.q,):
        raise ValueError("point dimension does not match the configuration")
    nv = float(np.linalg.norm(v))
    if abs(float(v.sum())) > 1e-9 * max(nv, 1e-300):
        raise ValueError("hull membership is defined for zero-sum points")
    return bool(np.all(_descending_cumsum(v) <= _descending_cumsum(y.entries) + _MEMBERSHIP_SLACK))


def hull_contains_many(y: CenteredConfiguration, pts: np.ndarray) -> np.ndarray:
    """Vectorized hull membership for rows of pts (assumed zero-sum)."""
    top = _descending_cumsum(y.entries)
    cums = np.cumsum(np.sort(pts, axis=1)[:, ::-1], axis=1)
    return np.all(cums <= top + _MEMBERSHIP_SLACK, axis=1)


def regular_volume_log(q: int) -> float:
    """log of the evenly-spaced hull volume q^(q - 3/2)."""
    if q < 2:
        raise ValueError(f"need q >= 2, got {q}")
    return (q - 1.5) * math.log(q)


def regular_volume(q: int) -> float:
    """Volume q^(q - 3/2) of the hull of the centered evenly spaced orbit
    (computed in log space for q > 30)."""
    if q <= 30:
        return float(q) ** (q - 1.5)
    return math.exp(regular_volume_log(q))


def ball_volume_log(q: int, r: float) -> float:
    if q < 2 or r <= 0:
        raise ValueError("need q >= 2 and r > 0")
    return 0.5 * (q - 1) * math.log(math.pi) + (q - 1) * math.log(r) - log_gamma(0.5 * (q + 1))


def ball_volume(q: int, r: float) -> float:
    """Volume pi^((q-1)/2) r^(q-1) / Gamma((q+1)/2) of the (q-1)-ball of
    radius r inside the zero-sum hyperplane."""
    return math.exp(ball_volume_log(q, r))


def regular_ratio(q: int) -> RegularRatio:
    """Hull-to-ball volume ratio for the evenly spaced family, with the
    geometric-rate asymptote 1.0750 * 0.7026^((q-1)/2)."""
    if q < 2:
        raise ValueError(f"need q >= 2, got {q}")
    exact = math.exp(regular_volume_log(q) - ball_volume_log(q, common_norm(q)))
    asym = 1.0750 * 0.7026 ** (0.5 * (q - 1))
    return RegularRatio(exact=exact, paper_asymptote=asym, ratio=exact / asym)


def cube_ratio(q: int) -> float:
    """Inscribed-cube to hull volume ratio ((q^2-1)/3)^((q-1)/2) q^(3/2-q)."""
    if q < 2:
        raise ValueError(f"need q >= 2, got {q}")
    return math.exp(0.5 * (q - 1) * math.log((q * q - 1.0) / 3.0) + (1.5 - q) * math.log(q))


def cube_ratio_asymptote(q: int) -> float:
    """Large-q form sqrt(q) (1/3)^((q-1)/2) of the cube ratio (meaningful for
    q >= 4; the q = 2 degenerate case is excluded from comparisons)."""
    return math.sqrt(q) * (1.0 / 3.0) ** (0.5 * (q - 1))


def mc_volume_ratio(
    family,
    q: int,
    samples: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK,
) -> McEstimate:
    """Monte Carlo hull-to-ball volume ratio via uniform ball points and the
    majorization membership test.  Practical for q in 3..30, beyond which the
    ratio is too small to resolve."""
    if not 3 <= q <= 30:
        raise ValueError(f"MC volume ratio is supported for q in 3..30, got {q}")
    y = configuration(family, q)
    r = y.norm

    def chunk(rng, m, i):
        v = rng.standard_normal((m, q))
        v -= v.mean(axis=1, keepdims=True)
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        v *= (r * rng.random(m) ** (1.0 / (q - 1)))[:, None]
        return int(np.count_nonzero(hull_contains_many(y, v)))

    hits = sum(map_chunks(chunk, samples, seed, chunk_size))
    return proportion_estimate(hits, samples, seed)


def volume_report(family, q: int, samples: int = 0, seed: int = 0) -> VolumeReport:
    """Closed-form report for the regular family; MC ratio otherwise."""
    tag = FamilyTag(family)
    bv = ball_volume(q, common_norm(q))
    if tag is FamilyTag.REGULAR:
        return VolumeReport(
            q=q,
            family=tag.value,
            hull_volume=regular_volume(q),
            ball_volume=bv,
            ratio=regular_ratio(q).exact,
            closed_form_used=True,
        )
    if samples < 1:
        raise ValueError(f"family {tag.value!r} has no closed form; provide samples > 0")
    est = mc_volume_ratio(tag, q, samples, seed)
    return VolumeReport(
        q=q, family=tag.value, hull_volume=None, ball_volume=bv, ratio=est, closed_form_used=False
    )
