"""Exact coordinate marginals of the orbit distributions and their limits.

A coordinate of a uniformly random permutation of y is uniform on the q
entries of y, so every finite-q marginal here is a q-atom discrete law with
exact CDF.  Kolmogorov-Smirnov distances against the limiting laws are
computed by scanning the atom jump points, with no Monte Carlo noise.  The
beta-family CDFs (F with (1,2) degrees of freedom, scaled Beta(1/2,1)) are
derived from the one regularized incomplete beta in ``capfun``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .capfun import cap_area, normal_cdf, regularized_incomplete_beta
from .families import FamilyTag, common_norm, configuration, maximal_weights, regular

__all__ = [
    "DiscreteLaw",
    "StochasticOrderReport",
    "SphereCoordinateLaw",
    "ks_distance",
    "orbit_marginal",
    "scaled_marginal_ks",
    "uniform_limit_cdf",
    "f_1_2_cdf",
    "scaled_beta_half_one_cdf",
    "w_statistics",
    "maximal_squared_atoms",
    "stochastic_order_check",
    "z_q_law",
    "sphere_marginal_law",
    "regular_marginal_mgf",
]

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class DiscreteLaw:
    """Uniform distribution on a sorted multiset of atoms (probability 1/q each)."""

    atoms: np.ndarray

    def __post_init__(self):
        a = np.sort(np.asarray(self.atoms, dtype=float))
        a.setflags(write=False)
        object.__setattr__(self, "atoms", a)

    @property
    def n(self) -> int:
        return self.atoms.size

    def mean(self) -> float:
        return float(self.atoms.mean())

    def var(self) -> float:
        return float(np.mean((self.atoms - self.atoms.mean()) ** 2))

    def cdf(self, x: float) -> float:
        return float(np.searchsorted(self.atoms, x, side="right")) / self.n

    def median_abs(self) -> float:
        return float(np.median(np.abs(self.atoms)))

    def scaled(self, c: float) -> "DiscreteLaw":
        return DiscreteLaw(c * self.atoms)


def ks_distance(law: DiscreteLaw, cdf) -> float:
    """Exact sup |F_law - F| against a continuous CDF, scanning both one-sided
    gaps at every atom."""
    a = law.atoms
    n = a.size
    f = np.asarray(cdf(a), dtype=float)
    hi = np.abs(np.arange(1, n + 1) / n - f)
    lo = np.abs(np.arange(0, n) / n - f)
    return float(max(hi.max(), lo.max()))


def orbit_marginal(family, q: int) -> DiscreteLaw:
    """Law of a single coordinate of a uniformly permuted family member:
    uniform on the q configuration entries."""
    return DiscreteLaw(configuration(family, q).entries)


def uniform_limit_cdf(x):
    """CDF of Uniform(-sqrt(3), sqrt(3))."""
    return np.clip((np.asarray(x, dtype=float) + SQRT3) / (2.0 * SQRT3), 0.0, 1.0)


def f_1_2_cdf(x):
    """CDF of the F distribution with (1, 2) degrees of freedom, expressed
    through the regularized incomplete beta: I_{x/(x+2)}(1/2, 1)."""
    x = np.asarray(x, dtype=float)
    return regularized_incomplete_beta(0.5, 1.0, np.where(x <= 0, 0.0, x / (x + 2.0)))


def scaled_beta_half_one_cdf(x):
    """CDF of 3 * Beta(1/2, 1): I_{x/3}(1/2, 1) on [0, 3]."""
    x = np.asarray(x, dtype=float)
    return regularized_incomplete_beta(0.5, 1.0, np.clip(x / 3.0, 0.0, 1.0))


def _scale(q: int) -> float:
    return math.sqrt(12.0 / (q * q - 1.0))


def scaled_marginal_ks(family, q: int) -> float:
    """Distance of the sqrt(12/(q^2-1))-scaled coordinate law from its limit.

    Regular: exact KS against Uniform(-sqrt3, sqrt3).  Normal: exact KS
    against N(0,1).  Maximal: the scaled coordinate collapses to 0, so the
    median absolute scaled atom is returned instead of a KS distance.
    """
    tag = FamilyTag(family)
    law = orbit_marginal(tag, q).scaled(_scale(q))
    if tag is FamilyTag.REGULAR:
        return ks_distance(law, uniform_limit_cdf)
    if tag is FamilyTag.NORMAL:
        return ks_distance(law, normal_cdf)
    if tag is FamilyTag.MAXIMAL:
        return law.median_abs()
    raise ValueError(f"no scaled limit registered for family {family!r}")


def maximal_squared_atoms(q: int) -> np.ndarray:
    """Atoms 3 c_k / ((q+1) |a_hat|^2) of the squared scaled maximal
    coordinate, with c_k the squared difference of adjacent weight radicals."""
    w = maximal_weights(q)
    k = np.arange(1, q + 1, dtype=float)
    c = (np.sqrt((k - 1.0) * (q - k + 1.0)) - np.sqrt(k * (q - k))) ** 2
    return 3.0 * c / ((q + 1.0) * w.norm_a**2)


def w_statistics(q: int) -> tuple[DiscreteLaw, DiscreteLaw]:
    """Laws of the squared scaled coordinate for the regular and maximal
    families (the first converges to 3*Beta(1/2,1), the second collapses)."""
    if q < 3:
        raise ValueError(f"need q >= 3, got {q}")
    wbar = DiscreteLaw((12.0 / (q * q - 1.0)) * regular(q).entries ** 2)
    what = DiscreteLaw(maximal_squared_atoms(q))
    return wbar, what


@dataclass(frozen=True)
class StochasticOrderReport:
    q: int
    upper_holds: bool
    lower_statement_holds: bool      # denominator log(2q-1) + 2
    lower_proof_holds: bool          # denominator log(2q+1) - 2
    max_upper_violation: float
    max_lower_statement_violation: float
    max_lower_proof_violation: float


def stochastic_order_check(q: int) -> StochasticOrderReport:
    """Compare the squared scaled maximal coordinate against its two
    envelope laws built from Z_q = 8 V_q^2 / (1 - 4 V_q^2).

    All three laws put mass 1/q on q atoms, so stochastic dominance is
    equivalent to sorted-atom dominance, which is checked exactly.  The lower
    envelope is evaluated with both printed denominators (they disagree
    between statement and derivation); the report says which holds.
    """
    if q < 5:
        raise ValueError(f"need q >= 5, got {q}")
    what = np.sort(maximal_squared_atoms(q))
    k = np.arange(1, q + 1, dtype=float)
    v = (k - 0.5 * (q + 1.0)) / q
    z = 8.0 * v * v / (1.0 - 4.0 * v * v)
    lower_statement = np.sort(z / (math.log(2 * q - 1.0) + 2.0))
    lower_proof = np.sort(z / (math.log(2 * q + 1.0) - 2.0))
    upper = np.sort((2.0 * z + 1.0) / (math.log(2 * q + 1.0) - 2.0))
    viol_up = float(np.max(what - upper))
    viol_ls = float(np.max(lower_statement - what))
    viol_lp = float(np.max(lower_proof - what))
    tol = 1e-12
    return StochasticOrderReport(
        q=q,
        upper_holds=bool(viol_up <= tol),
        lower_statement_holds=bool(viol_ls <= tol),
        lower_proof_holds=bool(viol_lp <= tol),
        max_upper_violation=viol_up,
        max_lower_statement_violation=viol_ls,
        max_lower_proof_violation=viol_lp,
    )


def z_q_law(q: int) -> DiscreteLaw:
    """Law of Z_q = 8 V_q^2 / (1 - 4 V_q^2), V_q uniform on the centered grid
    (k - (q+1)/2)/q; converges to F with (1, 2) degrees of freedom."""
    k = np.arange(1, q + 1, dtype=float)
    v = (k - 0.5 * (q + 1.0)) / q
    return DiscreteLaw(8.0 * v * v / (1.0 - 4.0 * v * v))


class SphereCoordinateLaw:
    """Law of one coordinate of a uniform point on the radius-r sphere of the
    zero-sum hyperplane (r defaults to the common family radius).

    The survival function is cap_area(q, s sqrt(q/(q-1)) / r), exactly 0 or 1
    beyond |s| = r sqrt((q-1)/q).  The sqrt(q)/r-scaled coordinate converges
    to N(0,1).
    """

    def __init__(self, q: int, radius: float | None = None):
        if q < 3:
            raise ValueError(f"need q >= 3, got {q}")
        self.q = q
        self.radius = common_norm(q) if radius is None else float(radius)
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        self.support = self.radius * math.sqrt((q - 1.0) / q)

    def sf(self, s):
        """P[coordinate > s], vectorized."""
        s = np.asarray(s, dtype=float)
        t = s * math.sqrt(self.q / (self.q - 1.0)) / self.radius
        out = np.asarray(cap_area(self.q, np.clip(t, -1.0, np.nextafter(1.0, 0.0))))
        out = np.where(t >= 1.0, 0.0, out)
        out = np.where(t <= -1.0, 1.0, out)
        return float(out) if np.ndim(s) == 0 else out

    def cdf(self, s):
        return 1.0 - self.sf(s)

    def scaled_cdf(self, u):
        """CDF of sqrt(q)/r times the coordinate."""
        u = np.asarray(u, dtype=float)
        return self.cdf(u * self.radius / math.sqrt(self.q))


def sphere_marginal_law(q: int, radius: float | None = None) -> SphereCoordinateLaw:
    """Handle for the continuous sphere-coordinate law."""
    return SphereCoordinateLaw(q, radius)


def regular_marginal_mgf(q: int, t: float) -> float:
    """Closed-form moment generating function of one regular-orbit coordinate:
    (e^{tq/2} - e^{-tq/2}) / (q (e^{t/2} - e^{-t/2}))."""
    if t == 0.0:
        return 1.0
    return (math.exp(0.5 * t * q) - math.exp(-0.5 * t * q)) / (
        q * (math.exp(0.5 * t) - math.exp(-0.5 * t))
    )
