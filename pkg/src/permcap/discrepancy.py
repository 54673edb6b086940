"""Largest-empty-cap quantities of permutation orbits.

The exact empty-cap threshold of an orbit is the minimum, over the extreme
rays of the ordered cone, of the configuration's normalized ray products; it
is computed in O(q) from suffix sums.  On top of that sit the cap-area and
angular discrepancies, exact coordinate-marginal distances, certified
empty-cap witnesses, and sampled lower bounds for the full cap discrepancy.
All cap membership is strict: caps are open, boundary points count as
outside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .capfun import cap_area, cap_area_gaussian_bound, cap_area_wendel_bound
from .families import FamilyTag, configuration
from .geometry import (
    CenteredConfiguration,
    OrbitTooLargeError,
    extreme_ray,
    orbit_matrix,
    ray_inner_products,
    rearrangement_max,
)
from .sampling import DEFAULT_CHUNK, McEstimate, map_chunks

__all__ = [
    "CapSpec",
    "DiscrepancyReport",
    "OrbitThreshold",
    "CapCertificate",
    "orbit_threshold",
    "orbit_threshold_oracle",
    "lecd_report",
    "cap_fraction",
    "nscd_lower_bound",
    "marginal_distance",
    "empty_cap_certificate",
]

# relative near-tie tolerance when collecting the argmin rays
_ARGMIN_RTOL = 1e-9


@dataclass(frozen=True)
class CapSpec:
    """An open spherical cap: points v with v'center > |center|^2 * t."""

    center: np.ndarray
    t: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float)
        object.__setattr__(self, "center", c)
        scale = float(np.max(np.abs(c))) if c.size else 0.0
        if scale == 0.0:
            raise ValueError("cap center must be nonzero")
        if abs(float(c.sum())) > 1e-10 * max(1.0, scale) * c.size:
            raise ValueError("cap center must lie in the zero-sum hyperplane")
        if not -1.0 <= self.t < 1.0:
            raise ValueError(f"cap threshold t={self.t} outside [-1, 1)")

    @property
    def q(self) -> int:
        return self.center.size


@dataclass(frozen=True)
class OrbitThreshold:
    t: float
    argmin: tuple[int, ...]   # rays attaining the minimum (1-based, near-ties included)


@dataclass(frozen=True)
class DiscrepancyReport:
    q: int
    family: str
    t_star: float
    lecd: float
    lecad: float
    wendel_upper: float
    gaussian_lower: float | None
    argmin_rays: tuple[int, ...]


@dataclass(frozen=True)
class CapCertificate:
    cap: CapSpec
    ray_index: int
    max_orbit_inner: float     # rearrangement max over the orbit
    bound: float               # |center|^2 * t
    equality_gap: float
    verified: bool


def orbit_threshold(y: CenteredConfiguration) -> OrbitThreshold:
    """Exact empty-cap threshold t(orbit) = min_k y'z_k / |y|.

    Computed from suffix sums in O(q); also reports which rays attain the
    minimum (within relative tolerance 1e-9)."""
    vals = ray_inner_products(y.entries) / y.norm
    t = float(vals.min())
    tol = _ARGMIN_RTOL * max(1.0, abs(t))
    ks = tuple(int(k) for k in np.nonzero(vals <= t + tol)[0] + 1)
    return OrbitThreshold(t=t, argmin=ks)


def orbit_threshold_oracle(
    y: CenteredConfiguration,
    directions: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK,
) -> float:
    """Brute-force counterpart of orbit_threshold: minimize y'w / |y|^2 over
    sampled sorted directions w with |w| = |y|.

    Directions mix two dense samplers of the ordered cone slice, `directions`
    draws from each: sorted centered Gaussians (uniform on the slice) and
    normalized Dirichlet(0.25) combinations of the extreme rays (heavy near
    the slice corners, where linear minima live).  Any subset of directions
    can only overestimate, so the result is always >= the closed form.
    """
    q = y.q
    unit = y.unit()
    rays = np.vstack([extreme_ray(q, k).entries for k in range(1, q)])

    def chunk(rng, m, i):
        w = rng.standard_normal((m, q))
        w -= w.mean(axis=1, keepdims=True)
        w.sort(axis=1)
        w /= np.linalg.norm(w, axis=1, keepdims=True)
        best = float((w @ unit).min())
        lam = rng.dirichlet(0.25 * np.ones(q - 1), size=m)
        wd = lam @ rays
        wd /= np.linalg.norm(wd, axis=1, keepdims=True)
        return min(best, float((wd @ unit).min()))

    return min(map_chunks(chunk, directions, seed, chunk_size))


def lecd_report(y: CenteredConfiguration, family: str = "custom") -> DiscrepancyReport:
    """Exact largest-empty-cap discrepancy (cap area), its angular version,
    and the analytic envelopes at the attained threshold."""
    if y.q < 3:
        raise ValueError(f"discrepancy reports need q >= 3, got {y.q}")
    thr = orbit_threshold(y)
    lecd = float(cap_area(y.q, thr.t))
    wendel = cap_area_wendel_bound(y.q, thr.t) if thr.t > 0 else math.inf
    gauss = cap_area_gaussian_bound(y.q, thr.t) if (y.q >= 5 and thr.t >= 0) else None
    return DiscrepancyReport(
        q=y.q,
        family=family,
        t_star=thr.t,
        lecd=lecd,
        lecad=math.acos(thr.t),
        wendel_upper=wendel,
        gaussian_lower=gauss,
        argmin_rays=thr.argmin,
    )


def cap_fraction(
    y: CenteredConfiguration,
    cap: CapSpec,
    mode: str = "exhaustive",
    n: int = 100_000,
    seed: int = 0,
    chunk_size: int = DEFAULT_CHUNK,
) -> McEstimate:
    """Fraction of orbit points strictly inside the cap.

    The cap is open, so boundary points count as outside; to keep that exact
    under roundoff, points within 1e-12 |w||y| of the boundary are treated as
    boundary.  Exhaustive mode enumerates the orbit (q <= 9) and is exact
    (zero standard error).  Sampled mode draws n uniform permutations
    (Fisher-Yates streams) and returns the binomial estimate.
    """
    if cap.q != y.q:
        raise ValueError("cap center and configuration dimensions differ")
    w = cap.center
    bound = float(np.dot(w, w)) * cap.t + 1e-12 * float(np.linalg.norm(w)) * y.norm
    if mode == "exhaustive":
        if y.q > 8:
            raise OrbitTooLargeError(f"exhaustive cap statistics need q <= 8, got {y.q}; use sampling")
        inner = orbit_matrix(y) @ w
        frac = float(np.mean(inner > bound))
        return McEstimate(value=frac, std_error=0.0, n=inner.size, seed=seed)
    if mode != "sampled":
        raise ValueError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")

    def chunk(rng, m, i):
        perms = rng.permuted(np.tile(y.entries, (m, 1)), axis=1)
        return int(np.sum(perms @ w > bound))

    hits = sum(map_chunks(chunk, n, seed, chunk_size))
    p = hits / n
    return McEstimate(value=p, std_error=math.sqrt(p * (1 - p) / n), n=n, seed=seed)


def _scan_distance(values: np.ndarray, q: int, scale: float = 1.0) -> float:
    """sup over thresholds s of |#{v > s}/n - cap_area(q, s * scale)|.

    The empirical survival function jumps only at the given values, and the
    cap area is continuous and decreasing, so scanning both one-sided gaps at
    each distinct value is exact.  Arguments s*scale outside [-1, 1] carry
    survival exactly 0 or 1.
    """
    vals, counts = np.unique(values, return_counts=True)  # ascending
    n = values.size
    greater = n - np.cumsum(counts)          # #{v > vals[j]}
    geq = greater + counts                   # #{v >= vals[j]}
    t = vals * scale
    beta = np.asarray(cap_area(q, np.clip(t, -1.0, np.nextafter(1.0, 0.0))))
    beta[t >= 1.0] = 0.0
    beta[t <= -1.0] = 1.0
    return float(np.max(np.maximum(np.abs(greater / n - beta), np.abs(geq / n - beta))))


def nscd_lower_bound(
    y: CenteredConfiguration,
    directions: int,
    seed: int,
    include_ray_centers: bool = True,
    chunk_size: int = DEFAULT_CHUNK,
) -> McEstimate:
    """Certified lower bound for the normalized spherical cap discrepancy.

    For each cap center the scan over thresholds is exact (the whole orbit is
    enumerated), so every scanned direction certifies a lower bound and the
    maximum over directions is one too; only the choice of directions is
    random.  The certified empty-cap ray centers are included by default.
    The reported std_error is 0: there is no estimation noise, just possible
    slack below the true supremum.
    """
    q = y.q
    if q > 8:
        raise OrbitTooLargeError(f"exact per-direction scans need q <= 8, got {q}")
    orbit = orbit_matrix(y)
    n2 = y.norm * y.norm

    def scan_centers(w_rows: np.ndarray) -> float:
        best = 0.0
        for w in w_rows:
            best = max(best, _scan_distance(orbit @ w / n2, q))
        return best

    def chunk(rng, m, i):
        w = rng.standard_normal((m, q))
        w -= w.mean(axis=1, keepdims=True)
        w *= y.norm / np.linalg.norm(w, axis=1, keepdims=True)
        return scan_centers(w)

    best = max(map_chunks(chunk, directions, seed, chunk_size))
    count = directions
    if include_ray_centers:
        rays = np.vstack([y.norm * extreme_ray(q, k).entries for k in range(1, q)])
        best = max(best, scan_centers(rays))
        count += q - 1
    return McEstimate(value=best, std_error=0.0, n=count, seed=seed)


def marginal_distance(family, q: int) -> float:
    """Exact sup-distance between one orbit coordinate and one sphere
    coordinate (a lower bound for the full cap discrepancy).

    A coordinate of a uniformly permuted configuration is uniform on the q
    entries; a sphere coordinate at the family radius has survival function
    cap_area(q, s sqrt(q/(q-1)) / r).  The supremum over s is attained at the
    q atoms and computed exactly by a two-sided scan.
    """
    tag = FamilyTag(family)
    if tag not in (FamilyTag.REGULAR, FamilyTag.MAXIMAL, FamilyTag.NORMAL):
        raise ValueError(f"marginal distance is defined for the three families, not {family!r}")
    y = configuration(tag, q)
    scale = math.sqrt(q / (q - 1.0)) / y.norm
    return _scan_distance(y.entries, q, scale)


def empty_cap_certificate(y: CenteredConfiguration) -> CapCertificate:
    """The certified largest empty cap at an argmin ray.

    The cap center is |y| z_k* with threshold t(orbit); the rearrangement
    maximum of orbit inner products must equal the cap bound exactly (the
    maximizing permutation sits on the cap boundary, outside the open cap).
    """
    if y.q < 3:
        raise ValueError("empty-cap certificates need q >= 3")
    thr = orbit_threshold(y)
    k_star = thr.argmin[0]
    center = y.norm * extreme_ray(y.q, k_star).entries
    cap = CapSpec(center=center, t=thr.t)
    max_inner = rearrangement_max(y.entries, center)
    bound = y.norm * y.norm * thr.t
    gap = max_inner - bound
    return CapCertificate(
        cap=cap,
        ray_index=k_star,
        max_orbit_inner=max_inner,
        bound=bound,
        equality_gap=gap,
        verified=bool(abs(gap) <= 1e-12 * max(1.0, abs(bound))),
    )
