"""Seeded samplers and Monte Carlo experiments on spheres.

Reproducibility contract: every stochastic routine consumes Philox
counter-based streams keyed by (seed, chunk index), with samples assigned to
chunks by index.  Results are therefore bit-identical for a fixed (seed, n,
chunk size) regardless of worker count; chunks may be evaluated in parallel
threads (capped by the PERMCAP_WORKERS environment variable) because the
reduction runs in chunk order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .capfun import cap_area
from .families import FamilyTag, common_norm, configuration, normal_weights, regular
from .geometry import helmert_matrix, rearrangement_max, simplex_vertex

__all__ = [
    "McEstimate",
    "CoverageSpec",
    "CoverageResult",
    "HypothesisTestResult",
    "SubindependenceReport",
    "SlepianReport",
    "DEFAULT_CHUNK",
    "chunk_rng",
    "sphere_sample",
    "ball_sample",
    "coverage_spec",
    "ape_coverage",
    "hypothesis_test",
    "subindependence_check",
    "circle_quadrant_probability",
    "slepian_halfspace_check",
]

DEFAULT_CHUNK = 1 << 16


@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo point estimate with its standard error and provenance."""

    value: float
    std_error: float
    n: int
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("sample count must be >= 1")
        if self.std_error < 0:
            raise ValueError("standard error must be nonnegative")


def proportion_estimate(hits: int, n: int, seed: int) -> McEstimate:
    p = hits / n
    return McEstimate(value=p, std_error=math.sqrt(p * (1.0 - p) / n), n=n, seed=seed)


def chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    """Independent Philox stream for one (seed, chunk) pair."""
    key = np.array([seed % 2**64, chunk_index], dtype=np.uint64)
    return np.random.default_rng(np.random.Philox(key=key))


def _workers() -> int:
    env = os.environ.get("PERMCAP_WORKERS")
    if env:
        return max(1, int(env))
    return min(os.cpu_count() or 1, 8)


def _chunk_sizes(n: int, chunk_size: int) -> list[int]:
    sizes = [chunk_size] * (n // chunk_size)
    if n % chunk_size:
        sizes.append(n % chunk_size)
    return sizes


def map_chunks(fn, n: int, seed: int, chunk_size: int = DEFAULT_CHUNK) -> list:
    """Evaluate fn(rng, m, chunk_index) over index-defined chunks.

    Results come back in chunk order, so any reduction over them is
    deterministic no matter how many threads ran.
    """
    sizes = _chunk_sizes(n, chunk_size)
    tasks = [(i, m) for i, m in enumerate(sizes)]
    workers = _workers()
    if workers == 1 or len(tasks) == 1:
        return [fn(chunk_rng(seed, i), m, i) for i, m in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futs = [pool.submit(fn, chunk_rng(seed, i), m, i) for i, m in tasks]
        return [f.result() for f in futs]


def _sphere_chunk(rng: np.random.Generator, m: int, q: int, r: float) -> np.ndarray:
    v = rng.standard_normal((m, q))
    v -= v.mean(axis=1, keepdims=True)
    v *= r / np.linalg.norm(v, axis=1, keepdims=True)
    return v


def sphere_sample(q: int, r: float, n: int, seed: int, chunk_size: int = DEFAULT_CHUNK) -> np.ndarray:
    """n i.i.d. points uniform on the radius-r (q-2)-sphere of the zero-sum
    hyperplane: centered standard normals rescaled to norm r."""
    if q < 3 or r <= 0:
        raise ValueError("need q >= 3 and r > 0")
    chunks = map_chunks(lambda rng, m, i: _sphere_chunk(rng, m, q, r), n, seed, chunk_size)
    return np.vstack(chunks)


def ball_sample(q: int, r: float, n: int, seed: int, chunk_size: int = DEFAULT_CHUNK) -> np.ndarray:
    """n i.i.d. points uniform in the radius-r (q-1)-ball of the zero-sum
    hyperplane: sphere direction times r * U^(1/(q-1))."""
    if q < 3 or r <= 0:
        raise ValueError("need q >= 3 and r > 0")

    def chunk(rng, m, i):
        v = _sphere_chunk(rng, m, q, 1.0)
        u = rng.random(m)
        return v * (r * u ** (1.0 / (q - 1)))[:, None]

    return np.vstack(map_chunks(chunk, n, seed, chunk_size))


@dataclass(frozen=True)
class CoverageSpec:
    """Cap battery for the asymptotic-emptiness experiments.

    The regular family uses 2q two-sided caps at the scaled simplex vertices
    with threshold sqrt(3/(q+1)); the normal family uses the q one-sided caps
    with its top-quantile threshold.
    """

    family: FamilyTag
    q: int
    t_cap: float
    two_sided: bool


def coverage_spec(family, q: int) -> CoverageSpec:
    tag = FamilyTag(family)
    if tag is FamilyTag.REGULAR:
        return CoverageSpec(family=tag, q=q, t_cap=math.sqrt(3.0 / (q + 1.0)), two_sided=True)
    if tag is FamilyTag.NORMAL:
        w = normal_weights(q)
        t = math.sqrt(q / (q - 1.0)) * w.a_breve[-1] / w.norm_a
        return CoverageSpec(family=tag, q=q, t_cap=t, two_sided=False)
    raise ValueError(f"coverage caps are defined for regular and normal, not {family!r}")


@dataclass(frozen=True)
class CoverageResult:
    estimate: McEstimate          # mass of the cap union
    complement: float             # 1 - estimate.value
    coordinate_threshold: float
    cap_area_single: float
    empty_exact: bool             # no orbit point inside any cap (rearrangement)
    empty_margin: float           # min over caps of (bound - max inner product)


def _emptiness_margin(spec: CoverageSpec) -> float:
    """Exact worst-case margin of the orbit against the cap battery.

    For cap center w and threshold t the orbit avoids C(w; t) iff the
    rearrangement maximum of inner products is <= |w|^2 t.  Permutation
    symmetry reduces the battery to the +/- simplex-vertex patterns.
    """
    y = configuration(spec.family, spec.q)
    r = common_norm(spec.q)
    f = simplex_vertex(spec.q, spec.q).entries  # any i: patterns coincide after sorting
    bound = r * r * spec.t_cap
    margins = [bound - rearrangement_max(y.entries, r * f)]
    if spec.two_sided:
        margins.append(bound - rearrangement_max(y.entries, -r * f))
    return min(margins)


def ape_coverage(spec: CoverageSpec, n: int, seed: int, chunk_size: int = DEFAULT_CHUNK) -> CoverageResult:
    """Estimate the sphere mass of the empty-cap union.

    A sphere point v lies in some cap iff its extreme centered coordinate
    exceeds r * t_cap * sqrt((q-1)/q); two-sided batteries use max|v_i - vbar|,
    one-sided ones max(v_i - vbar).  Also verifies, exactly, that no orbit
    point of the family lies in any cap (boundary points count as outside,
    the caps being open).
    """
    q, r = spec.q, common_norm(spec.q)
    cstar = r * spec.t_cap * math.sqrt((q - 1.0) / q)

    def chunk(rng, m, i):
        v = _sphere_chunk(rng, m, q, r)
        dev = v - v.mean(axis=1, keepdims=True)
        stat = np.abs(dev).max(axis=1) if spec.two_sided else dev.max(axis=1)
        return int(np.sum(stat > cstar))

    hits = sum(map_chunks(chunk, n, seed, chunk_size))
    margin = _emptiness_margin(spec)
    return CoverageResult(
        estimate=proportion_estimate(hits, n, seed),
        complement=1.0 - hits / n,
        coordinate_threshold=cstar,
        cap_area_single=float(cap_area(q, spec.t_cap)),
        empty_exact=bool(margin >= -1e-9 * r * r),
        empty_margin=margin,
    )


@dataclass(frozen=True)
class HypothesisTestResult:
    size: McEstimate
    power: float            # exact, not estimated
    threshold: float


def hypothesis_test(q: int, n: int, seed: int, chunk_size: int = DEFAULT_CHUNK) -> HypothesisTestResult:
    """Spherical-uniformity test that rejects iff max_i |Y_i - Ybar| <= (q-1)/2.

    Size is estimated under the uniform sphere law at the regular radius;
    power equals 1 exactly because every permutation of the regular
    configuration attains the threshold (non-strict inequality).
    """
    if q < 3:
        raise ValueError(f"need q >= 3, got {q}")
    r = common_norm(q)
    thr = 0.5 * (q - 1.0)

    def chunk(rng, m, i):
        v = _sphere_chunk(rng, m, q, r)
        dev = v - v.mean(axis=1, keepdims=True)
        return int(np.sum(np.abs(dev).max(axis=1) <= thr))

    hits = sum(map_chunks(chunk, n, seed, chunk_size))
    y = regular(q).entries
    power = 1.0 if np.max(np.abs(y - y.mean())) <= thr else 0.0
    return HypothesisTestResult(size=proportion_estimate(hits, n, seed), power=power, threshold=thr)


@dataclass(frozen=True)
class SubindependenceReport:
    n_dim: int
    thresholds: tuple
    trials: int
    seed: int
    p_joint: McEstimate
    p_product: float
    product_se: float
    diff_se: float            # batch-means SE of (joint - product), same sample
    holds: bool
    splits_ok: bool | None


def _batch_se(values: np.ndarray) -> float:
    b = len(values)
    if b < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(b))


def subindependence_check(
    n_dim: int,
    thresholds,
    trials: int,
    seed: int,
    check_splits: bool = False,
    chunk_size: int = DEFAULT_CHUNK,
) -> SubindependenceReport:
    """Check P[all U_i <= t_i] <= prod P[U_i <= t_i] for a uniform point on
    the standard unit (n-1)-sphere.

    Both sides are estimated from the same sample, and the assertion allows
    3 batch-means standard errors of the difference (per-chunk batches), the
    appropriate combined error for correlated estimators.  Optionally also
    checks the split inequality P[all] <= P[first r] * P[rest] for each r.
    """
    t = np.asarray(thresholds, dtype=float)
    if n_dim < 2 or t.size != n_dim:
        raise ValueError("need n_dim >= 2 and one threshold per coordinate")
    if np.any(t <= 0):
        raise ValueError("thresholds must be positive")

    def chunk(rng, m, i):
        u = rng.standard_normal((m, n_dim))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        below = u <= t
        joint = below.all(axis=1)
        head = below[:, : n_dim - 1]
        prefix_all = np.cumprod(head, axis=1).astype(bool) if check_splits else None
        suffix_all = np.cumprod(below[:, ::-1], axis=1)[:, ::-1].astype(bool) if check_splits else None
        return (
            int(joint.sum()),
            below.sum(axis=0),
            m,
            prefix_all.sum(axis=0) if check_splits else None,
            suffix_all.sum(axis=0) if check_splits else None,
        )

    parts = map_chunks(chunk, trials, seed, chunk_size)
    joint_hits = sum(p[0] for p in parts)
    marg_hits = np.sum([p[1] for p in parts], axis=0)
    p_joint = proportion_estimate(joint_hits, trials, seed)
    marg = marg_hits / trials
    p_prod = float(np.prod(marg))
    # delta method on the product of (correlated) marginal proportions
    rel_var = 0.0
    for pm in marg:
        rel_var += (1.0 - pm) / max(pm, 1e-300) / trials
    product_se = p_prod * math.sqrt(rel_var)
    per_chunk_diff = np.array(
        [p[0] / p[2] - float(np.prod(p[1] / p[2])) for p in parts]
    )
    diff_se = max(_batch_se(per_chunk_diff), 1.0 / trials)
    holds = p_joint.value <= p_prod + 3.0 * diff_se

    splits_ok = None
    if check_splits:
        prefix = np.sum([p[3] for p in parts], axis=0) / trials  # P[U_1..U_r all below]
        suffix = np.sum([p[4] for p in parts], axis=0) / trials  # P[U_r..U_n all below]
        splits_ok = True
        for r in range(1, n_dim):
            rhs = float(prefix[r - 1] * suffix[r])
            if p_joint.value > rhs + 3.0 * diff_se:
                splits_ok = False
    return SubindependenceReport(
        n_dim=n_dim,
        thresholds=tuple(float(v) for v in t),
        trials=trials,
        seed=seed,
        p_joint=p_joint,
        p_product=p_prod,
        product_se=product_se,
        diff_se=diff_se,
        holds=holds,
        splits_ok=splits_ok,
    )


def _arc_intersection_length(arcs: list[tuple[float, float]]) -> float:
    """Total length of the intersection of circular arcs given as (lo, hi)
    angle intervals (radians; hi may exceed 2*pi to encode wraparound)."""
    segments = [(0.0, 2.0 * math.pi)]
    for lo, hi in arcs:
        length = hi - lo
        lo %= 2.0 * math.pi
        hi = lo + length
        if hi <= 2.0 * math.pi:
            pieces = [(lo, hi)]
        else:
            pieces = [(lo, 2.0 * math.pi), (0.0, hi - 2.0 * math.pi)]
        new = []
        for (a, b) in segments:
            for (c, d) in pieces:
                s, e = max(a, c), min(b, d)
                if e > s:
                    new.append((s, e))
        segments = new
    return sum(e - s for s, e in segments)


def circle_quadrant_probability(t1: float, t2: float) -> float:
    """Exact P[cos(theta) <= t1, sin(theta) <= t2] for theta uniform on the
    circle, by arc intersection.  Thresholds must be positive."""
    if t1 <= 0 or t2 <= 0:
        raise ValueError("thresholds must be positive")
    arcs = []
    if t1 < 1.0:
        a = math.acos(t1)
        arcs.append((a, 2.0 * math.pi - a))
    if t2 < 1.0:
        b = math.asin(t2)
        arcs.append((math.pi - b, 2.0 * math.pi + b))
    if not arcs:
        return 1.0
    return _arc_intersection_length(arcs) / (2.0 * math.pi)


@dataclass(frozen=True)
class SlepianReport:
    q: int
    threshold: float
    trials: int
    seed: int
    p_vertex_halfspaces: McEstimate   # intersection over simplex-vertex normals
    p_ortho_halfspaces: McEstimate    # intersection over Helmert-column normals
    analytic_product: float           # [1 - beta(threshold / r)]^(q-1)
    ordered: bool                     # vertex side <= orthogonal side + 3 SE
    product_bound_ok: bool            # orthogonal side <= analytic product + 3 SE


def slepian_halfspace_check(
    q: int,
    threshold: float,
    trials: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK,
) -> SlepianReport:
    """Compare halfspace-intersection masses for the two normal systems.

    The simplex-vertex normals have pairwise negative inner products, so the
    intersection they cut is no more likely than the one cut by orthonormal
    normals at the same threshold; that side in turn is bounded by the
    product of the single-halfspace masses.
    """
    if q < 3:
        raise ValueError(f"need q >= 3, got {q}")
    r = common_norm(q)
    f_normals = np.vstack([simplex_vertex(q, i).entries for i in range(2, q + 1)])
    g_normals = helmert_matrix(q)[:, 1:].T

    def chunk(rng, m, i):
        v = _sphere_chunk(rng, m, q, r)
        in_f = np.all(v @ f_normals.T <= threshold, axis=1)
        in_g = np.all(v @ g_normals.T <= threshold, axis=1)
        return int(in_f.sum()), int(in_g.sum())

    parts = map_chunks(chunk, trials, seed, chunk_size)
    f_hits = sum(p[0] for p in parts)
    g_hits = sum(p[1] for p in parts)
    p_f = proportion_estimate(f_hits, trials, seed)
    p_g = proportion_estimate(g_hits, trials, seed)
    t_unit = threshold / r
    analytic = (1.0 - float(cap_area(q, t_unit))) ** (q - 1) if -1.0 <= t_unit < 1.0 else 1.0
    se = math.hypot(p_f.std_error, p_g.std_error)
    return SlepianReport(
        q=q,
        threshold=threshold,
        trials=trials,
        seed=seed,
        p_vertex_halfspaces=p_f,
        p_ortho_halfspaces=p_g,
        analytic_product=analytic,
        ordered=p_f.value <= p_g.value + 3.0 * se,
        product_bound_ok=p_g.value <= analytic + 3.0 * p_g.std_error,
    )
