"""Vectors on the zero-sum hyperplane and the ordered cone.

Everything downstream works with centered, sorted q-vectors: points of the
(q-2)-sphere inside the hyperplane orthogonal to the all-ones vector.  This
module provides the projection onto that hyperplane, the Helmert orthonormal
basis of it, the extreme rays of the ordered (sorted, zero-sum) cone, the
simplex vertex directions, and exact enumeration of small permutation orbits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

__all__ = [
    "Configuration",
    "CenteredConfiguration",
    "ExtremeRay",
    "SimplexVertex",
    "ZeroProjectionError",
    "OrbitTooLargeError",
    "helmert_matrix",
    "center_project",
    "extreme_ray",
    "simplex_vertex",
    "orbit_enumerate",
    "orbit_matrix",
    "orbit_size",
    "ray_inner_products",
    "rearrangement_max",
]

# Dense matrices are only materialized up to this dimension; all large-q
# paths use matrix-free formulas.
MAX_DENSE_DIM = 1000

# Orbits are enumerated exactly only up to 9! = 362880 points.
MAX_ORBIT_DIM = 9


class ZeroProjectionError(ValueError):
    """Raised when centering a configuration leaves the zero vector."""


class OrbitTooLargeError(ValueError):
    """Raised when exact orbit enumeration is requested for q > 9."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Configuration:
    """A sorted raw configuration x in R^q (nondecreasing entries, q >= 2)."""

    entries: np.ndarray

    def __post_init__(self):
        e = _readonly(self.entries)
        object.__setattr__(self, "entries", e)
        if e.ndim != 1 or e.size < 2:
            raise ValueError("configuration needs at least 2 entries")
        if np.any(np.diff(e) < 0):
            raise ValueError("configuration entries must be nondecreasing")

    @property
    def q(self) -> int:
        return self.entries.size


@dataclass(frozen=True)
class CenteredConfiguration:
    """A nonzero sorted zero-sum q-vector with its Euclidean norm cached.

    The zero-sum tolerance is scale-relative: |sum| <= 1e-12 * q * max|entry|.
    The zero vector is rejected at construction.
    """

    entries: np.ndarray
    norm: float = 0.0

    def __post_init__(self):
        e = _readonly(self.entries)
        object.__setattr__(self, "entries", e)
        if e.ndim != 1 or e.size < 2:
            raise ValueError("centered configuration needs at least 2 entries")
        if np.any(np.diff(e) < 0):
            raise ValueError("entries must be nondecreasing")
        scale = float(np.max(np.abs(e))) if e.size else 0.0
        if abs(float(e.sum())) > 1e-12 * e.size * max(scale, 1e-300):
            raise ValueError("entries must sum to zero")
        nrm = float(np.linalg.norm(e))
        if nrm <= 0.0:
            raise ZeroProjectionError("zero vector is not a valid configuration")
        object.__setattr__(self, "norm", nrm)

    @property
    def q(self) -> int:
        return self.entries.size

    def unit(self) -> np.ndarray:
        """Direction of the configuration (unit vector)."""
        return self.entries / self.norm


@dataclass(frozen=True)
class ExtremeRay:
    """Unit generator of the ordered zero-sum cone: k negative entries
    followed by q-k positive ones."""

    q: int
    k: int
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _readonly(self.entries))


@dataclass(frozen=True)
class SimplexVertex:
    """Unit direction of the i-th centered coordinate axis; the q of them
    form the vertices of a regular simplex in the zero-sum hyperplane."""

    q: int
    i: int
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _readonly(self.entries))


def helmert_matrix(q: int) -> np.ndarray:
    """Orthogonal q x q matrix whose first column is (1,...,1)/sqrt(q).

    Column j >= 2 has j-1 leading ones, then -(j-1), then zeros, scaled by
    1/sqrt((j-1)j).  Columns 2..q form an orthonormal basis of the zero-sum
    hyperplane.
    """
    if q < 2:
        raise ValueError(f"helmert_matrix needs q >= 2, got {q}")
    if q > MAX_DENSE_DIM:
        raise ValueError(
            f"dense matrices are limited to q <= {MAX_DENSE_DIM}; "
            "use the matrix-free operations for larger q"
        )
    g = np.zeros((q, q))
    g[:, 0] = 1.0 / math.sqrt(q)
    for j in range(2, q + 1):
        s = 1.0 / math.sqrt((j - 1) * j)
        g[: j - 1, j - 1] = s
        g[j - 1, j - 1] = -(j - 1) * s
    return g


def center_project(x) -> CenteredConfiguration:
    """Project a raw configuration onto the zero-sum hyperplane.

    Returns y = x - mean(x) * (1,...,1).  A constant input projects to the
    zero vector and is rejected (threshold 1e-12 * sqrt(q) * max|x_i|, so the
    test scales with the input).
    """
    if isinstance(x, Configuration):
        e = x.entries
    else:
        e = np.sort(np.asarray(x, dtype=float))
        if e.ndim != 1 or e.size < 2:
            raise ValueError("need at least 2 entries")
    y = e - e.mean()
    scale = float(np.max(np.abs(e)))
    if float(np.linalg.norm(y)) <= 1e-12 * math.sqrt(e.size) * max(scale, 1e-300):
        raise ZeroProjectionError("constant configuration projects to zero")
    return CenteredConfiguration(y)


def extreme_ray(q: int, k: int) -> ExtremeRay:
    """The k-th extreme ray of the ordered zero-sum cone, k in 1..q-1."""
    if q < 2:
        raise ValueError(f"extreme_ray needs q >= 2, got {q}")
    if not 1 <= k <= q - 1:
        raise IndexError(f"ray index k={k} out of range 1..{q - 1}")
    e = np.empty(q)
    e[:k] = -math.sqrt((q - k) / k) / math.sqrt(q)
    e[k:] = math.sqrt(k / (q - k)) / math.sqrt(q)
    return ExtremeRay(q=q, k=k, entries=e)


def simplex_vertex(q: int, i: int) -> SimplexVertex:
    """Unit projection of the i-th coordinate axis, i in 1..q.

    Entry i equals (q-1)/sqrt(q(q-1)); the others equal -1/sqrt(q(q-1)).
    Pairwise inner products are -1/(q-1).
    """
    if q < 2:
        raise ValueError(f"simplex_vertex needs q >= 2, got {q}")
    if not 1 <= i <= q:
        raise IndexError(f"vertex index i={i} out of range 1..{q}")
    s = 1.0 / math.sqrt(q * (q - 1))
    e = np.full(q, -s)
    e[i - 1] = (q - 1) * s
    return SimplexVertex(q=q, i=i, entries=e)


def orbit_size(y: CenteredConfiguration) -> int:
    """Number of distinct permutations: q! divided by the tie multiplicities.

    Ties are decided by exact 64-bit equality; the configuration generators
    never produce accidental ties.
    """
    vals, counts = np.unique(y.entries, return_counts=True)
    n = math.factorial(y.q)
    for c in counts:
        n //= math.factorial(int(c))
    return n


def orbit_enumerate(y: CenteredConfiguration) -> Iterator[np.ndarray]:
    """Yield every distinct permutation of y exactly once.

    Lexicographic multiset enumeration; tied entries (bitwise-equal doubles)
    are not repeated.  Guarded at q <= 9 against factorial blowup.
    """
    if y.q > MAX_ORBIT_DIM:
        raise OrbitTooLargeError(
            f"q={y.q} > {MAX_ORBIT_DIM}: exact enumeration is infeasible, use sampling"
        )
    a = list(y.entries)
    n = len(a)
    while True:
        yield np.array(a)
        j = n - 2
        while j >= 0 and a[j] >= a[j + 1]:
            j -= 1
        if j < 0:
            return
        l = n - 1
        while a[l] <= a[j]:
            l -= 1
        a[j], a[l] = a[l], a[j]
        a[j + 1 :] = reversed(a[j + 1 :])


def orbit_matrix(y: CenteredConfiguration) -> np.ndarray:
    """All distinct permutations of y stacked as rows."""
    return np.vstack(list(orbit_enumerate(y)))


def ray_inner_products(v: np.ndarray) -> np.ndarray:
    """Inner products of a zero-sum vector with all q-1 extreme rays, in O(q).

    For zero-sum v, v'z_k reduces to sqrt(q/(k(q-k))) times the suffix sum
    v_{k+1} + ... + v_q, so no rays are materialized.
    """
    v = np.asarray(v, dtype=float)
    q = v.size
    suffix = np.cumsum(v[::-1])[::-1]  # suffix[j] = v_j + ... + v_q (0-based)
    k = np.arange(1, q, dtype=float)
    return np.sqrt(q / (k * (q - k))) * suffix[1:]


def rearrangement_max(y_sorted: np.ndarray, w: np.ndarray) -> float:
    """max over permutations P of (Py)'w, computed by the rearrangement
    inequality as the sorted-by-sorted dot product."""
    return float(np.dot(np.sort(np.asarray(y_sorted, dtype=float)), np.sort(np.asarray(w, dtype=float))))
