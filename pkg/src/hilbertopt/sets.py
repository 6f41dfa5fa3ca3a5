"""Closed convex sets with exact Euclidean projections.

Each shape knows its membership test, its nearest-point projection in the
standard norm, and two samplers: one spreading points over the set and one
concentrating them on its relative boundary. The samplers feed the
variational-inequality certificate and the segment (convexity) check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike

from .errors import DimensionError
from .space import Vector, as_vector, check_same_dim

VI_TOL = 1e-10
SEGMENT_TOL = 1e-10


def _frozen(a: Vector) -> Vector:
    a = a.copy()
    a.flags.writeable = False
    return a


class ConvexSet:
    """Base class for feasible sets in R^dim."""

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def contains(self, x: Vector, tol: float = 0.0) -> bool:
        raise NotImplementedError

    def _project(self, x: Vector) -> Vector:
        raise NotImplementedError

    def project(self, x: Vector) -> Vector:
        if self.contains(x, 0.0):
            return x.copy()
        return self._project(x)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw ``n`` points spread over the set, shape ``(n, dim)``."""
        raise NotImplementedError

    def sample_boundary(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw ``n`` points on (or near the extreme parts of) the set boundary."""
        return self.sample(rng, n)


@dataclass(frozen=True, eq=False)
class Box(ConvexSet):
    lo: Vector
    hi: Vector

    def __post_init__(self):
        lo = as_vector(self.lo, "lo")
        hi = as_vector(self.hi, "hi")
        check_same_dim(lo, hi)
        if np.any(lo > hi):
            raise ValueError("Box requires lo <= hi componentwise")
        object.__setattr__(self, "lo", _frozen(lo))
        object.__setattr__(self, "hi", _frozen(hi))

    @property
    def dim(self):
        return self.lo.shape[0]

    def contains(self, x, tol=0.0):
        return bool(np.all(x >= self.lo - tol) and np.all(x <= self.hi + tol))

    def _project(self, x):
        return np.clip(x, self.lo, self.hi)

    def sample(self, rng, n):
        return rng.uniform(self.lo, self.hi, size=(n, self.dim))

    def sample_boundary(self, rng, n):
        pts = self.sample(rng, n)
        snap = rng.random((n, self.dim)) < 0.5
        upper = rng.random((n, self.dim)) < 0.5
        corners = np.where(upper, self.hi, self.lo)
        return np.where(snap, corners, pts)


@dataclass(frozen=True, eq=False)
class Ball(ConvexSet):
    center: Vector
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen(as_vector(self.center, "center")))
        if not self.radius > 0:
            raise ValueError("Ball radius must be positive")
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dim(self):
        return self.center.shape[0]

    def contains(self, x, tol=0.0):
        return bool(np.linalg.norm(x - self.center) <= self.radius + tol)

    def _project(self, x):
        d = x - self.center
        return self.center + d * (self.radius / np.linalg.norm(d))

    def _directions(self, rng, n):
        g = rng.standard_normal((n, self.dim))
        nrm = np.linalg.norm(g, axis=1, keepdims=True)
        nrm[nrm == 0] = 1.0
        return g / nrm

    def sample(self, rng, n):
        r = self.radius * rng.random((n, 1)) ** (1.0 / self.dim)
        return self.center + r * self._directions(rng, n)

    def sample_boundary(self, rng, n):
        return self.center + self.radius * self._directions(rng, n)


@dataclass(frozen=True, eq=False)
class _AffineShape(ConvexSet):
    normal: Vector
    offset: float
    sample_radius: float = 10.0

    def __post_init__(self):
        nrm = _frozen(as_vector(self.normal, "normal"))
        nn = float(np.dot(nrm, nrm))
        if nn == 0.0:
            raise ValueError("normal must be nonzero")
        object.__setattr__(self, "normal", nrm)
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "_nn", nn)

    @property
    def dim(self):
        return self.normal.shape[0]

    def _slack(self, x):
        return np.dot(x, self.normal) - self.offset

    def _to_boundary(self, pts):
        s = pts @ self.normal - self.offset
        return pts - np.outer(s / self._nn, self.normal)

    def _box_sample(self, rng, n):
        base = self.normal * (self.offset / self._nn)
        r = self.sample_radius
        return base + rng.uniform(-r, r, size=(n, self.dim))


@dataclass(frozen=True, eq=False)
class Halfspace(_AffineShape):
    """``{x : <normal, x> <= offset}``."""

    def contains(self, x, tol=0.0):
        return bool(self._slack(x) <= tol)

    def _project(self, x):
        return x - (self._slack(x) / self._nn) * self.normal

    def sample(self, rng, n):
        pts = self._box_sample(rng, n)
        s = pts @ self.normal - self.offset
        bad = s > 0
        pts[bad] -= np.outer(2.0 * s[bad] / self._nn, self.normal)
        return pts

    def sample_boundary(self, rng, n):
        return self._to_boundary(self._box_sample(rng, n))


@dataclass(frozen=True, eq=False)
class Hyperplane(_AffineShape):
    """``{x : <normal, x> = offset}``."""

    def contains(self, x, tol=0.0):
        return bool(abs(self._slack(x)) <= tol)

    def _project(self, x):
        return x - (self._slack(x) / self._nn) * self.normal

    def sample(self, rng, n):
        base = self.normal * (self.offset / self._nn)
        g = base + self.sample_radius * rng.standard_normal((n, self.dim))
        return self._to_boundary(g)


@dataclass(frozen=True)
class Simplex(ConvexSet):
    """Probability simplex ``{x : x_i >= 0, sum x_i = 1}``."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Simplex dimension must be >= 1")

    @property
    def dim(self):
        return self.n

    def contains(self, x, tol=0.0):
        return bool(np.all(x >= -tol) and abs(x.sum() - 1.0) <= tol)

    def _project(self, x):
        return project_simplex(x)

    def sample(self, rng, n):
        e = rng.exponential(size=(n, self.n))
        return e / e.sum(axis=1, keepdims=True)

    def sample_boundary(self, rng, n):
        e = rng.exponential(size=(n, self.n))
        drop = rng.random((n, self.n)) < 0.5
        # keep at least one coordinate alive per row
        drop[np.arange(n), rng.integers(0, self.n, size=n)] = False
        e[drop] = 0.0
        return e / e.sum(axis=1, keepdims=True)


@dataclass(frozen=True)
class WholeSpace(ConvexSet):
    """All of R^n; the projection is the identity."""

    n: int
    sample_radius: float = 10.0

    @property
    def dim(self):
        return self.n

    def contains(self, x, tol=0.0):
        return True

    def _project(self, x):
        return x.copy()

    def sample(self, rng, n):
        r = self.sample_radius
        return rng.uniform(-r, r, size=(n, self.n))


def project_simplex(x: Vector) -> Vector:
    """Euclidean projection onto the probability simplex by sort and threshold.

    Sorting is stable on ``-x`` so tied coordinates keep their index order.
    """
    order = np.argsort(-x, kind="stable")
    u = x[order]
    css = np.cumsum(u)
    j = np.arange(1, x.shape[0] + 1)
    positive = u - (css - 1.0) / j > 0
    rho = np.nonzero(positive)[0][-1]
    tau = (css[rho] - 1.0) / (rho + 1)
    return np.maximum(x - tau, 0.0)


def _checked(cset: ConvexSet, x: ArrayLike) -> Vector:
    x = as_vector(x)
    if x.shape[0] != cset.dim:
        raise DimensionError(f"point has dimension {x.shape[0]}, set has {cset.dim}")
    return x


def contains(cset: ConvexSet, x: ArrayLike, tol: float = 0.0) -> bool:
    if tol < 0:
        raise ValueError("tol must be >= 0")
    return cset.contains(_checked(cset, x), tol)


def project(cset: ConvexSet, x: ArrayLike) -> Vector:
    """Nearest point of ``cset`` to ``x``; members are returned unchanged."""
    return cset.project(_checked(cset, x))


@dataclass(frozen=True, eq=False)
class ProjectionCertificate:
    point: Vector
    projection: Vector
    max_vi_violation: float
    samples_used: int

    def is_valid(self, tol: float = VI_TOL) -> bool:
        return self.max_vi_violation <= tol


def vi_certificate(
    cset: ConvexSet,
    x: ArrayLike,
    n_samples: int = 1000,
    seed: int = 0,
    projector: Callable[[ConvexSet, Vector], Vector] = project,
) -> ProjectionCertificate:
    """Sampled check of <x - P(x), y - P(x)> <= 0 over feasible witnesses y.

    Half of the witnesses come from the set's spread sampler and half from its
    boundary sampler; faults in a projection show up mostly near the boundary.
    ``projector`` lets a caller certify a projection routine other than the
    built-in one.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    x = _checked(cset, x)
    p = as_vector(projector(cset, x), "projection")
    check_same_dim(x, p)
    rng = np.random.default_rng(seed)
    n_in = n_samples - n_samples // 2
    ys = np.vstack([cset.sample(rng, n_in), cset.sample_boundary(rng, n_samples - n_in)])
    viol = (ys - p) @ (x - p)
    return ProjectionCertificate(x, p, float(viol.max()), n_samples)


def segment_check(
    cset: ConvexSet, n_trials: int = 1000, seed: int = 0, tol: float = SEGMENT_TOL
) -> Optional[tuple[Vector, Vector, float]]:
    """Search for ``x, y`` in the set and ``beta`` with ``beta*x + (1-beta)*y`` outside it."""
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    rng = np.random.default_rng(seed)
    xs = cset.sample(rng, n_trials)
    ys = cset.sample(rng, n_trials)
    betas = rng.random(n_trials)
    for x, y, b in zip(xs, ys, betas):
        if not cset.contains(b * x + (1.0 - b) * y, tol):
            return x, y, float(b)
    return None
