"""Objective functionals and sampled checks of their convexity properties.

All built-in objectives are smooth, hence continuous and in particular lower
semicontinuous; that property is documented here rather than tested, since
no finite procedure decides it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.sparse
from numpy.typing import ArrayLike

from .errors import DimensionError, RangeError
from .sets import ConvexSet
from .space import Vector, as_vector

COSH_LIMIT = 700.0
EIG_TOL = 1e-8
POWER_ITERS = 200
CONVEX_TOL = 1e-12
DEFAULT_RADII = (10.0, 100.0, 1000.0)


class Convexity(str, enum.Enum):
    CONVEX = "Convex"
    STRICTLY_CONVEX = "StrictlyConvex"
    NONCONVEX_UNKNOWN = "Nonconvex-unknown"


class Objective:
    """A real-valued functional on R^n with an analytic gradient.

    Subclasses implement ``value`` and ``grad`` on validated float64 arrays.
    ``modulus`` is a lower bound on the curvature used by the strictness
    check (zero means no strict-convexity guarantee).
    """

    declared_class: Convexity = Convexity.NONCONVEX_UNKNOWN
    modulus: float = 0.0

    @property
    def dim(self) -> Optional[int]:
        return None

    def value(self, x: Vector) -> float:
        raise NotImplementedError

    def grad(self, x: Vector) -> Vector:
        raise NotImplementedError

    def values(self, xs: np.ndarray) -> np.ndarray:
        """Evaluate row-wise on a ``(k, n)`` batch."""
        return np.array([self.value(x) for x in xs])

    def increment(self, x: Vector, x_new: Vector) -> float:
        """f(x_new) - f(x); forms override this with a cancellation-free expression."""
        return self.value(x_new) - self.value(x)

    def flat_direction(self) -> Optional[Vector]:
        """A direction of zero curvature, when the form knows one."""
        return None

    def check(self, x: ArrayLike, name: str = "x") -> Vector:
        x = as_vector(x, name)
        if self.dim is not None and x.shape[0] != self.dim:
            raise DimensionError(f"{name} has dimension {x.shape[0]}, objective expects {self.dim}")
        return x


def _matvec(A, x):
    return np.asarray(A @ x, dtype=np.float64)


def _power_rayleigh(apply, n: int, iters: int, rng: np.random.Generator) -> tuple[float, Vector]:
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    for _ in range(iters):
        w = apply(v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0, v
        v = w / nw
    return float(np.dot(v, apply(v))), v


def eigen_bounds(A, n: int, iters: int = POWER_ITERS) -> tuple[float, float, Vector]:
    """Estimate (dominant |eigenvalue|, smallest eigenvalue, its eigenvector) of symmetric A.

    Power iteration on A gives the dominant magnitude ``s``; a second run on
    ``s*I - A`` (positive semidefinite) gives ``s - lambda_min``.
    """
    rng = np.random.default_rng(0)
    dom, _ = _power_rayleigh(lambda v: _matvec(A, v), n, iters, rng)
    s = abs(dom)
    top, v = _power_rayleigh(lambda v: s * v - _matvec(A, v), n, iters, rng)
    return s, s - top, v


def _is_symmetric(A, n: int) -> bool:
    if isinstance(A, np.ndarray):
        scale = max(1.0, float(np.max(np.abs(A))))
        return float(np.max(np.abs(A - A.T))) <= 1e-12 * scale
    if scipy.sparse.issparse(A):
        diff = abs(A - A.T)
        scale = max(1.0, float(abs(A).max()))
        return (diff.max() if diff.nnz else 0.0) <= 1e-12 * scale
    rng = np.random.default_rng(1)
    for _ in range(3):
        u, v = rng.standard_normal(n), rng.standard_normal(n)
        a, b = np.dot(u, _matvec(A, v)), np.dot(v, _matvec(A, u))
        if abs(a - b) > 1e-12 * max(1.0, abs(a), abs(b)):
            return False
    return True


@dataclass(frozen=True, eq=False)
class Quadratic(Objective):
    """f(x) = 1/2 <x, A x> - <b, x> with A symmetric.

    ``A`` may be a dense array, a scipy sparse matrix, or any operator
    supporting ``A @ x`` (e.g. a ``LinearOperator``).
    """

    A: object
    b: Vector
    eig_min: float = field(init=False)
    eig_dominant: float = field(init=False)
    declared_class: Convexity = field(init=False)

    def __post_init__(self):
        b = as_vector(self.b, "b")
        n = b.shape[0]
        A = self.A
        if isinstance(A, (list, tuple, np.ndarray)):
            A = np.array(A, dtype=np.float64)
        if getattr(A, "shape", (n, n)) != (n, n):
            raise DimensionError(f"A has shape {A.shape}, b has dimension {n}")
        if isinstance(A, np.ndarray):
            if not np.all(np.isfinite(A)):
                raise ValueError("A has non-finite entries")
            A.flags.writeable = False
        if not _is_symmetric(A, n):
            raise ValueError("A must be symmetric")
        s, lam_min, v = eigen_bounds(A, n)
        if lam_min > EIG_TOL:
            cls = Convexity.STRICTLY_CONVEX
        elif lam_min >= -EIG_TOL:
            cls = Convexity.CONVEX
        else:
            cls = Convexity.NONCONVEX_UNKNOWN
        b = b.copy()
        b.flags.writeable = False
        for k, val in (("A", A), ("b", b), ("eig_min", lam_min), ("eig_dominant", s),
                       ("declared_class", cls), ("_min_vec", v)):
            object.__setattr__(self, k, val)

    @property
    def dim(self):
        return self.b.shape[0]

    @property
    def modulus(self):
        return max(self.eig_min, 0.0)

    def value(self, x):
        return float(0.5 * np.dot(x, _matvec(self.A, x)) - np.dot(self.b, x))

    def values(self, xs):
        Ax = np.asarray(self.A @ xs.T).T
        return 0.5 * np.einsum("ij,ij->i", xs, Ax) - xs @ self.b

    def grad(self, x):
        return _matvec(self.A, x) - self.b

    def increment(self, x, x_new):
        d = x_new - x
        return float(np.dot(d, _matvec(self.A, x + 0.5 * d) - self.b))

    def flat_direction(self):
        return self._min_vec if self.eig_min <= EIG_TOL else None


@dataclass(frozen=True)
class CoshSum(Objective):
    """f(x) = sum_i (cosh(x_i) - 1), strictly convex with curvature >= 1."""

    declared_class: Convexity = field(default=Convexity.STRICTLY_CONVEX, init=False)
    modulus: float = field(default=1.0, init=False)

    @staticmethod
    def _guard(x):
        if np.any(np.abs(x) > COSH_LIMIT):
            raise RangeError(f"CoshSum argument exceeds |x_i| <= {COSH_LIMIT}")

    def value(self, x):
        self._guard(x)
        # cosh(t) - 1 = 2 sinh(t/2)^2 avoids cancellation near 0
        return float(2.0 * np.sum(np.sinh(0.5 * x) ** 2))

    def values(self, xs):
        self._guard(xs)
        return 2.0 * np.sum(np.sinh(0.5 * xs) ** 2, axis=1)

    def grad(self, x):
        self._guard(x)
        return np.sinh(x)

    def increment(self, x, x_new):
        self._guard(x_new)
        # cosh(a) - cosh(b) = 2 sinh((a+b)/2) sinh((a-b)/2)
        return float(2.0 * np.sum(np.sinh(0.5 * (x_new + x)) * np.sinh(0.5 * (x_new - x))))


@dataclass(frozen=True, eq=False)
class Linear(Objective):
    c: Vector
    declared_class: Convexity = field(default=Convexity.CONVEX, init=False)

    def __post_init__(self):
        c = as_vector(self.c, "c").copy()
        c.flags.writeable = False
        object.__setattr__(self, "c", c)

    @property
    def dim(self):
        return self.c.shape[0]

    def value(self, x):
        return float(np.dot(self.c, x))

    def values(self, xs):
        return xs @ self.c

    def grad(self, x):
        return self.c.copy()

    def increment(self, x, x_new):
        return float(np.dot(self.c, x_new - x))


@dataclass(frozen=True, eq=False)
class NormSquared(Objective):
    """f(x) = 1/2 ||x - center||^2."""

    center: Vector
    declared_class: Convexity = field(default=Convexity.STRICTLY_CONVEX, init=False)
    modulus: float = field(default=1.0, init=False)

    def __post_init__(self):
        c = as_vector(self.center, "center").copy()
        c.flags.writeable = False
        object.__setattr__(self, "center", c)

    @property
    def dim(self):
        return self.center.shape[0]

    def value(self, x):
        d = x - self.center
        return float(0.5 * np.dot(d, d))

    def values(self, xs):
        d = xs - self.center
        return 0.5 * np.einsum("ij,ij->i", d, d)

    def grad(self, x):
        return x - self.center

    def increment(self, x, x_new):
        d = x_new - x
        return float(np.dot(d, x - self.center + 0.5 * d))


def evaluate(f: Objective, x: ArrayLike) -> float:
    val = f.value(f.check(x))
    if not np.isfinite(val):
        raise RangeError("objective value is not finite")
    return val


def gradient(f: Objective, x: ArrayLike) -> Vector:
    return f.grad(f.check(x))


class DerivativeMode(str, enum.Enum):
    ANALYTIC = "Analytic"
    ONE_SIDED_LIMIT = "OneSidedLimit"


@dataclass(frozen=True, eq=False)
class DirectionalDerivative:
    value: float
    converged: bool = True
    quotients: Optional[np.ndarray] = None
    steps: Optional[np.ndarray] = None


ONE_SIDED_STEPS = 10.0 ** -np.arange(1, 9)
SPREAD_TOL = 1e-4


def directional_derivative(
    f: Objective, x: ArrayLike, d: ArrayLike, mode: DerivativeMode | str = DerivativeMode.ANALYTIC
) -> DirectionalDerivative:
    """Directional derivative f'(x, d).

    ``OneSidedLimit`` forms forward quotients (f(x + t d) - f(x)) / t on
    t = 1e-1, ..., 1e-8, removes their O(t) error by Richardson extrapolation
    between neighbouring steps, and keeps the extrapolant whose neighbour it
    agrees with best. ``converged`` is False when the last three raw
    quotients spread by more than 1e-4 relative.
    """
    mode = DerivativeMode(mode)
    x = f.check(x)
    d = f.check(d, "d")
    if not np.any(d):
        raise ValueError("direction must be nonzero")
    if mode is DerivativeMode.ANALYTIC:
        return DirectionalDerivative(float(np.dot(gradient(f, x), d)))

    ts = ONE_SIDED_STEPS
    fx = evaluate(f, x)
    q = np.array([(evaluate(f, x + t * d) - fx) / t for t in ts])
    ratio = ts[0] / ts[1]
    rich = (ratio * q[1:] - q[:-1]) / (ratio - 1.0)
    k = int(np.argmin(np.abs(np.diff(rich))))
    value = float(rich[k])
    tail = q[-3:]
    spread = (tail.max() - tail.min()) / max(1.0, np.abs(tail).max())
    return DirectionalDerivative(value, bool(spread <= SPREAD_TOL), q, ts)


def central_difference_gradient(f: Objective, x: ArrayLike, h: float = 1e-6) -> Vector:
    """Central finite-difference gradient, independent of ``f.grad``."""
    x = f.check(x)
    g = np.empty_like(x)
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (evaluate(f, x + e) - evaluate(f, x - e)) / (2.0 * h)
    return g


@dataclass(frozen=True, eq=False)
class ConvexityProbe:
    """Largest sampled violation and the triple (x, y, beta) attaining it."""

    max_violation: float
    witness: Optional[tuple[Vector, Vector, float]]
    n_trials: int

    @property
    def detected(self) -> bool:
        return self.max_violation > CONVEX_TOL


def _pairs(domain: ConvexSet, n: int, rng) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    xs = domain.sample(rng, n)
    ys = domain.sample(rng, n)
    return xs, ys, rng.random(n)


def _check_domain(f: Objective, domain: ConvexSet):
    if f.dim is not None and f.dim != domain.dim:
        raise DimensionError(f"objective dimension {f.dim} != domain dimension {domain.dim}")


def jensen_check(f: Objective, domain: ConvexSet, n_trials: int = 1000, seed: int = 0) -> ConvexityProbe:
    """Max over sampled (x, y, beta) of f(beta x + (1-beta) y) - beta f(x) - (1-beta) f(y)."""
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    _check_domain(f, domain)
    rng = np.random.default_rng(seed)
    xs, ys, b = _pairs(domain, n_trials, rng)
    mix = b[:, None] * xs + (1.0 - b)[:, None] * ys
    viol = f.values(mix) - b * f.values(xs) - (1.0 - b) * f.values(ys)
    k = int(np.argmax(viol))
    return ConvexityProbe(float(viol[k]), (xs[k], ys[k], float(b[k])), n_trials)


def epigraph_check(f: Objective, domain: ConvexSet, n_trials: int = 1000, seed: int = 0) -> ConvexityProbe:
    """Convex combinations of epigraph points (x, f(x) + s), s in [0, 1].

    Returns the max of f(x_mix) - r_mix; positive means the combination left
    the epigraph. The witness is (x, y, beta) of the worst trial.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    _check_domain(f, domain)
    rng = np.random.default_rng(seed)
    xs, ys, b = _pairs(domain, n_trials, rng)
    rx = f.values(xs) + rng.random(n_trials)
    ry = f.values(ys) + rng.random(n_trials)
    mix = b[:, None] * xs + (1.0 - b)[:, None] * ys
    viol = f.values(mix) - (b * rx + (1.0 - b) * ry)
    k = int(np.argmax(viol))
    return ConvexityProbe(float(viol[k]), (xs[k], ys[k], float(b[k])), n_trials)


@dataclass(frozen=True, eq=False)
class StrictnessResult:
    passed: bool
    witness: Optional[tuple[Vector, Vector, float]]
    slack: float
    required: float
    modulus: float


MIN_SEPARATION = 1e-3


def strictness_check(
    f: Objective, domain: ConvexSet, n_trials: int = 1000, margin: float = 0.5, seed: int = 0
) -> StrictnessResult:
    """Require Jensen slack >= margin * beta(1-beta) ||x-y||^2 * modulus on sampled pairs.

    Pairs are at least 1e-3 apart and beta is drawn from [0.25, 0.75]. A form
    whose modulus is not positive fails outright; its witness is a pair along
    the form's flat direction when known, else the first sampled pair.
    """
    if margin <= 0:
        raise ValueError("margin must be > 0")
    _check_domain(f, domain)
    rng = np.random.default_rng(seed)
    xs, ys = domain.sample(rng, 2 * n_trials), domain.sample(rng, 2 * n_trials)
    keep = np.linalg.norm(xs - ys, axis=1) >= MIN_SEPARATION
    xs, ys = xs[keep][:n_trials], ys[keep][:n_trials]
    b = rng.uniform(0.25, 0.75, size=xs.shape[0])
    kappa = float(f.modulus)

    if kappa <= EIG_TOL:
        flat = f.flat_direction()
        x, y, beta = xs[0], ys[0], float(b[0])
        if flat is not None:
            y = domain.project(x + 0.5 * flat)
            if np.linalg.norm(y - x) < MIN_SEPARATION:
                y = domain.project(x - 0.5 * flat)
        slack = beta * f.value(x) + (1 - beta) * f.value(y) - f.value(beta * x + (1 - beta) * y)
        return StrictnessResult(False, (x, y, beta), float(slack), 0.0, kappa)

    fx, fy = f.values(xs), f.values(ys)
    mix = b[:, None] * xs + (1.0 - b)[:, None] * ys
    slack = b * fx + (1.0 - b) * fy - f.values(mix)
    required = margin * b * (1.0 - b) * np.sum((xs - ys) ** 2, axis=1) * kappa
    rounding = CONVEX_TOL * np.maximum(1.0, np.maximum(np.abs(fx), np.abs(fy)))
    ok = slack >= required * (1.0 - 1e-9) - rounding
    k = int(np.argmin(ok)) if not ok.all() else int(np.argmin(slack - required))
    witness = (xs[k], ys[k], float(b[k]))
    return StrictnessResult(bool(ok.all()), witness, float(slack[k]), float(required[k]), kappa)


class Coercivity(str, enum.Enum):
    COERCIVE = "Coercive"
    NOT_COERCIVE = "NotCoercive"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True, eq=False)
class CoercivityReport:
    verdict: Coercivity
    witness: Optional[Vector] = None
    growth: Optional[np.ndarray] = None  # shape (directions, len(radii) - 1)
    note: str = ""


def coercivity_probe(
    f: Objective,
    n_directions: int = 64,
    radii: Sequence[float] = DEFAULT_RADII,
    growth_floor: float = 1.0,
    seed: int = 0,
    dim: Optional[int] = None,
) -> CoercivityReport:
    """Sample f(r d) along unit directions d for increasing radii r.

    Directions are the signed coordinate axes plus ``n_directions`` random
    unit vectors. NotCoercive reports the direction with the largest drop
    between the last two radii; Coercive needs every direction to grow by at
    least ``growth_floor`` between consecutive radii.
    """
    radii = np.asarray(radii, dtype=np.float64)
    if radii.ndim != 1 or radii.size < 3 or np.any(np.diff(radii) <= 0):
        raise ValueError("radii must be strictly increasing with at least 3 values")
    if n_directions < 1:
        raise ValueError("n_directions must be >= 1")
    n = f.dim if f.dim is not None else dim
    if n is None:
        raise ValueError("dimension required for objectives without a fixed dimension")

    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n_directions, n))
    eye = np.eye(n)
    dirs = np.vstack([eye, -eye, g / np.linalg.norm(g, axis=1, keepdims=True)])
    vals = np.empty((dirs.shape[0], radii.size))
    try:
        with np.errstate(over="ignore"):
            for j, r in enumerate(radii):
                vals[:, j] = [f.value(f.check(r * d)) for d in dirs]
    except RangeError as exc:
        return CoercivityReport(Coercivity.INCONCLUSIVE, note=f"evaluation out of range: {exc}")

    with np.errstate(invalid="ignore"):
        growth = np.diff(vals, axis=1)
    both_inf = np.isposinf(vals[:, 1:]) & np.isposinf(vals[:, :-1])
    growth[both_inf] = np.inf
    if np.isnan(growth).any():
        return CoercivityReport(Coercivity.INCONCLUSIVE, growth=growth, note="non-finite values")
    last = growth[:, -1]
    if np.any(last <= 0):
        k = int(np.argmin(last))
        return CoercivityReport(Coercivity.NOT_COERCIVE, dirs[k], growth)
    if np.all(growth >= growth_floor):
        return CoercivityReport(Coercivity.COERCIVE, growth=growth)
    return CoercivityReport(Coercivity.INCONCLUSIVE, growth=growth, note="growth below floor")
