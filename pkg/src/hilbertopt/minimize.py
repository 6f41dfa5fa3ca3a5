"""Minimizing sequences by (projected) gradient descent, and optimality certificates.

The solvers generate a minimizing sequence x_n with nonincreasing f(x_n)
using Armijo backtracking. Unconstrained runs stop on a small gradient;
constrained runs stop when x is (nearly) a fixed point of the projected
gradient map x -> P(x - step0 * grad f(x)). A run whose values fall below
a large negative floor is reported as unbounded.
"""

from __future__ import annotations

import csv
import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike

from .errors import InfeasiblePointError, NumericError, RangeError
from .functions import Objective
from .sets import ConvexSet, WholeSpace
from .space import Vector

MAX_STEP = 1e20
STATIONARY_TOL = 1e-6
DIRECTIONAL_TOL = -1e-8
VI_RESIDUAL_TOL = 1e-6
UNIQUENESS_TOL = 1e-5
FEASIBILITY_TOL = 1e-10


@dataclass(frozen=True)
class SolveOptions:
    step0: float = 1.0
    armijo_c: float = 1e-4
    backtrack: float = 0.5
    grad_tol: float = 1e-8
    fixedpoint_tol: float = 1e-8
    max_iters: int = 10000
    record_every: int = 1
    seed: int = 0
    unbounded_floor: float = -1e15
    max_backtracks: int = 60
    keep_iterates: bool = False

    def __post_init__(self):
        if not 0 < self.armijo_c < 1:
            raise ValueError("armijo_c must lie in (0, 1)")
        if not 0 < self.backtrack < 1:
            raise ValueError("backtrack must lie in (0, 1)")
        if self.step0 <= 0 or self.grad_tol <= 0 or self.fixedpoint_tol <= 0:
            raise ValueError("step0 and tolerances must be positive")
        if self.max_iters < 1 or self.record_every < 1 or self.max_backtracks < 1:
            raise ValueError("max_iters, record_every and max_backtracks must be >= 1")


class Termination(str, enum.Enum):
    GRAD_TOL = "GradTol"
    FIXED_POINT_TOL = "FixedPointTol"
    MAX_ITERS = "MaxIters"
    UNBOUNDED = "Unbounded"
    # line search could not make progress above rounding level
    STALLED = "Stalled"


@dataclass(eq=False)
class SolveReport:
    x_star: Vector
    f_star: float
    values: np.ndarray
    grad_norms: np.ndarray  # gradient norms, or fixed-point residuals when constrained
    record_iters: np.ndarray
    termination: Termination
    iterations: int
    iterates: list[Vector] = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.termination in (Termination.GRAD_TOL, Termination.FIXED_POINT_TOL)

    def trace_rows(self):
        return zip(self.record_iters.tolist(), self.values.tolist(), self.grad_norms.tolist())


def write_trace_csv(report: SolveReport, path) -> None:
    """Write the recorded sequence with header ``iter,f_value,residual``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["iter", "f_value", "residual"])
        for it, fv, res in report.trace_rows():
            w.writerow([it, repr(fv), repr(res)])


def _check_finite(x, fx, g):
    if not np.isfinite(fx) or not np.all(np.isfinite(g)):
        raise NumericError("non-finite value or gradient", iterate=x.copy())


def _descend(
    f: Objective,
    x: Vector,
    proj: Callable[[Vector], Vector],
    residual: Callable[[Vector, Vector], float],
    tol: float,
    ok: Termination,
    opts: SolveOptions,
) -> SolveReport:
    fx = f.value(x)
    g = f.grad(x)
    _check_finite(x, fx, g)

    values, resids, iters, iterates = [], [], [], []

    def record(k, res):
        values.append(fx)
        resids.append(res)
        iters.append(k)
        if opts.keep_iterates:
            iterates.append(x.copy())

    trial = opts.step0
    k = 0
    while True:
        res = residual(x, g)
        if res <= tol:
            term = ok
        elif fx < opts.unbounded_floor:
            term = Termination.UNBOUNDED
        elif k >= opts.max_iters:
            term = Termination.MAX_ITERS
        else:
            term = None
        if term is not None:
            if not iters or iters[-1] != k:
                record(k, res)
            break
        if k % opts.record_every == 0:
            record(k, res)

        s = trial
        accepted = False
        for _ in range(opts.max_backtracks):
            x_new = proj(x - s * g)
            try:
                # the increment is computed directly so the test stays meaningful
                # once f(x_new) and f(x) agree to machine precision
                delta = f.increment(x, x_new)
            except RangeError:
                delta = np.inf
            if delta <= opts.armijo_c * np.dot(g, x_new - x):
                accepted = not np.array_equal(x_new, x)
                break
            s *= opts.backtrack
        if not accepted:
            record(k, res)
            term = Termination.STALLED
            break

        x = x_new
        fx = f.value(x)
        g = f.grad(x)
        _check_finite(x, fx, g)
        k += 1
        trial = min(s / opts.backtrack, MAX_STEP)

    return SolveReport(
        x_star=x,
        f_star=float(fx),
        values=np.asarray(values),
        grad_norms=np.asarray(resids),
        record_iters=np.asarray(iters, dtype=int),
        termination=term,
        iterations=k,
        iterates=iterates,
    )


def solve_unconstrained(f: Objective, x0: ArrayLike, opts: SolveOptions = SolveOptions()) -> SolveReport:
    """Armijo gradient descent from ``x0``; stops once ||grad f|| <= grad_tol.

    Each line search starts one expansion above the previously accepted step
    (the first one at ``step0``), so runs on functions unbounded below reach
    the floor in a logarithmic number of iterations.
    """
    x = f.check(x0, "x0").copy()
    return _descend(
        f, x, lambda y: y, lambda x, g: float(np.linalg.norm(g)), opts.grad_tol, Termination.GRAD_TOL, opts
    )


def fixed_point_residual(W: ConvexSet, x: Vector, g: Vector, step: float = 1.0) -> float:
    return float(np.linalg.norm(x - W.project(x - step * g)))


def solve_projected(
    f: Objective, W: ConvexSet, x0: ArrayLike, opts: SolveOptions = SolveOptions()
) -> SolveReport:
    """Projected gradient descent x <- P_W(x - s grad f(x)) with Armijo on the projected step.

    Starts from P_W(x0), so every iterate is feasible.
    """
    x = W.project(f.check(x0, "x0"))
    return _descend(
        f,
        x,
        W.project,
        lambda x, g: fixed_point_residual(W, x, g, opts.step0),
        opts.fixedpoint_tol,
        Termination.FIXED_POINT_TOL,
        opts,
    )


class Optimality(str, enum.Enum):
    FIRST_ORDER_STATIONARY = "FirstOrderStationary"
    FEASIBLE_FIRST_ORDER = "FeasibleFirstOrder"
    REJECTED = "Rejected"


@dataclass(frozen=True)
class OptimalityCertificate:
    grad_norm: float
    min_sampled_directional: float
    vi_residual: float
    verdict: Optimality


def certify(
    f: Objective, W: ConvexSet, x: ArrayLike, n_samples: int = 1000, seed: int = 0
) -> OptimalityCertificate:
    """First-order certificate at a feasible ``x``.

    Slopes <grad f(x), y - x> toward sampled feasible y should be
    nonnegative, and x should be a fixed point of y -> P_W(y - grad f(y)).
    The projection residual carries the verdict; the sampled slopes
    corroborate it.
    """
    x = f.check(x)
    if not W.contains(x, FEASIBILITY_TOL):
        raise InfeasiblePointError("certify requires a feasible point")
    g = f.grad(x)
    grad_norm = float(np.linalg.norm(g))
    rng = np.random.default_rng(seed)
    n_in = n_samples - n_samples // 2
    ys = np.vstack([W.sample(rng, n_in), W.sample_boundary(rng, n_samples - n_in)])
    min_dir = float(np.min((ys - x) @ g))
    vi_res = fixed_point_residual(W, x, g)
    if grad_norm <= STATIONARY_TOL:
        verdict = Optimality.FIRST_ORDER_STATIONARY
    elif min_dir >= DIRECTIONAL_TOL and vi_res <= VI_RESIDUAL_TOL:
        verdict = Optimality.FEASIBLE_FIRST_ORDER
    else:
        verdict = Optimality.REJECTED
    return OptimalityCertificate(grad_norm, min_dir, vi_res, verdict)


@dataclass(eq=False)
class UniquenessReport:
    max_distance: float
    solutions: list[Vector]  # successful runs, in start order
    statuses: list[str]  # one per start: termination name or "error: ..."
    reports: list[Optional[SolveReport]]

    @property
    def passed(self) -> bool:
        return len(self.solutions) >= 2 and self.max_distance <= UNIQUENESS_TOL


def multistart_uniqueness(
    f: Objective,
    W: ConvexSet,
    n_starts: int = 10,
    opts: SolveOptions = SolveOptions(),
    seed: int = 0,
    max_workers: Optional[int] = None,
) -> UniquenessReport:
    """Solve from ``n_starts`` random feasible starts and measure the spread of the solutions.

    A spread above 1e-5 is expected for objectives that are not strictly
    convex; uniqueness is only meaningful under strict convexity.
    """
    if n_starts < 2:
        raise ValueError("n_starts must be >= 2")
    rng = np.random.default_rng(seed)
    starts = W.sample(rng, n_starts)
    if not isinstance(W, WholeSpace):
        starts = [W.project(s) for s in starts]

    def run(x0):
        try:
            return solve_projected(f, W, x0, opts), None
        except (NumericError, RangeError) as exc:
            return None, f"error: {exc}"

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(s) for s in starts]

    reports = [r for r, _ in results]
    statuses = [err if r is None else r.termination.value for r, err in results]
    sols = [r.x_star for r in reports if r is not None]
    dist = max((float(np.linalg.norm(a - b)) for a, b in combinations(sols, 2)), default=0.0)
    return UniquenessReport(dist, sols, statuses, reports)
