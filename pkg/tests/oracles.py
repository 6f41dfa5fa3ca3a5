"""Independent reference computations used by the tests.

Nothing here calls the library's projection, gradient or solver code; the
test-only objectives and sets at the bottom plug into the library's base
classes to exercise its detectors.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from hilbertopt.functions import Objective
from hilbertopt.sets import ConvexSet

PITCH = 1e-3


def _lattice(lo, hi, pitch=PITCH):
    axes = [np.arange(np.floor(a / pitch), np.ceil(b / pitch) + 1) * pitch for a, b in zip(lo, hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def grid_best_distance(shape, x, radius, pitch=PITCH):
    """Smallest ||y - x|| over lattice points y of the set within ``radius`` of ``x``.

    ``shape`` is a dict describing the set in closed form; membership is
    evaluated here, not through the library. Returns inf if no lattice point
    of the set lies in the window.
    """
    kind = shape["kind"]
    x = np.asarray(x, dtype=float)
    if kind == "hyperplane":
        # parametrize the line {base + s * t} in 2-d by arc length s
        nrm = np.asarray(shape["normal"], float)
        t = np.array([-nrm[1], nrm[0]]) / np.linalg.norm(nrm)
        base = nrm * shape["offset"] / nrm.dot(nrm)
        s0 = t.dot(x - base)
        s = np.arange(np.floor((s0 - radius) / pitch), np.ceil((s0 + radius) / pitch) + 1) * pitch
        pts = base + s[:, None] * t
    elif kind == "simplex3":
        a = np.arange(0, 1 + pitch / 2, pitch)
        A, B = np.meshgrid(a, a, indexing="ij")
        m = A + B <= 1 + 1e-12
        pts = np.column_stack([A[m], B[m], 1.0 - A[m] - B[m]])
    else:
        pts = _lattice(x - radius, x + radius, pitch)
        if kind == "box":
            m = np.all((pts >= shape["lo"]) & (pts <= shape["hi"]), axis=1)
        elif kind == "ball":
            m = np.linalg.norm(pts - shape["center"], axis=1) <= shape["radius"]
        elif kind == "halfspace":
            m = pts @ np.asarray(shape["normal"], float) <= shape["offset"]
        else:
            raise ValueError(kind)
        pts = pts[m]
    if len(pts) == 0:
        return np.inf
    return float(np.min(np.linalg.norm(pts - x, axis=1)))


def _row_interval(shape, y):
    """The set's slice {u : (u, y) in set} as a closed interval, or None if empty."""
    kind = shape["kind"]
    if kind == "box":
        lo, hi = shape["lo"], shape["hi"]
        return (lo[0], hi[0]) if lo[1] <= y <= hi[1] else None
    if kind == "ball":
        c, r = shape["center"], shape["radius"]
        h2 = r * r - (y - c[1]) ** 2
        return None if h2 < 0 else (c[0] - np.sqrt(h2), c[0] + np.sqrt(h2))
    if kind == "halfspace":
        (a, b), off = shape["normal"], shape["offset"]
        if a == 0:
            return (-np.inf, np.inf) if b * y <= off else None
        t = (off - b * y) / a
        return (-np.inf, t) if a > 0 else (t, np.inf)
    raise ValueError(kind)


def lattice_min_distance_2d(shape, x, radius, pitch=PITCH):
    """Exact minimum of ||y - x|| over lattice points y (spacing ``pitch``) of a 2-d set within ``radius``.

    Scans lattice rows; on each row the set is an interval in closed form, so the
    nearest lattice point of the row is found by clamping. Equivalent to the brute
    force ``grid_best_distance`` at a fraction of the cost.
    """
    x = np.asarray(x, float)
    best = np.inf
    for j in range(int(np.floor((x[1] - radius) / pitch)), int(np.ceil((x[1] + radius) / pitch)) + 1):
        y = j * pitch
        iv = _row_interval(shape, y)
        if iv is None:
            continue
        # same square window as the brute-force search
        lo = max(np.ceil(iv[0] / pitch), np.floor((x[0] - radius) / pitch))
        hi = min(np.floor(iv[1] / pitch), np.ceil((x[0] + radius) / pitch))
        if lo > hi:
            continue
        i = min(max(np.round(x[0] / pitch), lo), hi)
        best = min(best, float(np.hypot(i * pitch - x[0], y - x[1])))
    return best


def simplex_projection_kkt(x):
    """Projection onto the simplex via the KKT condition sum(max(x - tau, 0)) = 1 solved by bisection."""
    x = np.asarray(x, float)
    lo, hi = x.min() - 1.0, x.max()
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.maximum(x - mid, 0).sum() > 1:
            lo = mid
        else:
            hi = mid
    return np.maximum(x - 0.5 * (lo + hi), 0.0)


def central_diff(fun, x, h=1e-6):
    x = np.asarray(x, float)
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (fun(x + e) - fun(x - e)) / (2 * h)
    return g


def tridiagonal_solve(diag, off, rhs):
    n = len(rhs)
    ab = np.zeros((3, n))
    ab[0, 1:] = off
    ab[1] = diag
    ab[2, :-1] = off
    return scipy.linalg.solve_banded((1, 1), ab, rhs)


def random_spd(rng, n, lo=0.5, hi=10.0):
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    A = q @ np.diag(rng.uniform(lo, hi, n)) @ q.T
    return 0.5 * (A + A.T)


# ---- test-only shapes and forms


class NegNormSquared(Objective):
    """f(x) = -||x||^2, concave."""

    def value(self, x):
        return -float(np.dot(x, x))

    def values(self, xs):
        return -np.einsum("ij,ij->i", xs, xs)

    def grad(self, x):
        return -2.0 * x


class DoubleWell(Objective):
    """f(x) = sum (x_i^2 - 1)^2, nonconvex on [-1, 1]^n."""

    def value(self, x):
        return float(np.sum((x * x - 1.0) ** 2))

    def values(self, xs):
        return np.sum((xs * xs - 1.0) ** 2, axis=1)

    def grad(self, x):
        return 4.0 * x * (x * x - 1.0)


class ExpFirst(Objective):
    """f(x) = exp(x_1), bounded below but not coercive."""

    def __init__(self, n):
        self.n = n

    @property
    def dim(self):
        return self.n

    def value(self, x):
        return float(np.exp(x[0]))

    def grad(self, x):
        g = np.zeros_like(x)
        g[0] = np.exp(x[0])
        return g


@dataclass(frozen=True, eq=False)
class TwoBoxes(ConvexSet):
    """[0,1]^2 union [2,3]^2 -- not convex."""

    @property
    def dim(self):
        return 2

    def contains(self, x, tol=0.0):
        a = np.all((x >= -tol) & (x <= 1 + tol))
        b = np.all((x >= 2 - tol) & (x <= 3 + tol))
        return bool(a or b)

    def sample(self, rng, n):
        pts = rng.random((n, 2))
        shift = rng.random(n) < 0.5
        pts[shift] += 2.0
        return pts
