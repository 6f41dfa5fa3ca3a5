"""Coordinate Hilbert spaces: vectors, inner products, norms, weak convergence.

Elements of a separable Hilbert space are modelled as float64 coordinate
arrays in R^n together with an inner product. Three inner products are
supported: the standard dot product, a positively weighted diagonal form,
and the energy form <u, L v> of the zero-boundary finite-difference
Laplacian on the unit interval or square.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DimensionError, NonFiniteError

Vector = NDArray[np.float64]

PAIRING_TOL = 1e-10
SEPARATION_THRESHOLD = 1e-3
# fraction of the peak value below which a non-vanishing sequence counts as decayed
DECAY_RATIO = 0.05


def as_vector(x: ArrayLike, name: str = "x") -> Vector:
    """Validate ``x`` as a finite 1-d float64 array with at least one entry."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < 1:
        raise DimensionError(f"{name} must have dimension >= 1")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} has non-finite entries")
    return arr


def check_same_dim(*vectors: Vector, expected: int | None = None) -> int:
    dims = {v.shape[0] for v in vectors}
    if expected is not None:
        dims.add(expected)
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def apply_laplacian(u: Vector, dim: int, n_interior: int) -> Vector:
    """Apply the negative finite-difference Laplacian with zero boundary values.

    ``u`` holds the interior nodes of the uniform grid with spacing
    ``h = 1/(n_interior+1)``, row-major in 2-d. Uses the 3-point (1-d) or
    5-point (2-d) stencil scaled by ``1/h**2``.
    """
    h2 = (n_interior + 1.0) ** 2
    if dim == 1:
        out = 2.0 * u
        out[1:] -= u[:-1]
        out[:-1] -= u[1:]
        return out * h2
    if dim == 2:
        g = u.reshape(n_interior, n_interior)
        out = 4.0 * g
        out[1:, :] -= g[:-1, :]
        out[:-1, :] -= g[1:, :]
        out[:, 1:] -= g[:, :-1]
        out[:, :-1] -= g[:, 1:]
        return (out * h2).reshape(-1)
    raise ValueError(f"grid dimension must be 1 or 2, got {dim}")


class InnerProduct:
    """Base class for the bilinear forms on R^n."""

    #: expected vector dimension, or None when any dimension is accepted
    dim: int | None = None

    def _form(self, u: Vector, v: Vector) -> float:
        raise NotImplementedError

    def __call__(self, u: ArrayLike, v: ArrayLike) -> float:
        u = as_vector(u, "u")
        v = as_vector(v, "v")
        check_same_dim(u, v, expected=self.dim)
        return float(self._form(u, v))


@dataclass(frozen=True)
class Standard(InnerProduct):
    def _form(self, u, v):
        return np.dot(u, v)


@dataclass(frozen=True, eq=False)
class DiagonalWeighted(InnerProduct):
    weights: Vector

    def __post_init__(self):
        w = as_vector(self.weights, "weights")
        if np.any(w <= 0):
            raise ValueError("DiagonalWeighted weights must be strictly positive")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return self.weights.shape[0]

    def _form(self, u, v):
        # u * v first so that the form is exactly symmetric in floating point
        return np.dot(self.weights, u * v)


@dataclass(frozen=True)
class LaplacianEnergy(InnerProduct):
    """Energy form ``<u, L v>`` on the interior nodes of a zero-boundary grid."""

    grid_dim: int
    n_interior: int

    def __post_init__(self):
        if self.grid_dim not in (1, 2):
            raise ValueError("grid_dim must be 1 or 2")
        if self.n_interior < 1:
            raise ValueError("n_interior must be >= 1")

    @property
    def dim(self) -> int:
        return self.n_interior**self.grid_dim

    def _form(self, u, v):
        return np.dot(u, apply_laplacian(v, self.grid_dim, self.n_interior))


STANDARD = Standard()


def inner(u: ArrayLike, v: ArrayLike, ip: InnerProduct = STANDARD) -> float:
    return ip(u, v)


def norm(u: ArrayLike, ip: InnerProduct = STANDARD) -> float:
    return float(np.sqrt(max(ip(u, u), 0.0)))


class Verdict(str, enum.Enum):
    WEAK_ONLY = "WeakOnly"
    STRONG = "Strong"
    NEITHER = "Neither"


@dataclass(frozen=True, eq=False)
class WeakConvergenceReport:
    """Per-step pairings <x_n - x, u_j> and norm gaps ||x_n - x||."""

    pairings: NDArray[np.float64]  # shape (steps, n_tests)
    norms: NDArray[np.float64]  # shape (steps,)
    verdict: Verdict
    pairing_tol: float = PAIRING_TOL
    separation: float = SEPARATION_THRESHOLD

    @property
    def steps(self) -> int:
        return self.norms.shape[0]


def _decayed(values: NDArray[np.float64], abs_tol: float) -> bool:
    """Final magnitude is below ``abs_tol`` or a small fraction of its peak."""
    mags = np.abs(values)
    final = mags[-1]
    if final <= abs_tol:
        return True
    peak = mags.max()
    return len(mags) > 1 and final <= DECAY_RATIO * peak


def weak_probe(
    sequence: Sequence[ArrayLike],
    limit: ArrayLike,
    tests: Sequence[ArrayLike],
    ip: InnerProduct = STANDARD,
    pairing_tol: float = PAIRING_TOL,
    separation: float = SEPARATION_THRESHOLD,
) -> WeakConvergenceReport:
    """Classify a finite sequence as weakly-only, strongly, or not convergent to ``limit``.

    WeakOnly requires every final pairing to be below ``pairing_tol`` while the
    final norm gap stays at or above ``separation`` and has not decayed.
    Strong requires the norm gap to decay (below ``pairing_tol`` or to a
    small fraction of its peak). Everything else is Neither.
    """
    if len(sequence) == 0:
        raise ValueError("sequence must be non-empty")
    limit = as_vector(limit, "limit")
    tests = [as_vector(u, "test") for u in tests]
    n_steps = len(sequence)
    pairings = np.empty((n_steps, len(tests)))
    norms = np.empty(n_steps)
    for k, xk in enumerate(sequence):
        xk = as_vector(xk, "x_n")
        check_same_dim(xk, limit, *tests)
        diff = xk - limit
        for j, u in enumerate(tests):
            pairings[k, j] = ip(diff, u)
        norms[k] = norm(diff, ip)

    strong = _decayed(norms, pairing_tol)
    pairings_vanish = bool(np.all(np.abs(pairings[-1]) <= pairing_tol))
    if strong:
        verdict = Verdict.STRONG
    elif pairings_vanish and norms[-1] >= separation:
        verdict = Verdict.WEAK_ONLY
    else:
        verdict = Verdict.NEITHER
    pairings.flags.writeable = False
    norms.flags.writeable = False
    return WeakConvergenceReport(pairings, norms, verdict, pairing_tol, separation)


def basis_sequence(dim: int, start: int = 1, stop: int | None = None):
    """Yield standard basis vectors e_start, ..., e_stop of R^dim (1-based)."""
    stop = dim if stop is None else stop
    for n in range(start, stop + 1):
        e = np.zeros(dim)
        e[n - 1] = 1.0
        yield e

