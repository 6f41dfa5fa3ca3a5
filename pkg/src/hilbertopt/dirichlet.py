"""Discrete Dirichlet problem -Lap u = f on the unit interval or square, u = 0 on the boundary.

The solution is computed as the minimizer of the discrete Dirichlet energy
J(u) = 1/2 <u, L u> - <f, u> with the generic gradient-descent solver, and
cross-checked against a conjugate-gradient solve of L u = f on an explicitly
assembled sparse matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
import scipy.sparse as sp
from numpy.typing import ArrayLike
from scipy.sparse.linalg import LinearOperator

from .errors import DimensionError, OracleError
from .functions import Quadratic
from .minimize import SolveOptions, SolveReport, solve_unconstrained
from .space import Vector, apply_laplacian, as_vector

ASSEMBLY_LIMIT = 10_000


@dataclass(frozen=True)
class Grid:
    dim: int
    n_interior: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("grid dimension must be 1 or 2")
        if self.n_interior < 1:
            raise ValueError("n_interior must be >= 1")

    @property
    def h(self) -> float:
        return 1.0 / (self.n_interior + 1)

    @property
    def size(self) -> int:
        return self.n_interior**self.dim

    def nodes(self) -> np.ndarray:
        """Interior node coordinates, shape ``(size, dim)``, row-major."""
        t = self.h * np.arange(1, self.n_interior + 1)
        if self.dim == 1:
            return t[:, None]
        X, Y = np.meshgrid(t, t, indexing="ij")
        return np.column_stack([X.ravel(), Y.ravel()])


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True, eq=False)
class Samples:
    values: Vector


@dataclass(frozen=True)
class Manufactured:
    name: str


RhsSpec = Union[Constant, Samples, Manufactured]

_pi = np.pi
# name -> (dim, exact solution, forcing -Lap u)
MANUFACTURED: dict[str, tuple[int, Callable, Callable]] = {
    "sin": (
        1,
        lambda p: np.sin(_pi * p[:, 0]),
        lambda p: _pi**2 * np.sin(_pi * p[:, 0]),
    ),
    "poly": (
        1,
        lambda p: 0.5 * p[:, 0] * (1.0 - p[:, 0]),
        lambda p: np.ones(p.shape[0]),
    ),
    "sinsin": (
        2,
        lambda p: np.sin(_pi * p[:, 0]) * np.sin(_pi * p[:, 1]),
        lambda p: 2.0 * _pi**2 * np.sin(_pi * p[:, 0]) * np.sin(_pi * p[:, 1]),
    ),
}


@dataclass(frozen=True, eq=False)
class DirichletProblem:
    grid: Grid
    rhs: Vector
    exact: Optional[Vector] = None

    @property
    def size(self) -> int:
        return self.grid.size

    def apply(self, u: Vector) -> Vector:
        return apply_laplacian(u, self.grid.dim, self.grid.n_interior)

    @property
    def operator(self) -> LinearOperator:
        """Matrix-free stencil operator."""
        n = self.size
        return LinearOperator((n, n), matvec=self.apply, matmat=self._apply_cols, dtype=np.float64)

    def _apply_cols(self, U):
        return np.column_stack([self.apply(U[:, j]) for j in range(U.shape[1])])

    def assemble(self) -> sp.csr_matrix:
        """Explicit sparse stencil matrix (only for up to 10^4 unknowns)."""
        if self.size > ASSEMBLY_LIMIT:
            raise ValueError(f"assembly limited to {ASSEMBLY_LIMIT} unknowns")
        m = self.grid.n_interior
        inv_h2 = 1.0 / self.grid.h**2
        T = sp.diags([-np.ones(m - 1), 2.0 * np.ones(m), -np.ones(m - 1)], [-1, 0, 1])
        if self.grid.dim == 1:
            L = T
        else:
            eye = sp.identity(m)
            L = sp.kron(T, eye) + sp.kron(eye, T)
        return (inv_h2 * L).tocsr()


def build_problem(dim: int, n_interior: int, rhs: RhsSpec) -> DirichletProblem:
    grid = Grid(dim, n_interior)
    exact = None
    if isinstance(rhs, Constant):
        f = np.full(grid.size, float(rhs.value))
    elif isinstance(rhs, Samples):
        f = as_vector(rhs.values, "rhs").copy()
        if f.shape[0] != grid.size:
            raise DimensionError(f"rhs has {f.shape[0]} samples, grid has {grid.size} unknowns")
    elif isinstance(rhs, Manufactured):
        if rhs.name not in MANUFACTURED:
            raise KeyError(f"unknown manufactured solution {rhs.name!r}")
        mdim, u_fn, f_fn = MANUFACTURED[rhs.name]
        if mdim != dim:
            raise DimensionError(f"manufactured solution {rhs.name!r} is {mdim}-d, grid is {dim}-d")
        p = grid.nodes()
        f, exact = f_fn(p), u_fn(p)
    else:
        raise TypeError(f"unsupported rhs spec {rhs!r}")
    for a in (f, exact):
        if a is not None:
            a.flags.writeable = False
    return DirichletProblem(grid, f, exact)


def energy(problem: DirichletProblem, u: ArrayLike) -> float:
    u = as_vector(u, "u")
    if u.shape[0] != problem.size:
        raise DimensionError(f"u has dimension {u.shape[0]}, problem has {problem.size}")
    return float(0.5 * np.dot(u, problem.apply(u)) - np.dot(problem.rhs, u))


def energy_objective(problem: DirichletProblem) -> Quadratic:
    return Quadratic(problem.operator, problem.rhs)


DIRICHLET_OPTIONS = SolveOptions(max_iters=500_000, record_every=100)


def solve_energy(
    problem: DirichletProblem, opts: SolveOptions = DIRICHLET_OPTIONS, u0: Optional[ArrayLike] = None
) -> SolveReport:
    """Minimize the discrete energy by gradient descent; a GradTol exit means ||L u - f|| <= grad_tol."""
    u0 = np.zeros(problem.size) if u0 is None else u0
    return solve_unconstrained(energy_objective(problem), u0, opts)


def conjugate_gradient(apply, b: Vector, tol: float, maxiter: int) -> tuple[Vector, int]:
    """Plain CG for SPD systems; stops when ||A x - b|| <= tol ||b||."""
    x = np.zeros_like(b)
    r = b.copy()
    p = r.copy()
    rr = np.dot(r, r)
    stop = tol * np.linalg.norm(b)
    if np.sqrt(rr) <= stop:
        return x, 0
    for k in range(1, maxiter + 1):
        Ap = apply(p)
        alpha = rr / np.dot(p, Ap)
        x += alpha * p
        r -= alpha * Ap
        rr_new = np.dot(r, r)
        if np.sqrt(rr_new) <= stop:
            # confirm against the true residual, not the recursively updated one
            if np.linalg.norm(apply(x) - b) <= stop:
                return x, k
            r = b - apply(x)
            rr_new = np.dot(r, r)
        p = r + (rr_new / rr) * p
        rr = rr_new
    raise OracleError(f"CG did not reach relative residual {tol} in {maxiter} iterations")


def cg_oracle(problem: DirichletProblem, tol: float = 1e-12) -> Vector:
    """Reference solve of L u = f on the assembled matrix (stencil above 10^4 unknowns)."""
    if tol <= 0:
        raise ValueError("tol must be > 0")
    if problem.size <= ASSEMBLY_LIMIT:
        L = problem.assemble()
        apply = L.dot
    else:
        apply = problem.apply
    u, _ = conjugate_gradient(apply, np.array(problem.rhs), tol, 10 * problem.size)
    return u


@dataclass(frozen=True, eq=False)
class Comparison:
    gap_inf: float
    energy_descent: float
    energy_cg: float
    iterations: int
    termination: str
    u_descent: Vector
    u_cg: Vector
    node_error: Optional[float] = None  # max |u_descent - u_exact| for manufactured problems


def node_error(problem: DirichletProblem, u: Vector) -> float:
    if problem.exact is None:
        raise ValueError("problem has no exact solution")
    return float(np.max(np.abs(u - problem.exact)))


def compare(
    problem: DirichletProblem, opts: SolveOptions = DIRICHLET_OPTIONS, cg_tol: float = 1e-12
) -> Comparison:
    report = solve_energy(problem, opts)
    u_cg = cg_oracle(problem, cg_tol)
    u = report.x_star
    return Comparison(
        gap_inf=float(np.max(np.abs(u - u_cg))),
        energy_descent=energy(problem, u),
        energy_cg=energy(problem, u_cg),
        iterations=report.iterations,
        termination=report.termination.value,
        u_descent=u,
        u_cg=u_cg,
        node_error=None if problem.exact is None else node_error(problem, u),
    )
