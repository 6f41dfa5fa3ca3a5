import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hilbertopt.dirichlet import (
    Constant,
    Grid,
    Manufactured,
    Samples,
    build_problem,
    cg_oracle,
    compare,
    conjugate_gradient,
    energy,
    energy_objective,
    node_error,
    solve_energy,
)
from hilbertopt.errors import DimensionError, OracleError
from hilbertopt.minimize import SolveOptions, Termination, multistart_uniqueness
from hilbertopt.sets import Ball

from oracles import tridiagonal_solve

N3 = np.array([0.09375, 0.125, 0.09375])


def test_grid_invariants():
    g = Grid(2, 4)
    assert g.h == 0.2 and g.size == 16
    np.testing.assert_allclose(g.nodes()[:2], [[0.2, 0.2], [0.2, 0.4]])
    for bad in ((3, 2), (1, 0)):
        with pytest.raises(ValueError):
            Grid(*bad)


def test_operator_examples():
    L = build_problem(1, 3, Constant(1)).assemble().toarray()
    h2 = 0.25**2
    np.testing.assert_array_equal(np.diag(L), np.full(3, 2 / h2))
    np.testing.assert_array_equal(np.diag(L, 1), np.full(2, -1 / h2))
    np.testing.assert_array_equal(L, L.T)

    p = build_problem(2, 2, Constant(1))
    L2 = p.assemble().toarray()
    assert L2.shape == (4, 4)
    np.testing.assert_array_equal(np.diag(L2), np.full(4, 4 / (1 / 3) ** 2))
    # the matrix-free stencil and the assembled matrix agree column by column
    np.testing.assert_allclose(p.operator @ np.eye(4), L2, rtol=1e-14)


def test_manufactured_catalog():
    p = build_problem(1, 7, Manufactured("sin"))
    x = p.grid.nodes()[:, 0]
    np.testing.assert_allclose(p.exact, np.sin(np.pi * x))
    np.testing.assert_allclose(p.rhs, np.pi**2 * np.sin(np.pi * x))
    # poly is reproduced exactly by the stencil
    q = build_problem(1, 9, Manufactured("poly"))
    np.testing.assert_allclose(q.apply(np.array(q.exact)), q.rhs, rtol=1e-12)


def test_build_errors():
    with pytest.raises(KeyError):
        build_problem(1, 3, Manufactured("nope"))
    with pytest.raises(DimensionError):
        build_problem(1, 3, Samples([1.0, 2.0]))
    with pytest.raises(DimensionError):
        build_problem(2, 3, Manufactured("sin"))
    p = build_problem(1, 3, Samples([1.0, 2.0, 3.0]))
    assert p.rhs.tolist() == [1.0, 2.0, 3.0] and not p.rhs.flags.writeable


@given(st.integers(1, 2), st.integers(1, 12), st.integers(0, 2**32 - 1))
@settings(max_examples=50)
def test_operator_symmetric_positive_definite(dim, n, seed):
    p = build_problem(dim, n, Constant(0))
    rng = np.random.default_rng(seed)
    u, v = rng.standard_normal((2, p.size))
    a, b = np.dot(u, p.apply(v)), np.dot(v, p.apply(u))
    assert abs(a - b) <= 1e-10 * max(abs(a), abs(b), 1.0)
    assert np.dot(u, p.apply(u)) > 0


def test_energy_examples():
    p = build_problem(1, 1, Constant(1))
    assert energy(p, [0.0]) == 0
    # J(u) = 4u^2 - u
    for u in (0.1, 0.125, 0.3):
        assert energy(p, [u]) == pytest.approx(4 * u * u - u, abs=1e-15)
    with pytest.raises(DimensionError):
        energy(p, [1.0, 2.0])

    for dim, n, rhs in ((1, 20, Constant(1)), (2, 7, Manufactured("sinsin"))):
        p = build_problem(dim, n, rhs)
        u = cg_oracle(p)
        j = energy(p, u)
        assert j <= 0
        assert j == pytest.approx(-0.5 * np.dot(p.rhs, u), rel=1e-10)


def test_solve_examples():
    p = build_problem(1, 3, Constant(1))
    np.testing.assert_allclose(tridiagonal_solve(np.full(3, 32.0), np.full(2, -16.0), np.ones(3)), N3, atol=1e-15)
    r = solve_energy(p)
    assert r.termination is Termination.GRAD_TOL
    np.testing.assert_allclose(r.x_star, N3, rtol=0, atol=1e-9)
    # exact solution x(1-x)/2 at the nodes
    x = p.grid.nodes()[:, 0]
    np.testing.assert_allclose(N3, x * (1 - x) / 2, atol=1e-15)

    r = solve_energy(build_problem(1, 1, Constant(1)))
    assert abs(r.x_star[0] - 0.125) <= 1e-9


def test_euler_lagrange_at_exit():
    for dim, n in ((1, 10), (2, 6)):
        p = build_problem(dim, n, Manufactured("sin" if dim == 1 else "sinsin"))
        r = solve_energy(p, SolveOptions(max_iters=100_000))
        assert r.termination is Termination.GRAD_TOL
        assert np.linalg.norm(p.apply(r.x_star) - p.rhs) <= 1e-8


def test_cg_oracle_examples():
    p = build_problem(1, 3, Constant(1))
    np.testing.assert_allclose(cg_oracle(p, 1e-12), N3, rtol=0, atol=1e-14)
    u = cg_oracle(build_problem(2, 2, Constant(1)))
    assert np.ptp(u) <= 1e-15
    for dim, n in ((1, 50), (2, 9)):
        p = build_problem(dim, n, Manufactured("sin" if dim == 1 else "sinsin"))
        u = cg_oracle(p, 1e-10)
        assert np.linalg.norm(p.apply(u) - p.rhs) <= 1e-10 * np.linalg.norm(p.rhs)
    with pytest.raises(ValueError):
        cg_oracle(p, 0.0)


def test_cg_nonconvergence_raises():
    A = np.diag(np.linspace(1, 1e6, 50))
    with pytest.raises(OracleError):
        conjugate_gradient(lambda v: A @ v, np.ones(50), 1e-14, 3)


def test_compare_examples():
    c = compare(build_problem(1, 31, Constant(1)))
    assert c.termination == "GradTol" and c.gap_inf <= 1e-6
    assert abs(c.energy_descent - c.energy_cg) <= 1e-10

    c = compare(build_problem(2, 15, Manufactured("sinsin")))
    assert c.gap_inf <= 1e-6 and c.node_error <= 5e-3

    c = compare(build_problem(1, 1, Constant(3)))
    assert c.gap_inf <= 1e-12


def test_convergence_order():
    errs = {}
    for n in (15, 31):
        p = build_problem(1, n, Manufactured("sin"))
        errs[n] = node_error(p, solve_energy(p).x_star)
    assert 3.5 <= errs[15] / errs[31] <= 4.5
    e2 = [node_error(p, cg_oracle(p)) for p in (build_problem(2, n, Manufactured("sinsin")) for n in (7, 15))]
    assert 3.5 <= e2[0] / e2[1] <= 4.5


def test_sin_fine_grid_error():
    p = build_problem(1, 127, Manufactured("sin"))
    r = solve_energy(p)
    assert r.converged
    assert node_error(p, r.x_star) <= 1e-3


def test_energy_minimizer_unique():
    p = build_problem(1, 7, Constant(1))
    rep = multistart_uniqueness(energy_objective(p), Ball(np.zeros(p.size), 5.0), 10,
                                SolveOptions(max_iters=100_000))
    assert rep.passed
    np.testing.assert_allclose(rep.solutions[0], cg_oracle(p), atol=1e-6)
