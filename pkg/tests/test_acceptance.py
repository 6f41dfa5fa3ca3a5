"""Acceptance criteria, one test per criterion.

Each test records a pass/fail line (with timing) that the conftest hook prints
in the terminal summary, and fails if the criterion or its time budget fails.
"""

import json
import re
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE_RESULTS
from hilbertopt.dirichlet import Constant, Manufactured, build_problem, cg_oracle, compare, node_error, solve_energy
from hilbertopt.functions import (
    CoshSum,
    Linear,
    NormSquared,
    Quadratic,
    directional_derivative,
    epigraph_check,
    gradient,
    jensen_check,
    strictness_check,
)
from hilbertopt.minimize import (
    Optimality,
    SolveOptions,
    certify,
    multistart_uniqueness,
    solve_projected,
    solve_unconstrained,
)
from hilbertopt.sets import Ball, Box, Halfspace, Hyperplane, Simplex, WholeSpace, project, vi_certificate
from hilbertopt.space import Verdict, basis_sequence, weak_probe

from oracles import DoubleWell, NegNormSquared, central_diff, grid_best_distance, lattice_min_distance_2d, random_spd

ROOT = Path(__file__).resolve().parent.parent


@contextmanager
def criterion(name, budget):
    detail = {}
    t0 = time.perf_counter()
    try:
        yield detail
    except AssertionError as exc:
        ACCEPTANCE_RESULTS.append((name, False, f"{exc} ({time.perf_counter() - t0:.1f}s)"))
        raise
    elapsed = time.perf_counter() - t0
    ok = budget is None or elapsed < budget
    info = ", ".join(f"{k}={v}" for k, v in detail.items())
    limit = "" if budget is None else f" / budget {budget:.0f}s"
    ACCEPTANCE_RESULTS.append((name, ok, f"{info} ({elapsed:.1f}s{limit})"))
    assert ok, f"{name} took {elapsed:.1f}s, budget {budget}s"


def _shapes():
    """The five shapes in 2-d (simplex in 3-d), each with a closed-form description for the grid oracle."""
    return [
        (Box([-0.5, -0.8], [0.7, 0.4]), {"kind": "box", "lo": np.array([-0.5, -0.8]), "hi": np.array([0.7, 0.4])}),
        (Ball([0.2, -0.1], 0.9), {"kind": "ball", "center": np.array([0.2, -0.1]), "radius": 0.9}),
        (Halfspace([1.0, 2.0], 0.3), {"kind": "halfspace", "normal": np.array([1.0, 2.0]), "offset": 0.3}),
        (Hyperplane([-1.0, 0.5], 0.4), {"kind": "hyperplane", "normal": [-1.0, 0.5], "offset": 0.4}),
        (Simplex(3), {"kind": "simplex3"}),
    ]


def test_projection_suite():
    with criterion("projection suite", 60) as d:
        worst_vi = worst_grid = worst_nonexp = worst_idem = worst_fix = 0.0
        for k, (W, shape) in enumerate(_shapes()):
            rng = np.random.default_rng(1000 + k)
            xs = rng.uniform(-3, 3, (100, W.dim))
            ps = [project(W, x) for x in xs]
            for i, (x, p) in enumerate(zip(xs, ps)):
                worst_idem = max(worst_idem, np.max(np.abs(project(W, p) - p)))
                y, q = xs[i - 1], ps[i - 1]
                worst_nonexp = max(worst_nonexp, np.linalg.norm(p - q) - np.linalg.norm(x - y))
                cert = vi_certificate(W, x, 1000, seed=i)
                worst_vi = max(worst_vi, cert.max_vi_violation)
                dist = float(np.linalg.norm(p - x))
                if shape["kind"] in ("box", "ball", "halfspace"):
                    g = lattice_min_distance_2d(shape, x, dist + 3e-3)
                else:
                    g = grid_best_distance(shape, x, dist + 3e-3)
                # how much closer the best lattice point of the set is than the projection
                worst_grid = max(worst_grid, dist - g)
            for m in W.sample(rng, 100):
                worst_fix = max(worst_fix, np.max(np.abs(project(W, m) - m)))
        d.update(max_vi=f"{worst_vi:.1e}", grid_gain=f"{worst_grid:.1e}", nonexp=f"{worst_nonexp:.1e}",
                 idem=f"{worst_idem:.1e}", member=f"{worst_fix:.1e}")
        assert worst_vi <= 1e-10
        assert worst_grid <= 2e-3
        assert worst_nonexp <= 1e-12
        assert worst_idem <= 1e-12
        assert worst_fix <= 1e-12


def _forms(rng, n):
    return [
        ("Quadratic", Quadratic(random_spd(rng, n), rng.standard_normal(n))),
        ("CoshSum", CoshSum()),
        ("Linear", Linear(rng.standard_normal(n))),
        ("NormSquared", NormSquared(rng.standard_normal(n))),
    ]


def test_calculus_suite():
    with criterion("calculus suite", 10) as d:
        worst_grad = worst_dir = 0.0
        for k in range(4):
            rng = np.random.default_rng(2000 + k)
            for _ in range(100):
                n = int(rng.integers(1, 8))
                _, f = _forms(rng, n)[k]
                x, v = rng.uniform(-3, 3, n), rng.standard_normal(n)
                g = gradient(f, x)
                fd = central_diff(lambda y: f.value(y), x)
                worst_grad = max(worst_grad, np.linalg.norm(g - fd) / np.linalg.norm(g))
                exact = float(np.dot(g, v))
                one_sided = directional_derivative(f, x, v, "OneSidedLimit").value
                worst_dir = max(worst_dir, abs(one_sided - exact) / abs(exact))
        d.update(grad_rel=f"{worst_grad:.1e}", directional_rel=f"{worst_dir:.1e}")
        assert worst_grad <= 1e-5
        assert worst_dir <= 1e-5


def test_convexity_suite():
    with criterion("convexity suite", 30) as d:
        rng = np.random.default_rng(3000)
        n = 3
        domains = [Box(-2 * np.ones(n), 2 * np.ones(n)), Ball(np.ones(n), 1.5), Simplex(n)]
        convex = _forms(rng, n) + [("PSD Quadratic", Quadratic(np.diag([2.0, 1.0, 0.0]), np.ones(n)))]
        worst = -np.inf
        for s, (_, f) in enumerate(convex):
            for W in domains:
                worst = max(worst, jensen_check(f, W, 1000, seed=s).max_violation,
                            epigraph_check(f, W, 1000, seed=s).max_violation)
        cube = Box(-np.ones(2), np.ones(2))
        rates = {
            "neg_sq_jensen": sum(jensen_check(NegNormSquared(), cube, 1000, seed=s).detected for s in range(100)),
            "neg_sq_epigraph": sum(epigraph_check(NegNormSquared(), cube, 1000, seed=s).detected for s in range(100)),
            "double_well_jensen": sum(jensen_check(DoubleWell(), cube, 1000, seed=s).detected for s in range(100)),
            "double_well_epigraph": sum(epigraph_check(DoubleWell(), cube, 1000, seed=s).detected
                                        for s in range(100)),
        }
        strict = {name: strictness_check(f, domains[0], 1000, 0.5, seed=1).passed
                  for name, f in _forms(rng, n) if name != "Linear"}
        linear_fails = not strictness_check(Linear([1.0, -1.0, 0.5]), domains[0], 1000, 0.5, seed=1).passed
        d.update(max_violation=f"{worst:.1e}", **{k: f"{v}/100" for k, v in rates.items()},
                 strict_pass=all(strict.values()), linear_fails=linear_fails)
        assert worst <= 1e-12
        assert all(v >= 99 for v in rates.values())
        assert all(strict.values()) and linear_fails


def test_solver_suite():
    with criterion("solver suite", 60) as d:
        worst_gap = worst_rise = 0.0
        infeasible = rejected = certified = 0
        exits = {}
        unconverged = []
        for k in range(20):
            rng = np.random.default_rng(4000 + k)
            n = int(rng.integers(2, 51))
            A, b = random_spd(rng, n, 0.2, 10.0), rng.standard_normal(n)
            f = Quadratic(A, b)
            r = solve_unconstrained(f, rng.standard_normal(n))
            worst_gap = max(worst_gap, np.max(np.abs(r.x_star - np.linalg.solve(A, b))))
            worst_rise = max(worst_rise, np.max(np.diff(r.values), initial=0.0))
            W = [Box(-0.3 * np.ones(n), 0.3 * np.ones(n)), Ball(np.zeros(n), 0.5),
                 Halfspace(rng.standard_normal(n), -0.2), Simplex(n)][k % 4]
            rp = solve_projected(f, W, rng.uniform(-2, 2, n), SolveOptions(keep_iterates=True))
            worst_rise = max(worst_rise, np.max(np.diff(rp.values), initial=0.0))
            for rep in (r, rp):
                exits[rep.termination.value] = exits.get(rep.termination.value, 0) + 1
            infeasible += sum(not W.contains(x, 1e-9) for x in rp.iterates)
            for rep, dom in ((r, WholeSpace(n)), (rp, W)):
                verdict = certify(f, dom, rep.x_star, seed=k).verdict
                if rep.converged:
                    certified += 1
                    rejected += verdict is Optimality.REJECTED
                else:
                    # stalls sit at the rounding floor of f; report how they certify
                    unconverged.append(verdict.value)
        d.update(max_gap=f"{worst_gap:.1e}", max_rise=f"{worst_rise:.1e}", infeasible=infeasible,
                 certified=certified, rejected=rejected,
                 unconverged_verdicts="|".join(unconverged) or "none",
                 exits=" ".join(f"{k}:{v}" for k, v in sorted(exits.items())))
        assert worst_gap <= 1e-6
        assert worst_rise <= 1e-12
        assert infeasible == 0 and rejected == 0


def test_uniqueness():
    with criterion("uniqueness", None) as d:
        spreads = []
        for k in range(10):
            rng = np.random.default_rng(5000 + k)
            n = int(rng.integers(2, 8))
            f = [Quadratic(random_spd(rng, n), 3 * rng.standard_normal(n)), CoshSum(),
                 NormSquared(rng.uniform(-3, 3, n))][k % 3]
            W = [Box(-np.ones(n), np.ones(n)), Ball(np.ones(n), 1.0), Simplex(n),
                 Halfspace(rng.standard_normal(n), -1.0), Box(np.ones(n), 2 * np.ones(n))][k % 5]
            spreads.append(multistart_uniqueness(f, W, 10, seed=k).max_distance)
        d.update(max_spread=f"{max(spreads):.1e}")
        assert max(spreads) <= 1e-5


def test_dirichlet_suite():
    with criterion("dirichlet suite", 120) as d:
        r = solve_energy(build_problem(1, 3, Constant(1)))
        err3 = float(np.max(np.abs(r.x_star - [0.09375, 0.125, 0.09375])))
        gap1 = compare(build_problem(1, 31, Constant(1))).gap_inf
        gap2 = compare(build_problem(2, 15, Manufactured("sinsin"))).gap_inf
        errs = [node_error(p, solve_energy(p).x_star) for p in (build_problem(1, n, Manufactured("sin")) for n in (15, 31))]
        ratio = errs[0] / errs[1]
        p = build_problem(1, 127, Manufactured("sin"))
        err127 = node_error(p, solve_energy(p).x_star)
        d.update(n3_err=f"{err3:.1e}", gap_1d=f"{gap1:.1e}", gap_2d=f"{gap2:.1e}", ratio=f"{ratio:.3f}",
                 sin127=f"{err127:.2e}")
        assert err3 <= 1e-9
        assert gap1 <= 1e-6 and gap2 <= 1e-6
        assert 3.5 <= ratio <= 4.5
        assert err127 <= 1e-3


def test_weak_convergence_demo():
    with criterion("weak-convergence demo", None) as d:
        dim = 100
        tests = [np.r_[np.arange(1.0, 11.0), np.zeros(dim - 10)], np.r_[1.0, -2.0, np.zeros(dim - 2)]]
        rep = weak_probe(list(basis_sequence(dim)), np.zeros(dim), tests)
        support = [10, 2]
        beyond_zero = all(np.all(rep.pairings[s:, j] == 0.0) for j, s in enumerate(support))
        d.update(verdict=rep.verdict.value, beyond_support_zero=beyond_zero, norms_one=bool(np.all(rep.norms == 1.0)))
        assert rep.verdict is Verdict.WEAK_ONLY
        assert beyond_zero and np.all(rep.norms == 1.0)


def test_cli_determinism(tmp_path):
    with criterion("CLI determinism", None) as d:
        files = sorted((ROOT / "problems").glob("*.json"))
        identical = 0
        for path in files:
            task = json.loads(path.read_text())["task"]
            texts = []
            for i in range(2):
                out = tmp_path / path.stem / str(i)
                subprocess.run([sys.executable, "-m", "hilbertopt", task, "--input", str(path), "--seed", "7",
                                "--out", str(out)], capture_output=True)
                reports = sorted(out.glob("*.json"))
                assert len(reports) == 1, f"{path.name}: expected one report"
                texts.append(re.sub(r'"timestamp": "[^"]*"', "", reports[0].read_text()))
            identical += texts[0] == texts[1]
        d.update(identical=f"{identical}/{len(files)}")
        assert identical == len(files) > 0
