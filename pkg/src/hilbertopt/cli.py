"""Batch front end: JSON problem files in, JSON reports and CSV traces out.

Usage::

    hilbertopt solve --input problem.json [--seed 0] [--out results/]

Exit status is 0 on success, 1 when a solver fails (unbounded, or out of
iterations without an acceptable optimality certificate), 2 on bad input.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import enum
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import dirichlet as dl
from . import functions as fn
from . import minimize as mn
from . import sets as st
from . import space as sp
from .errors import DimensionError, NumericError, OracleError, RangeError

TASKS = ("solve", "project", "check-convexity", "certify", "dirichlet", "weak-demo")
SCHEMA_VERSION = 1
TIMESTAMP_KEY = "timestamp"


class ErrorCode(str, enum.Enum):
    SYNTAX = "E_SYNTAX"
    VERSION = "E_VERSION"
    MISSING_FIELD = "E_MISSING_FIELD"
    UNKNOWN_FIELD = "E_UNKNOWN_FIELD"
    UNKNOWN_TAG = "E_UNKNOWN_TAG"
    MALFORMED_NUMBER = "E_MALFORMED_NUMBER"
    DIMENSION = "E_DIMENSION"
    INVARIANT = "E_INVARIANT"
    TASK_MISMATCH = "E_TASK_MISMATCH"


class ProblemFileError(Exception):
    def __init__(self, code: ErrorCode, message: str, field: str = "", line: Optional[int] = None):
        self.code = code
        self.field = field
        self.line = line
        where = f" field '{field}'" if field else ""
        where += f" (line {line})" if line else ""
        super().__init__(f"{code.value}{where}: {message}")


@dataclass
class ProblemFile:
    version: int
    task: str
    seed: int = 0
    objective: Optional[fn.Objective] = None
    set: Optional[st.ConvexSet] = None
    params: dict[str, Any] = field(default_factory=dict)
    json_path: str = "report.json"
    csv_path: str = "trace.csv"
    source: str = ""


# ---------------------------------------------------------------- parsing


class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()

    def line_of(self, key: str) -> Optional[int]:
        needle = f'"{key.split(".")[-1].split("[")[0]}"'
        for i, ln in enumerate(self.lines, 1):
            if needle in ln:
                return i
        return None

    def fail(self, code, msg, path=""):
        raise ProblemFileError(code, msg, path, self.line_of(path) if path else None)

    def obj(self, value, path, required=(), optional=()):
        if not isinstance(value, dict):
            self.fail(ErrorCode.SYNTAX, "expected an object", path)
        for k in required:
            if k not in value:
                self.fail(ErrorCode.MISSING_FIELD, "required field missing", f"{path}.{k}" if path else k)
        allowed = set(required) | set(optional)
        for k in value:
            if k not in allowed:
                self.fail(ErrorCode.UNKNOWN_FIELD, "unknown field", f"{path}.{k}" if path else k)
        return value

    def num(self, value, path) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not np.isfinite(value):
            self.fail(ErrorCode.MALFORMED_NUMBER, f"expected a finite number, got {value!r}", path)
        return float(value)

    def int_(self, value, path, minimum=None) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            self.fail(ErrorCode.MALFORMED_NUMBER, f"expected an integer, got {value!r}", path)
        if minimum is not None and value < minimum:
            self.fail(ErrorCode.INVARIANT, f"must be >= {minimum}", path)
        return value

    def vec(self, value, path, dim=None) -> np.ndarray:
        if not isinstance(value, list) or not value:
            self.fail(ErrorCode.MALFORMED_NUMBER, "expected a non-empty list of numbers", path)
        v = np.array([self.num(x, f"{path}[{i}]") for i, x in enumerate(value)])
        if dim is not None and v.shape[0] != dim:
            self.fail(ErrorCode.DIMENSION, f"expected dimension {dim}, got {v.shape[0]}", path)
        return v

    def vecs(self, value, path, dim=None) -> list[np.ndarray]:
        if not isinstance(value, list) or not value:
            self.fail(ErrorCode.SYNTAX, "expected a non-empty list of vectors", path)
        out = [self.vec(v, f"{path}[{i}]", dim) for i, v in enumerate(value)]
        self.same_dim([v.shape[0] for v in out], path)
        return out

    def same_dim(self, dims, path):
        dims = [d for d in dims if d is not None]
        if len(set(dims)) > 1:
            self.fail(ErrorCode.DIMENSION, f"inconsistent dimensions {sorted(set(dims))}", path)

    def build(self, ctor, path, *args, **kwargs):
        try:
            return ctor(*args, **kwargs)
        except (ValueError, DimensionError) as exc:
            self.fail(ErrorCode.INVARIANT, str(exc), path)

    # -- tagged objects

    def convex_set(self, value, path="set"):
        value = self.obj(value, path, ("shape",), ("lo", "hi", "center", "radius", "normal", "offset", "dim"))
        shape = value["shape"]
        fields = {
            "Box": ("lo", "hi"),
            "Ball": ("center", "radius"),
            "Halfspace": ("normal", "offset"),
            "Hyperplane": ("normal", "offset"),
            "Simplex": ("dim",),
            "WholeSpace": ("dim",),
        }
        if shape not in fields:
            self.fail(ErrorCode.UNKNOWN_TAG, f"unknown shape tag {shape!r}", f"{path}.shape")
        self.obj(value, path, ("shape",) + fields[shape])
        if shape == "Box":
            lo, hi = self.vec(value["lo"], f"{path}.lo"), self.vec(value["hi"], f"{path}.hi")
            self.same_dim([lo.shape[0], hi.shape[0]], path)
            return self.build(st.Box, path, lo, hi)
        if shape == "Ball":
            return self.build(st.Ball, path, self.vec(value["center"], f"{path}.center"),
                              self.num(value["radius"], f"{path}.radius"))
        if shape in ("Halfspace", "Hyperplane"):
            cls = st.Halfspace if shape == "Halfspace" else st.Hyperplane
            return self.build(cls, path, self.vec(value["normal"], f"{path}.normal"),
                              self.num(value["offset"], f"{path}.offset"))
        n = self.int_(value["dim"], f"{path}.dim", minimum=1)
        return st.Simplex(n) if shape == "Simplex" else st.WholeSpace(n)

    def objective(self, value, path="objective"):
        value = self.obj(value, path, ("form",), ("A", "b", "c", "center", "dim"))
        form = value["form"]
        fields = {"Quadratic": (("A", "b"), ()), "CoshSum": ((), ("dim",)),
                  "Linear": (("c",), ()), "NormSquared": (("center",), ())}
        if form not in fields:
            self.fail(ErrorCode.UNKNOWN_TAG, f"unknown objective form {form!r}", f"{path}.form")
        req, opt = fields[form]
        self.obj(value, path, ("form",) + req, opt)
        if form == "Linear":
            return fn.Linear(self.vec(value["c"], f"{path}.c"))
        if form == "NormSquared":
            return fn.NormSquared(self.vec(value["center"], f"{path}.center"))
        if form == "CoshSum":
            if "dim" in value:
                self.int_(value["dim"], f"{path}.dim", minimum=1)
            return fn.CoshSum()
        b = self.vec(value["b"], f"{path}.b")
        n = b.shape[0]
        A = value["A"]
        if A == "identity":
            A = np.eye(n)
        elif isinstance(A, dict):
            self.obj(A, f"{path}.A", ("diagonal",))
            A = np.diag(self.vec(A["diagonal"], f"{path}.A.diagonal", n))
        elif isinstance(A, list):
            if len(A) != n:
                self.fail(ErrorCode.DIMENSION, f"A needs {n} rows", f"{path}.A")
            A = np.array([self.vec(row, f"{path}.A[{i}]", n) for i, row in enumerate(A)])
        else:
            self.fail(ErrorCode.UNKNOWN_TAG, "A must be a row-major matrix, \"identity\" or {\"diagonal\": [...]}",
                      f"{path}.A")
        return self.build(fn.Quadratic, path, A, b)

    def options(self, value, path="options"):
        names = [f for f in mn.SolveOptions.__dataclass_fields__ if f not in ("seed", "keep_iterates")]
        value = self.obj(value, path, (), names)
        kw = {}
        for k, v in value.items():
            if k in ("max_iters", "record_every", "max_backtracks"):
                kw[k] = self.int_(v, f"{path}.{k}")
            else:
                kw[k] = self.num(v, f"{path}.{k}")
        return self.build(mn.SolveOptions, path, **kw)

    def inner_product(self, value, path="inner_product"):
        value = self.obj(value, path, ("kind",), ("weights", "grid_dim", "n_interior"))
        kind = value["kind"]
        if kind == "Standard":
            self.obj(value, path, ("kind",))
            return sp.Standard()
        if kind == "DiagonalWeighted":
            self.obj(value, path, ("kind", "weights"))
            return self.build(sp.DiagonalWeighted, path, self.vec(value["weights"], f"{path}.weights"))
        if kind == "LaplacianEnergy":
            self.obj(value, path, ("kind", "grid_dim", "n_interior"))
            return self.build(sp.LaplacianEnergy, path, self.int_(value["grid_dim"], f"{path}.grid_dim"),
                              self.int_(value["n_interior"], f"{path}.n_interior"))
        self.fail(ErrorCode.UNKNOWN_TAG, f"unknown inner product {kind!r}", f"{path}.kind")


_COMMON = ("version", "task", "seed", "output")
_TASK_FIELDS = {
    "solve": (("objective",), ("set", "x0", "options", "certify_samples")),
    "project": (("set", "points"), ("n_samples",)),
    "check-convexity": (("objective", "set"), ("n_trials", "margin", "coercivity")),
    "certify": (("objective", "x"), ("set", "n_samples")),
    "dirichlet": (("grid", "rhs"), ("options", "cg_tol")),
    "weak-demo": (("sequence", "tests"), ("limit", "inner_product")),
}


def parse_text(text: str, source: str = "<string>") -> ProblemFile:
    """Validate a problem document; raises ProblemFileError with a code, field and line."""

    def _reject_constant(name):
        raise ValueError(name)

    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(ErrorCode.SYNTAX, exc.msg, "", exc.lineno) from None
    except ValueError as exc:
        raise ProblemFileError(ErrorCode.MALFORMED_NUMBER, f"non-finite constant {exc}") from None
    p = _Parser(text)
    p.obj(doc, "", ("version", "task"), _COMMON + tuple(k for r, o in _TASK_FIELDS.values() for k in r + o))
    version = p.int_(doc["version"], "version")
    if version != SCHEMA_VERSION:
        p.fail(ErrorCode.VERSION, f"unsupported version {version}", "version")
    task = doc["task"]
    if task not in _TASK_FIELDS:
        p.fail(ErrorCode.UNKNOWN_TAG, f"unknown task {task!r}", "task")
    req, opt = _TASK_FIELDS[task]
    p.obj(doc, "", ("version", "task") + req, _COMMON + opt)

    pf = ProblemFile(version, task, source=source)
    if "seed" in doc:
        pf.seed = p.int_(doc["seed"], "seed")
    if "output" in doc:
        out = p.obj(doc["output"], "output", (), ("json_path", "csv_path"))
        for k in out:
            if not isinstance(out[k], str) or not out[k]:
                p.fail(ErrorCode.SYNTAX, "expected a non-empty path string", f"output.{k}")
        pf.json_path = out.get("json_path", pf.json_path)
        pf.csv_path = out.get("csv_path", pf.csv_path)

    if "objective" in doc:
        pf.objective = p.objective(doc["objective"])
    if "set" in doc:
        pf.set = p.convex_set(doc["set"])
    prm = pf.params
    obj_dim = pf.objective.dim if pf.objective is not None else None
    if pf.objective is not None and obj_dim is None:
        obj_dim = doc["objective"].get("dim")
    set_dim = pf.set.dim if pf.set is not None else None

    if task in ("solve", "certify"):
        key = "x0" if task == "solve" else "x"
        if key in doc:
            prm[key] = p.vec(doc[key], key)
        dims = [obj_dim, set_dim, prm[key].shape[0] if key in prm else None]
        p.same_dim(dims, key if key in prm else "set")
        n = next((d for d in dims if d is not None), None)
        if n is None:
            p.fail(ErrorCode.DIMENSION, "cannot infer problem dimension; give a set, x0 or objective.dim", "objective")
        if pf.set is None:
            pf.set = st.WholeSpace(n)
        if task == "solve":
            prm.setdefault("x0", np.zeros(n))
            prm["options"] = p.options(doc["options"]) if "options" in doc else mn.SolveOptions()
            prm["certify_samples"] = p.int_(doc.get("certify_samples", 1000), "certify_samples", minimum=1)
        else:
            if not pf.set.contains(prm["x"], mn.FEASIBILITY_TOL):
                p.fail(ErrorCode.INVARIANT, "x must lie in the set", "x")
            prm["n_samples"] = p.int_(doc.get("n_samples", 1000), "n_samples", minimum=1)
    elif task == "project":
        prm["points"] = p.vecs(doc["points"], "points", set_dim)
        prm["n_samples"] = p.int_(doc.get("n_samples", 1000), "n_samples", minimum=1)
    elif task == "check-convexity":
        p.same_dim([obj_dim, set_dim], "set")
        prm["n_trials"] = p.int_(doc.get("n_trials", 1000), "n_trials", minimum=1)
        prm["margin"] = p.num(doc.get("margin", 0.5), "margin")
        if prm["margin"] <= 0:
            p.fail(ErrorCode.INVARIANT, "margin must be > 0", "margin")
        co = p.obj(doc.get("coercivity", {}), "coercivity", (), ("n_directions", "radii", "growth_floor"))
        radii = p.vec(co["radii"], "coercivity.radii") if "radii" in co else np.array(fn.DEFAULT_RADII)
        if radii.size < 3 or np.any(np.diff(radii) <= 0):
            p.fail(ErrorCode.INVARIANT, "radii must be strictly increasing with >= 3 values", "coercivity.radii")
        prm["coercivity"] = {
            "n_directions": p.int_(co.get("n_directions", 64), "coercivity.n_directions", minimum=1),
            "radii": radii,
            "growth_floor": p.num(co.get("growth_floor", 1.0), "coercivity.growth_floor"),
        }
    elif task == "dirichlet":
        g = p.obj(doc["grid"], "grid", ("dim", "n_interior"))
        gdim = p.int_(g["dim"], "grid.dim")
        if gdim not in (1, 2):
            p.fail(ErrorCode.INVARIANT, "grid.dim must be 1 or 2", "grid.dim")
        n_int = p.int_(g["n_interior"], "grid.n_interior", minimum=1)
        r = p.obj(doc["rhs"], "rhs", ("kind",), ("value", "values", "name"))
        kind = r["kind"]
        if kind == "Constant":
            p.obj(r, "rhs", ("kind", "value"))
            rhs = dl.Constant(p.num(r["value"], "rhs.value"))
        elif kind == "Samples":
            p.obj(r, "rhs", ("kind", "values"))
            rhs = dl.Samples(p.vec(r["values"], "rhs.values", n_int**gdim))
        elif kind == "Manufactured":
            p.obj(r, "rhs", ("kind", "name"))
            name = r["name"]
            if name not in dl.MANUFACTURED:
                p.fail(ErrorCode.UNKNOWN_TAG, f"unknown manufactured solution {name!r}", "rhs.name")
            if dl.MANUFACTURED[name][0] != gdim:
                p.fail(ErrorCode.DIMENSION, f"{name!r} is not a {gdim}-d solution", "rhs.name")
            rhs = dl.Manufactured(name)
        else:
            p.fail(ErrorCode.UNKNOWN_TAG, f"unknown rhs kind {kind!r}", "rhs.kind")
        prm["problem"] = dl.build_problem(gdim, n_int, rhs)
        prm["options"] = p.options(doc["options"]) if "options" in doc else dl.DIRICHLET_OPTIONS
        prm["cg_tol"] = p.num(doc.get("cg_tol", 1e-12), "cg_tol")
        if prm["cg_tol"] <= 0:
            p.fail(ErrorCode.INVARIANT, "cg_tol must be > 0", "cg_tol")
    elif task == "weak-demo":
        s = p.obj(doc["sequence"], "sequence", ("kind",), ("dim", "steps", "vectors"))
        kind = s["kind"]
        if kind == "basis":
            p.obj(s, "sequence", ("kind", "dim"))
            n = p.int_(s["dim"], "sequence.dim", minimum=1)
            seq = list(sp.basis_sequence(n))
        elif kind == "scaled_basis":
            p.obj(s, "sequence", ("kind", "dim", "steps"))
            n = p.int_(s["dim"], "sequence.dim", minimum=1)
            steps = p.int_(s["steps"], "sequence.steps", minimum=1)
            seq = [np.eye(n)[0] / k for k in range(1, steps + 1)]
        elif kind == "explicit":
            p.obj(s, "sequence", ("kind", "vectors"))
            seq = p.vecs(s["vectors"], "sequence.vectors")
            n = seq[0].shape[0]
        else:
            p.fail(ErrorCode.UNKNOWN_TAG, f"unknown sequence kind {kind!r}", "sequence.kind")
        prm["sequence"] = seq
        prm["tests"] = p.vecs(doc["tests"], "tests", n)
        prm["limit"] = p.vec(doc["limit"], "limit", n) if "limit" in doc else np.zeros(n)
        ip = p.inner_product(doc["inner_product"]) if "inner_product" in doc else sp.Standard()
        if ip.dim is not None and ip.dim != n:
            p.fail(ErrorCode.DIMENSION, f"inner product expects dimension {ip.dim}", "inner_product")
        prm["inner_product"] = ip
    return pf


def parse(path) -> ProblemFile:
    path = Path(path)
    return parse_text(path.read_text(), str(path))


# ---------------------------------------------------------------- running


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, enum.Enum):
        return v.value
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _cert_dict(c: mn.OptimalityCertificate) -> dict:
    return {
        "grad_norm": c.grad_norm,
        "min_sampled_directional": c.min_sampled_directional,
        "vi_residual": c.vi_residual,
        "verdict": c.verdict,
    }


def _run_solve(pf: ProblemFile, seed: int):
    prm = pf.params
    opts = mn.SolveOptions(**{**prm["options"].__dict__, "seed": seed})
    if isinstance(pf.set, st.WholeSpace):
        rep = mn.solve_unconstrained(pf.objective, prm["x0"], opts)
    else:
        rep = mn.solve_projected(pf.objective, pf.set, prm["x0"], opts)
    result = {
        "x_star": rep.x_star,
        "f_star": rep.f_star,
        "termination": rep.termination,
        "iterations": rep.iterations,
    }
    if rep.termination is mn.Termination.UNBOUNDED:
        return 1, result, rep
    cert = mn.certify(pf.objective, pf.set, rep.x_star, prm["certify_samples"], seed)
    result["certificate"] = _cert_dict(cert)
    failed = not rep.converged and cert.verdict is mn.Optimality.REJECTED
    return (1 if failed else 0), result, rep


def _run_project(pf: ProblemFile, seed: int):
    out = []
    for i, x in enumerate(pf.params["points"]):
        c = st.vi_certificate(pf.set, x, pf.params["n_samples"], seed + i)
        out.append({"point": c.point, "projection": c.projection,
                    "max_vi_violation": c.max_vi_violation, "valid": c.is_valid()})
    return (0 if all(o["valid"] for o in out) else 1), {"projections": out}, None


def _run_check(pf: ProblemFile, seed: int):
    f, W, prm = pf.objective, pf.set, pf.params
    jen = fn.jensen_check(f, W, prm["n_trials"], seed)
    epi = fn.epigraph_check(f, W, prm["n_trials"], seed)
    strict = fn.strictness_check(f, W, prm["n_trials"], prm["margin"], seed)
    co = prm["coercivity"]
    coer = fn.coercivity_probe(f, co["n_directions"], co["radii"], co["growth_floor"], seed, dim=W.dim)
    result = {
        "declared_class": f.declared_class,
        "jensen": {"max_violation": jen.max_violation, "detected": jen.detected},
        "epigraph": {"max_violation": epi.max_violation, "detected": epi.detected},
        "strictness": {"passed": strict.passed, "slack": strict.slack, "required": strict.required,
                       "witness": list(strict.witness) if strict.witness else None},
        "segment_counterexample": st.segment_check(W, prm["n_trials"], seed),
        "coercivity": {"verdict": coer.verdict, "witness": coer.witness, "note": coer.note},
    }
    return 0, result, None


def _run_certify(pf: ProblemFile, seed: int):
    c = mn.certify(pf.objective, pf.set, pf.params["x"], pf.params["n_samples"], seed)
    return 0, {"certificate": _cert_dict(c)}, None


def _run_dirichlet(pf: ProblemFile, seed: int):
    prm = pf.params
    problem = prm["problem"]
    opts = mn.SolveOptions(**{**prm["options"].__dict__, "seed": seed})
    rep = dl.solve_energy(problem, opts)
    u_cg = dl.cg_oracle(problem, prm["cg_tol"])
    result = {
        "grid": {"dim": problem.grid.dim, "n_interior": problem.grid.n_interior, "h": problem.grid.h},
        "u": rep.x_star,
        "u_cg": u_cg,
        "gap_inf": float(np.max(np.abs(rep.x_star - u_cg))),
        "energy_descent": dl.energy(problem, rep.x_star),
        "energy_cg": dl.energy(problem, u_cg),
        "termination": rep.termination,
        "iterations": rep.iterations,
    }
    if problem.exact is not None:
        result["node_error"] = dl.node_error(problem, rep.x_star)
    return (0 if rep.converged else 1), result, rep


def _run_weak(pf: ProblemFile, seed: int):
    prm = pf.params
    r = sp.weak_probe(prm["sequence"], prm["limit"], prm["tests"], prm["inner_product"])
    result = {
        "verdict": r.verdict,
        "steps": r.steps,
        "final_pairings": r.pairings[-1],
        "final_norm": float(r.norms[-1]),
        "max_abs_pairing_final": float(np.max(np.abs(r.pairings[-1]))),
        "norms": r.norms,
    }
    return 0, result, None


_RUNNERS = {
    "solve": _run_solve,
    "project": _run_project,
    "check-convexity": _run_check,
    "certify": _run_certify,
    "dirichlet": _run_dirichlet,
    "weak-demo": _run_weak,
}


def render_report(task: str, seed: int, status: int, result: dict, timestamp: str) -> str:
    doc = {
        "version": SCHEMA_VERSION,
        "task": task,
        "seed": seed,
        "exit_code": status,
        "result": _jsonable(result),
        TIMESTAMP_KEY: timestamp,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def run(pf: ProblemFile, seed: Optional[int] = None, out_dir=".") -> int:
    """Execute a parsed problem, writing the JSON report (and CSV trace where applicable)."""
    seed = pf.seed if seed is None else seed
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    status, result, rep = _RUNNERS[pf.task](pf, seed)
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat()
    (out / pf.json_path).write_text(render_report(pf.task, seed, status, result, stamp))
    if rep is not None:
        mn.write_trace_csv(rep, out / pf.csv_path)
    return status


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hilbertopt", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    helps = {
        "solve": "minimize an objective, optionally over a convex set",
        "project": "project points onto a convex set and certify the projections",
        "check-convexity": "sample Jensen, epigraph, strictness and coercivity checks",
        "certify": "first-order optimality certificate at a given point",
        "dirichlet": "solve the discrete Dirichlet problem by energy minimization",
        "weak-demo": "probe a vector sequence for weak versus strong convergence",
    }
    for name in TASKS:
        p = sub.add_parser(name, help=helps[name], description=helps[name])
        p.add_argument("--input", required=True, help="JSON problem file")
        p.add_argument("--seed", type=int, default=None, help="override the file's seed")
        p.add_argument("--out", default=".", help="output directory (default: current directory)")
    return ap


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        pf = parse(args.input)
        if pf.task != args.command:
            raise ProblemFileError(ErrorCode.TASK_MISMATCH,
                                   f"file describes task {pf.task!r}, not {args.command!r}", "task")
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return 2
    except ProblemFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(pf, args.seed, args.out)
    except (NumericError, RangeError, OracleError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
