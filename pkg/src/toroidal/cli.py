"""Batch front end: read a JSON job file, build the requested objects, run checks,
write a JSON report.

Exit codes: 0 when every job passes, 1 when a job fails, 2 for a malformed config.
Rationals appear in reports as "p/q" strings; timings are integer nanoseconds
kept under the separate "timing" key so the rest of the report is reproducible.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction as Q
from importlib import resources
from typing import Callable, Dict, List

import jsonschema

from .algebra import MatrixG, ToroidalAlgebra, jacobi_exhaustive, jacobi_random
from .automorphisms import NotUnimodularError, TauAutomorphism, twist_module
from .evaluation import EvalHom, GridMatrix, PointGrid, phi_apply, phi_preimage, quotient_iso_check
from .exact import InvalidGridError, q_str, to_q
from .highest_weight import checks
from .highest_weight.kacmoody import HighestWeight
from .highest_weight.loop import build_example_41, build_example_42
from .highest_weight.tensor import DegenerateSpecError, PreconditionError, PsiFunctional, compute_gamma
from .roots import DomainError

log = logging.getLogger("toroidal")

REPORT_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


def load_schema() -> dict:
    text = resources.files("toroidal").joinpath("schemas/config.schema.json").read_text()
    return json.loads(text)


def to_jsonable(x):
    """Fractions to "p/q", tuples to lists, non-string keys to their repr."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Q):
        return q_str(x)
    if isinstance(x, float):
        raise TypeError("floating point value in report")
    if isinstance(x, dict):
        return {(k if isinstance(k, str) else repr(k)): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    return repr(x)


def dumps(report: dict) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

class Context:
    """Parsed config plus lazily built, shared objects."""

    def __init__(self, cfg: dict, seed: int):
        self.cfg = cfg
        self.seed = seed
        alg = cfg["algebra"]
        self.d, self.n = alg["d"], alg["n"]
        self.depth = cfg.get("depth", 1)
        self.window = cfg.get("window")
        self.grid = PointGrid(cfg["grid"]) if "grid" in cfg else None
        self.weights = [self._weight(w) for w in cfg.get("weights", [])]
        self.affine = bool(self.weights) and self.weights[0].affine
        self._lock = threading.Lock()
        self._objects: Dict[str, object] = {}
        if self.grid is not None and self.weights:
            want = self.n - 1 if self.affine else self.n
            if self.grid.n != want:
                raise ConfigError(f"grid needs {want} axes for {'affine' if self.affine else 'finite'} "
                                  f"weights with n = {self.n}, got {self.grid.n}")
            if len(self.weights) != self.grid.N:
                raise ConfigError(f"need {self.grid.N} weights, one per grid point, got {len(self.weights)}")

    def _weight(self, w: dict) -> HighestWeight:
        if len(w["labels"]) != self.d:
            raise ConfigError(f"weight {w['labels']} needs {self.d} labels")
        if w["basis"] == "affine":
            if "level" not in w:
                raise ConfigError("affine weights need a level")
            return HighestWeight(tuple(w["labels"]), w["level"], to_q(w.get("dval", 0)))
        if "level" in w:
            raise ConfigError("finite weights take no level")
        return HighestWeight(tuple(w["labels"]))

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}")

    def get(self, name: str, build: Callable):
        with self._lock:
            if name not in self._objects:
                self._objects[name] = build()
            return self._objects[name]

    def need_grid(self):
        if self.grid is None:
            raise ConfigError("this job needs a grid")
        return self.grid

    def spec(self) -> PsiFunctional:
        self.need_grid()
        if not self.weights:
            raise ConfigError("this job needs weights")
        return self.get("spec", lambda: PsiFunctional(self.grid, self.weights, self.d))

    def algebra(self) -> ToroidalAlgebra:
        return self.get("algebra", lambda: ToroidalAlgebra(self.d, self.n))

    def module(self, kind: str = None):
        spec = self.spec()
        kind = kind or ("example-42" if self.affine else "example-41")
        if kind == "example-42":
            if not self.affine:
                raise ConfigError("build-example-42 needs affine weights")
            window = 2 if self.window is None else self.window
            return self.get(kind, lambda: build_example_42(spec, self.n, self.depth, window))
        if self.affine:
            raise ConfigError("build-example-41 needs finite weights")
        window = self.depth if self.window is None else self.window
        return self.get(kind, lambda: build_example_41(spec, window))


# ---------------------------------------------------------------------------
# jobs: each returns (ok, result, witnesses)
# ---------------------------------------------------------------------------

def job_build_tau(ctx: Context, job: dict):
    alg = ctx.algebra()
    bound = job.get("bound", 1)
    labels = alg.basis_labels(bound)
    counts = {"g": 0, "k": 0, "d": 0}
    for l in labels:
        counts[l[0]] += 1
    return True, {"d": ctx.d, "n": ctx.n, "bound": bound, "basis_size": len(labels),
                  "dim_g": len(alg.g_labels()), "counts": counts}, []


def job_verify_bracket(ctx: Context, job: dict):
    alg = ctx.algebra()
    bound = job.get("bound", 1)
    ex = jacobi_exhaustive(alg, bound)
    rnd = jacobi_random(alg, ctx.rng("verify-bracket"), job.get("samples", 100))
    wit = [repr(f) for f in ex["failures"][:5]] + [repr(f) for f in rnd["failures"][:5]]
    res = {"bound": bound, "basis_size": ex["basis_size"], "pairs": ex["pairs"],
           "triples": ex["triples"], "exhaustive_failures": len(ex["failures"]),
           "random_triples": rnd["triples"], "random_failures": len(rnd["failures"]),
           "jacobi_pass": ex["triples"] - len(ex["failures"]) + rnd["triples"] - len(rnd["failures"])}
    return not wit, res, wit


def job_grid_factorize(ctx: Context, job: dict):
    grid = ctx.need_grid()
    gm = GridMatrix(grid)
    det = gm.det()
    det_f = gm.det_from_factors()
    product_ok = gm.factor_product() == gm.X
    rng = ctx.rng("grid-factorize")
    hom = EvalHom(grid, ctx.d + 1)
    wit = []
    round_trips = 0
    for _ in range(job.get("samples", 5)):
        target = [_random_matrix(rng, ctx.d + 1) for _I in grid.indices]
        for dense in (False, True):
            back = phi_apply(hom, phi_preimage(hom, target, dense=dense))
            if back != target:
                wit.append({"route": "dense" if dense else "factored", "target": repr(target)})
            else:
                round_trips += 1
    iso = quotient_iso_check(hom)
    ok = det != 0 and det == det_f and product_ok and iso and not wit
    if det == 0 or det != det_f:
        wit.append({"det": det, "det_from_factors": det_f})
    if not product_ok:
        wit.append("factor product differs from X")
    return ok, {"N": grid.N, "det": det, "det_from_factors": det_f, "factor_product_ok": product_ok,
                "row_perm": gm.row_perm, "col_perm": gm.col_perm, "round_trips": round_trips,
                "quotient_iso": iso}, wit


def _random_matrix(rng, size: int) -> MatrixG:
    """Random traceless matrix with small rational entries."""
    entries = {}
    for i in range(1, size + 1):
        for j in range(1, size + 1):
            if i != j and rng.random() < 0.5:
                entries[(i, j)] = Q(rng.randint(-5, 5), rng.randint(1, 4))
    a = Q(rng.randint(-5, 5), rng.randint(1, 4))
    entries[(1, 1)] = a
    entries[(size, size)] = -a
    return MatrixG(size, entries)


def _module_report(m, bound: int):
    ax = checks.check_module_axiom(m, m.op_labels(bound))
    res = {"provenance": m.provenance, "dim": m.dim, "weight_spaces": len(m.weight_spaces()),
           "module_axiom": {k: ax[k] for k in ("checked", "vacuous", "failures", "ok")}}
    return ax["ok"], res, ax["witnesses"]


def job_build_example_41(ctx: Context, job: dict):
    m = ctx.module("example-41")
    ok, res, wit = _module_report(m, job.get("bound", 1))
    cz = checks.check_center_zero(m, job.get("bound", 1))
    ia = checks.check_ideal_annihilation(m, job.get("bound", 1))
    res["center_zero"] = cz["ok"]
    res["ideal_annihilation"] = ia["ok"]
    return ok and cz["ok"] and ia["ok"], res, wit + cz["witnesses"] + ia["witnesses"]


def job_build_example_42(ctx: Context, job: dict):
    m = ctx.module("example-42")
    bound = job.get("bound", 1)
    ok, res, wit = _module_report(m, bound)
    lv = checks.check_level_constant(m)
    hv = checks.witness_highest_vector(m, "affine", bound)
    res["levels"] = lv["levels"]
    res["highest_vector_found"] = hv is not None
    if hv is None:
        wit.append("no highest vector for the affine split")
    return ok and lv["ok"] and hv is not None, res, wit


def job_gamma(ctx: Context, job: dict):
    g = compute_gamma(ctx.spec())
    divides = [ctx.grid.sizes[j] % k == 0 for j, k in enumerate(g.periods)]
    res = g.to_json()
    res["periods_divide_axis_sizes"] = all(divides)
    wit = [] if all(divides) else [{"periods": list(g.periods), "sizes": list(ctx.grid.sizes)}]
    return all(divides), res, wit


def job_decompose_loop(ctx: Context, job: dict):
    m = ctx.module()
    s = m.decomposition.summary()
    ok = s["components"] == s["index"] and s["direct_sum"] and s["closure"] and s["irreducible_component"]
    wit = [] if ok else [{k: s[k] for k in ("components", "index", "direct_sum", "closure",
                                              "irreducible_component")}]
    return ok, s, wit


def job_integrability(ctx: Context, job: dict):
    m = ctx.module()
    r = checks.check_integrability(m, bound=job.get("bound", 1))
    res = {k: r[k] for k in ("nilpotent", "vacuous", "failed", "max_exponent", "ok")}
    return r["ok"], res, r["witnesses"]


def job_central_ops(ctx: Context, job: dict):
    m = ctx.module()
    r = checks.check_central_operators(m, job.get("bound", 1))
    wit = [] if r["ok"] else [{k: r[k] for k in ("injective", "inverse_ok", "scalar_ok", "proportional")}]
    return r["ok"], r, wit


def job_twist(ctx: Context, job: dict):
    if "matrix" not in job:
        raise ConfigError("twist needs a matrix")
    try:
        auto = TauAutomorphism(job["matrix"])
    except NotUnimodularError as e:
        raise ConfigError(str(e))
    if auto.n != ctx.n:
        raise ConfigError(f"twist matrix must be {ctx.n} x {ctx.n}")
    m = ctx.module()
    t = twist_module(m, auto)
    ok, res, wit = _module_report(t, job.get("bound", 1))
    top = m.highest_key()
    res["matrix"] = auto.to_json()
    res["central_values_before"] = m.central_values(top)
    res["central_values_after"] = t.central_values(top)
    back = twist_module(t, auto.inverse())
    labels = m.op_labels(job.get("bound", 1))
    keys = m.keys()
    same = all(back.act(l, k) == m.act(l, k) for l in labels for k in keys)
    res["round_trip"] = same
    if not same:
        wit.append("twist by A then A^-1 changed the action")
    return ok and same, res, wit


JOBS: Dict[str, Callable] = {
    "build-tau": job_build_tau,
    "verify-bracket": job_verify_bracket,
    "grid-factorize": job_grid_factorize,
    "build-example-41": job_build_example_41,
    "build-example-42": job_build_example_42,
    "gamma": job_gamma,
    "decompose-loop": job_decompose_loop,
    "integrability": job_integrability,
    "central-ops": job_central_ops,
    "twist": job_twist,
}


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def validate_config(cfg) -> List[str]:
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    return [f"{'/'.join(str(p) for p in e.absolute_path) or '<root>'}: {e.message}" for e in errors]


def _run_job(ctx: Context, index: int, job: dict):
    name = job["name"]
    t0 = time.perf_counter_ns()
    try:
        ok, result, witnesses = JOBS[name](ctx, job)
        entry = {"name": name, "status": "pass" if ok else "fail", "result": result,
                 "witnesses": witnesses}
    except (ConfigError, InvalidGridError):
        raise
    except (DegenerateSpecError, PreconditionError, DomainError, ValueError) as e:
        entry = {"name": name, "status": "fail", "result": {},
                 "witnesses": [{"error": type(e).__name__, "message": str(e)}]}
    return index, entry, time.perf_counter_ns() - t0


def run(cfg: dict, seed: int = None, parallel: bool = False) -> dict:
    """Run a validated config; raises ConfigError/InvalidGridError for bad input."""
    seed = cfg.get("seed", 0) if seed is None else seed
    ctx = Context(cfg, seed)
    jobs = cfg["jobs"]
    entries: List = [None] * len(jobs)
    timing = {}
    if parallel and len(jobs) > 1:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(lambda ij: _run_job(ctx, *ij), enumerate(jobs)))
    else:
        results = [_run_job(ctx, i, j) for i, j in enumerate(jobs)]
    for i, entry, ns in results:
        entries[i] = entry
        timing[f"{i}:{entry['name']}"] = ns
    passed = sum(e["status"] == "pass" for e in entries)
    return {"version": REPORT_VERSION, "seed": seed, "jobs": entries,
            "summary": {"passed": passed, "failed": len(entries) - passed},
            "timing": {"unit": "ns", "jobs": timing}}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toroidal", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="JSON job file")
    p.add_argument("--out", help="report path (default: stdout)")
    p.add_argument("--seed", type=int, help="overrides the seed in the config")
    p.add_argument("--quiet", action="store_true", help="no human-readable summary")
    p.add_argument("--list-jobs", action="store_true", help="print the job names and exit")
    p.add_argument("--parallel", action="store_true", help="run independent jobs concurrently")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(message)s", stream=sys.stderr)
    if args.list_jobs:
        print("\n".join(JOBS))
        return EXIT_OK
    if not args.config:
        log.error("--config is required")
        return EXIT_CONFIG
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        log.error("cannot read config: %s", e)
        return EXIT_CONFIG
    errors = validate_config(cfg)
    if errors:
        for e in errors:
            log.error("config error: %s", e)
        return EXIT_CONFIG
    try:
        report = run(cfg, args.seed, args.parallel)
    except (ConfigError, InvalidGridError) as e:
        log.error("config error: %s", e)
        return EXIT_CONFIG
    text = dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not args.quiet:
        for e in report["jobs"]:
            log.info("%-18s %s", e["name"], e["status"].upper())
        log.info("%d passed, %d failed", report["summary"]["passed"], report["summary"]["failed"])
    return EXIT_OK if report["summary"]["failed"] == 0 else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
