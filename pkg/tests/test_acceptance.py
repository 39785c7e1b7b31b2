"""Acceptance suite: nine exact criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""

import json
import random
import subprocess
import sys
import time
from fractions import Fraction as Q
from functools import reduce
from itertools import product
from math import gcd, prod
from pathlib import Path

import pytest
import sympy

sys.path.insert(0, str(Path(__file__).resolve().parent))
import oracles  # noqa: E402

from toroidal import linalg  # noqa: E402
from toroidal.algebra import MatrixG, ToroidalAlgebra, bracket, jacobi_exhaustive, jacobi_random  # noqa: E402
from toroidal.automorphisms import (TauAutomorphism, action_table, normalize_level_vector,  # noqa: E402
                                    twist_module)
from toroidal.evaluation import (EvalHom, GridMatrix, PointGrid, phi_apply, phi_preimage,  # noqa: E402
                                 quotient_iso_check)
from toroidal.exact import InvalidGridError  # noqa: E402
from toroidal.highest_weight import (HighestWeight, PsiFunctional, build_affine_irreducible,  # noqa: E402
                                     build_example_41, build_example_42, build_finite_irreducible,
                                     compute_gamma)
from toroidal.highest_weight import checks  # noqa: E402
from toroidal.roots import ToroidalRootSystem  # noqa: E402

SEED = 20240601


def rng_for(salt):
    return random.Random(f"{SEED}:{salt}")


# 1 ---------------------------------------------------------------------------------

def bracket_soundness():
    parts = []
    for d, n in [(1, 2), (2, 2)]:
        ex = jacobi_exhaustive(ToroidalAlgebra(d, n), 2)
        if ex["failures"]:
            return False, f"(d,n)=({d},{n}) failures {ex['failures'][:2]}"
        parts.append(f"({d},{n}): {ex['triples']} triples, {ex['pairs']} pairs")
    rnd = jacobi_random(ToroidalAlgebra(2, 3), rng_for("jacobi"), 1000)
    if rnd["failures"] or rnd["triples"] != 1000:
        return False, f"random failures {rnd['failures'][:2]}"
    parts.append("(2,3): 1000 random triples")
    return True, "; ".join(parts)


# 2 ---------------------------------------------------------------------------------

def root_identities():
    count = 0
    for d in (1, 2, 3):
        for n in (1, 2, 3):
            R = ToroidalRootSystem(d, n)
            basis = R.weight_basis()
            # pairing table and null roots
            for i in range(1, R.rank + 1):
                for j in range(1, R.rank + 1):
                    if R.pair(R.alpha(i), R.alpha_vee(j)) != R.extended_cartan[j - 1][i - 1]:
                        return False, f"pairing alpha_{i}(alpha_{j}^vee) at ({d},{n})"
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    kd = int(i == j)
                    if (R.pair(R.delta(j), R.C(i)) != 0 or R.pair(R.w(i), R.C(j)) != kd
                            or R.pair(R.delta(j), R.dd(i)) != kd or R.form_dual(R.w(i), R.w(j)) != 0):
                        return False, f"pairing table at ({d},{n})"
            for m in product(range(-2, 3), repeat=n):
                dm = R.delta_m(m)
                if R.form_dual(dm, dm) != 0:
                    return False, f"(delta_m, delta_m) != 0 at m={m}"
            # (lam, alpha_i) against lam(alpha_i^vee), then against real coroots
            for lam in basis:
                for i in range(1, R.rank + 1):
                    if R.form_dual(lam, R.alpha(i)) != R.pair(lam, R.alpha_vee(i)) / R.D_tilde[i - 1]:
                        return False, f"simple-root form identity at ({d},{n})"
            gammas = R.real_roots(1)
            for gamma in gammas:
                g, h = R.real_root_weight(gamma), R.coroot(gamma)
                norm = R.form_dual(g, g)
                for lam in basis:
                    if R.form_dual(lam, g) != norm / 2 * R.pair(lam, h):
                        return False, f"real-root form identity at ({d},{n}) {gamma!r}"
                    count += 1
            # reflections preserve the form
            for gamma in R.simple_real_roots():
                images = [R.reflect(gamma, lam) for lam in basis]
                for a in range(len(basis)):
                    for b in range(a, len(basis)):
                        if R.form_dual(images[a], images[b]) != R.form_dual(basis[a], basis[b]):
                            return False, f"reflection invariance at ({d},{n})"
            M = R.pairing_check_matrix()
            if M != R.expected_check_matrix() or linalg.det(M) == 0:
                return False, f"pairing matrix at ({d},{n})"
    return True, f"9 systems, {count} real-root identities"


# 3 ---------------------------------------------------------------------------------

def _points(rng, k):
    s = set()
    while len(s) < k:
        q = Q(rng.randint(-9, 9), rng.randint(1, 5))
        if q:
            s.add(q)
    return sorted(s)


def _random_matrix(rng, size):
    e = {(i, j): Q(rng.randint(-3, 3), rng.randint(1, 3))
         for i in range(1, size + 1) for j in range(1, size + 1) if i != j}
    a = Q(rng.randint(-3, 3))
    e[(1, 1)] = a
    e[(size, size)] = -a
    return MatrixG(size, e)


def grid_lemma():
    rng = rng_for("grids")
    shapes = [(1,), (5,), (36,), (2, 3), (6, 6), (4, 9), (2, 2, 2), (3, 3, 4), (2, 2, 3, 3), (1, 7, 1)]
    shapes += [tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 3))) for _ in range(10)]
    size = 2
    dimg = size * size - 1
    for shape in shapes:
        grid = PointGrid([_points(rng, k) for k in shape])
        N = grid.N
        gm = GridMatrix(grid)
        det = gm.det()
        oracle = oracles.leibniz_det(gm.X) if N <= 7 else sympy.Matrix(gm.X).det()
        if det == 0 or det != oracle:
            return False, f"det mismatch on shape {shape}"
        if gm.row_perm != list(range(N)) or gm.col_perm != list(range(N)) or gm.factor_product() != gm.X:
            return False, f"factorization mismatch on shape {shape}"
        hom = EvalHom(grid, size)
        target = [_random_matrix(rng, size) for _ in range(N)]
        pre = phi_preimage(hom, target)
        if phi_apply(hom, pre) != target or not set(pre) <= set(grid.exponents):
            return False, f"preimage round trip on shape {shape}"
        if len(grid.exponents) * dimg != N * dimg:
            return False, f"dimension count on shape {shape}"
        if not quotient_iso_check(hom, sample_bound=1 if grid.n >= 3 else 2):
            return False, f"quotient check on shape {shape}"
    try:
        PointGrid([[1, 1]])
    except InvalidGridError as e:
        if "distinct nonzero points required" not in str(e):
            return False, "wrong message for a repeated point"
    else:
        return False, "repeated point accepted"
    if quotient_iso_check(EvalHom(PointGrid.unchecked([[2, 2], [1]]), size)):
        return False, "quotient check passed on a repeated-point grid"
    return True, f"{len(shapes)} grids, N <= 36"


# 4 ---------------------------------------------------------------------------------

def finite_modules():
    weights = [(a,) for a in range(5)] + [(a, b) for a in range(5) for b in range(5) if a + b <= 4]
    for labels in weights:
        m = build_finite_irreducible(labels)
        if m.layer_dims() != oracles.finite_multiplicities(labels):
            return False, f"multiplicities of {labels}"
        if m.dim != oracles.weyl_dimension(labels):
            return False, f"dimension of {labels}"
    return True, f"{len(weights)} highest weights"


# 5 ---------------------------------------------------------------------------------

def example_finite():
    spec = PsiFunctional(PointGrid([[1, -1], [1]]), [HighestWeight((1,))] * 2, 1)
    m = build_example_41(spec, 2)
    ax = checks.check_module_axiom(m, m.op_labels(2))
    cz = checks.check_center_zero(m, 2)
    ia = checks.check_ideal_annihilation(m, 2)
    it = checks.check_integrability(m, bound=2)
    comps = m.decomposition.component_count()
    index = compute_gamma(spec).index
    ok = ax["ok"] and cz["ok"] and ia["ok"] and it["ok"] and it["failed"] == 0 and comps == index == 2
    return ok, (f"axiom {ax['checked']} cases, center {cz['checked']}, ideal {ia['checked']}, "
                f"nilpotent {it['nilpotent']}, components {comps} = index {index}")


# 6 ---------------------------------------------------------------------------------

def example_affine():
    depth = 3
    spec = PsiFunctional(PointGrid([[1]]), [HighestWeight((0,), 1)], 1)
    m = build_example_42(spec, 2, depth, 1)
    alg = m.algebra
    ax = checks.check_module_axiom(m, m.op_labels(2))
    if not ax["ok"]:
        return False, f"module axiom {ax['witnesses']}"
    total_level = sum(w.level for w in spec.weights)
    for v in m.keys():
        if m.act_element(alg.K(1), {v: Q(1)}) != {v: Q(total_level)}:
            return False, f"K_1 is not the total level on {v}"
        for mm in product(range(-2, 3), repeat=2):
            for i in (1, 2):
                if i == 1 and mm[0] == 0:
                    continue
                r = m.act_element(alg.K(i, mm), {v: Q(1)})
                if r:
                    return False, f"t^{mm} K_{i} acts nonzero"
    w = checks.witness_highest_vector(m, "affine", 1)
    if not w or not checks.is_killed(m, w, checks.split_labels(m, "affine", 1)):
        return False, "no highest vector found"
    want = oracles.affine_multiplicities((0,), 1, depth)
    got = build_affine_irreducible((0,), 1, depth).layer_dims()
    if got != want or m.tensor.factors[0].layer_dims() != want:
        return False, "affine multiplicities differ from the oracle"
    for r in m.degrees():
        dims = {}
        for key in m.keys():
            if key[1] == r:
                eta = key[0][0][0]
                dims[eta] = dims.get(eta, 0) + 1
        if dims != want:
            return False, f"graded dimensions at r={r}"
    return True, f"axiom {ax['checked']} cases, level {total_level}, {len(want)} layers match"


# 7 ---------------------------------------------------------------------------------

def gamma_machinery():
    one = compute_gamma(PsiFunctional(PointGrid([[1, -1]]), [HighestWeight((1,))] * 2, 1))
    if [list(b) for b in one.basis] != [[2]] or one.periods != (2,):
        return False, f"Gamma for points (1,-1) is {one.to_json()}"
    spec = PsiFunctional(PointGrid([[1, -1], [1]]), [HighestWeight((1,))] * 2, 1)
    comps = build_example_41(spec, 1).decomposition.component_count()
    if comps != 2:
        return False, f"{comps} components"
    rng = rng_for("gamma")
    for _ in range(50):
        axes = []
        for _ in range(rng.randint(1, 2)):
            b = Q(rng.randint(1, 5), rng.randint(1, 3))
            axes.append(rng.choice([[b], [b, -b], _points(rng, 2), [b, -b, b + 1], _points(rng, 3)]))
        grid = PointGrid(axes)
        d = rng.randint(1, 2)
        weights = [HighestWeight(tuple(rng.randint(0, 2) for _ in range(d))) for _ in range(grid.N)]
        if all(w.is_zero() for w in weights):
            weights[0] = HighestWeight((1,) + (0,) * (d - 1))
        g = compute_gamma(PsiFunctional(grid, weights, d))
        if any(Nj % kj for kj, Nj in zip(g.periods, grid.sizes)):
            return False, f"period does not divide size for {axes}"
    return True, "Gamma = 2Z, 2 components, 50 random specs"


# 8 ---------------------------------------------------------------------------------

def _unimodular(rng, n):
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(6):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        M[i] = [a + c * b for a, b in zip(M[i], M[j])]
    return M


def automorphism_suite():
    rng = rng_for("auto")
    for n in (2, 3):
        alg = ToroidalAlgebra(1, n)
        for _ in range(5):
            M = _unimodular(rng, n)
            A = TauAutomorphism(M)
            for _ in range(10):
                x, y = alg.random_element(rng, 2, 3), alg.random_element(rng, 2, 3)
                if A.apply(bracket(x, y)) != bracket(A.apply(x), A.apply(y)):
                    return False, f"bracket not preserved by {M}"
                for m in x.degrees():
                    Am = A.degree(m)
                    if not A.apply(x.degree_part(m)).degrees() <= {Am}:
                        return False, f"degree equivariance fails for {M}"
            for m in product(range(-2, 3), repeat=n):
                image = alg.zero()
                for i in range(1, n + 1):
                    image = image + A.apply(alg.K(i, m)).scale(m[i - 1])
                if not image.is_zero():
                    return False, f"relation not preserved at {m}"
        for _ in range(20):
            k = rng.randint(0, n - 1)
            vec = [0] * k + [rng.randint(-6, 6) for _ in range(n - k)]
            A, ell = normalize_level_vector(vec, k)
            if abs(A.matrix.det()) != 1 or ell != reduce(gcd, [abs(v) for v in vec]):
                return False, f"level vector {vec}"
            if A.matrix.T @ tuple(vec) != tuple([0] * (n - 1) + [ell]):
                return False, f"level vector image {vec}"
    spec = PsiFunctional(PointGrid([[1]]), [HighestWeight((0,), 1)], 1)
    m = build_example_42(spec, 2, 2, 1)
    A = TauAutomorphism([[2, 1], [1, 1]])
    labels = m.op_labels(1)
    if action_table(twist_module(twist_module(m, A), A.inverse()), labels) != action_table(m, labels):
        return False, "double twist differs"
    return True, "n = 2, 3"


# 9 ---------------------------------------------------------------------------------

def _cli(args, cwd):
    return subprocess.run([sys.executable, "-m", "toroidal", *args], capture_output=True, text=True, cwd=cwd)


def cli_determinism(tmp):
    cfg = {"algebra": {"type": "A", "d": 1, "n": 2}, "grid": [["1", "-1"], ["1/2"]],
           "weights": [{"basis": "finite", "labels": [1]}, {"basis": "finite", "labels": [2]}],
           "depth": 1, "seed": 11,
           "jobs": [{"name": "verify-bracket", "bound": 1, "samples": 20}, {"name": "grid-factorize"},
                    {"name": "gamma"}, {"name": "build-example-41"}, {"name": "integrability"}]}
    path = tmp / "cfg.json"
    path.write_text(json.dumps(cfg))
    reports = []
    for i in range(2):
        out = tmp / f"r{i}.json"
        r = _cli(["--config", str(path), "--out", str(out), "--quiet"], tmp)
        if r.returncode != 0:
            return False, f"exit {r.returncode}: {r.stderr.strip()}"
        rep = json.loads(out.read_text())
        rep.pop("timing")
        reports.append(json.dumps(rep, sort_keys=True))
    if reports[0] != reports[1]:
        return False, "reports differ"
    bad = dict(cfg, grid=[["1", "1"], ["1"]])
    path.write_text(json.dumps(bad))
    r = _cli(["--config", str(path)], tmp)
    if r.returncode != 2 or "distinct nonzero points required" not in r.stderr:
        return False, f"bad grid: exit {r.returncode}, {r.stderr.strip()}"
    return True, "identical reports, bad grid exits 2"


CRITERIA = [
    (1, "bracket soundness", bracket_soundness, 30),
    (2, "root data identities", root_identities, 5),
    (3, "grid matrix and evaluation", grid_lemma, 60),
    (4, "finite modules", finite_modules, 60),
    (5, "finite-type loop module", example_finite, 120),
    (6, "affine-type loop module", example_affine, 300),
    (7, "Gamma lattice", gamma_machinery, 30),
    (8, "automorphisms", automorphism_suite, 10),
    (9, "CLI determinism", cli_determinism, None),
]


def run_criterion(fn, *args):
    t0 = time.perf_counter()
    try:
        ok, detail = fn(*args)
    except Exception as e:          # a crash is a failure with its message as the witness
        ok, detail = False, f"{type(e).__name__}: {e}"
    return ok, detail, time.perf_counter() - t0


def report_line(num, name, ok, detail, secs, limit):
    within = limit is None or secs < limit
    status = "PASS" if ok and within else "FAIL"
    lim = f" (limit {limit}s)" if limit else ""
    return f"[{status}] criterion {num}: {name} -- {detail} [{secs:.1f}s{lim}]"


@pytest.mark.parametrize("num,name,fn,limit", CRITERIA, ids=[f"c{c[0]}" for c in CRITERIA])
def test_criterion(num, name, fn, limit, tmp_path, capsys):
    args = (tmp_path,) if fn is cli_determinism else ()
    ok, detail, secs = run_criterion(fn, *args)
    with capsys.disabled():
        print("\n" + report_line(num, name, ok, detail, secs, limit))
    assert ok, detail
    if limit is not None:
        assert secs < limit, f"took {secs:.1f}s, limit {limit}s"


if __name__ == "__main__":
    import tempfile
    failed = 0
    for num, name, fn, limit in CRITERIA:
        with tempfile.TemporaryDirectory() as d:
            args = (Path(d),) if fn is cli_determinism else ()
            ok, detail, secs = run_criterion(fn, *args)
        line = report_line(num, name, ok, detail, secs, limit)
        failed += line.startswith("[FAIL]")
        print(line)
    sys.exit(1 if failed else 0)
