"""Exact checks on constructed modules.

Every check treats out-of-window results as vacuous: they are counted
separately and never read as zero.
"""

from __future__ import annotations

from fractions import Fraction as Q
from itertools import product
from typing import Dict, List, Sequence

from .. import linalg
from ..exact import _poly_from_roots
from ..roots import RealRoot
from .irreducible import OUT, IrreducibleModule
from .loop import TauModule


def _fmt_key(key):
    return repr(key)


def _add(acc, vec, c=1):
    for k, v in vec.items():
        acc[k] = acc.get(k, 0) + c * v


def _clean(vec):
    return {k: v for k, v in vec.items() if v}


def _apply(module, label, vec):
    out = {}
    for k, c in vec.items():
        r = module.act(label, k)
        if r is OUT:
            return OUT
        _add(out, r, c)
    return _clean(out)


def _bracket_fn(module):
    if hasattr(module, "bracket_labels"):
        return module.bracket_labels
    return module.alg.bracket


# ---------------------------------------------------------------------------
# module axiom
# ---------------------------------------------------------------------------

def check_module_axiom(module, ops: Sequence, keys: Sequence = None, max_failures: int = 5) -> dict:
    """[a, b] v = a(b v) - b(a v) for all pairs of operators and basis vectors."""
    keys = module.keys() if keys is None else keys
    br = _bracket_fn(module)
    checked = vacuous = 0
    failures = []
    ops = list(ops)
    act = module.act
    for ia, a in enumerate(ops):
        for b in ops[ia + 1:]:
            ab = br(a, b)
            for v in keys:
                bv = act(b, v)
                av = act(a, v)
                if bv is OUT or av is OUT:
                    vacuous += 1
                    continue
                lhs = {}
                ok = True
                for l, c in ab.items():
                    r = act(l, v)
                    if r is OUT:
                        ok = False
                        break
                    _add(lhs, r, c)
                if ok:
                    rhs = {}
                    for k, x in bv.items():
                        r = act(a, k)
                        if r is OUT:
                            ok = False
                            break
                        _add(rhs, r, x)
                if ok:
                    for k, x in av.items():
                        r = act(b, k)
                        if r is OUT:
                            ok = False
                            break
                        _add(rhs, r, -x)
                if not ok:
                    vacuous += 1
                    continue
                checked += 1
                if _clean(lhs) != _clean(rhs):
                    if len(failures) < max_failures:
                        failures.append({"a": repr(a), "b": repr(b), "v": _fmt_key(v)})
                    else:
                        failures.append(None)
    return {"checked": checked, "vacuous": vacuous, "failures": len(failures),
            "witnesses": [f for f in failures if f], "ok": not failures}


# ---------------------------------------------------------------------------
# center, annihilation
# ---------------------------------------------------------------------------

def check_center_zero(module: TauModule, bound: int, keys=None) -> dict:
    keys = module.keys() if keys is None else keys
    bad = []
    labels = [l for l in module.op_labels(bound) if l[0] == "k"]
    for lab in labels:
        for v in keys:
            r = module.act(lab, v)
            if r is OUT or r:
                bad.append({"z": repr(lab), "v": _fmt_key(v)})
    return {"checked": len(labels) * len(keys), "ok": not bad, "witnesses": bad[:5]}


def ideal_elements(module: TauModule, bound: int) -> List:
    """X (x) P_j(t_j) t^m for X in a basis of G', every axis j and |m| <= bound."""
    alg = module.algebra
    grid = module.spec.grid
    out = []
    offset = 1 if module.affine else 0
    for j, pts in enumerate(grid.axes):
        coeffs = _poly_from_roots(list(pts))     # low -> high
        for mb in product(range(-bound, bound + 1), repeat=grid.n):
            shifts = []
            for k, c in enumerate(coeffs):
                if c:
                    m = list(mb)
                    m[j] += k
                    shifts.append((tuple(m), c))
            k1s = range(-bound, bound + 1) if module.affine else [0]
            for k1 in k1s:
                for key in alg.g_labels():
                    x = alg.zero()
                    for m, c in shifts:
                        full = (k1,) + m if offset else m
                        x = x + alg.from_label(("g", full) + key).scale(c)
                    out.append(x)
                if module.affine and k1 == 0:
                    x = alg.zero()
                    for m, c in shifts:
                        x = x + alg.K(1, (0,) + m).scale(c)
                    out.append(x)
    return out


def _forget_degree(module: TauModule, x, key):
    """x acting on V(psi) itself (the loop degree forgotten)."""
    tensor = module.tensor
    out = {}
    for lab, c in x.coordinates().items():
        if lab[0] == "g":
            m = lab[1]
            k1, mbar = (m[0], m[1:]) if module.affine else (0, m)
            kl = ("E", lab[3], lab[4], k1) if lab[2] == "E" else ("H", lab[3], k1)
            r = tensor.act(kl, mbar, key)
        elif lab[0] == "k" and module.affine and lab[2] == 1 and lab[1][0] == 0:
            r = tensor.act(("C",), lab[1][1:], key)
        elif lab[0] == "d":
            raise ValueError("derivations are not part of G' (x) A")
        else:
            r = {}
        if r is OUT:
            return OUT
        _add(out, r, c)
    return _clean(out)


def check_ideal_annihilation(module: TauModule, bound: int = 1) -> dict:
    """G' (x) I kills V(psi), I generated by prod_k (t_j - a_jk).

    The statement concerns the evaluation module V(psi); on the graded loop
    module the terms of P_j(t_j) t^m land in different degrees.
    """
    keys = module.tensor.keys()
    checked = vacuous = 0
    bad = []
    for x in ideal_elements(module, bound):
        for v in keys:
            r = _forget_degree(module, x, v)
            if r is OUT:
                vacuous += 1
                continue
            checked += 1
            if r:
                bad.append({"x": repr(x), "v": _fmt_key(v)})
    return {"checked": checked, "vacuous": vacuous, "ok": not bad, "witnesses": bad[:5]}


# ---------------------------------------------------------------------------
# integrability
# ---------------------------------------------------------------------------

def real_root_labels(module, bound: int) -> List:
    if hasattr(module, "algebra"):
        return [l for l in module.op_labels(bound) if l[0] == "g" and l[2] == "E"]
    return module.alg.real_root_labels(bound)


def check_integrability(module, ops: Sequence = None, keys=None, bound: int = 1,
                        max_power: int = 64) -> dict:
    """For each real root vector x and basis vector v find k with x^k v = 0.

    Results leaving the truncation count as vacuous; exceeding ``max_power``
    is a failure and is reported with a witness.
    """
    ops = real_root_labels(module, bound) if ops is None else ops
    keys = module.keys() if keys is None else keys
    nilpotent = vacuous = 0
    failed = []
    max_k = 0
    exponents = {}
    for lab in ops:
        for v in keys:
            vec = {v: Q(1)}
            outcome = None
            for k in range(1, max_power + 1):
                vec = _apply(module, lab, vec)
                if vec is OUT:
                    outcome = "vacuous"
                    break
                if not vec:
                    outcome = k
                    break
            if outcome == "vacuous":
                vacuous += 1
            elif outcome is None:
                failed.append({"x": repr(lab), "v": _fmt_key(v)})
            else:
                nilpotent += 1
                max_k = max(max_k, outcome)
                exponents[(lab, v)] = outcome
    return {"nilpotent": nilpotent, "vacuous": vacuous, "failed": len(failed),
            "witnesses": failed[:5], "max_exponent": max_k, "ok": not failed,
            "exponents": exponents}


def nilpotency_exponent(module, label, key, max_power: int = 64):
    """Smallest k with label^k key = 0, OUT if the truncation is left first, None if not found."""
    vec = {key: Q(1)}
    for k in range(1, max_power + 1):
        vec = _apply(module, label, vec)
        if vec is OUT:
            return OUT
        if not vec:
            return k
    return None


# ---------------------------------------------------------------------------
# highest vectors
# ---------------------------------------------------------------------------

def split_labels(module: TauModule, split: str, bound: int) -> List:
    """Positive (or, with the ``-reversed`` suffix, negative) loop operators of a split."""
    reverse = split.endswith("-reversed")
    base = split[: -len("-reversed")] if reverse else split
    out = []
    for l in module.op_labels(bound):
        if l[0] != "g":
            continue
        m = l[1]
        if base == "finite":
            if l[2] != "E":
                continue
            positive = l[3] < l[4]
        elif base == "affine":
            if not module.affine:
                raise ValueError("the affine split needs an affine-flavour module")
            if m[0] > 0:
                positive = True
            elif m[0] < 0:
                positive = False
            else:
                if l[2] != "E":
                    continue
                positive = l[3] < l[4]
        else:
            raise ValueError(f"unknown split {split!r}")
        if positive != reverse:
            out.append(l)
    return out


def witness_highest_vector(module: TauModule, split: str = "finite", bound: int = 1):
    """A weight vector killed by every operator of the split, or None.

    Weight spaces are scanned from the top (bottom for reversed splits); a space
    where some operator leaves the truncation cannot be certified and is skipped.
    """
    ops = split_labels(module, split, bound)
    spaces = module.weight_spaces()
    tensor = module.tensor

    def height(wk):
        ks = spaces[wk]
        return sum(sum(fk[0]) for fk in ks[0][0])

    reverse = split.endswith("-reversed")
    order = sorted(spaces, key=lambda wk: ((-height(wk) if reverse else height(wk)),
                                          sum(abs(x) for x in wk[1]), wk[1]))
    for wk in order:
        keys = spaces[wk]
        cols = []
        skip = False
        for v in keys:
            col = {}
            for li, lab in enumerate(ops):
                r = module.act(lab, v)
                if r is OUT:
                    skip = True
                    break
                for k, x in r.items():
                    col[(li, k)] = x
            if skip:
                break
            cols.append(col)
        if skip:
            continue
        rows = sorted({k for c in cols for k in c}, key=repr)
        if not rows:
            return {keys[0]: Q(1)}
        mat = [[c.get(k, Q(0)) for c in cols] for k in rows]
        ker = linalg.nullspace(mat)
        if ker:
            return {k: x for k, x in zip(keys, ker[0]) if x}
    return None


def is_killed(module: TauModule, vec: Dict, ops: Sequence) -> bool:
    for lab in ops:
        r = _apply(module, lab, vec)
        if r is OUT or r:
            return False
    return True


# ---------------------------------------------------------------------------
# central operators
# ---------------------------------------------------------------------------

def _operator_block(module: TauModule, label, src: List, dst: List):
    idx = {k: i for i, k in enumerate(dst)}
    M = [[Q(0)] * len(src) for _ in dst]
    for j, v in enumerate(src):
        r = module.act(label, v)
        if r is OUT:
            return OUT
        for k, x in r.items():
            if k not in idx:
                return OUT
            M[idx[k]][j] = Q(x)
    return M


def check_central_operators(module: TauModule, bound: int = 1) -> dict:
    """Injectivity with explicit inverses for nonzero central operators, scalar action of
    zero-degree K_i, and proportionality of nonzero central operators of equal degree."""
    spaces = module.weight_spaces()
    labels = [l for l in module.op_labels(bound) if l[0] == "k"]
    report = {"zero": [], "nonzero": [], "injective": True, "inverse_ok": True,
              "scalars": {}, "scalar_ok": True, "proportional": True, "ratios": {}}
    flat: Dict[tuple, Dict] = {}
    for lab in labels:
        m = lab[1]
        shift = module.r_shift(m)
        acts_nonzero = False
        data = {}
        for (w, r), src in spaces.items():
            r2 = tuple(a + b for a, b in zip(r, shift))
            dst = spaces.get((w, r2))
            if dst is None:
                continue
            M = _operator_block(module, lab, src, dst)
            if M is OUT:
                continue
            data[(w, r)] = M
            if any(x for row in M for x in row):
                acts_nonzero = True
        flat[lab] = data
        if not acts_nonzero:
            report["zero"].append(repr(lab))
            continue
        report["nonzero"].append(repr(lab))
        for key, M in data.items():
            if linalg.rank(M) < len(M[0]):
                report["injective"] = False
                continue
            T = linalg.inverse(M)
            n = len(M)
            if linalg.matmul(T, M) != linalg.identity(n) or linalg.matmul(M, T) != linalg.identity(n):
                report["inverse_ok"] = False
        if not any(m):
            scal = set()
            for key, M in data.items():
                c = M[0][0]
                if M != [[c if i == j else Q(0) for j in range(len(M))] for i in range(len(M))]:
                    report["scalar_ok"] = False
                scal.add(c)
            if len(scal) != 1:
                report["scalar_ok"] = False
            report["scalars"][repr(lab)] = [str(c) for c in sorted(scal)]
    # equal-degree nonzero operators are proportional
    by_deg: Dict[tuple, List] = {}
    for lab in labels:
        if repr(lab) in report["nonzero"]:
            by_deg.setdefault(lab[1], []).append(lab)
    for m, labs in by_deg.items():
        if len(labs) < 2:
            continue
        common = sorted(set.intersection(*(set(flat[l]) for l in labs)), key=repr)
        vecs = [[x for key in common for row in flat[l][key] for x in row] for l in labs]
        if linalg.rank(vecs) > 1:
            report["proportional"] = False
        else:
            base = vecs[0]
            piv = next(i for i, x in enumerate(base) if x)
            report["ratios"][repr(m)] = [str(v[piv] / base[piv]) for v in vecs]
    report["ok"] = report["injective"] and report["inverse_ok"] and report["scalar_ok"] and report["proportional"]
    return report


# ---------------------------------------------------------------------------
# weight identities
# ---------------------------------------------------------------------------

def check_coroot_integrality(module: TauModule, bound: int = 2) -> dict:
    """mu(gamma^vee) is an integer for all weights mu and real gamma with |m| <= bound."""
    R = module.algebra.roots
    coroots = [R.coroot(g) for g in R.real_roots(bound)]
    weights = {module.weight_key(k): module.weight_vec(k) for k in module.keys()}
    bad = []
    for wk, mu in weights.items():
        for h in coroots:
            if R.pair(mu, h).denominator != 1:
                bad.append({"weight": repr(wk), "coroot": repr(h)})
    return {"checked": len(weights) * len(coroots), "ok": not bad, "witnesses": bad[:5]}


def check_level_constant(module: TauModule) -> dict:
    """mu(C_i) is one constant over all weights."""
    R = module.algebra.roots
    values = set()
    for k in module.keys():
        mu = module.weight_vec(k)
        values.add(tuple(R.pair(mu, R.C(i)) for i in range(1, module.n + 1)))
    return {"ok": len(values) == 1, "levels": [[str(x) for x in v] for v in sorted(values)]}


def check_weyl_symmetry(module: IrreducibleModule) -> dict:
    """dim V_mu = dim V_{s_i mu} for every simple reflection of a finite module."""
    alg = module.alg
    if alg.affine:
        raise ValueError("only finite modules are supported")
    mult = module.weight_multiplicities()
    bad = []
    for mu, dim in mult.items():
        for i in alg.simple:
            c = mu[i - 1]
            s = tuple(mu[p - 1] - c * alg.a(p, i) for p in range(1, alg.d + 1))
            if mult.get(s, 0) != dim:
                bad.append({"weight": [str(x) for x in mu], "reflection": i})
    return {"ok": not bad, "witnesses": bad[:5]}
