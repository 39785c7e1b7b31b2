"""Loop modules V(psi) (x) A as tau-modules, and their decomposition into the
submodules U v(c) generated by the highest vector placed in degree c.

Two flavours are provided:

* finite: G is sl(d+1), the grid lives on all n axes, the center acts by 0 and
  d_i reads off the loop degree r_i;
* affine: G is affine sl(d+1) with loop variable t_1, the grid lives on axes
  2..n, and tau acts through the map that keeps t^m K_1 (m_1 = 0) as
  C_1 (x) t^mbar and kills every other central basis element.
"""

from __future__ import annotations

from fractions import Fraction as Q
from itertools import product
from typing import Dict, List, Sequence

from .. import linalg
from ..algebra import LabelBrackets, TauElement, ToroidalAlgebra
from ..roots import WeightVec
from .irreducible import OUT
from .tensor import PsiFunctional, TensorModule, compute_gamma


def _add_into(acc: Dict, vec: Dict, c=1):
    for k, v in vec.items():
        acc[k] = acc.get(k, 0) + c * v


def _clean(vec: Dict) -> Dict:
    return {k: v for k, v in vec.items() if v}


class TauModule:
    """V(psi) (x) A with tau acting; vectors (tensor key, r) with r in Z^n or Z^(n-1)."""

    def __init__(self, spec: PsiFunctional, n: int, depth: int, window: int, affine: bool):
        self.spec = spec
        self.affine = affine
        self.n = n
        self.d = spec.d
        self.depth = depth
        self.window = window
        if affine:
            if not spec.affine:
                raise ValueError("affine flavour needs affine highest weights")
            if spec.grid.n != n - 1:
                raise ValueError("the grid must live on axes 2..n")
        else:
            if spec.affine:
                raise ValueError("finite flavour needs finite highest weights")
            if spec.grid.n != n:
                raise ValueError("the grid must live on all n axes")
        self.algebra = ToroidalAlgebra(spec.d, n)
        self.tensor = TensorModule(spec, depth if affine else 0)
        self.rdim = n - 1 if affine else n
        self.provenance = "affine-loop" if affine else "finite-loop"
        self._brackets = LabelBrackets(self.algebra)
        self._memo: Dict[tuple, object] = {}
        self._decomposition = None

    # basis ------------------------------------------------------------------------
    def degrees(self) -> List[tuple]:
        return list(product(range(-self.window, self.window + 1), repeat=self.rdim))

    def keys(self) -> List[tuple]:
        tk = self.tensor.keys()
        return [(k, r) for r in self.degrees() for k in tk]

    @property
    def dim(self) -> int:
        return self.tensor.dim * len(self.degrees())

    def in_window(self, key) -> bool:
        return all(abs(x) <= self.window for x in key[1])

    # action -------------------------------------------------------------------------
    def _shifted(self, res, r, shift):
        if res is OUT:
            return OUT
        r2 = tuple(a + b for a, b in zip(r, shift))
        return {(k, r2): v for k, v in res.items()}

    def act(self, label: tuple, key):
        """A tau basis label applied to a basis vector; result may leave the window."""
        mk = (label, key)
        res = self._memo.get(mk)
        if res is not None:
            return res
        tk, r = key
        kind = label[0]
        if kind == "g":
            m = label[1]
            if self.affine:
                k1, shift = m[0], m[1:]
            else:
                k1, shift = 0, m
            kl = ("E", label[3], label[4], k1) if label[2] == "E" else ("H", label[3], k1)
            res = self._shifted(self.tensor.act(kl, shift, tk), r, shift)
        elif kind == "k":
            m, i = label[1], label[2]
            if self.affine and i == 1 and m[0] == 0:
                res = self._shifted(self.tensor.act(("C",), m[1:], tk), r, m[1:])
            else:
                res = {}
        elif kind == "d":
            i = label[1]
            if self.affine and i == 1:
                res = self.tensor.act(("D",), None, tk)
                res = OUT if res is OUT else {(k, r): v for k, v in res.items()}
            else:
                v = r[i - 2] if self.affine else r[i - 1]
                res = {key: v} if v else {}
        else:
            raise ValueError(f"unknown label {label!r}")
        self._memo[mk] = res
        return res

    def act_vector(self, label, vec: Dict):
        out: Dict = {}
        for k, c in vec.items():
            r = self.act(label, k)
            if r is OUT:
                return OUT
            _add_into(out, r, c)
        return _clean(out)

    def act_element(self, x: TauElement, vec: Dict):
        out: Dict = {}
        for lab, c in x.coordinates().items():
            r = self.act_vector(lab, vec)
            if r is OUT:
                return OUT
            _add_into(out, r, c)
        return _clean(out)

    def bracket_labels(self, a, b) -> Dict:
        br = self._brackets
        return {br.labels[l]: c for l, c in br.get(br.id(a), br.id(b))}

    def r_shift(self, m) -> tuple:
        """Change of the grid degree r under an operator of loop degree m."""
        m = tuple(m)
        return m[1:] if self.affine else m

    def op_labels(self, bound: int) -> List[tuple]:
        return self.algebra.basis_labels(bound)

    # weights --------------------------------------------------------------------------
    def weight_values(self, key) -> List[Q]:
        """Values on (alpha_1^vee..alpha_{d+n}^vee, d_1..d_n)."""
        tk, r = key
        tw = self.tensor.weight_of(tk)
        d, n = self.d, self.n
        hs = list(tw[:d])
        hbeta = sum(hs, Q(0))
        ks = [Q(0)] * n
        ds = [Q(0)] * n
        if self.affine:
            ks[0] = tw[d]
            ds[0] = tw[d + 1]
            for j in range(1, n):
                ds[j] = Q(r[j - 1])
        else:
            ds = [Q(x) for x in r]
        return hs + [k - hbeta for k in ks] + ds

    def weight_vec(self, key) -> WeightVec:
        return self.algebra.roots.weight_from_values(self.weight_values(key))

    def weight_key(self, key) -> tuple:
        return (self.tensor.weight_of(key[0]), key[1])

    def weight_spaces(self) -> Dict[tuple, List[tuple]]:
        out: Dict[tuple, List[tuple]] = {}
        for k in self.keys():
            out.setdefault(self.weight_key(k), []).append(k)
        return out

    def central_values(self, key) -> List[Q]:
        """Scalars by which K_1..K_n act on the weight space of ``key``."""
        tw = self.tensor.weight_of(key[0])
        vals = [Q(0)] * self.n
        if self.affine:
            vals[0] = tw[self.d]
        return vals

    def highest_key(self):
        return (self.tensor.highest_key(), (0,) * self.rdim)

    # decomposition -----------------------------------------------------------------------
    @property
    def decomposition(self) -> "LoopDecomposition":
        if self._decomposition is None:
            self._decomposition = LoopDecomposition(self)
        return self._decomposition


def _span_basis(vectors: List[List[Q]]) -> List[List[Q]]:
    if not vectors:
        return []
    red, piv = linalg.rref(vectors)
    return [red[i] for i in range(len(piv))]


class LoopDecomposition:
    """U v(c) for coset representatives c of Z^k / Gamma, computed exactly.

    W[(mu, c)] is the degree-c part of U v(0) inside V(psi)_mu.  Because U v(0)
    is Gamma-periodic, the representatives c carry all the information, and the
    spans of {(a_I^m)_I : m in c + Gamma} are obtained as a_I^c times the
    subalgebra of Q^N generated by (a_I^{+-g})_I for g in a basis of Gamma.
    """

    def __init__(self, module: TauModule):
        self.module = module
        tensor = module.tensor
        self.gamma = compute_gamma(module.spec)
        self.reps = self.gamma.coset_reps()
        grid = module.spec.grid
        N = grid.N
        gens = []
        for b in self.gamma.basis:
            gens.append(grid.power_vector(b))
            gens.append(grid.power_vector([-x for x in b]))
        span = _span_basis([[Q(1)] * N])
        while True:
            prods = list(span)
            for s in span:
                for g in gens:
                    prods.append([x * y for x, y in zip(s, g)])
            new = _span_basis(prods)
            if len(new) == len(span):
                break
            span = new
        self.S0 = span
        self._S: Dict[tuple, List[List[Q]]] = {}
        self.spaces = tensor.weight_spaces()
        self.height = {}
        for w, ks in self.spaces.items():
            self.height[w] = sum(sum(fk[0]) for fk in ks[0])
        self.order = sorted(self.spaces, key=lambda w: (self.height[w], w))
        self.top = tensor.highest_weight()
        self.W: Dict[tuple, List[Dict]] = {}
        self._build()

    def S(self, c: Sequence[int]) -> List[List[Q]]:
        c = self.gamma.reduce(c)
        if c not in self._S:
            a = self.module.spec.grid.power_vector(c)
            self._S[c] = [[x * y for x, y in zip(a, s)] for s in self.S0]
        return self._S[c]

    def _sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def _reduce(self, weight, vecs: List[Dict]) -> List[Dict]:
        keys = self.spaces.get(weight)
        if keys is None or not vecs:
            return []
        rows = [[v.get(k, Q(0)) for k in keys] for v in vecs]
        return [{k: x for k, x in zip(keys, row) if x} for row in _span_basis(rows)]

    def _apply(self, label, s, vec: Dict):
        out: Dict = {}
        tensor = self.module.tensor
        for k, c in vec.items():
            r = tensor.act_weighted(label, s, k)
            if r is OUT:
                return OUT
            _add_into(out, r, c)
        return _clean(out)

    def _lowering(self):
        alg = self.module.tensor.alg
        return [alg.f(i) for i in alg.simple]

    def _raising(self):
        alg = self.module.tensor.alg
        return [alg.e(i) for i in alg.simple]

    def _build(self):
        tensor = self.module.tensor
        zero_rep = self.gamma.reduce((0,) * self.gamma.n)
        pending: Dict[tuple, List[Dict]] = {}
        pending[(self.top, zero_rep)] = [{tensor.highest_key(): Q(1)}]
        for w in self.order:
            for c in self.reps:
                basis = self._reduce(w, pending.pop((w, c), []))
                self.W[(w, c)] = basis
                if not basis:
                    continue
                for lab in self._lowering():
                    for c2 in self.reps:
                        for s in self.S(self._sub(c2, c)):
                            for v in basis:
                                img = self._apply(lab, s, v)
                                if img is OUT or not img:
                                    continue
                                tw = tensor.weight_of(next(iter(img)))
                                pending.setdefault((tw, c2), []).append(img)

    # checks --------------------------------------------------------------------------------
    def component_count(self) -> int:
        return len(self.reps)

    def dims(self) -> Dict[tuple, int]:
        return {k: len(v) for k, v in self.W.items()}

    def direct_sum_ok(self) -> dict:
        """At each weight, the components at a fixed degree fill V(psi)_mu with no overlap."""
        bad = []
        for w, keys in self.spaces.items():
            vecs = [v for c in self.reps for v in self.W[(w, c)]]
            total = len(vecs)
            rk = linalg.rank([[v.get(k, Q(0)) for k in keys] for v in vecs]) if vecs else 0
            if total != len(keys) or rk != len(keys):
                bad.append({"weight": [str(x) for x in w], "dim": len(keys), "sum": total, "rank": rk})
        return {"ok": not bad, "witnesses": bad}

    def _inside(self, weight, c, vec) -> bool:
        basis = self.W.get((weight, c), [])
        keys = self.spaces.get(weight, [])
        if not vec:
            return True
        rows = [[b.get(k, Q(0)) for k in keys] for b in basis]
        return linalg.rank(rows + [[vec.get(k, Q(0)) for k in keys]]) == len(basis)

    def closure_ok(self) -> dict:
        """Raising, lowering and Cartan loop operators keep U v(0) inside itself."""
        tensor = self.module.tensor
        alg = tensor.alg
        labels = self._lowering() + self._raising() + [("H", p, 0) for p in range(1, alg.d + 1)]
        bad = []
        for (w, c), basis in self.W.items():
            for lab in labels:
                for c2 in self.reps:
                    for s in self.S(self._sub(c2, c)):
                        for v in basis:
                            img = self._apply(lab, s, v)
                            if img is OUT or not img:
                                continue
                            tw = tensor.weight_of(next(iter(img)))
                            if not self._inside(tw, c2, img):
                                bad.append({"op": list(map(str, lab)), "from": [str(x) for x in w],
                                            "coset": list(c)})
        return {"ok": not bad, "witnesses": bad[:5]}

    def singular_vectors_only_on_top(self) -> dict:
        """No vector outside the top weight is killed by every raising loop operator."""
        tensor = self.module.tensor
        bad = []
        for (w, c), basis in self.W.items():
            if w == self.top or not basis:
                continue
            cols = []
            for v in basis:
                col: Dict = {}
                for li, lab in enumerate(self._raising()):
                    for c2 in self.reps:
                        for si, s in enumerate(self.S(self._sub(c2, c))):
                            img = self._apply(lab, s, v)
                            if img is OUT:
                                continue
                            for k, x in img.items():
                                col[(li, c2, si, k)] = x
                cols.append(col)
            rows_keys = sorted({k for col in cols for k in col}, key=repr)
            mat = [[col.get(k, Q(0)) for col in cols] for k in rows_keys]
            rk = linalg.rank(mat) if mat else 0
            if rk < len(basis):
                bad.append({"weight": [str(x) for x in w], "coset": list(c)})
        return {"ok": not bad, "witnesses": bad}

    def summary(self) -> dict:
        return {
            "gamma": self.gamma.to_json(),
            "components": self.component_count(),
            "index": self.gamma.index,
            "direct_sum": self.direct_sum_ok()["ok"],
            "closure": self.closure_ok()["ok"],
            "irreducible_component": self.singular_vectors_only_on_top()["ok"],
            "graded_dims": [{"weight": [str(x) for x in w], "coset": list(c), "dim": len(v)}
                            for (w, c), v in sorted(self.W.items(), key=lambda kv: (self.height[kv[0][0]], kv[0]))
                            if v],
        }


def build_loop_module(spec: PsiFunctional, depth: int = 0, window: int = 1, n: int = None) -> TauModule:
    if spec.affine:
        return TauModule(spec, (n or spec.grid.n + 1), depth, window, affine=True)
    return TauModule(spec, spec.grid.n, 0, window if window is not None else depth, affine=False)


def build_example_41(spec: PsiFunctional, depth: int) -> TauModule:
    """Finite G: tau acts on V(psi) (x) A with trivial center; window |r| <= depth."""
    return TauModule(spec, spec.grid.n, 0, depth, affine=False)


def build_example_42(spec: PsiFunctional, n: int, depth: int, window: int = 2) -> TauModule:
    """Affine G in the variable t_1; grid on axes 2..n; affine depth ``depth``."""
    total = sum(w.level for w in spec.weights)
    if total == 0:
        raise ValueError("total level is zero; use the finite construction instead")
    return TauModule(spec, n, depth, window, affine=True)
