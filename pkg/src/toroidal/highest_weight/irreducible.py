"""Irreducible highest weight modules of sl(d+1) and affine sl(d+1).

Each weight layer of L(lam) is spanned by the vectors f_j b with b running over a
basis of the layer one step up.  The contravariant form <f_j u, w> = <u, e_j w>
is evaluated on words in the f_j, and a maximal set of candidates with
nondegenerate Gram matrix is kept as the layer basis.  Affine modules are kept
up to a fixed depth (number of f_0 letters).
"""

from __future__ import annotations

from fractions import Fraction as Q
from typing import Dict, List, Tuple

from .. import linalg
from ..roots import DomainError
from .kacmoody import HighestWeight, KMAlgebra, Label


class _OutOfWindow:
    """Marker for results that leave the stored truncation; never treated as zero."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "OUT"

    def __bool__(self):
        raise TypeError("out-of-window results have no truth value")


OUT = _OutOfWindow()


class Layer:
    __slots__ = ("key", "words", "index", "gram_inv", "weight")

    def __init__(self, key, words, gram_inv, weight):
        self.key = key
        self.words = words
        self.index = {w: k for k, w in enumerate(words)}
        self.gram_inv = gram_inv
        self.weight = weight


class IrreducibleModule:
    """L(lam) for the finite or affine algebra, kept through depth ``depth``."""

    provenance = "irreducible"

    def __init__(self, alg: KMAlgebra, lam: HighestWeight, depth: int = 0):
        if alg.affine != lam.affine:
            raise DomainError("highest weight and algebra disagree about being affine")
        if len(lam.labels) != alg.d:
            raise DomainError(f"expected {alg.d} Dynkin labels")
        if not lam.is_dominant():
            raise DomainError(f"{lam!r} is not dominant integral")
        if alg.affine and depth < 0:
            raise ValueError("depth must be nonnegative")
        self.alg = alg
        self.lam = lam
        self.depth = depth if alg.affine else 0
        self._pair: Dict[Tuple[tuple, tuple], Q] = {}
        self._coords: Dict[Tuple[tuple, tuple], Dict[int, Q]] = {}
        self._act: Dict[Tuple[Label, tuple], object] = {}
        self.layers: Dict[tuple, Layer] = {}
        self._build()

    # highest weight values ---------------------------------------------------------
    def _lam_h(self, j: int) -> int:
        if j == 0:
            return self.lam.h0()
        return self.lam.labels[j - 1]

    def layer_weight(self, eta: tuple) -> tuple:
        """(mu(H_1), .., mu(H_d)) plus (level, mu(D)) when affine."""
        alg = self.alg
        vals = []
        for p in range(1, alg.d + 1):
            vals.append(Q(self.lam.labels[p - 1] - sum(eta[alg.pos(i)] * alg.a(p, i) for i in alg.simple)))
        if alg.affine:
            vals.append(Q(self.lam.level))
            vals.append(self.lam.dval - eta[0])
        return tuple(vals)

    def cartan_value(self, eta: tuple, label: Label) -> Q:
        w = self.layer_weight(eta)
        if label[0] == "H":
            return w[label[1] - 1]
        if label[0] == "C":
            return w[self.alg.d]
        return w[self.alg.d + 1]

    def depth_of(self, eta: tuple) -> int:
        return eta[0] if self.alg.affine else 0

    # contravariant form ---------------------------------------------------------------
    def _e_on(self, j: int, w: tuple):
        alg = self.alg
        out = []
        for s, i in enumerate(w):
            if i == j:
                val = self._lam_h(j) - sum(alg.a(j, t) for t in w[s + 1:])
                if val:
                    out.append((val, w[:s] + w[s + 1:]))
        return out

    def pair(self, u: tuple, w: tuple) -> Q:
        if not u:
            return Q(1) if not w else Q(0)
        key = (u, w)
        res = self._pair.get(key)
        if res is None:
            res = Q(0)
            rest = u[1:]
            for c, w2 in self._e_on(u[0], w):
                res += c * self.pair(rest, w2)
            self._pair[key] = res
        return res

    def _build(self):
        alg = self.alg
        ns = alg.nsimple
        zero = (0,) * ns
        self.layers[zero] = Layer(zero, [()], [[Q(1)]], self.layer_weight(zero))
        current = [zero]
        height = 0
        while current:
            height += 1
            if height > 10_000:
                raise RuntimeError("layer construction did not terminate")
            nxt = set()
            for eta in current:
                for j in alg.simple:
                    e2 = list(eta)
                    e2[alg.pos(j)] += 1
                    if alg.affine and e2[0] > self.depth:
                        continue
                    nxt.add(tuple(e2))
            current = []
            for eta in sorted(nxt):
                cands = []
                for j in alg.simple:
                    below = list(eta)
                    below[alg.pos(j)] -= 1
                    lay = self.layers.get(tuple(below))
                    if lay is not None:
                        cands.extend((j,) + b for b in lay.words)
                m = len(cands)
                gram = [[Q(0)] * m for _ in range(m)]
                for a in range(m):
                    for b in range(a, m):
                        gram[a][b] = gram[b][a] = self.pair(cands[a], cands[b])
                keep = linalg.independent_rows(gram)
                if not keep:
                    continue
                words = [cands[k] for k in keep]
                sub = [[gram[a][b] for b in keep] for a in keep]
                self.layers[eta] = Layer(eta, words, linalg.inverse(sub), self.layer_weight(eta))
                current.append(eta)
        self.order = sorted(self.layers, key=lambda e: (sum(e), e))

    # coordinates and action ------------------------------------------------------------
    def coords(self, eta: tuple, word: tuple) -> Dict[int, Q]:
        key = (eta, word)
        res = self._coords.get(key)
        if res is None:
            lay = self.layers.get(eta)
            if lay is None:
                res = {}
            else:
                vec = [self.pair(b, word) for b in lay.words]
                res = {}
                for k, row in enumerate(lay.gram_inv):
                    s = sum((x * y for x, y in zip(row, vec) if y), Q(0))
                    if s:
                        res[k] = s
            self._coords[key] = res
        return res

    def target(self, eta: tuple, label: Label):
        """Layer reached from eta by label: a key, None when it is zero, OUT when beyond depth."""
        r = self.alg.root(label)
        t = tuple(a - b for a, b in zip(eta, r))
        if any(x < 0 for x in t):
            return None
        if self.alg.affine and t[0] > self.depth:
            return OUT
        return t

    def _act_word(self, label: Label, eta: tuple, w: tuple):
        """label . w for a basis word w of layer eta, as coordinates in the target layer."""
        key = (label, w)
        res = self._act.get(key)
        if res is not None:
            return res
        alg = self.alg
        tgt = self.target(eta, label)
        if tgt is OUT:
            res = OUT
        elif tgt is None or tgt not in self.layers:
            res = {}
        elif alg.kind(label) == "cartan":
            val = self.cartan_value(eta, label)
            res = {self.layers[eta].index[w]: val} if val else {}
        elif not w:
            if alg.kind(label) == "pos":
                res = {}
            else:
                lay = self.layers[tgt]
                sig = alg.sigma(label)
                vec = []
                for b in lay.words:
                    r = self._act_word(sig, tgt, b)
                    vec.append(r.get(0, Q(0)))
                res = {}
                for k, row in enumerate(lay.gram_inv):
                    s = sum((x * y for x, y in zip(row, vec) if y), Q(0))
                    if s:
                        res[k] = s
        else:
            j, u = w[0], w[1:]
            eta_u = list(eta)
            eta_u[alg.pos(j)] -= 1
            eta_u = tuple(eta_u)
            acc: Dict[int, Q] = {}
            inner_t = self.target(eta_u, label)
            if inner_t is OUT:
                res = OUT
            else:
                if inner_t is not None and inner_t in self.layers:
                    inner = self._act_word(label, eta_u, u)
                    if inner is OUT:
                        res = OUT
                    else:
                        words = self.layers[inner_t].words
                        for k, c in inner.items():
                            for k2, c2 in self.coords(tgt, (j,) + words[k]).items():
                                acc[k2] = acc.get(k2, 0) + c * c2
                if res is None:
                    for lab2, c in alg.bracket(label, alg.f(j)).items():
                        r = self._act_word(lab2, eta_u, u)
                        if r is OUT:
                            res = OUT
                            break
                        for k2, c2 in r.items():
                            acc[k2] = acc.get(k2, 0) + c * c2
                if res is None:
                    res = {k: v for k, v in acc.items() if v}
        self._act[key] = res
        return res

    # module interface ---------------------------------------------------------------------
    def keys(self) -> List[tuple]:
        return [(eta, k) for eta in self.order for k in range(len(self.layers[eta].words))]

    @property
    def dim(self) -> int:
        return sum(len(l.words) for l in self.layers.values())

    def layer_dims(self) -> Dict[tuple, int]:
        return {eta: len(self.layers[eta].words) for eta in self.order}

    def weight_multiplicities(self) -> Dict[tuple, int]:
        out: Dict[tuple, int] = {}
        for eta in self.order:
            w = self.layers[eta].weight
            out[w] = out.get(w, 0) + len(self.layers[eta].words)
        return out

    def weight_of(self, key) -> tuple:
        return self.layers[key[0]].weight

    def act(self, label: Label, key):
        """label . (basis vector ``key``) as {key: coeff}, or OUT."""
        eta, k = key
        lay = self.layers[eta]
        res = self._act_word(label, eta, lay.words[k])
        if res is OUT:
            return OUT
        if not res:
            return {}
        tgt = self.target(eta, label)
        return {(tgt, i): c for i, c in res.items()}

    def highest_key(self):
        return ((0,) * self.alg.nsimple, 0)

    def op_labels(self, bound: int = 0) -> List[Label]:
        return self.alg.basis_labels(bound)


def build_finite_irreducible(labels, d: int = None) -> IrreducibleModule:
    labels = tuple(labels)
    d = len(labels) if d is None else d
    return IrreducibleModule(KMAlgebra(d, affine=False), HighestWeight(labels))


def build_affine_irreducible(labels, level: int, depth: int, dval=0) -> IrreducibleModule:
    labels = tuple(labels)
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    return IrreducibleModule(KMAlgebra(len(labels), affine=True), HighestWeight(labels, level, dval), depth)
