"""GL(n, Z) acting on tau, and twisting modules by it.

Convention: matrices act on column degree vectors and composition is the matrix
product, apply(A) o apply(B) = apply(A B).  On generators

    X (x) t^m   -> X (x) t^(A m)
    t^s K_i     -> sum_j A_ji t^(A s) K_j
    d_i         -> sum_j (A^-1)_ij d_j

These are the index placements for which the bracket and the central relation
are preserved.
"""

from __future__ import annotations

from fractions import Fraction as Q
from typing import Dict, List, Sequence, Tuple

from .algebra import TauElement
from .exact import (IntMatrix, complete_to_unimodular, hermite_normal_form, smith_normal_form)
from .highest_weight.irreducible import OUT


class NotUnimodularError(ValueError):
    pass


class TauAutomorphism:
    def __init__(self, matrix):
        if not isinstance(matrix, IntMatrix):
            matrix = IntMatrix(matrix)
        if matrix.rows != matrix.cols:
            raise NotUnimodularError("automorphism matrix must be square")
        det = matrix.det()
        if abs(det) != 1:
            raise NotUnimodularError(f"determinant {det} is not +-1")
        self.matrix = matrix
        self.n = matrix.rows
        self.inverse_matrix = matrix.inverse_unimodular()

    @classmethod
    def identity(cls, n: int) -> "TauAutomorphism":
        return cls(IntMatrix.identity(n))

    def inverse(self) -> "TauAutomorphism":
        return TauAutomorphism(self.inverse_matrix)

    def compose(self, other: "TauAutomorphism") -> "TauAutomorphism":
        """self o other."""
        return TauAutomorphism(self.matrix @ other.matrix)

    def degree(self, m: Sequence[int]) -> Tuple[int, ...]:
        return self.matrix @ tuple(m)

    def apply(self, x: TauElement) -> TauElement:
        if x.n != self.n:
            raise ValueError("automorphism and element have different numbers of variables")
        A = self.matrix
        g = {self.degree(m): X for m, X in x.g.items()}
        z: Dict = {}
        for (s, i), c in x.z.items():
            As = self.degree(s)
            for j in range(self.n):
                a = A[j, i - 1]
                if a:
                    z[(As, j + 1)] = z.get((As, j + 1), 0) + a * c
        dd = [0] * self.n
        inv = self.inverse_matrix
        for i, c in enumerate(x.dd):
            if c:
                for j in range(self.n):
                    dd[j] += c * inv[i, j]
        return TauElement(x.d, x.n, g, z, dd)

    def to_json(self):
        return self.matrix.tolist()

    def __repr__(self):
        return f"TauAutomorphism({self.matrix.tolist()})"


def apply(auto: TauAutomorphism, x: TauElement) -> TauElement:
    return auto.apply(x)


def normalize_center_support(L: Sequence[Sequence[int]], n: int = None):
    """B in GL(n, Z) taking the lattice spanned by L onto sum_i e_i Z m_i.

    Returns (automorphism, normalized degrees m_i e_i, vectors s_i) where the
    m_i s_i form a basis of span(L) and B s_i = e_i.
    """
    L = [tuple(int(x) for x in v) for v in L]
    if n is None:
        if not L:
            raise ValueError("dimension needed for an empty list")
        n = len(L[0])
    basis, _ = hermite_normal_form(L, n) if L else ([], None)
    if not basis:
        return TauAutomorphism.identity(n), [], []
    D, U, V = smith_normal_form(basis)
    k = len(basis)
    divisors = [D[i, i] for i in range(k)]
    B = V.T
    vinv = V.inverse_unimodular()
    s = [vinv.row(i) for i in range(k)]
    normalized = []
    for i, m in enumerate(divisors):
        e = [0] * n
        e[i] = m
        normalized.append(tuple(e))
    return TauAutomorphism(B), normalized, s


def axis_completion(s: Sequence[Sequence[int]], n: int) -> TauAutomorphism:
    """An automorphism sending the primitive vectors s_i to e_i."""
    return TauAutomorphism(complete_to_unimodular(s, n))


def normalize_level_vector(k_vec: Sequence[int], k: int = 0) -> Tuple[TauAutomorphism, int]:
    """A = [[I_k, 0], [0, B']] such that twisting by A turns the K-scalars k_vec into
    (0, .., 0, l), l = gcd of the tail, taken positive.

    Twisting multiplies the scalar vector by A^T, so B' is the transpose of the
    B with B (k_{k+1}, .., k_n)^T = (0, .., 0, l)^T.
    """
    k_vec = [int(x) for x in k_vec]
    n = len(k_vec)
    if any(k_vec[:k]):
        raise ValueError("the first k entries must vanish")
    tail = k_vec[k:]
    t = len(tail)
    ident = IntMatrix.identity(n)
    if not any(tail):
        return TauAutomorphism(ident), 0
    if all(x == 0 for x in tail[:-1]) and tail[-1] > 0:
        return TauAutomorphism(ident), tail[-1]
    h, U = hermite_normal_form([[x] for x in tail], 1)
    ell = h[0][0]
    B = [list(U.row(t - 1 - i)) for i in range(t)]    # reverse rows: gcd lands last
    full = [[int(i == j) for j in range(n)] for i in range(n)]
    for i in range(t):
        for j in range(t):
            full[k + i][k + j] = B[j][i]            # transpose
    return TauAutomorphism(IntMatrix(full, n)), ell


class TwistedModule:
    """x acts on v as auto(x) acts in the original module."""

    def __init__(self, module, auto: TauAutomorphism):
        if module.algebra.n != auto.n:
            raise ValueError("automorphism size differs from the number of loop variables")
        self.base = module
        self.auto = auto
        self.algebra = module.algebra
        self.n = module.n
        self.d = module.d
        self.affine = module.affine
        self.spec = module.spec
        self.tensor = module.tensor
        self.window = module.window
        self.provenance = f"twist({module.provenance})"
        self._images: Dict[tuple, Dict] = {}
        self._memo: Dict[tuple, object] = {}

    def keys(self):
        return self.base.keys()

    @property
    def dim(self):
        return self.base.dim

    def image(self, label) -> Dict:
        res = self._images.get(label)
        if res is None:
            res = self.auto.apply(self.algebra.from_label(label)).coordinates()
            self._images[label] = res
        return res

    def act(self, label, key):
        mk = (label, key)
        res = self._memo.get(mk)
        if res is None:
            out: Dict = {}
            res = None
            for lab, c in self.image(label).items():
                r = self.base.act(lab, key)
                if r is OUT:
                    res = OUT
                    break
                for k, v in r.items():
                    out[k] = out.get(k, 0) + c * v
            if res is None:
                res = {k: v for k, v in out.items() if v}
            self._memo[mk] = res
        return res

    def act_vector(self, label, vec):
        out: Dict = {}
        for k, c in vec.items():
            r = self.act(label, k)
            if r is OUT:
                return OUT
            for k2, v in r.items():
                out[k2] = out.get(k2, 0) + c * v
        return {k: v for k, v in out.items() if v}

    def act_element(self, x: TauElement, vec):
        out: Dict = {}
        for lab, c in x.coordinates().items():
            r = self.act_vector(lab, vec)
            if r is OUT:
                return OUT
            for k, v in r.items():
                out[k] = out.get(k, 0) + c * v
        return {k: v for k, v in out.items() if v}

    def bracket_labels(self, a, b):
        return self.base.bracket_labels(a, b)

    def op_labels(self, bound):
        return self.base.op_labels(bound)

    def r_shift(self, m):
        return self.base.r_shift(self.auto.degree(m))

    def weight_key(self, key):
        return self.base.weight_key(key)

    def weight_spaces(self):
        return self.base.weight_spaces()

    def central_values(self, key) -> List[Q]:
        ks = self.base.central_values(key)
        A = self.auto.matrix
        return [sum((A[j, i] * ks[j] for j in range(self.n)), Q(0)) for i in range(self.n)]

    def weight_values(self, key) -> List[Q]:
        vals = self.base.weight_values(key)
        d, n = self.d, self.n
        hbeta = sum(vals[:d], Q(0))
        ks = self.central_values(key)
        base_d = vals[d + n:]
        inv = self.auto.inverse_matrix
        ds = [sum((inv[i, j] * base_d[j] for j in range(n)), Q(0)) for i in range(n)]
        return vals[:d] + [k - hbeta for k in ks] + ds

    def weight_vec(self, key):
        return self.algebra.roots.weight_from_values(self.weight_values(key))


def twist_module(module, auto: TauAutomorphism) -> TwistedModule:
    return TwistedModule(module, auto)


def action_table(module, labels, keys=None) -> Dict:
    """{(label, key): result} for comparing actions exactly."""
    keys = module.keys() if keys is None else keys
    return {(l, k): module.act(l, k) for l in labels for k in keys}
