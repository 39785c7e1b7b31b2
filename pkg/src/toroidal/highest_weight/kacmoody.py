"""sl(d+1) and its untwisted affinization, as matrices over Q[t, t^-1] + Q C + Q D.

Elementary operators are labelled
    ('E', i, j, k)  E_ij (x) t^k, i != j
    ('H', p, k)     (E_pp - E_{p+1,p+1}) (x) t^k
    ('C',)          the canonical central element (affine only)
    ('D',)          the degree derivation (affine only)
For the finite algebra k is always 0.  Root coordinates are taken over the
simple roots (alpha_0, alpha_1, .., alpha_d) in the affine case and
(alpha_1, .., alpha_d) in the finite case.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

from ..algebra import MatrixG
from ..roots import affine_cartan_A

Label = tuple


class KMAlgebra:
    def __init__(self, d: int, affine: bool):
        if d < 1:
            raise ValueError("rank must be at least 1")
        self.d = d
        self.size = d + 1
        self.affine = affine
        A = affine_cartan_A(d)
        if affine:
            self.cartan = A
            self.simple = list(range(d + 1))
        else:
            self.cartan = [row[1:] for row in A[1:]]
            self.simple = list(range(1, d + 1))
        self.nsimple = len(self.simple)
        self._memo: Dict[Tuple[Label, Label], Dict[Label, object]] = {}

    # indexing of simple roots inside root vectors --------------------------------
    def pos(self, i: int) -> int:
        """Position of simple index i in root-coordinate vectors."""
        return i if self.affine else i - 1

    def a(self, j: int, i: int) -> int:
        """alpha_i(h_j)."""
        return self.cartan[self.pos(j)][self.pos(i)]

    # Chevalley generators ----------------------------------------------------------
    def f(self, i: int) -> Label:
        if i == 0:
            return ("E", 1, self.size, -1)
        return ("E", i + 1, i, 0)

    def e(self, i: int) -> Label:
        if i == 0:
            return ("E", self.size, 1, 1)
        return ("E", i, i + 1, 0)

    # matrices --------------------------------------------------------------------
    def matrix(self, label: Label) -> MatrixG:
        if label[0] == "E":
            return MatrixG.unit(self.size, label[1], label[2])
        return MatrixG.cartan(self.size, label[1])

    @staticmethod
    def degree(label: Label) -> int:
        return label[-1] if label[0] in ("E", "H") else 0

    def decompose(self, X: MatrixG, k: int) -> Dict[Label, object]:
        return {key + (k,): v for key, v in X.decompose().items()}

    def bracket(self, x: Label, y: Label) -> Dict[Label, object]:
        key = (x, y)
        res = self._memo.get(key)
        if res is not None:
            return res
        res = {}
        if x[0] in ("C",) or y[0] in ("C",):
            pass
        elif x[0] == "D" and y[0] == "D":
            pass
        elif x[0] == "D":
            k = self.degree(y)
            if k:
                res = {y: k}
        elif y[0] == "D":
            k = self.degree(x)
            if k:
                res = {x: -k}
        else:
            X, Y = self.matrix(x), self.matrix(y)
            a, b = self.degree(x), self.degree(y)
            res = self.decompose(X.bracket(Y), a + b)
            if self.affine and a and a + b == 0:
                f = X.trace_form(Y)
                if f:
                    res[("C",)] = a * f
            res = {l: v for l, v in res.items() if v}
        self._memo[key] = res
        return res

    def sigma(self, label: Label) -> Label:
        """Anti-involution E_ij t^k -> E_ji t^-k, H t^k -> H t^-k, C -> C, D -> D."""
        if label[0] == "E":
            return ("E", label[2], label[1], -label[3])
        if label[0] == "H":
            return ("H", label[1], -label[2])
        return label

    # roots ------------------------------------------------------------------------
    def root(self, label: Label) -> Tuple[int, ...]:
        out = [0] * self.nsimple
        if label[0] in ("C", "D"):
            return tuple(out)
        k = self.degree(label)
        if self.affine and k:
            out = [k] * self.nsimple
        if label[0] == "E":
            i, j = label[1], label[2]
            lo, hi = min(i, j), max(i, j)
            sgn = 1 if i < j else -1
            for p in range(lo, hi):
                out[self.pos(p)] += sgn
        return tuple(out)

    def kind(self, label: Label) -> str:
        if label[0] in ("C", "D"):
            return "cartan"
        k = self.degree(label)
        if k > 0:
            return "pos"
        if k < 0:
            return "neg"
        if label[0] == "H":
            return "cartan"
        return "pos" if label[1] < label[2] else "neg"

    def real_root_labels(self, kbound: int) -> List[Label]:
        """E_ij (x) t^k for all i != j and |k| <= kbound (k = 0 when finite)."""
        ks = range(-kbound, kbound + 1) if self.affine else [0]
        return [("E", i, j, k) for k in ks for i in range(1, self.size + 1)
                for j in range(1, self.size + 1) if i != j]

    def basis_labels(self, kbound: int) -> List[Label]:
        ks = range(-kbound, kbound + 1) if self.affine else [0]
        labs = []
        for k in ks:
            labs += [("E", i, j, k) for i in range(1, self.size + 1)
                     for j in range(1, self.size + 1) if i != j]
            labs += [("H", p, k) for p in range(1, self.size)]
        if self.affine:
            labs += [("C",), ("D",)]
        return labs


class HighestWeight:
    """Highest weight data: Dynkin labels on H_1..H_d, plus level and d-value when affine."""

    __slots__ = ("labels", "level", "dval")

    def __init__(self, labels, level=None, dval=0):
        from ..exact import to_q
        self.labels = tuple(int(x) for x in labels)
        self.level = None if level is None else int(level)
        self.dval = to_q(dval)

    @property
    def affine(self):
        return self.level is not None

    def h0(self) -> int:
        return self.level - sum(self.labels)

    def is_dominant(self) -> bool:
        if any(x < 0 for x in self.labels):
            return False
        return not self.affine or self.h0() >= 0

    def is_zero(self) -> bool:
        return not any(self.labels) and not self.level

    def key(self):
        return (self.labels, self.level, self.dval)

    def __eq__(self, other):
        return isinstance(other, HighestWeight) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.affine:
            return f"HighestWeight({list(self.labels)}, level={self.level}, d={self.dval})"
        return f"HighestWeight({list(self.labels)})"

    def to_json(self):
        out = {"labels": list(self.labels)}
        if self.affine:
            out["level"] = self.level
            out["d"] = str(self.dval)
        return out
