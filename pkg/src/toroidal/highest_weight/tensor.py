"""Highest weight functionals on h (x) A, the support lattice Gamma, and tensor
products of irreducibles on which G (x) A acts through evaluation at a grid."""

from __future__ import annotations

from fractions import Fraction as Q
from itertools import product
from typing import Dict, List, Sequence

from ..evaluation import PointGrid
from ..exact import (LaurentPoly, hermite_normal_form, in_lattice, lattice_index)
from ..roots import DomainError
from .irreducible import OUT, IrreducibleModule
from .kacmoody import HighestWeight, KMAlgebra, Label


class DegenerateSpecError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class PsiFunctional:
    """Grid plus one dominant highest weight per grid point (lexicographic order)."""

    def __init__(self, grid: PointGrid, weights: Sequence[HighestWeight], d: int):
        weights = list(weights)
        if len(weights) != grid.N:
            raise ValueError(f"need {grid.N} weights, one per grid point, got {len(weights)}")
        affine = {w.affine for w in weights}
        if len(affine) > 1:
            raise ValueError("weights mix finite and affine data")
        for w in weights:
            if len(w.labels) != d:
                raise DomainError(f"weight {w!r} has the wrong number of labels")
            if not w.is_dominant():
                raise DomainError(f"weight {w!r} is not dominant")
        self.grid = grid
        self.weights = weights
        self.d = d
        self.affine = affine.pop()

    def all_zero(self) -> bool:
        return all(w.is_zero() for w in self.weights)

    def h_prime_labels(self) -> List[Label]:
        labs = [("H", p, 0) for p in range(1, self.d + 1)]
        if self.affine:
            labs.append(("C",))
        return labs

    def to_json(self):
        return {"grid": self.grid.to_json(), "weights": [w.to_json() for w in self.weights]}


class PsiTable:
    """psi(h (x) t^m) = sum_I a_I^m lam_I(h) on h' (x) A."""

    def __init__(self, spec: PsiFunctional):
        self.spec = spec
        self.labels = spec.h_prime_labels()

    @staticmethod
    def _lam(w: HighestWeight, h: Label) -> int:
        if h[0] == "H":
            return w.labels[h[1] - 1]
        if h[0] == "C":
            return w.level
        raise ValueError(f"{h!r} is not in h'")

    def value(self, h: Label, m: Sequence[int]) -> Q:
        g = self.spec.grid
        return sum((g.power(I, m) * self._lam(w, h) for I, w in zip(g.indices, self.spec.weights)), Q(0))

    def value0(self, h: Label) -> Q:
        return sum((Q(self._lam(w, h)) for w in self.spec.weights), Q(0))

    def vector(self, m: Sequence[int]) -> List[Q]:
        return [self.value(h, m) for h in self.labels]

    def bar(self, h: Label, m: Sequence[int]) -> LaurentPoly:
        """psi_bar(h (x) t^m) = psi(h (x) t^m) t^m."""
        return LaurentPoly.monomial(tuple(m), self.value(h, m))


def build_psi(spec: PsiFunctional) -> PsiTable:
    return PsiTable(spec)


class GammaLattice:
    def __init__(self, n, generators, basis, periods, index):
        self.n = n
        self.generators = generators
        self.basis = basis
        self.periods = periods
        self.index = index

    def contains(self, m) -> bool:
        return in_lattice(m, self.basis)

    def reduce(self, m) -> tuple:
        """Canonical coset representative: 0 <= r_j < pivot_j for the HNF basis."""
        v = list(m)
        for b in self.basis:
            c = next(i for i, x in enumerate(b) if x)
            f = v[c] // b[c]
            v = [s - f * t for s, t in zip(v, b)]
        return tuple(v)

    def coset_reps(self) -> List[tuple]:
        pivots = [b[next(i for i, x in enumerate(b) if x)] for b in self.basis]
        return [tuple(r) for r in product(*(range(p) for p in pivots))]

    def to_json(self):
        return {"basis": [list(b) for b in self.basis], "periods": list(self.periods),
                "index": self.index}


def compute_gamma(spec: PsiFunctional, box: int = None) -> GammaLattice:
    """Gamma = {m : t^m in A_psibar}, A_psibar the image algebra of psibar.

    psibar is multiplicative on U(H), so Gamma is generated by the support
    {m : psi(h (x) t^m) != 0 for some h}; single values of psi may still vanish
    by cancellation.  The box holds a generating set because Gamma contains
    k_j Z e_j with k_j <= N_j.
    """
    if spec.all_zero():
        raise DegenerateSpecError("all highest weights are zero; Gamma is not defined")
    grid = spec.grid
    table = PsiTable(spec)
    n = grid.n
    B = box if box is not None else max(2, 2 * max(grid.sizes))
    members = [m for m in product(range(-B, B + 1), repeat=n) if any(table.vector(m))]
    basis, _ = hermite_normal_form(members, n)
    if len(basis) != n:
        raise PreconditionError("support of psi does not span a full-rank lattice")
    periods = []
    for j in range(n):
        e = [0] * n
        for k in range(1, grid.sizes[j] + 1):
            e[j] = k
            if in_lattice(e, basis):
                periods.append(k)
                break
        else:
            raise PreconditionError(f"no period found on axis {j + 1}")
    return GammaLattice(n, members, basis, tuple(periods), lattice_index(basis, n))


class TensorModule:
    """V(psi) = tensor of V(lam_I); X (x) t^m acts as sum_I a_I^m X^(I).

    Affine factors are truncated by total depth.
    """

    provenance = "tensor"

    def __init__(self, spec: PsiFunctional, depth: int = 0):
        self.spec = spec
        self.grid = spec.grid
        self.alg = KMAlgebra(spec.d, spec.affine)
        self.depth = depth if spec.affine else 0
        cache: Dict[HighestWeight, IrreducibleModule] = {}
        self.factors = []
        for w in spec.weights:
            if w not in cache:
                cache[w] = IrreducibleModule(self.alg, w, self.depth)
            self.factors.append(cache[w])
        keys = []
        for combo in product(*(f.keys() for f in self.factors)):
            if self.key_depth(combo) <= self.depth:
                keys.append(combo)
        keys.sort(key=lambda k: (sum(sum(fk[0]) for fk in k), k))
        self._keys = keys
        self._weights = {k: self.weight_of(k) for k in keys}
        self._spaces: Dict[tuple, List[tuple]] = {}
        for k in keys:
            self._spaces.setdefault(self._weights[k], []).append(k)
        self._memo: Dict[tuple, object] = {}

    def key_depth(self, key) -> int:
        return sum(f.depth_of(fk[0]) for f, fk in zip(self.factors, key))

    def keys(self) -> List[tuple]:
        return list(self._keys)

    @property
    def dim(self) -> int:
        return len(self._keys)

    def weight_of(self, key) -> tuple:
        ws = [f.weight_of(fk) for f, fk in zip(self.factors, key)]
        return tuple(sum(col, Q(0)) for col in zip(*ws))

    def weight_spaces(self) -> Dict[tuple, List[tuple]]:
        return {w: list(ks) for w, ks in self._spaces.items()}

    def highest_key(self):
        return tuple(f.highest_key() for f in self.factors)

    def highest_weight(self) -> tuple:
        return self.weight_of(self.highest_key())

    def act_weighted(self, label: Label, coeffs: Sequence, key):
        """sum_I coeffs[I] label^(I) applied to ``key``."""
        out: Dict[tuple, Q] = {}
        for I, (f, fk) in enumerate(zip(self.factors, key)):
            c = coeffs[I]
            if not c:
                continue
            r = f.act(label, fk)
            if r is OUT:
                return OUT
            for k2, v in r.items():
                nk = key[:I] + (k2,) + key[I + 1:]
                out[nk] = out.get(nk, 0) + c * v
        out = {k: v for k, v in out.items() if v}
        if self.alg.affine and any(self.key_depth(k) > self.depth for k in out):
            return OUT
        return out

    def act(self, label: Label, mbar: Sequence[int], key):
        """Phi(label (x) t^mbar) on ``key``; D acts without a grid factor."""
        mk = (label, tuple(mbar) if mbar is not None else None, key)
        res = self._memo.get(mk)
        if res is None:
            if label[0] == "D" or mbar is None:
                coeffs = [1] * self.grid.N
            else:
                coeffs = self.grid.power_vector(mbar)
            res = self.act_weighted(label, coeffs, key)
            self._memo[mk] = res
        return res


def build_tensor_module(spec: PsiFunctional, depth: int = 0) -> TensorModule:
    return TensorModule(spec, depth)
