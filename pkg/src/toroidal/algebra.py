"""The toroidal Lie algebra tau = sl(d+1) (x) A + Z + D over Q.

Elements carry a loop part (multidegree -> traceless matrix), a central part in
canonical form and a derivation part.  The central relation
``sum_i m_i t^m K_i = 0`` is applied by eliminating the last axis on which ``m``
is nonzero.
"""

from __future__ import annotations

from fractions import Fraction as Q
from itertools import combinations, product
from typing import Dict, Iterable, List, Sequence, Tuple

from .exact import DimensionError, simplify, to_q
from .roots import CoweightVec, NotARealRootError, RealRoot, ToroidalRootSystem, WeightVec

Monomial = Tuple[int, ...]
Entry = Tuple[int, int]


class SystemMismatchError(ValueError):
    pass


def _clean(d: dict) -> dict:
    return {k: simplify(v) for k, v in d.items() if v}


# ---------------------------------------------------------------------------
# traceless matrices, stored sparsely with 1-based (row, col) keys
# ---------------------------------------------------------------------------

class MatrixG:
    """Element of sl(size) as a sparse map (i, j) -> coefficient."""

    __slots__ = ("size", "entries")

    def __init__(self, size: int, entries=None, check: bool = True):
        self.size = size
        if entries is None:
            entries = {}
        elif not isinstance(entries, dict):
            rows = list(entries)
            entries = {(i + 1, j + 1): x for i, r in enumerate(rows) for j, x in enumerate(r)}
        self.entries = _clean({k: to_q(v) if not isinstance(v, int) else v for k, v in entries.items()})
        if check:
            if any(not (1 <= i <= size and 1 <= j <= size) for i, j in self.entries):
                raise DimensionError("matrix index out of range")
            if sum((self.entries.get((i, i), 0) for i in range(1, size + 1))) != 0:
                raise ValueError("matrix is not traceless")

    @classmethod
    def unit(cls, size: int, i: int, j: int) -> "MatrixG":
        if i == j:
            raise ValueError("diagonal units are not traceless; use cartan()")
        return cls(size, {(i, j): 1}, check=False)

    @classmethod
    def cartan(cls, size: int, p: int) -> "MatrixG":
        """H_p = E_pp - E_{p+1,p+1}."""
        return cls(size, {(p, p): 1, (p + 1, p + 1): -1}, check=False)

    def dense(self) -> List[List[Q]]:
        out = [[Q(0)] * self.size for _ in range(self.size)]
        for (i, j), v in self.entries.items():
            out[i - 1][j - 1] = Q(v)
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "MatrixG") -> "MatrixG":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return MatrixG(self.size, out, check=False)

    def __neg__(self):
        return MatrixG(self.size, {k: -v for k, v in self.entries.items()}, check=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "MatrixG":
        c = simplify(to_q(c)) if not isinstance(c, int) else c
        return MatrixG(self.size, {k: c * v for k, v in self.entries.items()}, check=False)

    def __eq__(self, other):
        return isinstance(other, MatrixG) and self.size == other.size and self.entries == other.entries

    def __hash__(self):
        return hash((self.size, frozenset(self.entries.items())))

    def __repr__(self):
        return f"MatrixG({self.size}, {dict(sorted(self.entries.items()))})"

    def product(self, other: "MatrixG") -> Dict[Entry, object]:
        rows: Dict[int, List[Tuple[int, object]]] = {}
        for (k, j), v in other.entries.items():
            rows.setdefault(k, []).append((j, v))
        out: Dict[Entry, object] = {}
        for (i, k), a in self.entries.items():
            for j, b in rows.get(k, ()):
                out[(i, j)] = out.get((i, j), 0) + a * b
        return out

    def bracket(self, other: "MatrixG") -> "MatrixG":
        ab = self.product(other)
        for k, v in other.product(self).items():
            ab[k] = ab.get(k, 0) - v
        return MatrixG(self.size, ab, check=False)

    def trace_form(self, other: "MatrixG"):
        """(X, Y) = tr(XY)."""
        total = 0
        for (i, k), a in self.entries.items():
            b = other.entries.get((k, i))
            if b:
                total += a * b
        return simplify(total) if isinstance(total, Q) else total

    def decompose(self) -> Dict[tuple, object]:
        """Coordinates over {E_ij (i != j), H_p}: diagonal diag(c) = sum_p (c_1+..+c_p) H_p."""
        out = {}
        running = 0
        for (i, j), v in self.entries.items():
            if i != j:
                out[("E", i, j)] = v
        for p in range(1, self.size):
            running += self.entries.get((p, p), 0)
            if running:
                out[("H", p)] = simplify(running) if isinstance(running, Q) else running
        return out

    @classmethod
    def from_coords(cls, size: int, coords: Dict[tuple, object]) -> "MatrixG":
        out: Dict[Entry, object] = {}
        for key, v in coords.items():
            if key[0] == "E":
                out[(key[1], key[2])] = out.get((key[1], key[2]), 0) + v
            else:
                p = key[1]
                out[(p, p)] = out.get((p, p), 0) + v
                out[(p + 1, p + 1)] = out.get((p + 1, p + 1), 0) - v
        return cls(size, out, check=False)


# ---------------------------------------------------------------------------
# center canonical form
# ---------------------------------------------------------------------------

def pivot_axis(m: Sequence[int]) -> int:
    """Largest 0-based axis with m_i != 0, or -1 for m = 0."""
    for i in range(len(m) - 1, -1, -1):
        if m[i]:
            return i
    return -1


def canonicalize_center(raw: Iterable[Tuple[Monomial, int, object]], n: int = None) -> Dict[Tuple[Monomial, int], object]:
    """Canonical form of sum c * t^m K_i (axes i are 1-based).

    For m != 0 the coordinate on the pivot axis p(m) is rewritten using
    t^m K_p = -sum_{i != p} (m_i / m_p) t^m K_i.
    """
    out: Dict[Tuple[Monomial, int], object] = {}
    for m, i, c in raw:
        m = tuple(m)
        if n is not None and len(m) != n:
            raise DimensionError("center monomial has the wrong length")
        if not c:
            continue
        p = pivot_axis(m)
        if p >= 0 and i - 1 == p:
            mp = m[p]
            for k, mk in enumerate(m):
                if k != p and mk:
                    key = (m, k + 1)
                    out[key] = out.get(key, 0) - Q(mk, mp) * c
        else:
            out[(m, i)] = out.get((m, i), 0) + c
    return _clean(out)


class CenterElement:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, raw=()):
        self.n = n
        if isinstance(raw, dict):
            raw = [(m, i, c) for (m, i), c in raw.items()]
        self.terms = canonicalize_center(raw, n)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, CenterElement) and self.n == other.n and self.terms == other.terms

    def __repr__(self):
        return f"CenterElement({dict(sorted(self.terms.items()))})"


# ---------------------------------------------------------------------------
# elements of tau
# ---------------------------------------------------------------------------

class TauElement:
    """x = sum_m X_m (x) t^m + sum c t^m K_i + sum e_i d_i."""

    __slots__ = ("d", "n", "g", "z", "dd")

    def __init__(self, d: int, n: int, g=None, z=None, dd=None, canonical: bool = False):
        self.d = d
        self.n = n
        size = d + 1
        gg = {}
        for m, X in (g or {}).items():
            m = tuple(m)
            if len(m) != n:
                raise DimensionError("loop degree has the wrong length")
            if not isinstance(X, MatrixG):
                X = MatrixG(size, X)
            if not X.is_zero():
                gg[m] = X
        self.g = gg
        if canonical:
            self.z = _clean(dict(z or {}))
        else:
            zz = z or {}
            if isinstance(zz, CenterElement):
                self.z = dict(zz.terms)
            else:
                items = zz.items() if isinstance(zz, dict) else zz
                self.z = canonicalize_center([(m, i, c) for (m, i), c in items], n)
        dd = tuple(simplify(to_q(x)) if not isinstance(x, int) else x for x in (dd or (0,) * n))
        if len(dd) != n:
            raise DimensionError("derivation part has the wrong length")
        self.dd = dd

    # structure ---------------------------------------------------------------
    def _same(self, other):
        if not isinstance(other, TauElement) or (other.d, other.n) != (self.d, self.n):
            raise SystemMismatchError("elements belong to different toroidal algebras")

    def is_zero(self) -> bool:
        return not self.g and not self.z and not any(self.dd)

    def __add__(self, other):
        self._same(other)
        g = dict(self.g)
        for m, X in other.g.items():
            g[m] = g[m] + X if m in g else X
        z = dict(self.z)
        for k, v in other.z.items():
            z[k] = z.get(k, 0) + v
        return TauElement(self.d, self.n, g, z, tuple(a + b for a, b in zip(self.dd, other.dd)),
                          canonical=True)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TauElement":
        c = to_q(c) if not isinstance(c, int) else c
        return TauElement(self.d, self.n, {m: X.scale(c) for m, X in self.g.items()},
                          {k: c * v for k, v in self.z.items()}, tuple(c * x for x in self.dd),
                          canonical=True)

    def __eq__(self, other):
        return (isinstance(other, TauElement) and (self.d, self.n) == (other.d, other.n)
                and self.g == other.g and self.z == other.z and self.dd == other.dd)

    def __hash__(self):
        return hash(tuple(sorted(self.coordinates().items())))

    def coordinates(self) -> Dict[tuple, object]:
        """Coordinates over the standard basis labels."""
        out = {}
        for m, X in self.g.items():
            for key, v in X.decompose().items():
                out[("g", m) + key] = v
        for (m, i), v in self.z.items():
            out[("k", m, i)] = v
        for i, v in enumerate(self.dd):
            if v:
                out[("d", i + 1)] = v
        return out

    def degrees(self) -> set:
        degs = set(self.g)
        degs.update(m for m, _ in self.z)
        if any(self.dd):
            degs.add((0,) * self.n)
        return degs

    def degree_part(self, m: Sequence[int]) -> "TauElement":
        m = tuple(m)
        zero = (0,) * self.n
        return TauElement(self.d, self.n, {m: self.g[m]} if m in self.g else {},
                          {k: v for k, v in self.z.items() if k[0] == m},
                          self.dd if m == zero else None, canonical=True)

    def __repr__(self):
        if self.is_zero():
            return "0"
        return " + ".join(f"{v}*{k}" for k, v in sorted(self.coordinates().items(), key=repr))


def bracket(x: TauElement, y: TauElement) -> TauElement:
    """Lie bracket of tau."""
    x._same(y)
    d, n = x.d, x.n
    g: Dict[Monomial, MatrixG] = {}
    zraw: Dict[Tuple[Monomial, int], object] = {}

    def add_g(m, X):
        if X.is_zero():
            return
        g[m] = g[m] + X if m in g else X

    def add_z(m, i, c):
        if c:
            zraw[(m, i)] = zraw.get((m, i), 0) + c

    for r, X in x.g.items():
        for s, Y in y.g.items():
            rs = tuple(a + b for a, b in zip(r, s))
            add_g(rs, X.bracket(Y))
            f = X.trace_form(Y)
            if f:
                for i, ri in enumerate(r):
                    if ri:
                        add_z(rs, i + 1, f * ri)
    # derivations act by degree
    for i, c in enumerate(x.dd):
        if c:
            for s, Y in y.g.items():
                if s[i]:
                    add_g(s, Y.scale(c * s[i]))
            for (m, j), v in y.z.items():
                if m[i]:
                    add_z(m, j, c * m[i] * v)
    for i, c in enumerate(y.dd):
        if c:
            for r, X in x.g.items():
                if r[i]:
                    add_g(r, X.scale(-c * r[i]))
            for (m, j), v in x.z.items():
                if m[i]:
                    add_z(m, j, -c * m[i] * v)
    return TauElement(d, n, g, zraw)


# ---------------------------------------------------------------------------
# the algebra, its basis and root spaces
# ---------------------------------------------------------------------------

class Sl2Triple:
    __slots__ = ("e", "f", "h", "coroot")

    def __init__(self, e, f, h, coroot):
        self.e, self.f, self.h, self.coroot = e, f, h, coroot

    def relations_hold(self) -> bool:
        return (bracket(self.e, self.f) == self.h
                and bracket(self.h, self.e) == self.e.scale(2)
                and bracket(self.h, self.f) == self.f.scale(-2))


class ToroidalAlgebra:
    """tau built on sl(d+1) with n >= 2 loop variables."""

    def __init__(self, d: int, n: int):
        if n < 2:
            raise ValueError("the toroidal algebra needs n >= 2 loop variables")
        if d < 1:
            raise ValueError("rank must be at least 1")
        self.d = d
        self.n = n
        self.size = d + 1
        self.roots = ToroidalRootSystem(d, n)
        self.zero_degree = (0,) * n

    # constructors --------------------------------------------------------------
    def zero(self) -> TauElement:
        return TauElement(self.d, self.n)

    def loop(self, X, m: Sequence[int]) -> TauElement:
        """X (x) t^m."""
        if not isinstance(X, MatrixG):
            X = MatrixG(self.size, X)
        return TauElement(self.d, self.n, {tuple(m): X})

    def E(self, i: int, j: int, m: Sequence[int]) -> TauElement:
        return self.loop(MatrixG.unit(self.size, i, j), m)

    def H(self, p: int, m: Sequence[int]) -> TauElement:
        return self.loop(MatrixG.cartan(self.size, p), m)

    def K(self, i: int, m: Sequence[int] = None) -> TauElement:
        m = self.zero_degree if m is None else tuple(m)
        return TauElement(self.d, self.n, z={(m, i): 1})

    def D(self, i: int) -> TauElement:
        dd = [0] * self.n
        dd[i - 1] = 1
        return TauElement(self.d, self.n, dd=dd)

    def from_label(self, label: tuple) -> TauElement:
        kind = label[0]
        if kind == "g":
            m = label[1]
            if label[2] == "E":
                return self.E(label[3], label[4], m)
            return self.H(label[3], m)
        if kind == "k":
            return TauElement(self.d, self.n, z={(label[1], label[2]): 1}, canonical=True)
        if kind == "d":
            return self.D(label[1])
        raise ValueError(f"unknown basis label {label!r}")

    def from_coordinates(self, coords: Dict[tuple, object]) -> TauElement:
        out = self.zero()
        for lab, c in coords.items():
            out = out + self.from_label(lab).scale(c)
        return out

    # basis -------------------------------------------------------------------------
    def g_labels(self) -> List[tuple]:
        s = self.size
        labs = [("E", i, j) for i in range(1, s + 1) for j in range(1, s + 1) if i != j]
        labs += [("H", p) for p in range(1, s)]
        return labs

    def center_labels(self, m: Sequence[int]) -> List[tuple]:
        m = tuple(m)
        p = pivot_axis(m)
        return [("k", m, i) for i in range(1, self.n + 1) if i - 1 != p]

    def degrees(self, bound: int) -> List[Monomial]:
        return list(product(range(-bound, bound + 1), repeat=self.n))

    def basis_labels(self, bound: int) -> List[tuple]:
        """Standard basis of tau restricted to |degree|_inf <= bound."""
        labs = []
        gl = self.g_labels()
        for m in self.degrees(bound):
            labs += [("g", m) + key for key in gl]
            labs += self.center_labels(m)
        labs += [("d", i) for i in range(1, self.n + 1)]
        return labs

    def basis(self, bound: int) -> List[TauElement]:
        return [self.from_label(l) for l in self.basis_labels(bound)]

    def random_element(self, rng, bound: int = 2, terms: int = 4, coeffs=(-3, -2, -1, 1, 2, 3)) -> TauElement:
        labs = self.basis_labels(bound)
        out = self.zero()
        for _ in range(terms):
            lab = labs[rng.randrange(len(labs))]
            c = Q(rng.choice(coeffs), rng.choice((1, 1, 2, 3)))
            out = out + self.from_label(lab).scale(c)
        return out

    # weights and root spaces ---------------------------------------------------------
    def finite_root_of_entry(self, i: int, j: int) -> WeightVec:
        R = self.roots
        lo, hi = min(i, j), max(i, j)
        out = WeightVec([0] * R.dim)
        for k in range(lo, hi):
            out = out + R.alpha(k)
        return out if i < j else -out

    def entry_of_finite_root(self, alpha: WeightVec) -> Entry:
        R = self.roots
        if not R.is_finite_root(alpha):
            raise NotARealRootError(f"{alpha!r} is not a finite root")
        c = alpha.coords[: self.d]
        nz = [k for k, x in enumerate(c) if x]
        lo, hi = nz[0] + 1, nz[-1] + 2
        return (lo, hi) if c[nz[0]] > 0 else (hi, lo)

    def label_weight(self, label: tuple) -> WeightVec:
        R = self.roots
        zero = WeightVec([0] * R.dim)
        if label[0] == "g":
            w = R.delta_m(label[1])
            if label[2] == "E":
                w = w + self.finite_root_of_entry(label[3], label[4])
            return w
        if label[0] == "k":
            return R.delta_m(label[1])
        return zero

    def split_weight(self, gamma: WeightVec):
        """Write gamma = alpha + delta_m; returns (alpha, m) or None."""
        R = self.roots
        if len(gamma.coords) != R.dim or any(gamma.coords[R.rank:]):
            return None
        m = gamma.coords[self.d: R.rank]
        if any(x.denominator != 1 for x in m):
            return None
        m = tuple(int(x) for x in m)
        alpha = gamma - R.delta_m(m)
        return alpha, m

    def root_space(self, gamma: WeightVec) -> List[TauElement]:
        """Basis of the root space tau_gamma; empty when gamma is not a root."""
        split = self.split_weight(gamma)
        if split is None:
            return []
        alpha, m = split
        if alpha.is_zero():
            out = [self.H(p, m) for p in range(1, self.size)]
            if any(m):
                out += [self.from_label(l) for l in self.center_labels(m)]
            else:
                out += [self.K(i) for i in range(1, self.n + 1)]
                out += [self.D(i) for i in range(1, self.n + 1)]
            return out
        if not self.roots.is_finite_root(alpha):
            return []
        i, j = self.entry_of_finite_root(alpha)
        return [self.E(i, j, m)]

    # coweights inside tau ------------------------------------------------------------
    def coweight_to_tau(self, h: CoweightVec) -> TauElement:
        """alpha_k^vee -> H_k, alpha_{d+j}^vee -> K_j - H_beta, d_j -> d_j."""
        R = self.roots
        if len(h.coords) != R.dim:
            raise DimensionError("coweight has the wrong length")
        out = self.zero()
        hbeta = self.zero()
        for p in range(1, self.size):
            hbeta = hbeta + self.H(p, self.zero_degree)
        for k in range(self.d):
            if h.coords[k]:
                out = out + self.H(k + 1, self.zero_degree).scale(h.coords[k])
        for j in range(self.n):
            c = h.coords[self.d + j]
            if c:
                out = out + (self.K(j + 1) - hbeta).scale(c)
        for j in range(self.n):
            c = h.coords[R.rank + j]
            if c:
                out = out + self.D(j + 1).scale(c)
        return out

    def sl2_triple(self, alpha: WeightVec, m: Sequence[int]) -> Sl2Triple:
        R = self.roots
        if not R.is_finite_root(alpha):
            raise NotARealRootError(f"{alpha!r} is not a finite root")
        m = tuple(m)
        i, j = self.entry_of_finite_root(alpha)
        t_alpha = R.t_of(alpha)
        scale = Q(2) / R.form(t_alpha, t_alpha)        # (X_alpha, Y_alpha)
        e = self.E(i, j, m)
        f = self.E(j, i, tuple(-x for x in m)).scale(scale)   # tr(E_ij E_ji) = 1
        h = bracket(e, f)
        return Sl2Triple(e, f, h, R.coroot(RealRoot(alpha, m)))


# ---------------------------------------------------------------------------
# exhaustive structural checks
# ---------------------------------------------------------------------------

class LabelBrackets:
    """Memoized brackets of basis labels, each computed with ``bracket``."""

    def __init__(self, alg: ToroidalAlgebra):
        self.alg = alg
        self.ids: Dict[tuple, int] = {}
        self.labels: List[tuple] = []
        self.memo: Dict[Tuple[int, int], tuple] = {}

    def id(self, label: tuple) -> int:
        k = self.ids.get(label)
        if k is None:
            k = self.ids[label] = len(self.labels)
            self.labels.append(label)
        return k

    def get(self, a: int, b: int) -> tuple:
        key = (a, b)
        res = self.memo.get(key)
        if res is None:
            alg = self.alg
            el = bracket(alg.from_label(self.labels[a]), alg.from_label(self.labels[b]))
            res = tuple((self.id(l), c) for l, c in el.coordinates().items())
            self.memo[key] = res
        return res


def jacobi_exhaustive(alg: ToroidalAlgebra, bound: int) -> dict:
    """Antisymmetry on all basis pairs and Jacobi on all basis triples with |deg| <= bound.

    Triples with a repeated entry follow from antisymmetry, so only distinct
    unordered triples are expanded.
    """
    memo = LabelBrackets(alg)
    ids = [memo.id(l) for l in alg.basis_labels(bound)]
    failures = []
    pairs = 0
    for a, b in combinations(ids, 2):
        pairs += 1
        ab = dict(memo.get(a, b))
        ba = memo.get(b, a)
        for l, c in ba:
            ab[l] = ab.get(l, 0) + c
        if any(ab.values()):
            failures.append(("antisymmetry", memo.labels[a], memo.labels[b]))
    for a in ids:
        if memo.get(a, a):
            failures.append(("antisymmetry", memo.labels[a], memo.labels[a]))
    get = memo.get
    triples = 0
    for a, b, c in combinations(ids, 3):
        triples += 1
        ab, bc, ca = get(a, b), get(b, c), get(c, a)
        if not (ab or bc or ca):
            continue
        acc = {}
        for l, x in ab:
            for k, y in get(l, c):
                acc[k] = acc.get(k, 0) + x * y
        for l, x in bc:
            for k, y in get(l, a):
                acc[k] = acc.get(k, 0) + x * y
        for l, x in ca:
            for k, y in get(l, b):
                acc[k] = acc.get(k, 0) + x * y
        for v in acc.values():
            if v:
                failures.append(("jacobi", memo.labels[a], memo.labels[b], memo.labels[c]))
                break
    return {"basis_size": len(ids), "pairs": pairs, "triples": triples, "failures": failures}


def jacobi_random(alg: ToroidalAlgebra, rng, count: int, bound: int = 2) -> dict:
    failures = []
    for _ in range(count):
        x, y, z = (alg.random_element(rng, bound) for _ in range(3))
        j = bracket(bracket(x, y), z) + bracket(bracket(y, z), x) + bracket(bracket(z, x), y)
        if not j.is_zero() or not (bracket(x, y) + bracket(y, x)).is_zero():
            failures.append((x, y, z))
    return {"triples": count, "failures": failures}
