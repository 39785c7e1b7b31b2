"""Exact scalars, Laurent polynomials over Z^n, integer matrices and lattice normal forms."""

from __future__ import annotations

from fractions import Fraction as Q
from itertools import product
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

ExactScalar = Q
Monomial = Tuple[int, ...]


class DimensionError(ValueError):
    pass


class RankError(ValueError):
    pass


class InvalidGridError(ValueError):
    pass


def to_q(x) -> Q:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact rational."""
    if isinstance(x, Q):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Q(x)
    if isinstance(x, str):
        return Q(x.strip())
    if isinstance(x, float):
        raise TypeError("floating point scalars are not accepted")
    return Q(x)


def q_str(x) -> str:
    """Serialize a rational as ``"p/q"`` (integers keep the ``/1``)."""
    x = to_q(x)
    return f"{x.numerator}/{x.denominator}"


def simplify(x):
    """Return ints for integral Fractions; keeps hot loops in int arithmetic."""
    if isinstance(x, Q) and x.denominator == 1:
        return x.numerator
    return x


def grlex_key(m: Monomial):
    return (sum(m), m)


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------

class LaurentPoly:
    """Finite sum of ``c * t^m`` with ``m`` in Z^n; immutable."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] = ()):
        self.nvars = nvars
        clean: Dict[Monomial, Q] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            m = tuple(int(e) for e in m)
            if len(m) != nvars:
                raise DimensionError(f"monomial {m} has length {len(m)}, expected {nvars}")
            c = to_q(c)
            if c:
                s = clean.get(m, Q(0)) + c
                if s:
                    clean[m] = s
                else:
                    clean.pop(m, None)
        self._terms = clean

    @classmethod
    def monomial(cls, m: Sequence[int], coeff=1) -> "LaurentPoly":
        return cls(len(m), {tuple(m): coeff})

    @classmethod
    def constant(cls, nvars: int, c=1) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: c})

    @property
    def terms(self) -> Dict[Monomial, Q]:
        return dict(self._terms)

    def items(self) -> List[Tuple[Monomial, Q]]:
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]))

    def support(self) -> List[Monomial]:
        return [m for m, _ in self.items()]

    def coeff(self, m: Sequence[int]) -> Q:
        return self._terms.get(tuple(m), Q(0))

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "LaurentPoly"):
        if other.nvars != self.nvars:
            raise DimensionError("Laurent polynomials in different numbers of variables")

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.nvars, other)
        self._check(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, Q(0)) + c
        return LaurentPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, LaurentPoly) else -to_q(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            c = to_q(other)
            return LaurentPoly(self.nvars, {m: c * v for m, v in self._terms.items()})
        self._check(other)
        out: Dict[Monomial, Q] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, Q(0)) + c1 * c2
        return LaurentPoly(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    def evaluate(self, point: Sequence) -> Q:
        point = [to_q(p) for p in point]
        total = Q(0)
        for m, c in self._terms.items():
            term = c
            for a, e in zip(point, m):
                term *= a ** e
            total += term
        return total

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.items():
            mono = "*".join(f"t{i + 1}^{e}" for i, e in enumerate(m) if e)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# Grid ideals
# ---------------------------------------------------------------------------

def validate_axis_points(axes: Sequence[Sequence]) -> Tuple[Tuple[Q, ...], ...]:
    out = []
    for j, pts in enumerate(axes):
        pts = tuple(to_q(p) for p in pts)
        if not pts:
            raise InvalidGridError(f"axis {j + 1} has no points")
        if any(p == 0 for p in pts) or len(set(pts)) != len(pts):
            raise InvalidGridError(
                f"distinct nonzero points required on axis {j + 1}, got {[str(p) for p in pts]}")
        out.append(pts)
    return tuple(out)


def _poly_from_roots(roots: Sequence[Q]) -> List[Q]:
    # coefficients low -> high, monic
    poly = [Q(1)]
    for r in roots:
        nxt = [Q(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] += c
            nxt[i] -= r * c
        poly = nxt
    return poly


def _mulmod(a: List[Q], b: List[Q], mod: List[Q]) -> List[Q]:
    deg = len(mod) - 1
    prod_ = [Q(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod_[i + j] += x * y
    # reduce by the monic modulus from the top
    for k in range(len(prod_) - 1, deg - 1, -1):
        c = prod_[k]
        if c:
            for i in range(deg + 1):
                prod_[k - deg + i] -= c * mod[i]
    out = prod_[:deg] + [Q(0)] * max(0, deg - len(prod_))
    return out[:deg]


class _AxisReducer:
    """Powers of ``t`` modulo ``prod_k (t - a_k)`` for one axis."""

    def __init__(self, roots: Sequence[Q]):
        self.mod = _poly_from_roots(roots)
        self.deg = len(roots)
        if self.mod[0] == 0:
            raise InvalidGridError("zero point: t is not invertible modulo the axis polynomial")
        one = [Q(1)] + [Q(0)] * (self.deg - 1)
        if self.deg == 1:
            t = [roots[0]]
            t_inv = [1 / roots[0]]
        else:
            t = [Q(0), Q(1)] + [Q(0)] * (self.deg - 2)
            # t * (t^{N-1} + c_{N-1} t^{N-2} + ... + c_1) = -c_0
            c0 = self.mod[0]
            t_inv = [-self.mod[i + 1] / c0 for i in range(self.deg)]
        self._pos = {0: one}
        self._neg = {0: one}
        self._t = t
        self._t_inv = t_inv

    def power(self, e: int) -> List[Q]:
        cache, base = (self._pos, self._t) if e >= 0 else (self._neg, self._t_inv)
        k = abs(e)
        if k not in cache:
            top = max(cache)
            cur = cache[top]
            for i in range(top + 1, k + 1):
                cur = _mulmod(cur, base, self.mod)
                cache[i] = cur
        return cache[k]


def grid_reducers(axes: Sequence[Sequence], check: bool = True) -> List[_AxisReducer]:
    if check:
        axes = validate_axis_points(axes)
    else:
        axes = tuple(tuple(to_q(p) for p in pts) for pts in axes)
    return [_AxisReducer(pts) for pts in axes]


def laurent_reduce_mod_ideal(p: LaurentPoly, axes: Sequence[Sequence], *, check: bool = True,
                             _reducers=None) -> LaurentPoly:
    """Reduce ``p`` modulo the ideal generated by ``prod_k (t_j - a_{j,k})``.

    The result is supported on ``{m : 0 <= m_j < N_j}``.
    """
    reducers = _reducers if _reducers is not None else grid_reducers(axes, check=check)
    if p.nvars != len(reducers):
        raise DimensionError("polynomial and grid have different numbers of variables")
    out: Dict[Monomial, Q] = {}
    for m, c in p.items():
        factors = [r.power(e) for r, e in zip(reducers, m)]
        for idx in product(*(range(len(f)) for f in factors)):
            coeff = c
            for f, i in zip(factors, idx):
                coeff *= f[i]
                if not coeff:
                    break
            if coeff:
                out[idx] = out.get(idx, Q(0)) + coeff
    return LaurentPoly(p.nvars, out)


# ---------------------------------------------------------------------------
# Integer matrices
# ---------------------------------------------------------------------------

class IntMatrix:
    """Dense integer matrix with exact arithmetic."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[int]], cols: int = None):
        rows_ = [tuple(int(x) for x in r) for r in entries]
        if cols is None:
            cols = len(rows_[0]) if rows_ else 0
        if any(len(r) != cols for r in rows_):
            raise DimensionError("ragged integer matrix")
        self.entries = tuple(rows_)
        self.rows = len(rows_)
        self.cols = cols

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i) -> Tuple[int, ...]:
        return self.entries[i]

    def tolist(self) -> List[List[int]]:
        return [list(r) for r in self.entries]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
                         self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise DimensionError("shape mismatch in matrix product")
            oc = other.entries
            return IntMatrix([[sum(r[k] * oc[k][j] for k in range(self.cols))
                               for j in range(other.cols)] for r in self.entries], other.cols)
        vec = tuple(other)
        if len(vec) != self.cols:
            raise DimensionError("shape mismatch in matrix-vector product")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self.entries)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.entries == other.entries and self.cols == other.cols

    def __hash__(self):
        return hash((self.entries, self.cols))

    def __repr__(self):
        return f"IntMatrix({self.tolist()})"

    def det(self) -> int:
        if self.rows != self.cols:
            raise DimensionError("determinant of a non-square matrix")
        return bareiss_det([list(r) for r in self.entries])

    def inverse_unimodular(self) -> "IntMatrix":
        d = self.det()
        if abs(d) != 1:
            raise RankError(f"matrix is not unimodular (det {d})")
        n = self.rows
        aug = [[Q(x) for x in r] + [Q(int(i == j)) for j in range(n)]
               for i, r in enumerate(self.entries)]
        for c in range(n):
            p = next(r for r in range(c, n) if aug[r][c])
            aug[c], aug[p] = aug[p], aug[c]
            piv = aug[c][c]
            aug[c] = [x / piv for x in aug[c]]
            for r in range(n):
                if r != c and aug[r][c]:
                    f = aug[r][c]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
        return IntMatrix([[int(x) for x in r[n:]] for r in aug], n)


def bareiss_det(m: List[List]) -> Q:
    """Fraction-free determinant; exact for integer and rational entries."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``g = x*a + y*b = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _as_rows(vectors) -> List[List[int]]:
    rows_ = [list(int(x) for x in v) for v in vectors]
    if rows_ and len({len(r) for r in rows_}) != 1:
        raise DimensionError("generators have mismatched lengths")
    return rows_


def hermite_normal_form(generators: Sequence[Sequence[int]], ncols: int = None
                        ) -> Tuple[List[Tuple[int, ...]], IntMatrix]:
    """Row-style Hermite normal form of the lattice spanned by ``generators``.

    Returns ``(basis, U)`` where ``U`` is unimodular, ``U @ G`` is in HNF and
    ``basis`` holds its nonzero rows.  Pivots are positive and entries above a
    pivot lie in ``[0, pivot)``.
    """
    a = _as_rows(generators)
    m = len(a)
    if m == 0:
        return [], IntMatrix([], 0)
    n = len(a[0]) if ncols is None else ncols
    u = [[int(i == j) for j in range(m)] for i in range(m)]

    def combine(i, k, x, y, p, q):
        # row_i <- x row_i + y row_k ; row_k <- p row_i + q row_k  (det = xq - yp = 1)
        ri, rk = a[i], a[k]
        a[i] = [x * s + y * t for s, t in zip(ri, rk)]
        a[k] = [p * s + q * t for s, t in zip(ri, rk)]
        ui, uk = u[i], u[k]
        u[i] = [x * s + y * t for s, t in zip(ui, uk)]
        u[k] = [p * s + q * t for s, t in zip(ui, uk)]

    r = 0
    pivots = []
    for c in range(n):
        if r >= m:
            break
        for k in range(r + 1, m):
            if a[k][c]:
                g, x, y = xgcd(a[r][c], a[k][c])
                p, q = -a[k][c] // g, a[r][c] // g
                combine(r, k, x, y, p, q)
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-v for v in a[r]]
            u[r] = [-v for v in u[r]]
        piv = a[r][c]
        for i in range(r):
            f = a[i][c] // piv
            if f:
                a[i] = [s - f * t for s, t in zip(a[i], a[r])]
                u[i] = [s - f * t for s, t in zip(u[i], u[r])]
        pivots.append(c)
        r += 1
    basis = [tuple(row) for row in a[:r]]
    return basis, IntMatrix(u, m)


def lattice_index(basis: Sequence[Sequence[int]], n: int) -> int:
    """Index of a full-rank sublattice of Z^n given by an HNF basis; 0 if not full rank."""
    if len(basis) != n:
        return 0
    return abs(bareiss_det([list(b) for b in basis]))


def in_lattice(v: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
    """Membership test against a row-HNF basis."""
    v = list(v)
    for b in basis:
        c = next(i for i, x in enumerate(b) if x)
        if v[c] % b[c]:
            return False
        f = v[c] // b[c]
        v = [s - f * t for s, t in zip(v, b)]
    return not any(v)


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(D, U, V)`` with ``U @ M @ V = D`` diagonal, ``d_i | d_{i+1}``, U and V unimodular."""
    a = _as_rows(matrix)
    m = len(a)
    n = len(a[0]) if m else 0
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_sub(k, i, q):           # row_k -= q row_i
        a[k] = [s - q * t for s, t in zip(a[k], a[i])]
        u[k] = [s - q * t for s, t in zip(u[k], u[i])]

    def col_sub(k, j, q):           # col_k -= q col_j
        for row in a:
            row[k] -= q * row[j]
        for row in v:
            row[k] -= q * row[j]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
            if not nz:
                break
            _, i0, j0 = min(nz)
            swap_rows(t, i0)
            swap_cols(t, j0)
            piv = a[t][t]
            for k in range(t + 1, m):
                if a[k][t]:
                    row_sub(k, t, a[k][t] // piv)
            for k in range(t + 1, n):
                if a[t][k]:
                    col_sub(k, t, a[t][k] // piv)
            if any(a[k][t] for k in range(t + 1, m)) or any(a[t][k] for k in range(t + 1, n)):
                continue        # a smaller remainder exists; it becomes the next pivot
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % piv), None)
            if bad is None:
                break
            row_sub(t, bad, -1)     # row_t += row_bad, then reduce again
        if t < m and t < n and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return IntMatrix(a, n), IntMatrix(u, m), IntMatrix(v, n)


def complete_to_unimodular(basis: Sequence[Sequence[int]], n: int = None) -> IntMatrix:
    """Return ``B`` in GL(n, Z) with ``B @ s_i = e_i`` for the given vectors ``s_i``.

    Raises RankError when the vectors are dependent or do not extend to a basis of Z^n.
    """
    rows_ = _as_rows(basis)
    k = len(rows_)
    if n is None:
        if not rows_:
            raise DimensionError("ambient dimension needed for an empty basis")
        n = len(rows_[0])
    if k == 0:
        return IntMatrix.identity(n)
    if len(rows_[0]) != n:
        raise DimensionError("vector length differs from ambient dimension")
    st = [[rows_[i][j] for i in range(k)] for j in range(n)]  # n x k
    h, u = hermite_normal_form(st, k)
    if len(h) < k:
        raise RankError("vectors are linearly dependent")
    top = IntMatrix(h[:k], k)
    if abs(top.det()) != 1:
        raise RankError("vectors do not extend to a basis of Z^n")
    tinv = top.inverse_unimodular()
    block = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i < k and j < k:
                block[i][j] = tinv[i, j]
            elif i == j:
                block[i][j] = 1
    return IntMatrix(block, n) @ u
