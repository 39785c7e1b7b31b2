"""Evaluation at a grid of points: the map X (x) t^m -> (a_I^m X)_I, the grid matrix
and its Vandermonde factorization, and the map onto affine-loop data used for the
affine-level modules."""

from __future__ import annotations

from fractions import Fraction as Q
from itertools import product
from typing import Dict, List, Sequence, Tuple

from . import linalg
from .algebra import MatrixG, TauElement, pivot_axis
from .exact import (InvalidGridError, LaurentPoly, grid_reducers, laurent_reduce_mod_ideal,
                    to_q, validate_axis_points)

Monomial = Tuple[int, ...]


class PointGrid:
    """Per-axis lists of nonzero, pairwise distinct rationals.

    Grid points a_I are indexed by I = (i_1, .., i_n) in lexicographic order.
    """

    def __init__(self, axes: Sequence[Sequence], _validate: bool = True):
        if _validate:
            self.axes = validate_axis_points(axes)
        else:
            self.axes = tuple(tuple(to_q(p) for p in pts) for pts in axes)
        self.n = len(self.axes)
        self.sizes = tuple(len(a) for a in self.axes)
        self.N = 1
        for s in self.sizes:
            self.N *= s
        self.indices = list(product(*(range(s) for s in self.sizes)))
        self.exponents = list(product(*(range(s) for s in self.sizes)))    # the set T
        self.validated = _validate

    @classmethod
    def unchecked(cls, axes) -> "PointGrid":
        """Build without validation; only meant for exercising failure modes."""
        return cls(axes, _validate=False)

    def point(self, I: Sequence[int]) -> Tuple[Q, ...]:
        return tuple(self.axes[j][i] for j, i in enumerate(I))

    def power(self, I: Sequence[int], m: Sequence[int]) -> Q:
        """a_I^m."""
        out = Q(1)
        for j, (i, e) in enumerate(zip(I, m)):
            if e:
                out *= self.axes[j][i] ** e
        return out

    def power_vector(self, m: Sequence[int]) -> List[Q]:
        return [self.power(I, m) for I in self.indices]

    def to_json(self):
        return [[str(p) for p in a] for a in self.axes]

    def __repr__(self):
        return f"PointGrid({self.to_json()})"


# ---------------------------------------------------------------------------
# the grid matrix and its factorization
# ---------------------------------------------------------------------------

def vandermonde(points: Sequence[Q]) -> List[List[Q]]:
    """V[k][i] = a_i^k."""
    return [[p ** k for p in points] for k in range(len(points))]


def _axis_to_end_perm(sizes: Sequence[int], j: int) -> List[int]:
    """Index array P with (P v)[k] = v[P[k]] moving axis j to the last position."""
    order = [a for a in range(len(sizes)) if a != j] + [j]
    strides = [1] * len(sizes)
    for a in range(len(sizes) - 2, -1, -1):
        strides[a] = strides[a + 1] * sizes[a + 1]
    perm = []
    for idx in product(*(range(sizes[a]) for a in order)):
        perm.append(sum(strides[a] * i for a, i in zip(order, idx)))
    return perm


class FactorStep:
    """P^T . blockdiag(V, .., V) . P with P stored as an index array."""

    __slots__ = ("axis", "perm", "block", "nblocks")

    def __init__(self, axis, perm, block, nblocks):
        self.axis, self.perm, self.block, self.nblocks = axis, perm, block, nblocks

    def dense(self) -> List[List[Q]]:
        size = len(self.perm)
        b = len(self.block)
        bd = linalg.zeros(size, size)
        for k in range(self.nblocks):
            for r in range(b):
                for c in range(b):
                    bd[k * b + r][k * b + c] = self.block[r][c]
        # (P^T M P)[x][y] = M[pinv[x]][pinv[y]]
        pinv = [0] * size
        for k, p in enumerate(self.perm):
            pinv[p] = k
        return [[bd[pinv[x]][pinv[y]] for y in range(size)] for x in range(size)]


class GridMatrix:
    """X[m][I] = a_I^m with rows m in T and columns I, both lexicographic.

    ``factors`` realize X = R . F_1 ... F_n . C where R, C are the recorded row
    and column permutations (index arrays) and each F_j is a block-diagonal
    Vandermonde matrix conjugated by the permutation bringing axis j last.
    """

    def __init__(self, grid: PointGrid):
        self.grid = grid
        self.X = [grid.power_vector(m) for m in grid.exponents]
        self.vandermondes = [vandermonde(a) for a in grid.axes]
        self.factors = []
        for j, size in enumerate(grid.sizes):
            perm = _axis_to_end_perm(grid.sizes, j)
            self.factors.append(FactorStep(j, perm, self.vandermondes[j], grid.N // size))
        self.row_perm = list(range(grid.N))
        self.col_perm = list(range(grid.N))

    @property
    def N(self):
        return self.grid.N

    def factor_product(self) -> List[List[Q]]:
        """Dense product of the recorded factors, permutations applied."""
        M = linalg.identity(self.N)
        for f in self.factors:
            M = linalg.matmul(M, f.dense())
        M = [M[self.row_perm[r]] for r in range(self.N)]
        return [[row[self.col_perm[c]] for c in range(self.N)] for row in M]

    def det(self) -> Q:
        return linalg.det(self.X)

    def det_from_factors(self) -> Q:
        """prod_j det(V_j)^(N / N_j); the permutations cancel in conjugation."""
        out = Q(1)
        for f in self.factors:
            out *= linalg.det(f.block) ** f.nblocks
        return out

    def solve_transpose(self, b: Sequence) -> List[Q]:
        """Solve X^T y = b axis by axis (X^T is the Kronecker product of V_j^T)."""
        sizes = self.grid.sizes
        y = [to_q(v) for v in b]
        for j, size in enumerate(sizes):
            vt = linalg.transpose(self.vandermondes[j])
            inv = linalg.inverse(vt)
            stride = 1
            for s in sizes[j + 1:]:
                stride *= s
            out = list(y)
            block = size * stride
            for start in range(0, len(y), block):
                for off in range(stride):
                    idx = [start + off + k * stride for k in range(size)]
                    vals = [y[i] for i in idx]
                    for r, i in enumerate(idx):
                        out[i] = sum((inv[r][c] * vals[c] for c in range(size)), Q(0))
            y = out
        return y

    def solve_transpose_dense(self, b: Sequence) -> List[Q]:
        return linalg.solve(linalg.transpose(self.X), b)


def build_grid_matrix(grid: PointGrid) -> GridMatrix:
    if not grid.validated:
        validate_axis_points(grid.axes)
    return GridMatrix(grid)


# ---------------------------------------------------------------------------
# the evaluation map
# ---------------------------------------------------------------------------

def _loop_part(x) -> Dict[Monomial, MatrixG]:
    if isinstance(x, TauElement):
        return x.g
    return {tuple(m): X for m, X in x.items()}


class EvalHom:
    def __init__(self, grid: PointGrid, size: int):
        self.grid = grid
        self.size = size
        self.N = grid.N
        self._matrix = None

    @property
    def matrix(self) -> GridMatrix:
        if self._matrix is None:
            self._matrix = GridMatrix(self.grid)
        return self._matrix


def phi_apply(hom: EvalHom, x) -> List[MatrixG]:
    """(sum_m a_I^m X_m)_I for x = sum_m X_m (x) t^m."""
    out = []
    g = _loop_part(x)
    for I in hom.grid.indices:
        acc = MatrixG(hom.size)
        for m, X in g.items():
            acc = acc + X.scale(hom.grid.power(I, m))
        out.append(acc)
    return out


def phi_preimage(hom: EvalHom, target: Sequence[MatrixG], dense: bool = False) -> Dict[Monomial, MatrixG]:
    """The unique u supported on T with phi_apply(u) = target."""
    gm = hom.matrix
    keys = set()
    for X in target:
        keys.update(X.entries)
    coeffs: Dict[Monomial, Dict] = {m: {} for m in hom.grid.exponents}
    for key in sorted(keys):
        b = [X.entries.get(key, 0) for X in target]
        y = gm.solve_transpose_dense(b) if dense else gm.solve_transpose(b)
        for m, v in zip(hom.grid.exponents, y):
            if v:
                coeffs[m][key] = v
    return {m: MatrixG(hom.size, e, check=False) for m, e in coeffs.items() if e}


def quotient_iso_check(hom: EvalHom, sample_bound: int = 3) -> bool:
    """Phi factors through the grid ideal and is bijective on G (x) span(T)."""
    grid = hom.grid
    gm = GridMatrix(grid)
    if gm.det() == 0:
        return False
    # dimension count: dim G * |T| on the left, dim G * N on the right, Phi|T has full rank
    if len(grid.exponents) != grid.N or linalg.rank(gm.X) != grid.N:
        return False
    reducers = grid_reducers(grid.axes, check=False)
    for m in product(range(-sample_bound, sample_bound + 1), repeat=grid.n):
        red = laurent_reduce_mod_ideal(LaurentPoly.monomial(m), grid.axes, _reducers=reducers)
        if any(e < 0 or e >= s for mono in red.support() for e, s in zip(mono, grid.sizes)):
            return False
        for I in grid.indices:
            if red.evaluate(grid.point(I)) != grid.power(I, m):
                return False
    return True


# ---------------------------------------------------------------------------
# the affine-loop target: (G_af (x) A_{n-1}) + D
# ---------------------------------------------------------------------------

class LoopElement:
    """Element of (sl(d+1)[t_1^{+-1}] + Q C_1) (x) A_{n-1} + D.

    ``g`` maps full degrees (m_1, mbar) to matrices, ``c`` maps mbar to the
    coefficient of C_1 (x) t^mbar and ``dd`` holds d_1..d_n.
    """

    __slots__ = ("d", "n", "g", "c", "dd")

    def __init__(self, d, n, g=None, c=None, dd=None):
        self.d, self.n = d, n
        self.g = {tuple(m): X for m, X in (g or {}).items() if not X.is_zero()}
        self.c = {tuple(m): v for m, v in (c or {}).items() if v}
        self.dd = tuple(dd or (0,) * n)

    def is_zero(self):
        return not self.g and not self.c and not any(self.dd)

    def __add__(self, other):
        g = dict(self.g)
        for m, X in other.g.items():
            g[m] = g[m] + X if m in g else X
        c = dict(self.c)
        for m, v in other.c.items():
            c[m] = c.get(m, 0) + v
        return LoopElement(self.d, self.n, g, c, tuple(a + b for a, b in zip(self.dd, other.dd)))

    def scale(self, s):
        return LoopElement(self.d, self.n, {m: X.scale(s) for m, X in self.g.items()},
                           {m: s * v for m, v in self.c.items()}, tuple(s * x for x in self.dd))

    def __eq__(self, other):
        return (isinstance(other, LoopElement) and self.g == other.g and self.c == other.c
                and self.dd == other.dd)

    def __repr__(self):
        return f"LoopElement(g={self.g}, c={self.c}, d={self.dd})"


def loop_bracket(x: LoopElement, y: LoopElement) -> LoopElement:
    g: Dict[Monomial, MatrixG] = {}
    c: Dict[Monomial, object] = {}
    for r, X in x.g.items():
        for s, Y in y.g.items():
            rs = tuple(a + b for a, b in zip(r, s))
            B = X.bracket(Y)
            if not B.is_zero():
                g[rs] = g[rs] + B if rs in g else B
            if rs[0] == 0 and r[0]:
                f = X.trace_form(Y)
                if f:
                    c[rs[1:]] = c.get(rs[1:], 0) + f * r[0]
    for sign, a, b in ((1, x, y), (-1, y, x)):
        for i, coef in enumerate(a.dd):
            if not coef:
                continue
            for s, Y in b.g.items():
                if s[i]:
                    Z = Y.scale(sign * coef * s[i])
                    g[s] = g[s] + Z if s in g else Z
            if i >= 1:
                for mb, v in b.c.items():
                    if mb[i - 1]:
                        c[mb] = c.get(mb, 0) + sign * coef * mb[i - 1] * v
    return LoopElement(x.d, x.n, g, c)


def phi_prime(x: TauElement) -> LoopElement:
    """Identity on the loop part, d_i -> d_i, t^m K_1 -> C_1 (x) t^mbar when m_1 = 0
    and every other central basis element -> 0."""
    c = {}
    for (m, i), v in x.z.items():
        if i == 1 and m[0] == 0:
            c[m[1:]] = c.get(m[1:], 0) + v
    return LoopElement(x.d, x.n, dict(x.g), c, x.dd)
