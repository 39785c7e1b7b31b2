"""Affine and toroidal root data for type A: Cartan matrices, forms, coroots, reflections."""

from __future__ import annotations

from fractions import Fraction as Q
from functools import cached_property
from itertools import product
from typing import Iterable, List, Sequence, Tuple

from . import linalg
from .exact import DimensionError, to_q


class NotARealRootError(ValueError):
    pass


class DomainError(ValueError):
    pass


class _Vec:
    """Exact coordinate vector; subclasses fix which basis the coordinates refer to."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        self.coords = tuple(to_q(c) for c in coords)

    def _same(self, other):
        if type(other) is not type(self) or len(other.coords) != len(self.coords):
            raise DimensionError(f"cannot combine {type(self).__name__} of length "
                                 f"{len(self.coords)} with {other!r}")

    def __add__(self, other):
        self._same(other)
        return type(self)(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other):
        self._same(other)
        return type(self)(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self):
        return type(self)(-a for a in self.coords)

    def __mul__(self, c):
        c = to_q(c)
        return type(self)(c * a for a in self.coords)

    __rmul__ = __mul__

    def __eq__(self, other):
        return type(other) is type(self) and other.coords == self.coords

    def __hash__(self):
        return hash((type(self).__name__, self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self):
        return f"{type(self).__name__}({[str(c) for c in self.coords]})"


class WeightVec(_Vec):
    """Coordinates over (alpha_1..alpha_{d+n}, w_1..w_n)."""


class CoweightVec(_Vec):
    """Coordinates over (alpha_1^vee..alpha_{d+n}^vee, d_1..d_n)."""


def affine_cartan_A(d: int) -> List[List[int]]:
    """Cartan matrix of the untwisted affine algebra of type A_d, indices 0..d."""
    if d < 1:
        raise DomainError("rank must be at least 1")
    if d == 1:
        return [[2, -2], [-2, 2]]
    size = d + 1
    a = [[0] * size for _ in range(size)]
    for i in range(size):
        a[i][i] = 2
        a[i][(i + 1) % size] = -1
        a[i][(i - 1) % size] = -1
    return a


class RealRoot:
    """gamma = alpha + sum m_j delta_j with alpha a finite root."""

    __slots__ = ("finite_part", "null_part")

    def __init__(self, finite_part: WeightVec, null_part: Sequence[int]):
        self.finite_part = finite_part
        self.null_part = tuple(int(x) for x in null_part)

    def __repr__(self):
        return f"RealRoot({self.finite_part!r}, m={self.null_part})"

    def __eq__(self, other):
        return (isinstance(other, RealRoot) and other.finite_part == self.finite_part
                and other.null_part == self.null_part)

    def __hash__(self):
        return hash((self.finite_part, self.null_part))


class ToroidalRootSystem:
    """Root data of the toroidal algebra built on sl(d+1) with n loop variables."""

    def __init__(self, d: int, n: int):
        if n < 1:
            raise DomainError("need at least one loop variable")
        self.d = d
        self.n = n
        self.affine_cartan = affine_cartan_A(d)
        # labels a_i and colabels (b_i^{-1} = a_i^vee), kept symbolic
        self.labels = [1] * (d + 1)
        self.colabels = [1] * (d + 1)
        self.rank = d + n           # number of simple roots alpha_1..alpha_{d+n}
        self.dim = d + 2 * n
        A = self.affine_cartan
        size = d + n
        ext = [[0] * size for _ in range(size)]
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                ext[i - 1][j - 1] = A[i][j]
        for k in range(n):
            r = d + k
            for j in range(1, d + 1):
                ext[r][j - 1] = A[0][j]
                ext[j - 1][r] = A[j][0]
            for l in range(n):
                ext[r][d + l] = A[0][0]
        self.extended_cartan = ext
        self.ext_labels = self.labels[1:] + [self.labels[0]] * n
        self.ext_colabels = self.colabels[1:] + [self.colabels[0]] * n
        # B~ = D~^{-1} A~ with D~ = diag(a_i b_i); b_i = 1 / colabel_i
        self.D_tilde = [Q(self.ext_labels[i], self.ext_colabels[i]) for i in range(size)]
        self.B_tilde = [[Q(ext[i][j]) / self.D_tilde[i] for j in range(size)] for i in range(size)]

    # -- basis vectors -------------------------------------------------------
    def alpha(self, i: int) -> WeightVec:
        """Simple root alpha_i, 1 <= i <= d+n."""
        if not 1 <= i <= self.rank:
            raise DomainError(f"alpha index {i} out of range")
        c = [0] * self.dim
        c[i - 1] = 1
        return WeightVec(c)

    def w(self, i: int) -> WeightVec:
        c = [0] * self.dim
        c[self.rank + i - 1] = 1
        return WeightVec(c)

    def alpha_vee(self, i: int) -> CoweightVec:
        c = [0] * self.dim
        c[i - 1] = 1
        return CoweightVec(c)

    def dd(self, i: int) -> CoweightVec:
        """Degree derivation d_i."""
        c = [0] * self.dim
        c[self.rank + i - 1] = 1
        return CoweightVec(c)

    @cached_property
    def beta(self) -> WeightVec:
        c = [0] * self.dim
        for i in range(self.d):
            c[i] = self.labels[i + 1]
        return WeightVec(c)

    @cached_property
    def beta_vee(self) -> CoweightVec:
        c = [0] * self.dim
        for i in range(self.d):
            c[i] = self.colabels[i + 1]
        return CoweightVec(c)

    def delta(self, j: int) -> WeightVec:
        return self.beta + self.alpha(self.d + j)

    def delta_m(self, m: Sequence[int]) -> WeightVec:
        out = WeightVec([0] * self.dim)
        for j, mj in enumerate(m):
            if mj:
                out = out + mj * self.delta(j + 1)
        return out

    def C(self, j: int) -> CoweightVec:
        return self.beta_vee + self.alpha_vee(self.d + j)

    def weight_basis(self) -> List[WeightVec]:
        return [self.alpha(i) for i in range(1, self.rank + 1)] + [self.w(i) for i in range(1, self.n + 1)]

    def coweight_basis(self) -> List[CoweightVec]:
        return ([self.alpha_vee(i) for i in range(1, self.rank + 1)]
                + [self.dd(i) for i in range(1, self.n + 1)])

    # -- pairing and forms ---------------------------------------------------
    @cached_property
    def pairing_matrix(self) -> List[List[Q]]:
        """P[a][b] = (weight basis a)(coweight basis b)."""
        d, n, size = self.d, self.n, self.rank
        P = [[Q(0)] * self.dim for _ in range(self.dim)]
        for i in range(size):
            for j in range(size):
                P[i][j] = Q(self.extended_cartan[j][i])
        for k in range(n):
            P[d + k][size + k] = Q(1)          # alpha_{d+k}(d_k) = 1
            P[size + k][d + k] = Q(1)          # w_k(alpha_{d+k}^vee) = 1
        return P

    @cached_property
    def form_gram_dual(self) -> List[List[Q]]:
        d, n, size = self.d, self.n, self.rank
        G = [[Q(0)] * self.dim for _ in range(self.dim)]
        for i in range(size):
            for j in range(size):
                G[i][j] = self.B_tilde[i][j]
        for k in range(n):
            G[d + k][size + k] = Q(1)
            G[size + k][d + k] = Q(1)
        return G

    @cached_property
    def form_gram(self) -> List[List[Q]]:
        d, n, size = self.d, self.n, self.rank
        G = [[Q(0)] * self.dim for _ in range(self.dim)]
        for i in range(size):
            for j in range(size):
                G[i][j] = self.D_tilde[j] * self.extended_cartan[i][j]
        for k in range(n):
            G[d + k][size + k] = Q(1)
            G[size + k][d + k] = Q(1)
        return G

    def _check(self, v, cls):
        if not isinstance(v, cls) or len(v.coords) != self.dim:
            raise DimensionError(f"expected {cls.__name__} of length {self.dim}")

    def pair(self, lam: WeightVec, h: CoweightVec) -> Q:
        self._check(lam, WeightVec)
        self._check(h, CoweightVec)
        P = self.pairing_matrix
        total = Q(0)
        for a, x in enumerate(lam.coords):
            if x:
                row = P[a]
                for b, y in enumerate(h.coords):
                    if y and row[b]:
                        total += x * y * row[b]
        return total

    @staticmethod
    def _bilinear(G, u, v) -> Q:
        total = Q(0)
        for a, x in enumerate(u):
            if x:
                row = G[a]
                for b, y in enumerate(v):
                    if y and row[b]:
                        total += x * y * row[b]
        return total

    def form_dual(self, lam: WeightVec, mu: WeightVec) -> Q:
        self._check(lam, WeightVec)
        self._check(mu, WeightVec)
        return self._bilinear(self.form_gram_dual, lam.coords, mu.coords)

    def form(self, h: CoweightVec, k: CoweightVec) -> Q:
        self._check(h, CoweightVec)
        self._check(k, CoweightVec)
        return self._bilinear(self.form_gram, h.coords, k.coords)

    def weight_from_values(self, values: Sequence) -> WeightVec:
        """The weight taking the given values on the coweight basis."""
        values = [to_q(v) for v in values]
        if len(values) != self.dim:
            raise DimensionError("need one value per coweight basis vector")
        return WeightVec(linalg.solve(linalg.transpose(self.pairing_matrix), values))

    def t_of(self, lam: WeightVec) -> CoweightVec:
        """The coweight t_lam with form(t_lam, h) = lam(h) for all h."""
        self._check(lam, WeightVec)
        rhs = [self.pair(lam, h) for h in self.coweight_basis()]
        return CoweightVec(linalg.solve(self.form_gram, rhs))

    # -- finite roots ----------------------------------------------------------
    @cached_property
    def finite_roots(self) -> Tuple[WeightVec, ...]:
        """Roots of sl(d+1): +-(alpha_i + ... + alpha_{j-1}), positive ones first."""
        pos = []
        for i in range(1, self.d + 1):
            for j in range(i + 1, self.d + 2):
                c = [0] * self.dim
                for k in range(i, j):
                    c[k - 1] = 1
                pos.append(WeightVec(c))
        return tuple(pos + [-p for p in pos])

    @cached_property
    def positive_finite_roots(self) -> Tuple[WeightVec, ...]:
        return self.finite_roots[: len(self.finite_roots) // 2]

    def is_finite_root(self, alpha: WeightVec) -> bool:
        return alpha in self.finite_roots

    def finite_coroot(self, alpha: WeightVec) -> CoweightVec:
        if not self.is_finite_root(alpha):
            raise NotARealRootError(f"{alpha!r} is not a finite root")
        return (Q(2) / self.form_dual(alpha, alpha)) * self.t_of(alpha)

    def real_root_weight(self, gamma: RealRoot) -> WeightVec:
        return gamma.finite_part + self.delta_m(gamma.null_part)

    def coroot(self, gamma: RealRoot) -> CoweightVec:
        alpha = gamma.finite_part
        if alpha.is_zero() or not self.is_finite_root(alpha):
            raise NotARealRootError(f"{gamma!r} is not a real root")
        if len(gamma.null_part) != self.n:
            raise DimensionError("null part has wrong length")
        scale = Q(2) / self.form_dual(alpha, alpha)
        out = self.finite_coroot(alpha)
        for j, mj in enumerate(gamma.null_part):
            if mj:
                out = out + (scale * mj) * self.C(j + 1)
        return out

    def reflect(self, gamma: RealRoot, lam: WeightVec) -> WeightVec:
        g = self.real_root_weight(gamma)
        return lam - self.pair(lam, self.coroot(gamma)) * g

    def real_roots(self, bound: int) -> List[RealRoot]:
        """All real roots alpha + delta_m with |m|_inf <= bound."""
        rng = range(-bound, bound + 1)
        return [RealRoot(a, m) for m in product(rng, repeat=self.n) for a in self.finite_roots]

    def simple_real_roots(self) -> List[RealRoot]:
        """The simple roots alpha_1..alpha_{d+n} written as real roots."""
        out = [RealRoot(self.alpha(i), (0,) * self.n) for i in range(1, self.d + 1)]
        for j in range(1, self.n + 1):
            m = [0] * self.n
            m[j - 1] = 1
            out.append(RealRoot(-self.beta, m))
        return out

    # -- closing matrix --------------------------------------------------------
    def pairing_check_matrix(self) -> List[List[Q]]:
        """Pairing of {alpha_i, delta_j, w_j} against {alpha_i^vee, C_j, d_j}."""
        ws = ([self.alpha(i) for i in range(1, self.d + 1)]
              + [self.delta(j) for j in range(1, self.n + 1)]
              + [self.w(j) for j in range(1, self.n + 1)])
        hs = ([self.alpha_vee(i) for i in range(1, self.d + 1)]
              + [self.C(j) for j in range(1, self.n + 1)]
              + [self.dd(j) for j in range(1, self.n + 1)])
        return [[self.pair(w, h) for h in hs] for w in ws]

    def expected_check_matrix(self) -> List[List[Q]]:
        d, n = self.d, self.n
        size = d + 2 * n
        M = [[Q(0)] * size for _ in range(size)]
        for i in range(d):
            for j in range(d):
                M[i][j] = Q(self.affine_cartan[j + 1][i + 1])
        for k in range(n):
            M[d + k][d + n + k] = Q(1)
            M[d + n + k][d + k] = Q(1)
        return M

    # -- finite weights --------------------------------------------------------
    def finite_labels(self, lam) -> List[Q]:
        """Dynkin labels lam(alpha_i^vee), i <= d, of a WeightVec or label list."""
        if isinstance(lam, WeightVec):
            return [self.pair(lam, self.alpha_vee(i)) for i in range(1, self.d + 1)]
        labels = [to_q(x) for x in lam]
        if len(labels) != self.d:
            raise DimensionError(f"expected {self.d} Dynkin labels")
        return labels

    def is_miniscule(self, lam) -> bool:
        """True iff no dominant mu < lam (finite dominance order) other than lam."""
        labels = self.finite_labels(lam)
        if any(x < 0 or x.denominator != 1 for x in labels):
            raise DomainError("weight is not dominant integral")
        labels = [int(x) for x in labels]
        cart = [[self.affine_cartan[i][j] for j in range(1, self.d + 1)] for i in range(1, self.d + 1)]
        # root coordinates of lam bound how far down a dominant weight can sit
        coords = linalg.solve(cart, labels)
        bounds = [int(c) for c in coords]   # floor, coords are >= 0
        for nvec in product(*(range(b + 1) for b in bounds)):
            if not any(nvec):
                continue
            mu = [labels[j] - sum(nvec[i] * cart[j][i] for i in range(self.d)) for j in range(self.d)]
            if all(x >= 0 for x in mu):
                return False
        return True

    def finite_weight(self, labels: Sequence) -> WeightVec:
        """The weight with given Dynkin labels on alpha_1^vee..alpha_d^vee and zero elsewhere
        on alpha_{d+j}^vee and d_j."""
        labels = self.finite_labels(labels)
        values = list(labels) + [Q(0)] * (self.dim - self.d)
        return self.weight_from_values(values)
