"""Independent reference computations used to freeze expected values.

Nothing here imports the package: every routine is a separate textbook
implementation (Freudenthal recursion, Weyl dimension formula, Frenkel-Kac
level one character, brute-force coset counting, Leibniz determinant, long
division and Lagrange interpolation).
"""

from __future__ import annotations

from fractions import Fraction as Q
from itertools import permutations, product
from math import prod


# ---------------------------------------------------------------------------
# Cartan data for type A, finite and untwisted affine
# ---------------------------------------------------------------------------

def cartan_finite(d):
    return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(d)] for i in range(d)]


def cartan_affine(d):
    """Rows/cols ordered alpha_0, alpha_1, .., alpha_d."""
    m = d + 1
    if d == 1:
        return [[2, -2], [-2, 2]]
    A = [[0] * m for _ in range(m)]
    for i in range(m):
        A[i][i] = 2
        A[i][(i + 1) % m] = -1
        A[(i + 1) % m][i] = -1
    return A


def finite_positive_roots(d):
    """alpha_a + .. + alpha_b in simple-root coordinates (length d)."""
    out = []
    for a in range(d):
        for b in range(a, d):
            out.append(tuple(1 if a <= i <= b else 0 for i in range(d)))
    return out


def affine_positive_roots(d, max_height_vec):
    """Positive roots of affine sl(d+1) bounded componentwise, with multiplicities.

    Coordinates (alpha_0, .., alpha_d); delta = (1, .., 1).
    """
    fin = finite_positive_roots(d)
    out = []
    top = max(max_height_vec) + 1
    for k in range(0, top + 1):
        for r in fin:
            for sign in (1, -1):
                if sign == -1 and k == 0:
                    continue
                v = tuple([k] + [k + sign * x for x in r])
                if all(0 <= a <= b for a, b in zip(v, max_height_vec)):
                    out.append((v, 1))
        if k >= 1:
            v = tuple([k] * (d + 1))
            if all(a <= b for a, b in zip(v, max_height_vec)):
                out.append((v, d))
    return out


def _form(A, u, v):
    return sum(u[i] * A[i][j] * v[j] for i in range(len(u)) for j in range(len(v)))


def freudenthal(A, lam_h, roots_fn, box):
    """Multiplicities of Lambda - sum eta_i alpha_i for eta in the box.

    A: symmetric Cartan matrix; lam_h: Lambda(h_i); roots_fn(box) -> [(root, mult)].
    (rho, alpha_i) = 1 and (Lambda, alpha_i) = lam_h[i].
    """
    r = len(A)
    roots = roots_fn(box)
    mult = {}
    etas = sorted(product(*(range(b + 1) for b in box)), key=sum)

    def lam_rho_with(v):           # (Lambda + rho, v) for v in root coordinates
        return sum(v[i] * (lam_h[i] + 1) for i in range(r))

    for eta in etas:
        if not any(eta):
            mult[eta] = 1
            continue
        denom = 2 * lam_rho_with(eta) - _form(A, eta, eta)
        rhs = 0
        for a, ma in roots:
            k = 1
            while True:
                e2 = tuple(x - k * y for x, y in zip(eta, a))
                if any(x < 0 for x in e2):
                    break
                m2 = mult.get(e2, 0)
                if m2:
                    # (mu + k a, a) with mu + k a = Lambda - e2
                    val = sum(a[i] * lam_h[i] for i in range(r)) - _form(A, e2, a)
                    rhs += ma * val * m2
                k += 1
        rhs *= 2
        if denom == 0:
            assert rhs == 0
            mult[eta] = 0
        else:
            q = Q(rhs, denom)
            assert q.denominator == 1 and q >= 0, (eta, q)
            mult[eta] = int(q)
    return {e: m for e, m in mult.items() if m}


def finite_multiplicities(labels):
    """{eta: mult} for V(lambda) of sl(d+1), lambda given by Dynkin labels."""
    d = len(labels)
    A = cartan_finite(d)
    B = 2 * sum(labels) * d + 1
    return freudenthal(A, list(labels), lambda box: [(r, 1) for r in finite_positive_roots(d)], [B] * d)


def weyl_dimension(labels):
    d = len(labels)
    out = Q(1)
    for r in finite_positive_roots(d):
        idx = [i for i, x in enumerate(r) if x]
        out *= Q(sum(labels[i] + 1 for i in idx), len(idx))
    assert out.denominator == 1
    return int(out)


def affine_multiplicities(labels, level, depth):
    """{eta: mult} for the affine sl(d+1) module with eta_0 <= depth."""
    d = len(labels)
    lam_h = [level - sum(labels)] + list(labels)
    A = cartan_affine(d)
    B = 2 * (depth + sum(labels) + level) + 2
    box = [depth] + [B] * d
    mult = freudenthal(A, lam_h, lambda bx: affine_positive_roots(d, bx), box)
    # the box must not cut the weight set
    for eta in mult:
        assert all(eta[i] < box[i] for i in range(1, d + 1)), "box too small"
    return mult


def colored_partitions(k, colors):
    """Number of partitions of k into parts of ``colors`` colors."""
    p = [1] + [0] * k
    for _ in range(colors):
        for part in range(1, k + 1):
            for s in range(part, k + 1):
                p[s] += p[s - part]
    return p[k]


def frenkel_kac_level_one(d, depth):
    """Basic module L(Lambda_0) of affine sl(d+1): {eta: mult} with eta_0 <= depth.

    Weights are Lambda_0 + gamma - (|gamma|^2/2 + k) delta, gamma in the root
    lattice, with multiplicity p_d(k).
    """
    A = cartan_finite(d)
    out = {}
    R = depth + 2
    for g in product(range(-R, R + 1), repeat=d):
        norm = _form(A, g, g) // 2
        for k in range(0, depth + 1):
            e0 = norm + k
            if e0 > depth:
                break
            # Lambda_0 - eta.alpha with alpha_0 = delta - sum alpha_i:
            # -eta_0 delta + sum (eta_0 - eta_i) alpha_i = gamma - e0 delta
            eta = tuple([e0] + [e0 - x for x in g])
            out[eta] = colored_partitions(k, d)
    return out


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------

def leibniz_det(M):
    n = len(M)
    total = 0
    for p in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        total += (-1) ** inv * prod(M[i][p[i]] for i in range(n))
    return total


def coset_count(generators, n):
    """[Z^n : L] by closing L mod M inside (Z/M)^n, M = a nonzero n x n minor."""
    gens = [tuple(g) for g in generators]
    M = 0
    from itertools import combinations
    for sub in combinations(gens, n):
        M = abs(leibniz_det([list(s) for s in sub]))
        if M:
            break
    if not M:
        return None     # infinite index
    seen = {(0,) * n}
    frontier = [(0,) * n]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple((a + b) % M for a, b in zip(v, g))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return M ** n // len(seen)


def lattice_contains(generators, v, search=6):
    """Brute-force membership: v as an integer combination with small coefficients."""
    gens = [tuple(g) for g in generators]
    for cs in product(range(-search, search + 1), repeat=len(gens)):
        if all(sum(c * g[i] for c, g in zip(cs, gens)) == v[i] for i in range(len(v))):
            return True
    return False


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

def poly_from_roots(roots):
    """Coefficients low -> high of prod (t - a)."""
    c = [Q(1)]
    for a in roots:
        new = [Q(0)] * (len(c) + 1)
        for i, x in enumerate(c):
            new[i + 1] += x
            new[i] -= a * x
        c = new
    return c


def long_division_remainder(p, m):
    """p mod m for coefficient lists low -> high, m monic."""
    r = [Q(x) for x in p]
    dm = len(m) - 1
    while len(r) - 1 >= dm and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < dm:
            break
        c = r[-1]
        shift = len(r) - 1 - dm
        for i, x in enumerate(m):
            r[shift + i] -= c * x
        r.pop()
    r = r + [Q(0)] * (dm - len(r))
    return r[:dm]


def lagrange_reduce(value_at, axes):
    """The polynomial on T = prod range(N_j) agreeing with value_at on the grid.

    Returns {exponent tuple: coefficient}, via tensor-product Lagrange bases.
    """
    bases = []
    for pts in axes:
        per = []
        for i, a in enumerate(pts):
            c = [Q(1)]
            den = Q(1)
            for j, b in enumerate(pts):
                if j == i:
                    continue
                new = [Q(0)] * (len(c) + 1)
                for k, x in enumerate(c):
                    new[k + 1] += x
                    new[k] -= b * x
                c = new
                den *= (a - b)
            per.append([x / den for x in c])
        bases.append(per)
    out = {}
    for I in product(*(range(len(p)) for p in axes)):
        val = value_at(tuple(axes[j][i] for j, i in enumerate(I)))
        if not val:
            continue
        for e in product(*(range(len(p)) for p in axes)):
            c = prod((bases[j][I[j]][e[j]] for j in range(len(axes))), start=Q(1))
            if c:
                out[e] = out.get(e, 0) + val * c
    return {e: c for e, c in out.items() if c}
