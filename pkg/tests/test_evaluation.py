import random
from fractions import Fraction as Q
from itertools import product

import pytest
import sympy
from hypothesis import given, strategies as st

import oracles
from toroidal import linalg
from toroidal.algebra import MatrixG, ToroidalAlgebra, bracket
from toroidal.evaluation import (EvalHom, GridMatrix, LoopElement, PointGrid, build_grid_matrix,
                                 loop_bracket, phi_apply, phi_preimage, phi_prime, quotient_iso_check)
from toroidal.exact import InvalidGridError

rat = st.fractions(min_value=-6, max_value=6, max_denominator=5).filter(lambda x: x != 0)


def grids(max_axis=3, n_max=2):
    return st.integers(1, n_max).flatmap(
        lambda n: st.lists(st.lists(rat, min_size=1, max_size=max_axis, unique=True), min_size=n, max_size=n))


def rand_matrix(rng, size):
    e = {(i, j): Q(rng.randint(-4, 4), rng.randint(1, 3))
         for i in range(1, size + 1) for j in range(1, size + 1) if i != j}
    a = Q(rng.randint(-4, 4))
    e[(1, 1)] = a
    e[(size, size)] = e.get((size, size), 0) - a
    return MatrixG(size, e)


# the grid matrix ------------------------------------------------------------------

def test_one_axis_is_vandermonde():
    pts = [Q(1), Q(2), Q(-3)]
    gm = build_grid_matrix(PointGrid([pts]))
    assert gm.X == [[p ** k for p in pts] for k in range(3)]


def test_single_point_grid():
    gm = build_grid_matrix(PointGrid([[5], [Q(1, 2)]]))
    assert gm.X == [[1]]


def test_two_axis_example_against_oracles():
    gm = build_grid_matrix(PointGrid([[1, 2], [1, 3]]))
    assert len(gm.X) == 4
    want = oracles.leibniz_det(gm.X)
    assert want != 0
    assert gm.det() == want == gm.det_from_factors()
    assert gm.factor_product() == gm.X


@given(grids())
def test_factorization_and_det(axes):
    gm = GridMatrix(PointGrid(axes))
    assert gm.factor_product() == gm.X
    assert gm.det() != 0
    assert gm.det() == gm.det_from_factors() == sympy.Matrix(gm.X).det()
    if gm.N <= 6:
        assert gm.det() == oracles.leibniz_det(gm.X)


def test_entries_are_monomials_in_the_points():
    # distinct primes as points: each entry factors uniquely as prod a_{j,i_j}^{m_j}
    axes = [[2, 3], [5, 7], [11, 13]]
    grid = PointGrid(axes)
    gm = GridMatrix(grid)
    for r, m in enumerate(grid.exponents):
        for c, I in enumerate(grid.indices):
            f = sympy.factorint(int(gm.X[r][c]))
            want = {axes[j][I[j]]: m[j] for j in range(3) if m[j]}
            assert f == want


def test_invalid_grids_rejected():
    with pytest.raises(InvalidGridError, match="distinct nonzero points required"):
        PointGrid([[1, 1]])
    with pytest.raises(InvalidGridError):
        PointGrid([[1], [0, 2]])


# Phi -----------------------------------------------------------------------------------

def test_phi_examples():
    alg = ToroidalAlgebra(1, 2)
    X = MatrixG.unit(2, 1, 2)
    hom = EvalHom(PointGrid([[1], [1]]), 2)
    for m in product(range(-2, 3), repeat=2):
        assert phi_apply(hom, alg.loop(X, m)) == [X]
    hom1 = EvalHom(PointGrid([[1, 2], [1]]), 2)
    assert phi_apply(hom1, alg.loop(X, (1, 0))) == [X, X.scale(2)]


@given(grids(max_axis=2), st.randoms(use_true_random=False))
def test_phi_is_homomorphism(axes, rng):
    grid = PointGrid(axes)
    n = grid.n
    if n < 2:
        axes = axes + [[1]]
        grid = PointGrid(axes)
        n = 2
    alg = ToroidalAlgebra(2, n)
    hom = EvalHom(grid, 3)
    for _ in range(3):
        x = alg.loop(rand_matrix(rng, 3), tuple(rng.randint(-2, 2) for _ in range(n)))
        y = alg.loop(rand_matrix(rng, 3), tuple(rng.randint(-2, 2) for _ in range(n)))
        lhs = phi_apply(hom, bracket(x, y))
        rhs = [a.bracket(b) for a, b in zip(phi_apply(hom, x), phi_apply(hom, y))]
        assert lhs == rhs


@given(grids(), st.randoms(use_true_random=False))
def test_preimage_round_trip(axes, rng):
    grid = PointGrid(axes)
    hom = EvalHom(grid, 2)
    u = {m: rand_matrix(rng, 2) for m in grid.exponents if rng.random() < 0.7}
    target = phi_apply(hom, u)
    for dense in (False, True):
        pre = phi_preimage(hom, target, dense=dense)
        assert set(pre) <= set(grid.exponents)
        assert phi_apply(hom, pre) == target
        assert {m: X for m, X in pre.items()} == {m: X for m, X in u.items() if not X.is_zero()}


def test_preimage_of_unit_vector_is_interpolant():
    grid = PointGrid([[1, 2, 3]])
    hom = EvalHom(grid, 2)
    X = MatrixG.unit(2, 1, 2)
    zero = MatrixG(2)
    pre = phi_preimage(hom, [X, zero, zero])
    # the coefficient of X is the Lagrange polynomial that is 1 at 1 and 0 at 2, 3
    coeffs = [pre.get((k,), zero).entries.get((1, 2), 0) for k in range(3)]
    for p, want in zip([1, 2, 3], [1, 0, 0]):
        assert sum(c * Q(p) ** k for k, c in enumerate(coeffs)) == want
    single = EvalHom(PointGrid([[4]]), 2)
    assert phi_preimage(single, [X]) == {(0,): X}


def test_quotient_iso_check():
    assert quotient_iso_check(EvalHom(PointGrid([[1, -1], [2]]), 2))
    assert quotient_iso_check(EvalHom(PointGrid([[3]]), 2))
    assert not quotient_iso_check(EvalHom(PointGrid.unchecked([[1, 1], [2]]), 2))


@given(grids(max_axis=3))
def test_preimage_after_apply_is_reduction(axes):
    from toroidal.exact import LaurentPoly, laurent_reduce_mod_ideal
    grid = PointGrid(axes)
    hom = EvalHom(grid, 2)
    X = MatrixG.unit(2, 2, 1)
    bound = 2 * grid.N
    rng = random.Random(grid.N)
    for _ in range(3):
        m = tuple(rng.randint(-bound, bound) for _ in range(grid.n))
        pre = phi_preimage(hom, phi_apply(hom, {m: X}))
        red = laurent_reduce_mod_ideal(LaurentPoly.monomial(m), grid.axes)
        assert {k: Y.entries[(2, 1)] for k, Y in pre.items()} == red.terms


# Phi' --------------------------------------------------------------------------------------

def test_phi_prime_examples():
    alg = ToroidalAlgebra(1, 2)
    assert phi_prime(alg.K(1, (0, 5))) == LoopElement(1, 2, c={(5,): 1})
    assert phi_prime(alg.K(2, (3, 1))).is_zero()
    assert phi_prime(alg.K(1, (2, 0))).is_zero()
    assert phi_prime(alg.D(2)) == LoopElement(1, 2, dd=(0, 1))


def test_phi_prime_is_homomorphism():
    alg = ToroidalAlgebra(1, 2)
    labels = alg.basis_labels(2)
    els = [alg.from_label(l) for l in labels]
    images = [phi_prime(x) for x in els]
    for a in range(len(els)):
        for b in range(a + 1, len(els)):
            assert phi_prime(bracket(els[a], els[b])) == loop_bracket(images[a], images[b])
