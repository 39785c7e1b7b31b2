import random
from fractions import Fraction as Q
from itertools import product

import pytest
from hypothesis import given, strategies as st

from toroidal import linalg
from toroidal.algebra import (CenterElement, MatrixG, SystemMismatchError, TauElement, ToroidalAlgebra,
                              bracket, canonicalize_center, jacobi_exhaustive, jacobi_random)
from toroidal.roots import RealRoot

A12 = ToroidalAlgebra(1, 2)
A22 = ToroidalAlgebra(2, 2)
A13 = ToroidalAlgebra(1, 3)


def test_n_at_least_two():
    with pytest.raises(ValueError):
        ToroidalAlgebra(1, 1)


# center ------------------------------------------------------------------------

def test_canonicalize_examples():
    assert canonicalize_center([((1, 1), 1, 1), ((1, 1), 2, 1)], 2) == {}
    assert canonicalize_center([((0, 0, 0), 3, 1)], 3) == {((0, 0, 0), 3): 1}
    assert canonicalize_center([((2, 0), 2, 1)], 2) == {((2, 0), 2): 1}


@given(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)),
       st.lists(st.tuples(st.integers(1, 3), st.integers(-4, 4)), max_size=5))
def test_canonicalize_idempotent_and_kills_relation(m, terms):
    raw = [(m, i, c) for i, c in terms]
    once = canonicalize_center(raw, 3)
    again = canonicalize_center([(mm, i, c) for (mm, i), c in once.items()], 3)
    assert once == again
    relation = [(m, i + 1, m[i]) for i in range(3)]
    assert canonicalize_center(relation, 3) == {}


@pytest.mark.parametrize("m", [(1, 0), (0, 3), (2, -1), (0, 0)])
def test_center_dimension_per_degree(m):
    n = 2
    # brute force: quotient of span{t^m K_i} by the relation vector
    rel = [[Q(x) for x in m]] if any(m) else []
    want = n - linalg.rank(rel) if rel else n
    assert len(A12.center_labels(m)) == want


# bracket -------------------------------------------------------------------------

def test_sl2_bracket_gives_coroot():
    R = A12.roots
    for m in product(range(-2, 3), repeat=2):
        x = bracket(A12.E(1, 2, m), A12.E(2, 1, tuple(-a for a in m)))
        gamma = RealRoot(R.alpha(1), m)
        assert x == A12.coweight_to_tau(R.coroot(gamma))
        expect = A12.H(1, (0, 0))
        for i, mi in enumerate(m):
            expect = expect + A12.K(i + 1).scale(mi)
        assert x == expect


def test_derivations_and_center_grading():
    X = A22.E(1, 3, (2, -1))
    for i in (1, 2):
        assert bracket(A22.D(i), X) == X.scale((2, -1)[i - 1])
    z = A22.from_label(("k", (3, 1), 1))
    assert bracket(A22.D(1), z) == z.scale(3)
    assert bracket(A22.D(2), z) == z
    assert bracket(z, X).is_zero() and bracket(z, A22.K(2)).is_zero()


def test_system_mismatch():
    with pytest.raises(SystemMismatchError):
        bracket(A12.E(1, 2, (0, 0)), A22.E(1, 2, (0, 0)))


@given(st.randoms(use_true_random=False))
def test_antisymmetry_and_jacobi(rng):
    for alg in (A12, A22, A13):
        x, y, z = (alg.random_element(rng) for _ in range(3))
        assert (bracket(x, y) + bracket(y, x)).is_zero()
        assert bracket(x, x).is_zero()
        jac = bracket(bracket(x, y), z) + bracket(bracket(y, z), x) + bracket(bracket(z, x), y)
        assert jac.is_zero()


def test_jacobi_exhaustive_small():
    rep = jacobi_exhaustive(A12, 1)
    assert rep["failures"] == []
    assert rep["triples"] == rep["basis_size"] * (rep["basis_size"] - 1) * (rep["basis_size"] - 2) // 6
    assert jacobi_random(A22, random.Random(5), 20)["failures"] == []


def test_root_space_grading():
    labels = A12.basis_labels(1)
    for a in labels:
        for b in labels:
            w = A12.label_weight(a) + A12.label_weight(b)
            for lab in bracket(A12.from_label(a), A12.from_label(b)).coordinates():
                assert A12.label_weight(lab) == w


@given(st.randoms(use_true_random=False))
def test_trace_form_invariant(rng):
    def rand():
        e = {(i, j): Q(rng.randint(-3, 3)) for i in range(1, 4) for j in range(1, 4) if i != j}
        a, b = Q(rng.randint(-3, 3)), Q(rng.randint(-3, 3))
        e.update({(1, 1): a, (2, 2): b, (3, 3): -a - b})
        return MatrixG(3, e)
    X, Y, Z = rand(), rand(), rand()
    assert Z.bracket(X).trace_form(Y) + X.trace_form(Z.bracket(Y)) == 0
    assert X.trace_form(Y) == Y.trace_form(X)


def test_highest_root_norm_from_trace_form():
    e, f = MatrixG.unit(3, 1, 3), MatrixG.unit(3, 3, 1)
    h = e.bracket(f)
    assert h.trace_form(h) == 2


# root spaces and sl2 triples ---------------------------------------------------------

def test_root_space_dimensions():
    R = A12.roots
    assert len(A12.root_space(R.alpha(1))) == 1
    assert len(A12.root_space(R.delta_m((1, 0)))) == 2
    assert len(A12.root_space(R.alpha(1) * 0)) == 1 + 2 * 2
    assert A12.root_space(R.alpha(1) * 2) == []
    R3 = A13.roots
    assert len(A13.root_space(R3.delta_m((1, -1, 2)))) == 1 + 2


def test_sl2_triples_sl3():
    R = A22.roots
    for alpha in R.finite_roots:
        for m in product(range(-2, 3), repeat=2):
            tr = A22.sl2_triple(alpha, m)
            assert tr.relations_hold()
            assert tr.h == A22.coweight_to_tau(R.coroot(RealRoot(alpha, m)))


def test_sl2_triple_examples():
    R = A12.roots
    tr = A12.sl2_triple(R.alpha(1), (0, 0))
    assert tr.e == A12.E(1, 2, (0, 0)) and tr.f == A12.E(2, 1, (0, 0)) and tr.h == A12.H(1, (0, 0))
    R2 = A22.roots
    tr = A22.sl2_triple(R2.beta, (1, 0))
    assert tr.h == A22.coweight_to_tau(R2.beta_vee + R2.C(1))
    with pytest.raises(Exception):
        A22.sl2_triple(R2.beta * 2, (0, 0))
