import math
import random
from fractions import Fraction

import numpy as np
import pytest

from oracles import lemma_inequality_holds, quadratic_box_oracle
from realfields.exact import IntPoly
from realfields.latenum import (
    BoxBounds,
    EnumerationLimitError,
    GramEmbeddings,
    enumerate_box,
    l1_length,
    minkowski_reduced_basis,
    rayleigh_constant,
    smallest_eigenvalue,
    square_below,
    square_box,
    totally_positive_by_trace,
)
from realfields.numfield import is_totally_positive, maximal_order, quadratic_field, rational_field


def coords(elts):
    return [tuple(int(c) for c in e.coords) for e in elts]


# --- enumerate_box ----------------------------------------------------------------


def test_box_sqrt2():
    K = quadratic_field(2)
    got = coords(enumerate_box(K, BoxBounds((Fraction(3, 2), Fraction(3, 2)))))
    assert got == sorted([(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)])


def test_box_rationals():
    got = coords(enumerate_box(rational_field(), BoxBounds((Fraction(5, 2),))))
    assert got == [(-2,), (-1,), (0,), (1,), (2,)]


@pytest.mark.parametrize("coeffs", [(-5, 0, 1), (-2, -4, 0, 1), (5, 0, -5, 0, 1)])
def test_half_box_holds_only_zero(coeffs):
    K = maximal_order(IntPoly(coeffs))
    box = BoxBounds(tuple([Fraction(1, 2)] * K.degree))
    assert coords(enumerate_box(K, box)) == [tuple([0] * K.degree)]


@pytest.mark.parametrize("D", [2, 3, 5, 13])
def test_box_matches_naive_loop(D):
    K = quadratic_field(D)
    rng = random.Random(D)
    for _ in range(12):
        b = tuple(Fraction(rng.randint(1, 16), rng.choice([1, 2, 4])) for _ in range(2))
        b = tuple(min(x, Fraction(4)) for x in b)
        for mode in ("symmetric", "one-sided"):
            got = coords(enumerate_box(K, BoxBounds(b, mode)))
            assert got == quadratic_box_oracle(K, D, b, mode)


def test_box_exact_boundary():
    # the integer 2 sits exactly on c = 2 (kept) and just outside c = 1.999
    K = quadratic_field(2)
    assert (2, 0) in coords(enumerate_box(K, BoxBounds((2, 2))))
    assert (2, 0) not in coords(enumerate_box(K, BoxBounds((Fraction(1999, 1000), 2))))
    # one-sided boxes are open: 2 is excluded from 0 < s(x) < 2
    assert (2, 0) not in coords(enumerate_box(K, BoxBounds((2, 2), "one-sided")))


def test_enumeration_limit():
    K = quadratic_field(2)
    with pytest.raises(EnumerationLimitError, match="limit of 10"):
        enumerate_box(K, BoxBounds((40, 40)), limit=10)


def test_box_validation():
    with pytest.raises(ValueError):
        BoxBounds((0, 1))
    with pytest.raises(ValueError):
        BoxBounds((1, 1), "sideways")


# --- square_below --------------------------------------------------------------------


def test_square_below_examples():
    Q = rational_field()
    assert square_below(Q(5)).coords == (1,)
    assert square_below(Q(1)) is None
    K = quadratic_field(2)
    b = square_below(K([4, 1]))
    assert b is not None and is_totally_positive(K([4, 1]) - b * b)


def test_square_below_rejects_non_positive():
    K = quadratic_field(2)
    with pytest.raises(ValueError):
        square_below(K([1, 1]))


def test_square_box_contains_roots():
    K = quadratic_field(5)
    a = K([7, 3])
    box = square_box(a)
    for c, v in zip(box.bounds, a.embeddings_float()):
        assert float(c) ** 2 >= v


@pytest.mark.parametrize("coeffs", [(-2, 0, 1), (-13, 0, 1), (-2, -4, 0, 1)])
def test_norm_above_disc_has_square_below(coeffs):
    K = maximal_order(IntPoly(coeffs))
    rng = random.Random(1)
    seen = 0
    for c in totally_positive_by_trace(K, 14 * K.degree):
        a = K(list(c))
        if a.norm() > K.disc and rng.random() < 0.3:
            assert square_below(a) is not None
            seen += 1
    assert seen > 5


# --- totally positive elements by trace --------------------------------------------------------


def test_tp_by_trace_against_loop():
    K = quadratic_field(5)
    got = set(totally_positive_by_trace(K, 12))
    want = set()
    for a in range(-30, 31):
        for b in range(-30, 31):
            x = K([a, b])
            if not x.is_zero and is_totally_positive(x) and x.trace() <= 12:
                want.add((a, b))
    assert got == want
    traces = [K.trace_coords(c) for c in totally_positive_by_trace(K, 12)]
    assert traces == sorted(traces)


# --- Rayleigh constant ----------------------------------------------------------------------------


@pytest.mark.parametrize(
    "M, lam, C",
    [([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 1, 1), ([[2, 0], [0, 2]], 2, Fraction(1, 2)), ([[2, 1], [1, 2]], 1, 1)],
)
def test_rayleigh_examples(M, lam, C):
    iv = smallest_eigenvalue(M, 40)
    assert iv.lo <= lam <= iv.hi and iv.width <= Fraction(1, 2**40)
    rc = rayleigh_constant(GramEmbeddings(M))
    assert rc.lo <= C <= rc.hi


def test_rayleigh_rejects_indefinite():
    with pytest.raises(ValueError):
        GramEmbeddings([[1, 2], [2, 1]])


def test_lemma_inequality_small_sample():
    rng = random.Random(2)
    K = maximal_order(IntPoly((-2, -4, 0, 1)))
    for _ in range(25):
        r = rng.randint(1, 3)
        A = [[rng.randint(-3, 3) for _ in range(r)] for _ in range(r)]
        M = [[sum(A[k][i] * A[k][j] for k in range(r)) + (i == j) for j in range(r)] for i in range(r)]
        vec = [K([rng.randint(-5, 5) for _ in range(3)]) for _ in range(r)]
        if all(v.is_zero for v in vec):
            continue
        assert lemma_inequality_holds(K, M, vec)


# --- Minkowski reduced basis -----------------------------------------------------------------------


def test_minkowski_basis_examples():
    assert coords(minkowski_reduced_basis(rational_field())) == [(1,)]
    assert coords(minkowski_reduced_basis(quadratic_field(5))) == [(1, 0), (0, 1)]
    assert coords(minkowski_reduced_basis(quadratic_field(2))) == [(1, 0), (0, 1)]


def test_minkowski_basis_lengths_increase():
    K = maximal_order(IntPoly((5, 0, -5, 0, 1)))
    B = minkowski_reduced_basis(K)
    lens = [l1_length(b) for b in B]
    assert lens == sorted(lens)
    det = round(abs(np.linalg.det(np.array([[int(c) for c in b.coords] for b in B]))))
    assert det == 1


def test_minkowski_degree_cap():
    K = maximal_order(IntPoly((576, 0, -960, 0, 352, 0, -40, 0, 1)))  # sqrt2 + sqrt3 + sqrt5
    with pytest.raises(ValueError, match="unsupported degree"):
        minkowski_reduced_basis(K)
