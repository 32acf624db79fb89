import random

import pytest

from realfields.exact import IntPoly
from realfields.indecomp import UnitSystem, quadratic_unit_system
from realfields.latenum import totally_positive_by_trace
from realfields.numfield import maximal_order, quadratic_field, rational_field
from realfields.sosrep import (
    DiagonalForm,
    PythagorasTable,
    represent_diagonal,
    sum_of_squares,
    universal_form,
    universality_spot_check,
)


def _check_sum(tau, xs, m=None):
    total = tau.field.zero
    for x in xs:
        total = total + x * x
    assert total == tau
    if m is not None:
        assert len(xs) <= m


# --- sums of squares --------------------------------------------------------------------


def test_seven_over_rationals():
    Q = rational_field()
    xs = sum_of_squares(Q(7), 4)
    _check_sum(Q(7), xs, 4)
    assert sum_of_squares(Q(7), 3) is None


def test_two_squares_over_sqrt2():
    K = quadratic_field(2)
    tau = K([4, 2])  # 1 + (1 + sqrt 2)^2
    _check_sum(tau, sum_of_squares(tau, 2), 2)


def _three_square_exception(n):
    while n % 4 == 0:
        n //= 4
    return n % 8 == 7


def test_lagrange_and_legendre():
    Q = rational_field()
    for n in range(1, 1001):
        xs = sum_of_squares(Q(n), 4)
        _check_sum(Q(n), xs, 4)
    for n in range(1, 300):
        got = sum_of_squares(Q(n), 3)
        assert (got is None) == _three_square_exception(n)
        if got is not None:
            _check_sum(Q(n), got, 3)


def test_target_validation():
    K = quadratic_field(2)
    with pytest.raises(ValueError, match="zero excluded"):
        sum_of_squares(K.zero, 4)
    with pytest.raises(ValueError):
        sum_of_squares(K([1, 1]), 4)


@pytest.mark.parametrize("coeffs", [(-5, 0, 1), (-2, 0, 1), (-1, -2, 1, 1)])
def test_scaling_by_unit_squares(coeffs):
    K = maximal_order(IntPoly(coeffs))
    u = K([1, 1] + [0] * (K.degree - 2))
    if u.norm() not in (1, -1):
        u = K.theta
    assert u.norm() in (1, -1)
    rng = random.Random(8)
    pool = totally_positive_by_trace(K, 6 * K.degree)
    for c in rng.sample(pool, min(12, len(pool))):
        tau = K(list(c))
        for m in (1, 2, 3):
            a = sum_of_squares(tau, m)
            b = sum_of_squares(tau * u * u, m)
            assert (a is None) == (b is None)


def test_monotone_in_number_of_squares():
    K = quadratic_field(5)
    for c in totally_positive_by_trace(K, 16):
        tau = K(list(c))
        prev = False
        for m in range(1, 6):
            ok = sum_of_squares(tau, m) is not None
            assert ok or not prev
            prev = ok


# --- diagonal forms ---------------------------------------------------------------------------


def test_two_squares_fail_at_three():
    Q = rational_field()
    form = DiagonalForm(Q, [Q.one, Q.one])
    fails = universality_spot_check(form, 5)
    assert fails[0] == Q(3)
    assert represent_diagonal(form, Q(5)) is not None


def test_represent_diagonal_alignment():
    Q = rational_field()
    form = DiagonalForm(Q, [Q(1), Q(2), Q(5)])
    for n in range(1, 60):
        xs = represent_diagonal(form, Q(n))
        if xs is None:
            continue
        total = sum((a * x * x for a, x in zip(form.coefficients, xs)), Q.zero)
        assert total == Q(n)


def test_diagonal_form_validation():
    K = quadratic_field(2)
    with pytest.raises(ValueError):
        DiagonalForm(K, [K([1, 1])])


def test_pythagoras_table():
    t = PythagorasTable()
    assert [t.cap(d) for d in (1, 2, 3, 4)] == [4, 5, 6, 7]
    with pytest.raises(KeyError):
        t.cap(9)


# --- universal forms ---------------------------------------------------------------------------


def test_universal_form_rationals():
    Q = rational_field()
    form = universal_form(Q, UnitSystem(Q, [], complete=True))
    assert form.rank == 5
    assert universality_spot_check(form, 290) == []


@pytest.mark.parametrize("D, rank", [(5, 8), (2, 11)])
def test_universal_form_quadratic(D, rank):
    K = quadratic_field(D)
    form = universal_form(K, quadratic_unit_system(K))
    assert form.rank == rank
    assert not form.conditional
    assert universality_spot_check(form, 40) == []
