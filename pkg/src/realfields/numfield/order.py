"""Maximal orders by p-maximalisation (Round 2, Pohst-Zassenhaus).

An order is held as a lower-triangular basis over the power basis 1, t, ..., t^(d-1),
stored as integer rows with one common denominator.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import sympy

from ..exact.poly import IntPoly
from ..linalg import hnf_rows, kernel_mod_p, solve_left_triangular


def _reduce_power(prod: list, f: tuple) -> list:
    """Reduce a polynomial (coefficient list) modulo the monic f."""
    d = len(f) - 1
    prod = list(prod)
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c:
            for j in range(d):
                prod[k - d + j] -= c * f[j]
        prod[k] = 0
    return prod[:d] + [0] * max(0, d - len(prod))


def poly_mulmod(a, b, f) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _reduce_power(out, f)


class _Order:
    """Working representation: rows (ints) / den over the power basis."""

    def __init__(self, f: tuple, rows: list, den: int):
        self.f = f
        self.d = len(f) - 1
        self.rows = rows
        self.den = den
        self._table = None

    def coords_of_power(self, v) -> list:
        """Coordinates over the order basis of a power-basis vector (rational)."""
        return solve_left_triangular([Fraction(x) * self.den for x in v], self.rows)

    def table(self) -> list:
        """Multiplication table T[i][j] = coords of w_i w_j (integers)."""
        if self._table is None:
            d = self.d
            T = [[None] * d for _ in range(d)]
            for i in range(d):
                for j in range(i, d):
                    prod = poly_mulmod(self.rows[i], self.rows[j], self.f)
                    c = self.coords_of_power([Fraction(x, self.den * self.den) for x in prod])
                    ci = []
                    for x in c:
                        if x.denominator != 1:
                            raise ArithmeticError("basis does not span an order")
                        ci.append(int(x))
                    T[i][j] = T[j][i] = ci
            self._table = T
        return self._table


def _mul_coords(T, a, b, p=None):
    d = len(a)
    out = [0] * d
    for i in range(d):
        if a[i]:
            for j in range(d):
                if b[j]:
                    c = a[i] * b[j]
                    row = T[i][j]
                    for k in range(d):
                        out[k] += c * row[k]
    if p:
        out = [x % p for x in out]
    return out


def _pow_coords(T, a, e, p):
    d = len(a)
    result = [1 % p] + [0] * (d - 1)  # w_1 = 1
    base = [x % p for x in a]
    while e:
        if e & 1:
            result = _mul_coords(T, result, base, p)
        base = _mul_coords(T, base, base, p)
        e >>= 1
    return result


def _enlarge_at(order: _Order, p: int):
    """One Round-2 step: the ring of multipliers of the p-radical, or None if p-maximal."""
    d = order.d
    T = order.table()
    q = p
    while q < d:
        q *= p
    # p-radical = kernel of x -> x^q on O/pO
    frob = [_pow_coords(T, [int(i == j) for j in range(d)], q, p) for i in range(d)]
    ker = kernel_mod_p(frob, p)
    I = hnf_rows([list(v) for v in ker] + [[p * int(i == j) for j in range(d)] for i in range(d)], d)
    # multiplier condition: x * I subset p I ; linear in x modulo p
    big = []
    for i in range(d):
        row = []
        for g in I:
            # w_i * g in order coordinates
            prod = [0] * d
            for l in range(d):
                if g[l]:
                    tl = T[i][l]
                    for k in range(d):
                        prod[k] += g[l] * tl[k]
            y = solve_left_triangular(prod, I)
            for x in y:
                assert x.denominator == 1
                row.append(int(x) % p)
        big.append(row)
    U = kernel_mod_p(big, p)
    if not U:
        return None
    H = hnf_rows([list(v) for v in U] + [[p * int(i == j) for j in range(d)] for i in range(d)], d)
    # new basis = (1/p) H * old_rows / den
    new_rows = [[sum(H[i][k] * order.rows[k][j] for k in range(d)) for j in range(d)] for i in range(d)]
    new_den = order.den * p
    return _normalise(order.f, new_rows, new_den)


def _normalise(f, rows, den) -> _Order:
    d = len(f) - 1
    H = hnf_rows(rows, d)
    g = den
    for r in H:
        for x in r:
            g = gcd(g, x)
    return _Order(f, [[x // g for x in r] for r in H], den // g)


def maximal_order_basis(f: IntPoly):
    """Integral basis of the ring of integers of Q[x]/(f).

    Returns (rows, den, index, field_disc) where the basis element w_i is
    sum_j rows[i][j] t^j / den, rows lower triangular with w_1 = 1.
    """
    c = f.coeffs
    d = f.degree
    disc_f = f.discriminant()
    order = _Order(c, [[int(i == j) for j in range(d)] for i in range(d)], 1)
    if d > 1:
        fac = sympy.factorint(abs(disc_f))
        for p, e in sorted((int(p), int(e)) for p, e in fac.items()):
            if e < 2:
                continue
            while True:
                nxt = _enlarge_at(order, p)
                if nxt is None:
                    break
                order = nxt
    index = Fraction(1)
    for i in range(d):
        index *= Fraction(order.den, order.rows[i][i])
    assert index.denominator == 1
    index = int(index)
    field_disc = disc_f // (index * index)
    assert field_disc * index * index == disc_f
    return order.rows, order.den, index, field_disc
