"""Factorisation of small-degree monic integer polynomials by bounded factor search.

Candidate factors are read off from root approximations: a monic factor of degree
k has integer coefficients that are (signed) elementary symmetric functions of
some k roots, so rounding those symmetric functions over every root subset and
confirming by exact division finds every factor.  Real-rooted inputs use the
certified dyadic root intervals; other inputs use mpmath roots with a computed
error radius.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import mpmath

from .poly import IntPoly, pdiv_exact_int, pgcd, pderiv, trim
from .sturm import isolate_real_roots, sturm_count

MAX_DEGREE = 8


class IrreducibilityError(ValueError):
    pass


def _elem_sym_interval(ivs):
    """Interval enclosures of e_1..e_k for real roots given as (lo, hi) Fraction pairs."""
    # polynomial prod (x - r) with interval coefficients, ascending
    coeffs = [(Fraction(1), Fraction(1))]
    for lo, hi in ivs:
        new = [(Fraction(0), Fraction(0))] * (len(coeffs) + 1)
        for i, (clo, chi) in enumerate(coeffs):
            # contribute x * c
            a, b = new[i + 1]
            new[i + 1] = (a + clo, b + chi)
            # contribute -r * c
            prods = [-lo * clo, -lo * chi, -hi * clo, -hi * chi]
            a, b = new[i]
            new[i] = (a + min(prods), b + max(prods))
        coeffs = new
    return coeffs


def _candidates_real(ivs_all, k):
    for subset in itertools.combinations(ivs_all, k):
        box = _elem_sym_interval(subset)
        ranges = []
        for lo, hi in box[:-1]:
            ranges.append(range(math.ceil(lo), math.floor(hi) + 1))
        for tup in itertools.product(*ranges):
            yield tup + (1,)


def _candidates_complex(c, k):
    deg = len(c) - 1
    mpmath.mp.dps = 60
    roots, err = mpmath.polyroots(list(reversed(c)), maxsteps=400, extraprec=400, error=True)
    rad = mpmath.mpf(err) * 10 + mpmath.mpf(10) ** -40
    for subset in itertools.combinations(range(deg), k):
        poly = [mpmath.mpc(1)]
        for idx in subset:
            r = roots[idx]
            new = [mpmath.mpc(0)] * (len(poly) + 1)
            for i, a in enumerate(poly):
                new[i + 1] += a
                new[i] -= r * a
            poly = new
        # error radius grows with the size of the coefficients
        scale = max(abs(x) for x in poly) + 1
        tol = rad * scale * (2 ** k) + mpmath.mpf(10) ** -20
        ranges = []
        ok = True
        for a in poly[:-1]:
            if abs(a.imag) > tol + mpmath.mpf("1e-6"):
                ok = False
                break
            lo = int(mpmath.ceil(a.real - tol - mpmath.mpf("1e-6")))
            hi = int(mpmath.floor(a.real + tol + mpmath.mpf("1e-6")))
            ranges.append(range(lo, hi + 1))
        if not ok:
            continue
        for tup in itertools.product(*ranges):
            yield tup + (1,)


def _split_once(c):
    """Return (g, h) with c = g*h nontrivially, or None when c is irreducible."""
    n = len(c) - 1
    if n <= 1:
        return None
    # rational (hence integer) roots divide the constant term
    if c[0] == 0:
        return (0, 1), trim(c[1:])
    for d in _divisors(abs(c[0])):
        for r in (d, -d):
            q = pdiv_exact_int(c, (-r, 1))
            if q is not None:
                return (-r, 1), q
    real_rooted = sturm_count(c) == n
    if real_rooted:
        ivs = [(iv.lo, iv.hi) for iv in isolate_real_roots(c, 40)]
    for k in range(2, n // 2 + 1):
        gen = _candidates_real(ivs, k) if real_rooted else _candidates_complex(c, k)
        for cand in gen:
            q = pdiv_exact_int(c, cand)
            if q is not None:
                return cand, q
    return None


def _divisors(n: int):
    small = []
    large = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def factor_small(f: IntPoly) -> list:
    """Irreducible monic factors of a monic polynomial of degree <= 8, with multiplicity.

    The returned factors are sorted by (degree, coefficients) and multiply back to f.
    """
    if f.degree > MAX_DEGREE:
        raise ValueError(f"degree {f.degree} is out of supported range (<= {MAX_DEGREE})")
    if not f.is_monic:
        raise ValueError("factor_small requires a monic polynomial")
    out = []
    todo = [f.coeffs]
    while todo:
        c = todo.pop()
        if len(c) - 1 <= 1:
            out.append(c)
            continue
        # repeated factors first: the squarefree route below needs simple roots
        g = pgcd(c, pderiv(c))
        if len(g) > 1:
            g_int = tuple(int(x) for x in g)
            q = pdiv_exact_int(c, g_int)
            todo.extend([g_int, q])
            continue
        split = _split_once(c)
        if split is None:
            out.append(c)
        else:
            todo.extend(split)
    polys = [IntPoly(c) for c in out]
    polys.sort(key=lambda p: (p.degree, p.coeffs))
    return polys


def is_irreducible(f: IntPoly) -> bool:
    if f.degree <= 0:
        return False
    return len(factor_small(f)) == 1


def is_totally_real(f: IntPoly) -> bool:
    """All roots real; f must be irreducible."""
    if not is_irreducible(f):
        raise IrreducibilityError(f"{f} is not irreducible")
    return sturm_count(f.coeffs) == f.degree
