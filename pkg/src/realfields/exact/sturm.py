"""Sturm sequences, exact real-root counting and dyadic root isolation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .poly import IntPoly, pderiv, peval_frac_sign, prem, primitive, trim


class NotSquarefreeError(ValueError):
    pass


def _is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


@dataclass(frozen=True)
class DyadicInterval:
    """Closed interval [lo, hi] with power-of-two denominators."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if not (_is_dyadic(lo) and _is_dyadic(hi)):
            raise ValueError("interval endpoints must be dyadic rationals")
        if lo > hi:
            raise ValueError("empty interval")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        if isinstance(x, QuadSurd):
            return x.compare(self.lo) >= 0 and x.compare(self.hi) <= 0
        return self.lo <= x <= self.hi

    def __float__(self) -> float:
        return float(self.mid)

    def to_json(self) -> list:
        return [str(self.lo), str(self.hi)]


@dataclass(frozen=True)
class QuadSurd:
    """The real number (a + b*sqrt(r)) / den, den > 0, r > 0 not a square."""

    a: int
    b: int
    r: int
    den: int = 1

    def __float__(self) -> float:
        return (self.a + self.b * math.sqrt(self.r)) / self.den

    def _sign_ab(self, A: int, B: int) -> int:
        sa = (A > 0) - (A < 0)
        sb = (B > 0) - (B < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare A^2 with B^2 r
        lhs, rhs = A * A, B * B * self.r
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def sign(self) -> int:
        return self._sign_ab(self.a, self.b)

    def compare(self, q) -> int:
        """Sign of self - q for rational q."""
        q = Fraction(q)
        # (a - q*den + b sqrt r)/den, scaled by q.denominator
        A = self.a * q.denominator - q.numerator * self.den
        return self._sign_ab(A, self.b * q.denominator)

    def poly_sign(self, coeffs: Sequence[int]) -> int:
        """Exact sign of the integer polynomial at this point."""
        A, B = 0, 0
        dpow = 1
        for c in reversed(coeffs):
            A, B = A * self.a + B * self.b * self.r + c * dpow, A * self.b + B * self.a
            dpow *= self.den
        return self._sign_ab(A, B)


Point = Union[None, int, Fraction, float, QuadSurd]

# 7 + sqrt(6): the root bound of the small-house polynomial search
SEVEN_PLUS_SQRT6 = QuadSurd(7, 1, 6)
# 2 + sqrt(6): the house bound for generators
TWO_PLUS_SQRT6 = QuadSurd(2, 1, 6)


def sturm_sequence(f: Sequence[int]) -> list:
    """Sturm chain of a squarefree integer polynomial (integer, primitive members)."""
    f = trim(f)
    if len(f) < 2:
        return [f]
    seq = [primitive(f), primitive(pderiv(f))]
    while len(seq[-1]) > 1:
        r = prem(seq[-2], seq[-1])
        if not r:
            raise NotSquarefreeError("requires squarefree polynomial")
        seq.append(primitive(tuple(-x for x in r)))
    return seq


def _sign_at(p: Sequence[int], x: Point, side: int = 0) -> int:
    if x is None or (isinstance(x, float) and math.isinf(x)):
        s = 1 if p[-1] > 0 else -1
        if (side < 0 or (isinstance(x, float) and x < 0)) and (len(p) - 1) % 2:
            s = -s
        return s
    if isinstance(x, QuadSurd):
        return x.poly_sign(p)
    q = Fraction(x)
    return peval_frac_sign(p, q.numerator, q.denominator)


def _variations(seq: list, x: Point, side: int = 0) -> int:
    v = 0
    last = 0
    for p in seq:
        s = _sign_at(p, x, side)
        if s:
            if last and s != last:
                v += 1
            last = s
    return v


def _count(seq: list, a: Point, b: Point) -> int:
    return _variations(seq, a, -1) - _variations(seq, b, 1)


def _as_coeffs(f) -> tuple:
    return f.coeffs if isinstance(f, IntPoly) else tuple(f)


def sturm_count(f, a: Point = None, b: Point = None) -> int:
    """Number of distinct real roots of squarefree f in (a, b]; None means -inf/+inf."""
    c = _as_coeffs(f)
    if len(c) == 1:
        return 0
    seq = sturm_sequence(c)
    return _count(seq, a, b)


def root_bound(c: Sequence[int]) -> int:
    """Power of two strictly exceeding every |root| (Cauchy bound)."""
    lc = abs(c[-1])
    m = max((abs(x) for x in c[:-1]), default=0)
    bound = 1 + (m + lc - 1) // lc
    k = 1
    while k <= bound:
        k *= 2
    return k


def _refine_simple(c, seq, lo: Fraction, hi: Fraction, precision: int):
    """Shrink (lo, hi] holding exactly one root down to width 2^-precision.

    Bisection on integer mantissas over a common power-of-two denominator.
    """
    shi = peval_frac_sign(c, hi.numerator, hi.denominator)
    if shi == 0:
        return DyadicInterval(hi, hi)
    k = max(precision, (lo.denominator.bit_length() - 1), (hi.denominator.bit_length() - 1))
    scale = 1 << k
    L = lo.numerator * (scale // lo.denominator)
    H = hi.numerator * (scale // hi.denominator)
    # widths are measured at scale 2^k; keep halving until H - L <= 2^(k - precision)
    while H - L > (1 << (k - precision)):
        if (L + H) % 2:
            L, H, k = 2 * L, 2 * H, k + 1
        M = (L + H) // 2
        sm = peval_frac_sign(c, M, 1 << k)
        if sm == 0:
            return DyadicInterval(Fraction(M, 1 << k), Fraction(M, 1 << k))
        if sm == shi:
            H = M
        else:
            L = M
    return DyadicInterval(Fraction(L, 1 << k), Fraction(H, 1 << k))


def isolate_real_roots(f, precision: int = 53) -> list:
    """Disjoint dyadic intervals, one per distinct real root, ascending, width <= 2^-precision."""
    c = _as_coeffs(f)
    if len(c) < 2:
        return []
    seq = sturm_sequence(c)
    M = Fraction(root_bound(c))
    out = []
    stack = [(-M, M, _count(seq, -M, M))]
    isolated = []
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            isolated.append((lo, hi))
            continue
        m = (lo + hi) / 2
        nl = _count(seq, lo, m)
        stack.append((lo, m, nl))
        stack.append((m, hi, n - nl))
    isolated.sort()
    for lo, hi in isolated:
        out.append(_refine_simple(c, seq, lo, hi, precision))
    return out


def refine_root(f, iv: DyadicInterval, precision: int) -> DyadicInterval:
    """Return a narrower interval around the single root of f inside iv."""
    c = _as_coeffs(f)
    if iv.width <= Fraction(1, 2 ** precision):
        return iv
    lo, hi = iv.lo, iv.hi
    if peval_frac_sign(c, lo.numerator, lo.denominator) == 0:
        return DyadicInterval(lo, lo)
    return _refine_simple(c, None, lo, hi, precision)
