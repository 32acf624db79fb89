"""Integer polynomials in ascending coefficient order.

Two layers live here: bare helpers working on coefficient tuples (used in the
hot loops of the enumeration code) and the :class:`IntPoly` value type that the
public API passes around.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

Coeffs = tuple


def trim(c: Sequence) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def padd(a: Sequence, b: Sequence) -> tuple:
    n = max(len(a), len(b))
    return trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def psub(a: Sequence, b: Sequence) -> tuple:
    n = max(len(a), len(b))
    return trim((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n))


def pscale(a: Sequence, s) -> tuple:
    return trim(s * x for x in a)


def pmul(a: Sequence, b: Sequence) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def pderiv(a: Sequence) -> tuple:
    return trim(i * a[i] for i in range(1, len(a)))


def peval(a: Sequence, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def peval_frac_sign(a: Sequence, num: int, den: int) -> int:
    """Sign of a(num/den) for den > 0, computed with integers only."""
    acc = 0
    dpow = 1
    # Horner for sum c_i num^i den^(n-i)
    for c in reversed(a):
        acc = acc * num + c * dpow
        dpow *= den
    return (acc > 0) - (acc < 0)


def pdivmod(a: Sequence, b: Sequence):
    """Division with remainder over the rationals."""
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = [Fraction(x) for x in trim(a)]
    db = len(b) - 1
    lb = Fraction(b[-1])
    if len(a) - 1 < db:
        return (), trim(a)
    q = [Fraction(0)] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        coef = a[k + db] / lb
        q[k] = coef
        if coef:
            for j in range(db + 1):
                a[k + j] -= coef * b[j]
    return trim(q), trim(a[:db])


def pdiv_exact_int(a: Sequence, b: Sequence):
    """Exact quotient a/b over Z for monic-or-unit-leading b; None if it does not divide."""
    b = trim(b)
    a = list(trim(a))
    db = len(b) - 1
    lb = b[-1]
    if len(a) - 1 < db:
        return None if a else ()
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        top = a[k + db]
        if top % lb:
            return None
        coef = top // lb
        q[k] = coef
        if coef:
            for j in range(db + 1):
                a[k + j] -= coef * b[j]
    if any(a[:db]):
        return None
    return trim(q)


def content(a: Sequence) -> int:
    g = 0
    for x in a:
        g = gcd(g, int(x))
    return g


def primitive(a: Sequence) -> tuple:
    """Divide by the positive content; keeps the sign of the leading coefficient."""
    g = content(a)
    if g in (0, 1):
        return tuple(a)
    return tuple(x // g for x in a)


def to_primitive_int(a: Sequence) -> tuple:
    """Scale a rational polynomial by a positive rational to a primitive integer one."""
    a = trim(a)
    if not a:
        return ()
    den = 1
    for x in a:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in a]
    return primitive(ints)


def prem(a: Sequence, b: Sequence) -> tuple:
    """Pseudo-remainder scaled by |lc(b)|^(deg a - deg b + 1), so signs survive."""
    a = list(trim(a))
    b = trim(b)
    db = len(b) - 1
    lb = b[-1]
    alb = abs(lb)
    sgn = 1 if lb > 0 else -1
    while len(a) - 1 >= db and a:
        da = len(a) - 1
        top = a[-1]
        # a <- |lb| * a - sgn * top * x^(da-db) * b
        a = [alb * x for x in a]
        shift = da - db
        for j in range(db + 1):
            a[shift + j] -= sgn * top * b[j]
        a = list(trim(a))
    return tuple(a)


def pgcd(a: Sequence, b: Sequence) -> tuple:
    """Monic gcd over Q (rational coefficients)."""
    a, b = trim(a), trim(b)
    while b:
        _, r = pdivmod(a, b)
        a, b = b, r
    if not a:
        return ()
    lc = Fraction(a[-1])
    return tuple(Fraction(x) / lc for x in a)


def resultant(a: Sequence, b: Sequence) -> Fraction:
    a, b = trim(a), trim(b)
    if not a or not b:
        return Fraction(0)
    m, n = len(a) - 1, len(b) - 1
    if n == 0:
        return Fraction(b[0]) ** m
    if m == 0:
        return Fraction(a[0]) ** n
    _, r = pdivmod(a, b)
    if not r:
        return Fraction(0)
    k = len(r) - 1
    s = -1 if (m * n) % 2 else 1
    return s * Fraction(b[-1]) ** (m - k) * resultant(b, r)


def discriminant(a: Sequence) -> int:
    a = trim(a)
    n = len(a) - 1
    if n < 1:
        raise ValueError("discriminant of a constant")
    r = resultant(a, pderiv(a))
    s = -1 if (n * (n - 1) // 2) % 2 else 1
    d = s * r / a[-1]
    assert d.denominator == 1
    return int(d)


def compose_shift(a: Sequence, t) -> tuple:
    """Coefficients of a(x + t)."""
    out = ()
    for c in reversed(a):
        out = padd(pmul(out, (t, 1)), (c,))
    return out


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, coefficients ascending: x^3-4x-2 is IntPoly((-2, -4, 0, 1))."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        if not c or c[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def __call__(self, x):
        return peval(self.coeffs, x)

    def derivative(self) -> "IntPoly":
        return _deriv_or_zero(pderiv(self.coeffs))

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        return IntPoly(pmul(self.coeffs, other.coeffs))

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-x for x in self.coeffs))

    def shift(self, t: int) -> "IntPoly":
        """The polynomial x -> self(x + t)."""
        return IntPoly(compose_shift(self.coeffs, t))

    def discriminant(self) -> int:
        return discriminant(self.coeffs)

    def is_squarefree(self) -> bool:
        return len(pgcd(self.coeffs, pderiv(self.coeffs))) <= 1

    def squarefree_part(self) -> "IntPoly":
        g = pgcd(self.coeffs, pderiv(self.coeffs))
        if len(g) <= 1:
            return self
        q, r = pdivmod(self.coeffs, g)
        assert not r
        return IntPoly(to_primitive_int(q))

    def to_text(self) -> str:
        return ",".join(str(x) for x in self.coeffs)

    @classmethod
    def parse(cls, text: str, require_monic: bool = False) -> "IntPoly":
        parts = [p.strip() for p in text.strip().split(",") if p.strip()]
        if not parts:
            raise ValueError("empty polynomial")
        p = cls(tuple(int(x) for x in parts))
        if require_monic and not p.is_monic:
            raise ValueError(f"polynomial {text!r} is not monic")
        return p

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if i and abs(c) == 1:
                coef = "-" if c < 0 else "+"
                terms.append(f"{coef}{mono}")
            else:
                terms.append(f"{c:+d}{mono}")
        s = "".join(terms)
        return s[1:] if s.startswith("+") else s


def _deriv_or_zero(d):
    if not d:
        raise ValueError("derivative of a constant polynomial is zero")
    return IntPoly(d)
