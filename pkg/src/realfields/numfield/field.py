"""Totally real number fields with an integral basis and certified embeddings."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import mpmath
import numpy as np

from ..exact.factor import is_totally_real
from ..exact.poly import IntPoly, pdivmod, pderiv, pgcd, to_primitive_int, trim
from ..exact.sturm import DyadicInterval, QuadSurd, isolate_real_roots, refine_root, sturm_count
from ..linalg import charpoly_int, inverse_frac
from .order import maximal_order_basis, poly_mulmod

MAX_DEGREE = 8


class FieldMismatchError(ValueError):
    pass


def _dyadic_floor(q: Fraction, bits: int) -> Fraction:
    return Fraction(math.floor(q * 2**bits), 2**bits)


def _dyadic_ceil(q: Fraction, bits: int) -> Fraction:
    return Fraction(math.ceil(q * 2**bits), 2**bits)


def _interval_horner(coeffs: Sequence[Fraction], lo: Fraction, hi: Fraction):
    """Enclosure of sum c_i x^i over x in [lo, hi] (naive interval Horner)."""
    a = b = Fraction(0)
    for c in reversed(coeffs):
        prods = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(prods) + c, max(prods) + c
    return a, b


def _norm_coord(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else x


class NumberField:
    """Q(t) for a monic irreducible totally real t, with maximal order data.

    The integral basis is w_i = sum_j basis[i][j] t^j with w_1 = 1; embeddings
    sigma_1 < ... < sigma_d are ordered by the real roots of the minimal polynomial.
    """

    def __init__(self, min_poly: IntPoly, rows, den: int, index: int, disc: int):
        self.min_poly = min_poly
        self.degree = min_poly.degree
        self._rows = [list(r) for r in rows]
        self._den = den
        self.index = index
        self.disc = disc
        self.basis = tuple(tuple(Fraction(x, den) for x in r) for r in rows)
        self._root_cache = {}
        self.embeddings = self.root_intervals(100)
        d = self.degree
        f = min_poly.coeffs
        inv = inverse_frac(self.basis)
        T = []
        for i in range(d):
            Ti = []
            for j in range(d):
                prod = poly_mulmod(self._rows[i], self._rows[j], f) if d > 1 else [self._rows[i][0] * self._rows[j][0]]
                c = [sum(Fraction(prod[k], den * den) * inv[k][l] for k in range(d)) for l in range(d)]
                Ti.append(tuple(int(x) for x in c))
            T.append(tuple(Ti))
        self.table = tuple(T)
        self._power_to_basis = inv
        # trace of w_i = trace of its multiplication matrix
        self.basis_traces = tuple(sum(T[i][k][k] for k in range(d)) for i in range(d))
        self._float_setup()

    # --- construction helpers -------------------------------------------------
    @classmethod
    def from_json(cls, rec: dict) -> "NumberField":
        return cls(IntPoly(tuple(rec["min_poly"])), rec["rows"], rec["den"], rec["index"], rec["disc"])

    def to_json(self) -> dict:
        return {
            "min_poly": list(self.min_poly.coeffs),
            "rows": self._rows,
            "den": self._den,
            "index": self.index,
            "disc": self.disc,
        }

    def _float_setup(self):
        d = self.degree
        ivs = self.root_intervals(100)
        E = np.empty((d, d))
        den = self._den
        for j, iv in enumerate(ivs):
            m = iv.mid
            M, S = m.numerator, m.denominator
            for i, row in enumerate(self._rows):
                # exact value sum row_k M^k S^(d-1-k) / (den S^(d-1)), rounded once
                num = sum(c * M**k * S ** (d - 1 - k) for k, c in enumerate(row))
                E[j, i] = num / (den * S ** (d - 1))
        self.E = E
        self.absE = np.abs(E)
        self.Einv = np.linalg.inv(E)
        self.roots_float = np.array([float(iv.mid) for iv in ivs])

    @cached_property
    def E_mp(self):
        """Embedding matrix E[j][i] = s_j(w_i) to 60 significant digits (mpmath)."""
        d = self.degree
        ivs = self.root_intervals(260)
        with mpmath.workdps(70):
            M = mpmath.matrix(d, d)
            for j, iv in enumerate(ivs):
                r = mpmath.mpf(iv.mid.numerator) / iv.mid.denominator
                for i, row in enumerate(self.basis):
                    acc = mpmath.mpf(0)
                    for c in reversed(row):
                        acc = acc * r + mpmath.mpf(c.numerator) / c.denominator
                    M[j, i] = acc
        return M

    # --- embeddings ---------------------------------------------------------
    def root_intervals(self, precision: int) -> list:
        """Certified intervals for the roots of min_poly, ascending, width <= 2^-precision."""
        if precision in self._root_cache:
            return self._root_cache[precision]
        coarser = [p for p in self._root_cache if p < precision]
        if coarser:
            base = self._root_cache[max(coarser)]
            ivs = [refine_root(self.min_poly, iv, precision) for iv in base]
        else:
            ivs = isolate_real_roots(self.min_poly, precision)
        self._root_cache[precision] = ivs
        return ivs

    # --- elements -----------------------------------------------------------
    def __call__(self, coords) -> "FieldElement":
        """Element from basis coordinates, or a rational number."""
        if isinstance(coords, (int, Fraction)):
            return self.rational(coords)
        return FieldElement(self, coords)

    def element(self, coords) -> "FieldElement":
        return FieldElement(self, coords)

    @cached_property
    def one(self) -> "FieldElement":
        return FieldElement(self, [1] + [0] * (self.degree - 1))

    @cached_property
    def zero(self) -> "FieldElement":
        return FieldElement(self, [0] * self.degree)

    def from_power(self, poly) -> "FieldElement":
        """The element sum_j poly[j] t^j (rational coefficients allowed)."""
        d = self.degree
        p = list(poly)
        if len(p) > d:
            p = [Fraction(x) for x in p]
            p = list(pdivmod(p, self.min_poly.coeffs)[1])
        p = [Fraction(x) for x in p] + [Fraction(0)] * (d - len(p))
        coords = [sum(p[k] * self._power_to_basis[k][l] for k in range(d)) for l in range(d)]
        return FieldElement(self, coords)

    @cached_property
    def theta(self) -> "FieldElement":
        return self.from_power([0, 1])

    def rational(self, q) -> "FieldElement":
        return FieldElement(self, [q] + [0] * (self.degree - 1))

    # --- fast float helpers for hot loops ------------------------------------
    def float_embed(self, coords) -> np.ndarray:
        return self.E @ np.asarray(coords, dtype=float)

    def float_margin(self, coords) -> np.ndarray:
        """Rigorous bound on the float error of float_embed for integer coords."""
        return 1e-12 * (1.0 + self.absE @ np.abs(np.asarray(coords, dtype=float)))

    def regular_matrix(self, coords) -> list:
        """Matrix of multiplication by the element on basis coordinates (row convention)."""
        d = self.degree
        T = self.table
        nz = [(i, a) for i, a in enumerate(coords) if a]
        return [[sum(a * T[k][i][l] for i, a in nz) for l in range(d)] for k in range(d)]

    def mul_coords(self, a, b) -> list:
        d = self.degree
        T = self.table
        out = [0] * d
        for i, x in enumerate(a):
            if x:
                Ti = T[i]
                for j, y in enumerate(b):
                    if y:
                        c = x * y
                        row = Ti[j]
                        for k in range(d):
                            out[k] += c * row[k]
        return out

    def log_abs_embed(self, coords) -> np.ndarray:
        """log |s_j(x)| for nonzero x; switches to multiprecision under cancellation."""
        v = self.float_embed(coords)
        m = self.float_margin(coords)
        if np.all(np.abs(v) > 1e6 * m):
            return np.log(np.abs(v))
        size = max(abs(Fraction(a)) for a in coords)
        dps = 30 + 2 * len(str(int(size) + 1))
        with mpmath.workdps(dps):
            ivs = self.root_intervals(int(dps * 3.4) + 8)
            pc = FieldElement(self, coords).power_coeffs()
            out = []
            for iv in ivs:
                r = mpmath.mpf(iv.mid.numerator) / iv.mid.denominator
                acc = mpmath.mpf(0)
                for c in reversed(pc):
                    acc = acc * r + mpmath.mpf(c.numerator) / c.denominator
                out.append(float(mpmath.log(abs(acc))))
        return np.array(out)

    def trace_coords(self, coords):
        return sum(a * t for a, t in zip(coords, self.basis_traces))

    def charpoly_coords(self, coords) -> tuple:
        if self.degree == 1:
            return (-coords[0], 1)
        return charpoly_int(self.regular_matrix(coords))

    def is_tp_coords(self, coords) -> bool:
        """Certified total positivity for integer coordinates (hot-loop variant).

        The float screen is decisive only outside a rigorous error margin; the
        remaining cases use the exact characteristic polynomial: for a real-rooted
        polynomial all roots are positive iff the coefficients strictly alternate.
        """
        v = self.float_embed(coords)
        m = self.float_margin(coords)
        if np.all(v > m):
            return True
        if np.any(v < -m):
            return False
        return charpoly_all_positive(self.charpoly_coords(coords))

    def norm_le_coords(self, coords, N) -> bool:
        """|norm| <= N for integer coordinates, float screen with an exact fallback."""
        v = np.abs(self.float_embed(coords))
        m = self.float_margin(coords)
        hi = float(np.prod(v + m))
        lo = float(np.prod(np.maximum(v - m, 0.0)))
        if hi <= N * (1 - 1e-12):
            return True
        if lo > N * (1 + 1e-12):
            return False
        return abs(self(list(coords)).norm()) <= N

    # --- misc ---------------------------------------------------------------
    @property
    def label(self) -> tuple:
        return (self.degree, self.disc, self.min_poly.coeffs)

    def __repr__(self) -> str:
        return f"NumberField({self.min_poly.to_text()!r}, disc={self.disc})"

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self) -> int:
        return hash(self.min_poly)

    def __reduce__(self):
        return (NumberField, (self.min_poly, self._rows, self._den, self.index, self.disc))


def charpoly_all_positive(cp: Sequence) -> bool:
    """All roots positive for a real-rooted monic polynomial (strict sign alternation)."""
    n = len(cp) - 1
    for k, c in enumerate(cp):
        # coefficient of x^k must have sign (-1)^(n-k)
        if c == 0 or (c > 0) != ((n - k) % 2 == 0):
            return False
    return True


class FieldElement:
    """Element of a NumberField, held as coordinates over the integral basis."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: Iterable):
        coords = tuple(_norm_coord(x) for x in coords)
        if len(coords) != field.degree:
            raise ValueError(f"expected {field.degree} coordinates, got {len(coords)}")
        self.field = field
        self.coords = coords

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatchError("elements belong to different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, [a - b for a, b in zip(self.coords, o.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a * other for a in self.coords])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul_coords(self.coords, o.coords))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FieldElement":
        """Inverse via the regular representation: solve y M = e_1."""
        from ..linalg import inverse_frac

        M = self.field.regular_matrix(self.coords)
        inv = inverse_frac(M)
        # x * y = 1 with y = e_1 M^-1 in row convention
        return FieldElement(self.field, inv[0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [Fraction(a) / other for a in self.coords])
        return self * self._coerce(other).inverse()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field.rational(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return f"FieldElement({list(map(str, self.coords))})"

    # predicates
    @property
    def is_integral(self) -> bool:
        return all(isinstance(a, int) for a in self.coords)

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    # exact invariants
    def trace(self):
        return _norm_coord(self.field.trace_coords(self.coords))

    def norm(self):
        from ..linalg import det_frac

        return _norm_coord(det_frac(self.field.regular_matrix(self.coords)))

    def charpoly(self) -> tuple:
        """Characteristic polynomial over Q (ascending, monic, rational or integer)."""
        return tuple(_norm_coord(c) for c in self.field.charpoly_coords(self.coords))

    def min_poly(self) -> IntPoly:
        cp = self.charpoly()
        g = pgcd(cp, pderiv(cp))
        if len(g) > 1:
            q, r = pdivmod(cp, g)
            assert not r
            cp = tuple(Fraction(x) / Fraction(q[-1]) for x in q)
        if all(Fraction(c).denominator == 1 for c in cp):
            return IntPoly(tuple(int(c) for c in cp))
        return IntPoly(to_primitive_int(cp))

    def is_proper(self) -> bool:
        return self.min_poly().degree == self.field.degree

    # embeddings
    def embeddings_float(self) -> np.ndarray:
        return self.field.E @ np.array([float(a) for a in self.coords])

    def power_coeffs(self) -> list:
        d = self.field.degree
        B = self.field.basis
        return [sum(Fraction(a) * B[i][j] for i, a in enumerate(self.coords)) for j in range(d)]

    def interval(self, j: int, precision: int = 53) -> DyadicInterval:
        """Certified enclosure of sigma_j(self), width <= 2^-precision."""
        g = self.power_coeffs()
        if not any(g[1:]):
            q = g[0]
            lo, hi = _dyadic_floor(q, precision), _dyadic_ceil(q, precision)
            return DyadicInterval(lo, hi)
        bits = precision + 8
        while True:
            iv = self.field.root_intervals(bits)[j]
            lo, hi = _interval_horner(g, iv.lo, iv.hi)
            out = DyadicInterval(_dyadic_floor(lo, precision + 2), _dyadic_ceil(hi, precision + 2))
            if out.width <= Fraction(1, 2**precision):
                return out
            bits += 16

    def intervals(self, precision: int = 53) -> list:
        return [self.interval(j, precision) for j in range(self.field.degree)]

    def to_json(self) -> list:
        return [str(a) for a in self.coords]


# --- module-level operations ------------------------------------------------


def _check_field(*elts):
    K = elts[0].field
    for e in elts[1:]:
        if e.field != K:
            raise FieldMismatchError("elements belong to different fields")


def trace(alpha: FieldElement):
    return alpha.trace()


def norm(alpha: FieldElement):
    return alpha.norm()


def element_min_poly(alpha: FieldElement) -> IntPoly:
    return alpha.min_poly()


def house(alpha: FieldElement, precision: int = 53) -> DyadicInterval:
    """Certified enclosure of max_i |sigma_i(alpha)|, width <= 2^-precision."""
    if alpha.is_zero:
        return DyadicInterval(0, 0)
    ivs = alpha.intervals(precision + 1)
    lows, highs = [], []
    for iv in ivs:
        if iv.lo <= 0 <= iv.hi:
            lows.append(Fraction(0))
        else:
            lows.append(min(abs(iv.lo), abs(iv.hi)))
        highs.append(max(abs(iv.lo), abs(iv.hi)))
    return DyadicInterval(max(lows), max(highs))


def _conjugates_inside(alpha: FieldElement, t, strict: bool) -> bool:
    """Exact test that every conjugate lies in (-t, t) (strict) or [-t, t]."""
    m = alpha.min_poly().coeffs
    n = len(m) - 1

    def is_root(x):
        if isinstance(x, QuadSurd):
            return x.poly_sign(m) == 0
        x = Fraction(x)
        return sum(Fraction(c) * x**k for k, c in enumerate(m)) == 0

    neg = QuadSurd(-t.a, -t.b, t.r, t.den) if isinstance(t, QuadSurd) else -Fraction(t)
    inside = sturm_count(m, neg, t)  # roots in (-t, t]
    at_hi = is_root(t)
    at_lo = is_root(neg)
    if strict:
        return inside - int(at_hi) == n
    return inside + int(at_lo) == n


def house_lt(alpha: FieldElement, t) -> bool:
    """Exact decision of house(alpha) < t for rational t or a QuadSurd t > 0."""
    if alpha.is_zero:
        return True
    return _conjugates_inside(alpha, t, strict=True)


def house_le(alpha: FieldElement, t) -> bool:
    if alpha.is_zero:
        return True
    return _conjugates_inside(alpha, t, strict=False)


def is_totally_positive(alpha: FieldElement) -> bool:
    """Exact: all roots of the characteristic polynomial lie in (0, inf), via Sturm."""
    if alpha.is_zero:
        return False
    # cheap pre-filter: a certainly negative embedding settles it
    if alpha.is_integral:
        v = alpha.field.float_embed(alpha.coords)
        if np.any(v < -alpha.field.float_margin(alpha.coords)):
            return False
    if alpha.is_rational:
        return alpha.coords[0] > 0
    m = alpha.min_poly()
    return sturm_count(m, 0, None) == m.degree


def maximal_order(f: IntPoly, check: bool = True) -> NumberField:
    """The number field Q[x]/(f) with its full ring of integers.

    check=False skips the irreducibility and total-reality tests for inputs
    already certified upstream (the Robinson output).
    """
    if not f.is_monic:
        raise ValueError("maximal_order requires a monic polynomial")
    if f.degree > MAX_DEGREE:
        raise ValueError(f"degree {f.degree} is out of supported range (<= {MAX_DEGREE})")
    if check and not is_totally_real(f):
        raise ValueError(f"{f} is not totally real")
    rows, den, index, disc = maximal_order_basis(f)
    return NumberField(f, rows, den, index, disc)


def rational_field() -> NumberField:
    return maximal_order(IntPoly((0, 1)))


def quadratic_field(D: int) -> NumberField:
    """Q(sqrt D) defined by x^2 - D for squarefree D > 1."""
    return maximal_order(IntPoly((-D, 0, 1)))


def _is_squarefree_int(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def biquadratic_compositum(D1: int, D2: int) -> NumberField:
    """Q(sqrt D1, sqrt D2) via the minimal polynomial of sqrt D1 + sqrt D2."""
    if D1 == D2:
        raise ValueError(f"({D1}, {D2}) is not biquadratic")
    for D in (D1, D2):
        if not _is_squarefree_int(D):
            raise ValueError(f"{D} must be a squarefree integer > 1")
    s = D1 + D2
    f = IntPoly(((D1 - D2) ** 2, 0, -2 * s, 0, 1))
    return maximal_order(f)


def find_root_in(K: NumberField, g: IntPoly):
    """Coordinates of an integer of K that is a root of the monic g, or None.

    Any such root has all its conjugates among the (real) roots of g, so it
    lies in the box [min root, max root]^d; that box is searched completely.
    """
    from ..latenum import box_candidates  # latenum builds on this module

    if not g.is_monic:
        raise ValueError("find_root_in expects a monic polynomial")
    ivs = isolate_real_roots(g.coeffs, 60)
    if not ivs:
        return None
    lo = float(ivs[0].lo) - 1e-6
    hi = float(ivs[-1].hi) + 1e-6
    d = K.degree
    for x in box_candidates(K, [lo] * d, [hi] * d):
        # exact zero test g(x) = 0 in K
        acc = K.zero
        xe = K(list(x))
        for c in reversed(g.coeffs):
            acc = acc * xe + c
        if acc.is_zero:
            return tuple(x)
    return None


def fields_isomorphic(K1: NumberField, K2: NumberField) -> bool:
    """Exact isomorphism test: equal degree and discriminant, then a root of K2's polynomial in K1."""
    if K1.degree != K2.degree or K1.disc != K2.disc:
        return False
    if K1.min_poly == K2.min_poly:
        return True
    return find_root_in(K1, K2.min_poly) is not None
