"""Enumeration of monic integer polynomials with all roots in a bounded interval.

Coefficients are fixed from the top down.  Once b_d, ..., b_{j+1} are known the
derivative g' = f^(j+1) is known, and g = f^(j) = G + j! b_j must have all its
roots simple and inside (0, U); by interlacing this is exactly a sign pattern
of g at 0, at the roots of g' and at U, which confines b_j to an interval.
Floating point only widens these intervals; each surviving polynomial is then
checked exactly (Sturm counts against U = 7 + sqrt 6, exact factor search).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..exact.factor import is_irreducible
from ..exact.poly import IntPoly, pdiv_exact_int
from ..exact.sturm import NotSquarefreeError, QuadSurd, SEVEN_PLUS_SQRT6, sturm_count

_SLACK = 1e-6


@dataclass(frozen=True)
class RobinsonConfig:
    degree: int
    root_upper: QuadSurd = SEVEN_PLUS_SQRT6
    trace_min: Optional[int] = None
    trace_max: Optional[int] = None
    require_root_in_unit_interval: bool = True

    def __post_init__(self):
        if self.degree not in (2, 3, 4):
            raise ValueError(f"unsupported degree {self.degree}")
        defaults = {2: (1, None), 3: (5, 19), 4: (7, 29)}
        lo, hi = defaults[self.degree]
        if self.trace_min is None:
            object.__setattr__(self, "trace_min", lo)
        if self.trace_max is None:
            ub = hi if hi is not None else math.floor(self.degree * float(self.root_upper))
            object.__setattr__(self, "trace_max", ub)

    @classmethod
    def boundary_variant(cls, degree: int, **kw) -> "RobinsonConfig":
        """The convention that reproduces the published counts (no unit-interval root)."""
        return cls(degree, require_root_in_unit_interval=False, **kw)


def _falling(k: int, j: int) -> int:
    """k! / (k - j)!"""
    out = 1
    for t in range(k - j + 1, k + 1):
        out *= t
    return out


def _deriv_coeffs(b: list, j: int) -> list:
    """Coefficients (ascending) of f^(j) for f = sum b_k x^k, with unknown entries as None."""
    d = len(b) - 1
    return [b[k] * _falling(k, j) if b[k] is not None else None for k in range(j, d + 1)]


def _interval_for_constant(G: list, m: int, U: float):
    """Interval (lo, hi) for c so that G + c has m simple roots in (0, U); None if empty.

    G ascending with G[0] = 0, degree m, positive leading coefficient.
    """
    dG = [k * G[k] for k in range(1, m + 1)]
    if m >= 2:
        r = np.roots(dG[::-1])
        if np.max(np.abs(r.imag)) > 1e-7:
            return None
        r = np.sort(r.real)
        if r[0] <= -_SLACK or r[-1] >= U + _SLACK:
            return None
    else:
        r = np.array([])
    lo, hi = -math.inf, math.inf

    def Gv(x):
        acc = 0.0
        for c in reversed(G):
            acc = acc * x + c
        return acc

    # (-1)^m c > 0 at x = 0
    if m % 2 == 0:
        lo = max(lo, 0.0)
    else:
        hi = min(hi, 0.0)
    # G(U) + c > 0
    lo = max(lo, -Gv(U))
    for i, ri in enumerate(r, start=1):
        val = -Gv(float(ri))
        if (m - i) % 2 == 0:
            lo = max(lo, val)  # g(r_i) > 0
        else:
            hi = min(hi, val)  # g(r_i) < 0
    scale = 1.0 + max(abs(lo) if math.isfinite(lo) else 0.0, abs(hi) if math.isfinite(hi) else 0.0)
    lo -= _SLACK * scale
    hi += _SLACK * scale
    if lo > hi:
        return None
    return lo, hi


def _candidates_for_trace(d: int, a1: int, U: float):
    """All coefficient vectors (ascending) with trace a1 passing the float interlacing tests."""
    b = [None] * (d + 1)
    b[d] = 1
    b[d - 1] = -a1
    out = []

    def rec(j: int):
        # choose b[j]
        m = d - j
        G = _deriv_coeffs(b, j)
        G[0] = 0
        iv = _interval_for_constant(G, m, U)
        if iv is None:
            return
        f = math.factorial(j)
        lo = math.ceil(iv[0] / f)
        hi = math.floor(iv[1] / f)
        for v in range(lo, hi + 1):
            b[j] = v
            if j == 0:
                out.append(tuple(b))
            else:
                rec(j - 1)
        b[j] = None

    if d >= 2:
        rec(d - 2)
    else:
        out.append(tuple(b))
    return out


def _exact_roots_ok(c: tuple, U: QuadSurd, unit_root: bool) -> bool:
    d = len(c) - 1
    try:
        if sturm_count(c, 0, U) != d:
            return False
        if unit_root and sturm_count(c, 0, 1) < 1:
            return False
    except NotSquarefreeError:
        return False
    return True


def _quick_reducible(c: tuple, d: int, U: float) -> Optional[bool]:
    """True if a factor is found quickly, None when undecided."""
    # integer roots must lie in (0, U)
    for k in range(1, int(U) + 1):
        acc = 0
        for x in reversed(c):
            acc = acc * k + x
        if acc == 0:
            return True
    if d <= 3:
        return False  # a reducible cubic has a rational (integer) root
    if d == 4:
        r = np.sort(np.roots(list(reversed(c))).real)
        if np.min(np.diff(r)) < 1e-6:
            return None  # nearly repeated roots: leave it to the exact factor search
        for pair in ((0, 1), (0, 2), (0, 3)):
            s = r[pair[0]] + r[pair[1]]
            p = r[pair[0]] * r[pair[1]]
            S, P = round(s), round(p)
            if abs(s - S) < 1e-4 and abs(p - P) < 1e-4:
                if pdiv_exact_int(c, (P, -S, 1)) is not None:
                    return True
        return False
    return None


def robinson_enumerate(cfg: RobinsonConfig, traces=None) -> list:
    """Monic irreducible integer polynomials meeting the configuration, ascending."""
    d = cfg.degree
    Uf = float(cfg.root_upper)
    out = []
    for a1 in traces if traces is not None else range(cfg.trace_min, cfg.trace_max + 1):
        for c in _candidates_for_trace(d, a1, Uf):
            if not _exact_roots_ok(c, cfg.root_upper, cfg.require_root_in_unit_interval):
                continue
            q = _quick_reducible(c, d, Uf)
            if q is None:
                q = not is_irreducible(IntPoly(c))
            if q:
                continue
            out.append(IntPoly(c))
    out.sort(key=poly_sort_key)
    return out


def poly_sort_key(f: IntPoly) -> tuple:
    """Ascending order: by degree, then (a_1, ..., a_d) where f = x^d - a_1 x^(d-1) + a_2 x^(d-2) - ...

    For polynomials with positive roots the a_k are the (positive) elementary
    symmetric functions of the roots, so the trace decides first.
    """
    d = f.degree
    return (d, tuple((-1) ** k * f.coeffs[d - k] for k in range(1, d + 1)))
