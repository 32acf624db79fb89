"""Two growth experiments.

quartic_trend: for quartic fields containing sqrt D, the least trace of a
totally positive integer outside Q(sqrt D) (predicted to grow like disc^(1/4))
and the least Tr(b^2) for an integer b outside Q(sqrt D) (predicted to grow at
least like disc^(1/2)).

universal_rank_trend: rank of the diagonal universal form against disc for
real quadratic fields (recorded, not asserted).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ..exact.poly import IntPoly
from ..indecomp import class_reps_norm_le, quadratic_unit_system
from ..latenum import fincke_pohst, minkowski_reduced_basis, totally_positive_by_trace
from ..numfield.field import (
    NumberField,
    _is_squarefree_int,
    biquadratic_compositum,
    find_root_in,
    is_totally_positive,
    quadratic_field,
)
from ..sosrep import PythagorasTable

MIN_SAMPLE = 5


class InsufficientSampleError(ValueError):
    pass


@dataclass
class TrendRow:
    poly: list
    disc: int
    t_a: int
    t_b: int
    alpha: list
    beta: list


@dataclass
class TrendTable:
    D: int
    rows: list
    slope_a: float
    slope_b: float

    def to_records(self) -> list:
        return [asdict(r) for r in self.rows]


def _rank(rows: list) -> int:
    """Rank over Q of rational row vectors (Gaussian elimination)."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    for col in range(len(m[0]) if m else 0):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(rank + 1, len(m)):
            f = m[i][col] / m[rank][col]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


class _Subfield:
    """Membership test for Q(sqrt D) inside K."""

    def __init__(self, K: NumberField, D: int):
        s = find_root_in(K, IntPoly((-D, 0, 1)))
        if s is None:
            raise ValueError(f"field {K.min_poly} does not contain sqrt {D}")
        d = K.degree
        self.span = [[1] + [0] * (d - 1), list(s)]

    def contains(self, coords) -> bool:
        return _rank(self.span + [list(coords)]) == 2


def _least_trace_outside(K: NumberField, sub: _Subfield):
    """(trace, coords) minimal among totally positive integers outside the subfield."""
    # upper bound from a reduced basis element a outside the subfield: k + a
    start = None
    for a in minkowski_reduced_basis(K):
        if not sub.contains(a.coords):
            k = 0
            while not is_totally_positive(a + k):
                k += 1
            start = (a + k).trace()
            break
    T = int(start)
    for c in totally_positive_by_trace(K, T):
        if not sub.contains(c):
            return K.trace_coords(c), [int(x) for x in c]
    raise AssertionError("reduced basis bound missed its own element")


def _least_square_trace_outside(K: NumberField, sub: _Subfield):
    """(Tr(b^2), coords) minimal over integers b outside the subfield."""
    d = K.degree
    B = None
    for a in minkowski_reduced_basis(K):
        if not sub.contains(a.coords):
            B = (a * a).trace()
            break
    best = None
    for x in fincke_pohst(K.E, np.zeros(d), float(B)):
        if not any(x) or sub.contains(x):
            continue
        t = K.trace_coords(K.mul_coords(x, x))
        if t <= B and (best is None or (t, x) < best):
            best = (t, x)
    return int(best[0]), [int(v) for v in best[1]]


def _loglog_slope(xs, ys) -> float:
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])


def quartic_trend(D: int, field_family: list) -> TrendTable:
    """Trend table for quartic fields that contain sqrt D."""
    if len(field_family) < MIN_SAMPLE:
        raise InsufficientSampleError(f"insufficient sample: {len(field_family)} fields (need {MIN_SAMPLE})")
    rows = []
    for K in field_family:
        if K.degree != 4:
            raise ValueError("family members must be quartic")
        sub = _Subfield(K, D)
        ta, alpha = _least_trace_outside(K, sub)
        tb, beta = _least_square_trace_outside(K, sub)
        rows.append(TrendRow(list(K.min_poly.coeffs), K.disc, int(ta), tb, alpha, beta))
    rows.sort(key=lambda r: r.disc)
    discs = [r.disc for r in rows]
    return TrendTable(
        D,
        rows,
        _loglog_slope(discs, [r.t_a for r in rows]),
        _loglog_slope(discs, [r.t_b for r in rows]),
    )


def biquadratic_family(D: int, count: int) -> list:
    """Distinct fields Q(sqrt D, sqrt m) for m = 2, 3, ... until `count` are found, sorted by disc."""
    if not _is_squarefree_int(D):
        raise ValueError(f"{D} must be a squarefree integer > 1")
    fields = {}
    m = 2
    while len(fields) < count:
        if m != D and _is_squarefree_int(m):
            K = biquadratic_compositum(D, m)
            key = K.disc
            if key not in fields:
                fields[key] = K
        m += 1
    return [fields[k] for k in sorted(fields)]


@dataclass
class RankRow:
    D: int
    disc: int
    classes: int
    rank: int
    scale: float  # disc^(1/2) log disc


def universal_rank_trend(max_D: int = 100, table: Optional[PythagorasTable] = None) -> list:
    """Rank of the class-set diagonal form for Q(sqrt D), D squarefree <= max_D."""
    table = table or PythagorasTable()
    out = []
    for D in range(2, max_D + 1):
        if not _is_squarefree_int(D):
            continue
        K = quadratic_field(D)
        reps = class_reps_norm_le(K, K.disc, quadratic_unit_system(K))
        n = len(reps.reps)
        out.append(RankRow(D, K.disc, n, n + table.cap(2), math.sqrt(K.disc) * math.log(K.disc)))
    return out
