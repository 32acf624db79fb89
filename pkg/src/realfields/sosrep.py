"""Representations by sums of squares and by diagonal forms, and the universal form."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .indecomp import UnitSystem, class_reps_norm_le
from .latenum import DEFAULT_LIMIT, box_candidates, totally_positive_by_trace
from .numfield.field import FieldElement, NumberField, is_totally_positive

DEFAULT_CAPS = {1: 4, 2: 5, 3: 6, 4: 7}


@dataclass
class PythagorasTable:
    """Cap on the number of squares per degree (overridable by configuration)."""

    caps: dict = field(default_factory=lambda: dict(DEFAULT_CAPS))

    def cap(self, degree: int) -> int:
        if degree not in self.caps:
            raise KeyError(f"no Pythagoras cap configured for degree {degree}")
        return self.caps[degree]


@dataclass
class DiagonalForm:
    """sum a_i x_i^2 with totally positive field coefficients a_i."""

    field: NumberField
    coefficients: list
    conditional: bool = False
    num_classes: Optional[int] = None  # how many leading coefficients come from the class set

    def __post_init__(self):
        for a in self.coefficients:
            if a.field != self.field or not a.is_integral or not is_totally_positive(a):
                raise ValueError(f"coefficient {a} is not a totally positive integer of the field")

    @property
    def rank(self) -> int:
        return len(self.coefficients)


class _SquareSearch:
    """Depth-first search for tau = sum c * x_i^2 (fixed coefficient c) with a failure memo."""

    def __init__(self, K: NumberField, tau_coords, coeff_coords=None, limit: int = DEFAULT_LIMIT):
        self.K = K
        d = K.degree
        one = tuple([1] + [0] * (d - 1))
        self.c = tuple(coeff_coords) if coeff_coords is not None else one
        v = K.float_embed(tau_coords)
        cv = K.float_embed(self.c)
        r = np.sqrt(np.maximum(v / cv, 0.0))
        raw = box_candidates(K, -r, r, limit)
        cands = {}
        for x in raw:
            if not any(x):
                continue
            x = _sign_normalise(x)
            if x in cands:
                continue
            sq = tuple(K.mul_coords(self.c, K.mul_coords(x, x)))
            cands[x] = sq
        xs = list(cands)
        emb = np.array([K.float_embed(x) for x in xs]) if xs else np.zeros((0, d))
        house = np.max(np.abs(emb), axis=1) if xs else np.zeros(0)
        order = sorted(range(len(xs)), key=lambda i: (-house[i], xs[i]))
        self.xs = [xs[i] for i in order]
        self.sqs = [cands[x] for x in self.xs]
        self.sq_emb = np.array([K.float_embed(s) for s in self.sqs]) if xs else np.zeros((0, d))
        self.sq_margin = np.array([K.float_margin(s) for s in self.sqs]) if xs else np.zeros((0, d))
        tr = [K.trace_coords(s) for s in self.sqs]
        # suffix maximum of the traces: bound on what k squares from index i can reach
        self.suffix_max = [0] * (len(tr) + 1)
        for i in range(len(tr) - 1, -1, -1):
            self.suffix_max[i] = max(tr[i], self.suffix_max[i + 1])
        self.index_of_square = {}
        for i, s in enumerate(self.sqs):
            self.index_of_square.setdefault(s, []).append(i)
        self.failed = set()

    def _fits(self, r, start):
        """Indices i >= start whose square is certainly or possibly below r."""
        if start >= len(self.xs):
            return []
        vr = self.K.float_embed(r)
        mr = self.K.float_margin(r)
        ok = np.all(self.sq_emb[start:] <= vr + mr + self.sq_margin[start:], axis=1)
        return [start + i for i in np.nonzero(ok)[0]]

    def search(self, r: tuple, start: int, k: int):
        if k <= 0 or start >= len(self.xs):
            return None
        key = (r, start, k)
        if key in self.failed:
            return None
        K = self.K
        # exact square hit
        for i in self.index_of_square.get(r, ()):
            if i >= start:
                return [self.xs[i]]
        if k == 1:
            self.failed.add(key)
            return None
        if K.trace_coords(r) > k * self.suffix_max[start]:
            self.failed.add(key)
            return None
        for i in self._fits(r, start):
            rest = tuple(a - b for a, b in zip(r, self.sqs[i]))
            if not any(rest):
                return [self.xs[i]]
            if not K.is_tp_coords(rest):
                continue
            sub = self.search(rest, i, k - 1)
            if sub is not None:
                return [self.xs[i]] + sub
        self.failed.add(key)
        return None


def _sign_normalise(coords) -> tuple:
    for a in coords:
        if a:
            return tuple(coords) if a > 0 else tuple(-b for b in coords)
    return tuple(coords)


def _check_target(tau: FieldElement):
    if tau.is_zero:
        raise ValueError("target must be totally positive (zero excluded)")
    if not tau.is_integral or not is_totally_positive(tau):
        raise ValueError("target is not totally positive")


def sum_of_squares(tau: FieldElement, m: int, limit: int = DEFAULT_LIMIT) -> Optional[list]:
    """At most m nonzero x_i with sum x_i^2 = tau, or None (certified: none exists)."""
    _check_target(tau)
    K = tau.field
    s = _SquareSearch(K, tau.coords, limit=limit)
    res = s.search(tuple(tau.coords), 0, m)
    if res is None:
        return None
    return [K(x) for x in res]


def represent_diagonal(Qf: DiagonalForm, tau: FieldElement, limit: int = DEFAULT_LIMIT) -> Optional[list]:
    """Values x_i (aligned with Qf.coefficients, zeros allowed) with sum a_i x_i^2 = tau, or None."""
    _check_target(tau)
    K = Qf.field
    groups = {}
    for pos, a in enumerate(Qf.coefficients):
        groups.setdefault(a.coords, []).append(pos)
    keys = sorted(groups, key=lambda c: (len(groups[c]), K.trace_coords(c), c))
    searches = [_SquareSearch(K, tau.coords, coeff_coords=c, limit=limit) for c in keys]
    failed = set()
    zero = tuple([0] * K.degree)

    def rec(g: int, r: tuple):
        if not any(r):
            return []
        if g == len(keys):
            return None
        if (g, r) in failed:
            return None
        S = searches[g]
        mult = len(groups[keys[g]])
        # the last (largest) group must finish the job; earlier groups may use 0..mult terms
        if g == len(keys) - 1:
            res = S.search(r, 0, mult)
            if res is None:
                failed.add((g, r))
            return None if res is None else [res]
        # enumerate multisets of at most mult terms from this group, then recurse
        for terms in _multisets(S, r, 0, mult):
            rest = r
            for i in terms:
                rest = tuple(a - b for a, b in zip(rest, S.sqs[i]))
            if any(rest) and not K.is_tp_coords(rest):
                continue
            sub = rec(g + 1, rest)
            if sub is not None:
                return [[S.xs[i] for i in terms]] + sub
        failed.add((g, r))
        return None

    res = rec(0, tuple(tau.coords))
    if res is None:
        return None
    out = [K(zero)] * Qf.rank
    for g, terms in enumerate(res):
        for pos, x in zip(groups[keys[g]], terms):
            out[pos] = K(x)
    return out


def _multisets(S: _SquareSearch, r, start: int, k: int):
    """Non-increasing index sequences of length <= k whose squares fit below r (empty first)."""
    yield []
    if k == 0:
        return
    K = S.K
    for i in S._fits(r, start):
        rest = tuple(a - b for a, b in zip(r, S.sqs[i]))
        if any(rest) and not K.is_tp_coords(rest):
            continue
        for tail in _multisets(S, rest, i, k - 1):
            yield [i] + tail


def universal_form(K: NumberField, units: UnitSystem, table: Optional[PythagorasTable] = None) -> DiagonalForm:
    """Diagonal form with the class representatives of norm <= disc followed by P ones."""
    table = table or PythagorasTable()
    reps = class_reps_norm_le(K, K.disc, units)
    P = table.cap(K.degree)
    coeffs = list(reps.reps) + [K.one] * P
    return DiagonalForm(K, coeffs, conditional=reps.conditional, num_classes=len(reps.reps))


def universality_spot_check(Qf: DiagonalForm, trace_bound: int, limit: int = DEFAULT_LIMIT) -> list:
    """Totally positive elements of trace <= trace_bound that Qf fails to represent."""
    K = Qf.field
    fails = []
    for c in totally_positive_by_trace(K, trace_bound, limit):
        if represent_diagonal(Qf, K(c), limit) is None:
            fails.append(K(c))
    return fails
