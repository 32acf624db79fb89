"""Indecomposables, units and class representatives modulo squares of units."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .exact.poly import IntPoly
from .latenum import (
    DEFAULT_LIMIT,
    box_candidates,
    square_below,
    totally_positive_by_trace,
)
from .linalg import hnf_with_transform
from .numfield.field import (
    FieldElement,
    NumberField,
    _is_squarefree_int,
    is_totally_positive,
    quadratic_field,
)


@dataclass
class UnitSystem:
    field: NumberField
    generators: list
    complete: bool = False

    def __post_init__(self):
        for u in self.generators:
            if u.norm() not in (1, -1):
                raise ValueError(f"{u} is not a unit")


@dataclass
class ClassReps:
    field: NumberField
    norm_bound: int
    reps: list
    conditional: bool
    search_bound: Optional[int] = None
    passes: list = field(default_factory=list)


# --- indecomposability ----------------------------------------------------------


def decomposition_witness(K: NumberField, coords) -> Optional[tuple]:
    """A nonzero x with x and alpha - x totally positive, or None (complete search)."""
    v = K.float_embed(coords)
    cands = box_candidates(K, np.zeros_like(v), v)
    for x in cands:
        if not any(x):
            continue
        rest = [a - b for a, b in zip(coords, x)]
        if not any(rest):
            continue
        if K.is_tp_coords(x) and K.is_tp_coords(rest):
            return tuple(x)
    return None


def is_indecomposable(alpha: FieldElement) -> bool:
    if not alpha.is_integral:
        raise ValueError("element must be integral")
    if not is_totally_positive(alpha):
        raise ValueError("element is not totally positive")
    return decomposition_witness(alpha.field, alpha.coords) is None


# --- continued fractions for real quadratic fields -----------------------------


def _quadratic_cf(D: int, nterms: int):
    """Partial quotients of -omega' where omega = sqrt D or (1 + sqrt D)/2."""
    P, Q = (0, 1) if D % 4 != 1 else (-1, 2)
    r = math.isqrt(D)
    out = []
    for _ in range(nterms):
        a = (P + r) // Q
        out.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    return out


def _period_length(D: int) -> int:
    P, Q = (0, 1) if D % 4 != 1 else (-1, 2)
    r = math.isqrt(D)
    seen = {}
    k = 0
    while True:
        a = (P + r) // Q
        P = a * Q - P
        Q = (D - P * P) // Q
        k += 1
        if (P, Q) in seen:
            return k - seen[(P, Q)]
        seen[(P, Q)] = k


def _convergents(D: int, nterms: int):
    """Coordinates (p_i, q_i) of alpha_i = p_i + q_i omega for i = -1, 0, 1, ..."""
    u = _quadratic_cf(D, nterms)
    p_prev, q_prev = 1, 0  # index -1
    p, q = u[0], 1
    out = [(p_prev, q_prev), (p, q)]
    for a in u[1:]:
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
        out.append((p, q))
    return u, out


def _check_quadratic(D: int):
    if not _is_squarefree_int(D):
        raise ValueError(f"{D} is not a squarefree integer > 1")


def fundamental_unit_quadratic(D: int, K: Optional[NumberField] = None) -> FieldElement:
    """The fundamental unit > 1 of Q(sqrt D) (first unit among the convergents)."""
    _check_quadratic(D)
    K = K or quadratic_field(D)
    s = _period_length(D)
    _, conv = _convergents(D, 2 * s + 3)
    for p, q in conv[1:]:
        e = K([p, q])
        if e.norm() in (1, -1) and q > 0:
            return e
    raise ArithmeticError("no unit among the convergents")


def quadratic_indecomposables(D: int, K: Optional[NumberField] = None) -> list:
    """Indecomposables of Q(sqrt D) up to multiplication by unit squares.

    Semiconvergents alpha_i + r alpha_{i+1} (i odd, 0 <= r <= u_{i+2}) and their
    conjugates, reduced to canonical class representatives.
    """
    _check_quadratic(D)
    K = K or quadratic_field(D)
    s = _period_length(D)
    u, conv = _convergents(D, 4 * s + 6)
    eps = fundamental_unit_quadratic(D, K)
    units = UnitSystem(K, [eps], complete=True)
    red = UnitSquareReducer(K, units)
    found = set()
    # conv[k] holds alpha_{k-1}; u[k] is u_k
    for i in range(-1, 4 * s + 2, 2):
        a_i = conv[i + 1]
        a_next = conv[i + 2]
        for r in range(0, u[i + 2] + 1):
            c = (a_i[0] + r * a_next[0], a_i[1] + r * a_next[1])
            for el in (K(c), conjugate_quadratic(K(c))):
                found.add(red.canonical(el.coords))
    reps = sorted(found, key=lambda c: (K.trace_coords(c), c))
    return [K(c) for c in reps]


def conjugate_quadratic(x: FieldElement) -> FieldElement:
    """Galois conjugate in a quadratic field: x' = Tr(x) - x."""
    return x.field.rational(x.trace()) - x


# --- units ----------------------------------------------------------------------


def _log_vec(K: NumberField, coords) -> np.ndarray:
    return K.log_abs_embed(coords)


def _normalise_unit(K: NumberField, u: FieldElement) -> FieldElement:
    v = u.embeddings_float()
    if v[-1] < 0:
        u = -u
        v = -v
    if abs(v[-1]) < 1:
        u = u.inverse()
    return u


def _unit_basis(K: NumberField, units: list) -> list:
    """Basis (mod torsion) of the group generated by the given units."""
    d = K.degree
    r = d - 1
    if r == 0:
        return []
    gens = []
    logs = []
    for u in units:
        lv = _log_vec(K, u.coords)[:r]
        if np.max(np.abs(lv)) < 1e-9:
            continue  # torsion
        if len(gens) < r:
            M = np.array(logs + [lv])
            if np.linalg.matrix_rank(M, tol=1e-7) == len(gens) + 1:
                gens.append(u)
                logs.append(lv)
                continue
        if len(gens) == 0:
            continue
        # coordinates relative to the current generators
        M = np.array(logs)
        c, *_ = np.linalg.lstsq(M.T, lv, rcond=None)
        if np.max(np.abs(M.T @ c - lv)) > 1e-7:
            continue
        if np.max(np.abs(c - np.round(c))) < 1e-7:
            continue
        # rational coordinates: enlarge the group by an integral row reduction
        q = None
        for den in range(2, 200):
            if np.max(np.abs(c * den - np.round(c * den))) < 1e-6:
                q = den
                break
        if q is None:
            continue
        k = len(gens)
        rows = [[q * int(i == j) for j in range(k)] for i in range(k)] + [[int(round(x * q)) for x in c]]
        H, U = hnf_with_transform(rows)
        allg = gens + [u]
        new = []
        for h, row in zip(H, U):
            if not any(h):
                continue
            e = K.one
            for g, ex in zip(allg, row):
                if ex:
                    e = e * (g**ex)
            new.append(e)
        gens = new
        logs = [_log_vec(K, g.coords)[:r] for g in gens]
    return [_normalise_unit(K, g) for g in gens]


def unit_search(K: NumberField, house_bound, limit: int = DEFAULT_LIMIT) -> UnitSystem:
    """Units of house <= house_bound, reduced to an independent generating set."""
    d = K.degree
    if Fraction(house_bound) < 1:
        raise ValueError("house bound must be >= 1")
    if d == 1:
        return UnitSystem(K, [], complete=True)
    h = float(house_bound)
    cands = box_candidates(K, [-h] * d, [h] * d, limit)
    units = []
    for x in cands:
        if not any(x):
            continue
        v = K.float_embed(x)
        if np.any(np.abs(v) > h + K.float_margin(x)):
            continue
        e = K(x)
        if e.norm() in (1, -1) and e.coords[0] >= 0:
            units.append(e)
    units.sort(key=lambda e: (float(np.max(np.abs(e.embeddings_float()))), e.coords))
    gens = _unit_basis(K, units)
    complete = False
    if d == 2 and gens:
        D = _quadratic_radicand(K)
        if D is not None:
            eps = fundamental_unit_quadratic(D, K) if K.min_poly.coeffs == (-D, 0, 1) else None
            if eps is not None and gens[0] == eps:
                complete = True
    return UnitSystem(K, gens, complete=complete)


def _quadratic_radicand(K: NumberField) -> Optional[int]:
    c = K.min_poly.coeffs
    if len(c) == 3 and c[1] == 0 and c[2] == 1:
        return -c[0]
    return None


def quadratic_unit_system(K: NumberField) -> UnitSystem:
    """Certified unit system for Q(sqrt D) defined by x^2 - D."""
    D = _quadratic_radicand(K)
    if D is None:
        raise ValueError("field is not given as x^2 - D")
    return UnitSystem(K, [fundamental_unit_quadratic(D, K)], complete=True)


def default_unit_system(K: NumberField, house_bound: int = 50) -> UnitSystem:
    if K.degree == 1:
        return UnitSystem(K, [], complete=True)
    if K.degree == 2 and _quadratic_radicand(K) is not None:
        return quadratic_unit_system(K)
    bound = 8
    while True:
        us = unit_search(K, bound)
        if len(us.generators) == K.degree - 1 or bound >= house_bound:
            return us
        bound *= 2


# --- reduction modulo unit squares --------------------------------------------


class UnitSquareReducer:
    """Canonical representative of alpha * (unit squares): minimal trace, then coordinates."""

    def __init__(self, K: NumberField, units: UnitSystem):
        self.K = K
        self.squares = [u * u for u in units.generators]
        self.V = np.array([K.log_abs_embed(s.coords) for s in self.squares]) if self.squares else None
        self._pow = {}

    def _power(self, k: int, e: int) -> tuple:
        key = (k, e)
        if key not in self._pow:
            s = self.squares[k]
            self._pow[key] = (s**e).coords
        return self._pow[key]

    def apply(self, coords, exps) -> tuple:
        out = tuple(coords)
        for k, e in enumerate(exps):
            if e:
                out = tuple(self.K.mul_coords(out, self._power(k, e)))
        return out

    def _key(self, c):
        return (self.K.trace_coords(c), c)

    def _real_min(self, coords) -> np.ndarray:
        la = self.K.log_abs_embed(coords)
        V = self.V
        t = np.zeros(V.shape[0])
        for _ in range(60):
            w = np.exp(la + t @ V)
            g = V @ w
            H = (V * w) @ V.T
            step = np.linalg.solve(H, g)
            t = t - step
            if np.max(np.abs(step)) < 1e-10:
                break
        return t

    def canonical(self, coords) -> tuple:
        coords = tuple(coords)
        if not self.squares:
            return coords
        r = len(self.squares)
        la = self.K.log_abs_embed(coords)
        V = self.V
        offsets = [np.array(o) for o in itertools.product((-1, 0, 1), repeat=r)]
        seen = {}

        def ftrace(e):
            key = tuple(int(x) for x in e)
            if key not in seen:
                seen[key] = float(np.sum(np.exp(la + np.asarray(key, dtype=float) @ V)))
            return seen[key]

        # float descent on the integer grid of exponents (traces of totally positive elements)
        best = np.round(self._real_min(coords)).astype(int)
        while True:
            nxt = min((best + o for o in offsets), key=ftrace)
            if ftrace(nxt) >= ftrace(best):
                break
            best = nxt
        # every exponent with trace <= lo: y = e V has sum 0 and y_j <= log(lo) - la_j,
        # which bounds e through the pseudo-inverse; scan that box for near-ties
        lo = ftrace(best) * (1 + 1e-9) + 1e-9
        ub = math.log(lo) - la
        lb = -(ub.sum() - ub)
        Pinv = np.linalg.pinv(V)  # e = y @ Pinv
        e_lo = np.minimum(Pinv * lb[:, None], Pinv * ub[:, None]).sum(axis=0)
        e_hi = np.maximum(Pinv * lb[:, None], Pinv * ub[:, None]).sum(axis=0)
        ranges = [range(math.floor(a - 1e-6), math.ceil(b + 1e-6) + 1) for a, b in zip(e_lo, e_hi)]
        if math.prod(len(rg) for rg in ranges) > 10**6:
            ties = [e for e, v in seen.items() if v <= lo]
        else:
            E = np.array(list(itertools.product(*ranges)), dtype=float)
            vals = np.exp(la[None, :] + E @ V).sum(axis=1)
            ties = [tuple(int(x) for x in e) for e in E[vals <= lo]]
        return min((self.apply(coords, e) for e in ties), key=self._key)

    def equivalent(self, a, b) -> bool:
        return self.canonical(a) == self.canonical(b)


def quadratic_domain_candidates(K: NumberField, N: int, u: FieldElement, limit: int = DEFAULT_LIMIT) -> list:
    """Totally positive x of norm <= N in a fundamental domain for multiplication by u^2.

    With y = s_1(x), z = s_2(x) the domain is {y z <= N, u^-2 <= z / y <= u^2}
    (u > 1 in the second embedding).  It is covered by dyadic cells in z so the
    searched area stays O(N log u) even for huge units.
    """
    h = float(max(abs(x) for x in u.embeddings_float()))
    lo_z = 1.0 / h
    hi_z = math.sqrt(N) * h
    out = set()
    a = lo_z / 2
    while a <= hi_z:
        b = 2 * a
        y_lo = max(a / (h * h), 0.0)
        y_hi = min(b * h * h, N / a)
        if y_hi > 0:
            for x in box_candidates(K, [y_lo, a], [y_hi, b], limit):
                out.add(tuple(x))
        a = b
    res = []
    for x in sorted(out):
        if any(x) and K.is_tp_coords(x) and K.norm_le_coords(x, N):
            res.append(x)
    return res


COVERING_SLACK = 1.25


def unit_covering_trace(V: np.ndarray, grid: int = 12) -> float:
    """Estimate of max over z of min over the lattice of sum_j exp(z_j + lambda_j).

    V holds the log-embedding vectors of the unit squares (a full-rank lattice
    in the trace-zero hyperplane).  An element of norm n then has a unit-square
    multiple of trace <= n^(1/d) times this value.  The maximum is taken over a
    grid of the fundamental parallelepiped, so it is an estimate, not a bound.
    """
    r = V.shape[0]
    offs = np.array(list(itertools.product(range(-2, 3), repeat=r)), dtype=float)
    best = 0.0
    for t in itertools.product(np.arange(grid) / grid, repeat=r):
        z = (np.asarray(t)[None, :] + offs) @ V
        best = max(best, float(np.exp(z).sum(axis=1).min()))
    return best


def class_reps_norm_le(K: NumberField, N: int, units: UnitSystem, limit: int = DEFAULT_LIMIT, predicate=None) -> ClassReps:
    """Totally positive classes of norm <= N modulo squares of the given units.

    Degree 2: exhaustive search of a fundamental domain (see
    quadratic_domain_candidates).  Higher degree: candidates are enumerated by
    trace up to the covering estimate of unit_covering_trace (or, with fewer
    than d - 1 units, a bound doubled until a pass adds no class), and the
    result is conditional.  `predicate` (on coordinates) optionally restricts the classes.
    """
    d = K.degree
    if N < 1:
        raise ValueError("norm bound must be positive")
    if d == 1:
        reps = [K([a]) for a in range(1, N + 1) if predicate is None or predicate((a,))]
        return ClassReps(K, N, reps, conditional=False, search_bound=N)
    if not units.generators:
        raise ValueError("units required")
    red = UnitSquareReducer(K, units)

    def reduce_all(cands):
        found = set()
        for c in cands:
            can = red.canonical(c)
            if can in found:
                continue
            if predicate is not None and not predicate(can):
                continue
            found.add(can)
        return found

    passes = []
    if d == 2:
        if len(units.generators) != 1:
            raise ValueError("a quadratic unit system has one generator")
        found = reduce_all(quadratic_domain_candidates(K, N, units.generators[0], limit))
        T = None
        passes.append(("domain", len(found)))
    else:

        def collect(T):
            return reduce_all(c for c in totally_positive_by_trace(K, T, limit) if K.norm_le_coords(c, N))

        if len(units.generators) == d - 1:
            # every class has a representative of trace <= N^(1/d) M
            T = math.ceil(COVERING_SLACK * N ** (1 / d) * unit_covering_trace(red.V))
            found = collect(T)
            passes.append(("covering", T, len(found)))
        else:
            T = math.ceil(2 * d * N ** (1 / d))
            found = collect(T)
            passes.append((T, len(found)))
            while True:
                T2 = 2 * T
                f2 = collect(T2)
                passes.append((T2, len(f2)))
                if f2 == found:
                    break
                found, T = f2, T2
    reps = sorted(found, key=lambda c: (K.trace_coords(c), c))
    return ClassReps(
        K,
        N,
        [K(c) for c in reps],
        conditional=not units.complete,
        search_bound=T,
        passes=passes,
    )


# --- bounded-norm decomposition ------------------------------------------------


def decompose_full(gamma: FieldElement) -> tuple:
    """gamma = alpha0 + sum beta_i^2 with norm(alpha0) <= disc, via repeated square extraction."""
    if not gamma.is_integral or not is_totally_positive(gamma):
        raise ValueError("element must be totally positive and integral")
    K = gamma.field
    squares = []
    cur = gamma
    while cur.norm() > K.disc:
        b = square_below(cur)
        if b is None:
            raise ArithmeticError("no square below an element of norm exceeding the discriminant")
        squares.append(b)
        cur = cur - b * b
    return cur, squares
