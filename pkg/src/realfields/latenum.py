"""Certified enumeration of algebraic integers in Minkowski boxes.

Everything here reduces to Fincke-Pohst enumeration of integer coordinate vectors
x with ||A (x - z)||^2 <= bound for a float matrix A.  Pruning is floating point
with generous slack; every candidate that survives is then accepted or rejected
by exact arithmetic, so the float layer can only cost time, never correctness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import mpmath
import numpy as np

from .exact.poly import IntPoly
from .exact.sturm import DyadicInterval, isolate_real_roots, sturm_count
from .linalg import charpoly_int, gcd_of_minors, lll_gram
from .numfield.field import FieldElement, NumberField, is_totally_positive

DEFAULT_LIMIT = 10**7


class EnumerationLimitError(RuntimeError):
    """Raised when an enumeration would visit more than `limit` candidates."""


@dataclass(frozen=True)
class BoxBounds:
    """Per-embedding bounds c_i; symmetric |s_i(x)| <= c_i or one-sided 0 < s_i(x) < c_i."""

    bounds: tuple
    mode: str = "symmetric"

    def __post_init__(self):
        b = tuple(Fraction(c) for c in self.bounds)
        if not b or any(c <= 0 for c in b):
            raise ValueError("box bounds must be positive")
        if self.mode not in ("symmetric", "one-sided"):
            raise ValueError(f"unknown box mode {self.mode!r}")
        object.__setattr__(self, "bounds", b)

    def to_json(self) -> dict:
        return {"bounds": [str(c) for c in self.bounds], "mode": self.mode}


# --- the core enumerator ------------------------------------------------------


def fincke_pohst(A: np.ndarray, center: np.ndarray, bound: float, limit: int = DEFAULT_LIMIT) -> list:
    """All integer x with ||A (x - center)||^2 <= bound (up to float slack).

    Returns a superset of the exact solution set: the radius is inflated by a
    relative 1e-9 so boundary points are never lost.
    """
    n = A.shape[1]
    _, R = np.linalg.qr(A)
    diag = np.abs(np.diag(R))
    if np.any(diag < 1e-300):
        raise ValueError("degenerate quadratic form")
    bound = bound * (1 + 1e-9) + 1e-9
    z = np.asarray(center, dtype=float)
    out = []
    x = [0] * n
    count = 0

    # iterative depth-first search from the last coordinate down
    def rec(i: int, rem: float):
        nonlocal count
        Ri = R[i]
        s = 0.0
        for j in range(i + 1, n):
            s += Ri[j] * (x[j] - z[j])
        c = z[i] - s / Ri[i]
        w = math.sqrt(max(rem, 0.0)) / diag[i]
        lo = math.ceil(c - w - 1e-9)
        hi = math.floor(c + w + 1e-9)
        for xi in range(lo, hi + 1):
            t = Ri[i] * (xi - c)
            r2 = rem - t * t
            if r2 < -1e-9 * (1 + bound):
                continue
            x[i] = xi
            if i == 0:
                count += 1
                if count > limit:
                    raise EnumerationLimitError(f"enumeration exceeded limit of {limit} candidates")
                out.append(tuple(x))
            else:
                rec(i - 1, r2)
        x[i] = 0

    rec(n - 1, bound)
    return out


def _lll_mp(cols: list, delta=0.99) -> list:
    """LLL on real column vectors (mpmath); returns the integer transform (columns)."""
    n = len(cols)
    U = [[int(i == j) for j in range(n)] for i in range(n)]  # U[k] = coefficients of vector k
    b = [c.copy() for c in cols]

    def dot(x, y):
        return mpmath.fsum(x[i] * y[i] for i in range(len(x)))

    def gso():
        bs, mu, B = [], [[mpmath.mpf(0)] * n for _ in range(n)], []
        for i in range(n):
            v = b[i].copy()
            for j in range(i):
                mu[i][j] = dot(b[i], bs[j]) / B[j]
                v = v - mu[i][j] * bs[j]
            bs.append(v)
            B.append(dot(v, v))
        return mu, B

    mu, B = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = int(mpmath.nint(mu[k][j]))
            if q:
                b[k] = b[k] - q * b[j]
                U[k] = [a - q * c for a, c in zip(U[k], U[j])]
                mu, B = gso()
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            U[k], U[k - 1] = U[k - 1], U[k]
            mu, B = gso()
            k = max(k - 1, 1)
    return U


def _orthogonality_defect(A: np.ndarray) -> float:
    det = abs(np.linalg.det(A))
    if det == 0 or not np.isfinite(det):
        return math.inf
    return float(np.prod(np.linalg.norm(A, axis=0)) / det)


def box_candidates(K: NumberField, lo: Sequence[float], hi: Sequence[float], limit: int = DEFAULT_LIMIT) -> list:
    """Float superset of integer coordinate vectors with lo_j <= s_j(x) <= hi_j."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    mid = (lo + hi) / 2
    half = np.maximum((hi - lo) / 2, 1e-12)
    # pad by the float embedding error so exact boundary points survive
    half = half * (1 + 1e-9) + 1e-9 * (1 + np.abs(mid))
    A = K.E / half[:, None]
    if _orthogonality_defect(A) < 1e3:
        z = K.Einv @ mid
        cands = fincke_pohst(A, z, float(K.degree), limit)
    else:
        cands = _skewed_box_candidates(K, mid, half, limit)
    if not cands:
        return []
    X = np.array(cands, dtype=float)
    V = X @ K.E.T
    M = 1e-12 * (1.0 + np.abs(X) @ K.absE.T)
    keep = np.all((V >= lo - M) & (V <= hi + M), axis=1)
    return [c for c, k in zip(cands, keep) if k]


def _skewed_box_candidates(K: NumberField, mid, half, limit) -> list:
    """Fincke-Pohst after a multiprecision LLL step, for badly skewed boxes."""
    d = K.degree
    with mpmath.workdps(60):
        Amp = mpmath.matrix(d, d)
        Emp = K.E_mp
        for j in range(d):
            s = 1 / mpmath.mpf(float(half[j]))
            for i in range(d):
                Amp[j, i] = Emp[j, i] * s
        cols = [Amp[:, i] for i in range(d)]
        U = _lll_mp(cols)
        B = mpmath.matrix(d, d)
        for k in range(d):
            v = sum((U[k][i] * cols[i] for i in range(d) if U[k][i]), mpmath.matrix(d, 1))
            for j in range(d):
                B[j, k] = v[j]
        rhs = mpmath.matrix([mpmath.mpf(float(mid[j])) / mpmath.mpf(float(half[j])) for j in range(d)])
        zy = mpmath.lu_solve(B, rhs)
        Bf = np.array([[float(B[j, k]) for k in range(d)] for j in range(d)])
        zf = np.array([float(zy[k]) for k in range(d)])
    ys = fincke_pohst(Bf, zf, float(d), limit)
    out = []
    for y in ys:
        x = [0] * d
        for k, yk in enumerate(y):
            if yk:
                for i in range(d):
                    x[i] += yk * U[k][i]
        out.append(tuple(x))
    return out


def _sign_vs(K: NumberField, coords, j: int, c: Fraction) -> int:
    """Exact sign of s_j(x) - c for integral x."""
    v = K.float_embed(coords)[j] - float(c)
    m = K.float_margin(coords)[j] + 1e-12 * abs(float(c))
    if v > m:
        return 1
    if v < -m:
        return -1
    diff = K(coords) - K.rational(c)
    if diff.is_zero:
        return 0
    iv = diff.interval(j, 64)
    bits = 64
    while iv.lo <= 0 <= iv.hi:
        bits *= 2
        iv = diff.interval(j, bits)
    return 1 if iv.lo > 0 else -1


def in_box(K: NumberField, coords, box: BoxBounds) -> bool:
    """Exact membership of an integral element in the box."""
    v = K.float_embed(coords)
    m = K.float_margin(coords)
    for j, c in enumerate(box.bounds):
        cf = float(c)
        mj = m[j] + 1e-12 * cf
        if box.mode == "symmetric":
            if abs(v[j]) < cf - mj:
                continue
            if abs(v[j]) > cf + mj:
                return False
            if _sign_vs(K, coords, j, c) > 0 or _sign_vs(K, coords, j, -c) < 0:
                return False
        else:
            if mj < v[j] < cf - mj:
                continue
            if v[j] < -mj or v[j] > cf + mj:
                return False
            if _sign_vs(K, coords, j, 0) <= 0 or _sign_vs(K, coords, j, c) >= 0:
                return False
    return True


def enumerate_box(K: NumberField, box: BoxBounds, limit: int = DEFAULT_LIMIT) -> list:
    """Exactly the integral elements in the box, sorted by coordinate vector."""
    if len(box.bounds) != K.degree:
        raise ValueError("box dimension does not match the field degree")
    c = np.array([float(b) for b in box.bounds])
    lo = -c if box.mode == "symmetric" else np.zeros_like(c)
    cands = box_candidates(K, lo, c, limit)
    cands = [x for x in cands if in_box(K, x, box)]
    cands.sort()
    return [K(x) for x in cands]


# --- Theorem-style square extraction -----------------------------------------


def _sign_normalise(coords) -> tuple:
    for a in coords:
        if a:
            return tuple(coords) if a > 0 else tuple(-b for b in coords)
    return tuple(coords)


def squares_below_coords(K: NumberField, alpha_coords, limit: int = DEFAULT_LIMIT) -> list:
    """All nonzero beta (sign-normalised, sorted) with alpha - beta^2 totally positive."""
    v = K.float_embed(alpha_coords)
    if np.any(v <= -K.float_margin(alpha_coords)):
        raise ValueError("element is not totally positive")
    r = np.sqrt(np.maximum(v, 0.0))
    cands = box_candidates(K, -r, r, limit)
    out = set()
    for x in cands:
        if not any(x):
            continue
        x = _sign_normalise(x)
        if x in out:
            continue
        sq = K.mul_coords(x, x)
        rest = [a - b for a, b in zip(alpha_coords, sq)]
        if any(rest) and K.is_tp_coords(rest):
            out.add(x)
    return sorted(out)


def square_below(alpha: FieldElement, limit: int = DEFAULT_LIMIT) -> Optional[FieldElement]:
    """Canonical nonzero beta with alpha - beta^2 totally positive, or None.

    Canonical means lexicographically smallest among sign-normalised candidates.
    """
    if not alpha.is_integral:
        raise ValueError("element must be integral")
    if not is_totally_positive(alpha):
        raise ValueError("element is not totally positive")
    K = alpha.field
    found = squares_below_coords(K, alpha.coords, limit)
    return K(found[0]) if found else None


def square_box(alpha: FieldElement) -> BoxBounds:
    """Dyadic upper bounds for sqrt(s_i(alpha)): the box searched by square_below."""
    out = []
    for iv in alpha.intervals(30):
        hi = iv.hi
        # dyadic ceiling of the square root
        s = Fraction(math.isqrt(math.ceil(hi * 2**60)) + 1, 2**30)
        out.append(s)
    return BoxBounds(tuple(out), "symmetric")


# --- totally positive elements of bounded trace -------------------------------


def totally_positive_by_trace(K: NumberField, trace_bound: int, limit: int = DEFAULT_LIMIT, trace_min: int = 1) -> list:
    """Coordinates of all totally positive integral elements with trace <= trace_bound.

    Sorted by (trace, coordinates).  Uses w_1 = 1: the remaining coordinates are
    enumerated under the deviation form sum (s_j - Tr/d)^2 <= T^2 (d-1)/d, and
    the first coordinate then ranges over an explicit interval.
    """
    d = K.degree
    T = int(trace_bound)
    if T < 1:
        return []
    if d == 1:
        return [(a,) for a in range(max(1, trace_min), T + 1)]
    tr = np.array(K.basis_traces, dtype=float)
    A = K.E[:, 1:] - np.outer(np.ones(d), tr[1:]) / d
    bound = T * T * (d - 1) / d
    rest = fincke_pohst(A, np.zeros(d - 1), bound, limit)
    out = []
    for y in rest:
        y = list(y)
        coords0 = [0] + y
        v = K.float_embed(coords0)
        m = K.float_margin(coords0)
        trb = K.trace_coords(coords0)
        lo = math.floor(-float(np.min(v)) - float(np.max(m))) - 1
        hi = (T - trb) // d  # d * x1 + tr(beta) <= T, exact
        # s_j(x1 + beta) = x1 + s_j(beta): once x1 works, every larger x1 does
        x1 = lo
        while x1 <= hi and not K.is_tp_coords([x1] + y):
            x1 += 1
        x1 = max(x1, -((trb - trace_min) // d))
        for x1 in range(x1, hi + 1):
            out.append((d * x1 + trb, tuple([x1] + y)))
    if len(out) > limit:
        raise EnumerationLimitError(f"enumeration exceeded limit of {limit} candidates")
    out.sort()
    return [c for _, c in out]


# --- Lemma 2.1 constant -------------------------------------------------------


@dataclass
class GramEmbeddings:
    """Gram matrix of a free lattice with rational entries (all embeddings see the same M)."""

    M: list
    per_embedding: list = field(default_factory=list)
    lambda_min: Optional[DyadicInterval] = None

    def __post_init__(self):
        self.M = [[Fraction(x) for x in row] for row in self.M]
        r = len(self.M)
        if any(len(row) != r for row in self.M):
            raise ValueError("Gram matrix must be square")
        if any(self.M[i][j] != self.M[j][i] for i in range(r) for j in range(r)):
            raise ValueError("Gram matrix must be symmetric")
        if not self.per_embedding:
            self.per_embedding = [self.M]
        if self.lambda_min is None:
            lam = smallest_eigenvalue(self.M, 60)
            if lam.lo <= 0:
                if not _is_positive_definite(self.M):
                    raise ValueError("Gram matrix is not positive definite")
                # positive but below the current resolution: refine
                bits = 120
                while lam.lo <= 0:
                    lam = smallest_eigenvalue(self.M, bits)
                    bits *= 2
            self.lambda_min = lam


def _charpoly_int_scaled(M) -> tuple:
    """Primitive integer polynomial with the same roots as det(xI - M)."""
    den = 1
    for row in M:
        for x in row:
            den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    Mi = [[int(Fraction(x) * den) for x in row] for row in M]
    cp = charpoly_int(Mi)  # roots are den * eigenvalues
    # substitute x -> den x and clear
    return tuple(c * den**k for k, c in enumerate(cp)), den


def _is_positive_definite(M) -> bool:
    cp, _ = _charpoly_int_scaled(M)
    sq = IntPoly(cp).squarefree_part()
    return sturm_count(sq, None, 0) == 0


def smallest_eigenvalue(M, precision: int = 53) -> DyadicInterval:
    """Certified interval around the smallest eigenvalue of a symmetric rational matrix."""
    M = [[Fraction(x) for x in row] for row in M]
    cp, _ = _charpoly_int_scaled(M)
    sq = IntPoly(cp).squarefree_part()
    roots = isolate_real_roots(sq, precision)
    return roots[0]


def rayleigh_constant(G: GramEmbeddings, precision: int = 53) -> DyadicInterval:
    """Certified enclosure of C = 1/lambda; its upper endpoint is a valid constant."""
    lam = G.lambda_min
    if lam.lo <= 0:
        raise ValueError("Gram matrix is not positive definite")
    lo = Fraction(1) / lam.hi
    hi = Fraction(1) / lam.lo
    k = precision + 2
    return DyadicInterval(Fraction(math.floor(lo * 2**k), 2**k), Fraction(math.ceil(hi * 2**k), 2**k))


# --- Minkowski reduced basis ---------------------------------------------------


def _l1_mp(K: NumberField, coords, dps: int = 60):
    with mpmath.workdps(dps):
        ivs = K.root_intervals(4 * dps)
        tot = mpmath.mpf(0)
        pc = K(coords).power_coeffs()
        for iv in ivs:
            r = mpmath.mpf(iv.mid.numerator) / iv.mid.denominator
            acc = mpmath.mpf(0)
            for c in reversed(pc):
                acc = acc * r + mpmath.mpf(c.numerator) / c.denominator
            tot += abs(acc)
        return tot


def l1_length(alpha: FieldElement) -> float:
    """||alpha|| = |s_1(alpha)| + ... + |s_d(alpha)| (float)."""
    return float(np.sum(np.abs(alpha.embeddings_float())))


def trace_form_lll(K: NumberField, fixed_first: bool = True) -> list:
    """Integral basis LLL-reduced for the trace form Tr(xy); rows are coordinates."""
    d = K.degree
    G = [[K.trace_coords(K.mul_coords([int(i == k) for k in range(d)], [int(j == k) for k in range(d)])) for j in range(d)] for i in range(d)]
    return lll_gram(G, fixed_first=fixed_first)


def minkowski_reduced_basis(K: NumberField) -> list:
    """Greedy successive-minimum basis 1 = a_0, a_1, ... for the l1 length.

    Each a_i has minimal length among elements extending a_0..a_{i-1} to a basis
    of the ring of integers; ties are broken by lexicographic order of the
    sign-normalised coordinates.
    """
    d = K.degree
    if d > 4:
        raise ValueError(f"unsupported degree {d} (at most 4)")
    chosen = [tuple([1] + [0] * (d - 1))]
    if d == 1:
        return [K(chosen[0])]
    lll = trace_form_lll(K)
    for _ in range(1, d):
        # initial radius: shortest LLL vector outside the span of the chosen ones
        R = None
        for v in lll:
            if gcd_of_minors([list(c) for c in chosen] + [list(v)]) != 0:
                ln = float(np.sum(np.abs(K.float_embed(v))))
                R = ln if R is None else min(R, ln)
        while True:
            cands = box_candidates(K, [-R] * d, [R] * d)
            good = []
            for x in cands:
                ln = float(np.sum(np.abs(K.float_embed(x))))
                if ln > R * (1 + 1e-9):
                    continue
                if gcd_of_minors([list(c) for c in chosen] + [list(x)]) == 1:
                    good.append((ln, _sign_normalise(x)))
            if good:
                break
            R *= 1.5
        good = sorted(set(good))
        best = good[0][0]
        tied = [g for g in good if g[0] <= best * (1 + 1e-9) + 1e-12]
        if len(tied) > 1:
            exact = [(_l1_mp(K, x), x) for _, x in tied]
            m = min(e for e, _ in exact)
            tied = [(0, x) for e, x in exact if abs(e - m) < mpmath.mpf(10) ** -40]
        chosen.append(min(x for _, x in tied))
    return [K(c) for c in chosen]
