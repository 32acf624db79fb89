"""Independent reference computations used by several test modules.

These deliberately avoid the library's enumeration engine: quadratic
elements are handled as p + q sqrt D with exact sign tests, and searches are
plain coordinate loops.
"""

from fractions import Fraction
import itertools

from realfields.exact.sturm import DyadicInterval
from realfields.latenum import GramEmbeddings, rayleigh_constant
from realfields.numfield import house, is_totally_positive


def sign_surd(u, q, D) -> int:
    """Sign of u + q sqrt D for rationals u, q and D > 0 not a square."""
    if q == 0:
        return (u > 0) - (u < 0)
    if u == 0:
        return 1 if q > 0 else -1
    if (u > 0) == (q > 0):
        return 1 if u > 0 else -1
    # opposite signs: compare u^2 with q^2 D
    a, b = u * u, q * q * D
    if a == b:
        return 0
    return (1 if u > 0 else -1) if a > b else (1 if q > 0 else -1)


def quadratic_parts(K, D, coords):
    """(p, q) with x = p + q sqrt D for the field Q(sqrt D) defined by x^2 - D."""
    p = q = Fraction(0)
    for c, row in zip(coords, K.basis):
        p += c * Fraction(row[0])
        q += c * Fraction(row[1])
    return p, q


def quadratic_box_oracle(K, D, bounds, mode, R=14):
    """All integral x (coords) in the box, by a plain double loop over [-R, R]^2.

    Embedding 0 is the negative root -sqrt D, embedding 1 is +sqrt D.
    """
    out = []
    for a, b in itertools.product(range(-R, R + 1), repeat=2):
        p, q = quadratic_parts(K, D, (a, b))
        ok = True
        for j, c in enumerate(bounds):
            qq = -q if j == 0 else q
            if mode == "symmetric":
                # -c <= p + qq sqrt D <= c
                if sign_surd(p - c, qq, D) > 0 or sign_surd(p + c, qq, D) < 0:
                    ok = False
            else:
                if sign_surd(p, qq, D) <= 0 or sign_surd(p - c, qq, D) >= 0:
                    ok = False
        if ok:
            out.append((a, b))
    return sorted(out)


def lemma_inequality_holds(K, M, vec) -> bool:
    """house(v)^2 <= C house(Q(v)) with C the certified constant, decided exactly.

    Decided by certified intervals first; when those overlap, the stronger
    per-embedding statement C Q(v) - v_k^2 >= 0 (which implies the claim) is
    tested exactly.
    """
    G = GramEmbeddings(M)
    C = rayleigh_constant(G).hi
    r = len(M)
    Qv = K.zero
    for i in range(r):
        for j in range(r):
            if M[i][j]:
                Qv = Qv + vec[i] * vec[j] * Fraction(M[i][j])
    hv = [house(x, 60) for x in vec]
    hq = house(Qv, 60)
    lhs_hi = max(h.hi for h in hv) ** 2
    if lhs_hi <= C * hq.lo:
        return True
    for x in vec:
        diff = Qv * C - x * x
        if not (diff.is_zero or is_totally_positive(diff)):
            # per-embedding bound fails: fall back to the weaker statement
            for prec in (120, 240, 480):
                hx = max(house(y, prec).hi for y in vec) ** 2
                if hx <= C * house(Qv, prec).lo:
                    return True
            return False
    return True
