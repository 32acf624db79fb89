"""Small exact linear algebra over Z, Q and F_p (row-vector conventions)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def identity(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence]) -> list:
    return [list(r) for r in zip(*A)]


def matmul(A, B) -> list:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def vecmat(v, A) -> list:
    n = len(A[0])
    out = [0] * n
    for vi, row in zip(v, A):
        if vi:
            for j in range(n):
                out[j] += vi * row[j]
    return out


def det_bareiss(A) -> int:
    """Determinant of an integer matrix (fraction-free elimination)."""
    M = [list(r) for r in A]
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def det_frac(A) -> Fraction:
    M = [[Fraction(x) for x in r] for r in A]
    n = len(M)
    d = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            d = -d
        d *= M[k][k]
        inv = 1 / M[k][k]
        for i in range(k + 1, n):
            f = M[i][k] * inv
            if f:
                for j in range(k, n):
                    M[i][j] -= f * M[k][j]
    return d


def inverse_frac(A) -> list:
    n = len(A)
    M = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A)]
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[k], M[piv] = M[piv], M[k]
        inv = 1 / M[k][k]
        M[k] = [x * inv for x in M[k]]
        for i in range(n):
            if i != k and M[i][k]:
                f = M[i][k]
                M[i] = [a - f * b for a, b in zip(M[i], M[k])]
    return [r[n:] for r in M]


def charpoly_int(A) -> tuple:
    """Characteristic polynomial det(xI - A), ascending, by Faddeev-LeVerrier.

    Works over Z or Q; divisions are exact for integer matrices.
    """
    n = len(A)
    frac = any(isinstance(x, Fraction) for r in A for x in r)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    M = [[0] * n for _ in range(n)]  # M_0 = 0
    c = 1
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        AM = [[sum(A[i][l] * M[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            AM[i][i] += c
        M = AM
        tr = sum(sum(A[i][l] * M[l][i] for l in range(n)) for i in range(n))
        if frac:
            c = -Fraction(tr) / k
        else:
            assert tr % k == 0
            c = -tr // k
        coeffs[n - k] = c
    return tuple(coeffs)


def hnf_rows(rows: Sequence[Sequence[int]], n: int) -> list:
    """Lower-triangular Hermite normal form of the Z-span of integer rows.

    Returns n rows H with H[i][j] = 0 for j > i, H[i][i] > 0 and
    0 <= H[k][j] < H[j][j] for k > j.  The span must have full rank n.
    """
    pool = [list(r) for r in rows if any(r)]
    H = [None] * n
    for c in range(n - 1, -1, -1):
        active = [r for r in pool if r[c] != 0]
        rest = [r for r in pool if r[c] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[c]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q = r[c] // piv[c]
                r2 = [a - q * b for a, b in zip(r, piv)]
                if r2[c] != 0:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            active = nxt
        if not active:
            raise ValueError("lattice is not of full rank")
        piv = active[0]
        if piv[c] < 0:
            piv = [-a for a in piv]
        H[c] = piv
        pool = rest
    for i in range(n):
        for j in range(i - 1, -1, -1):
            q = H[i][j] // H[j][j]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[j])]
    return H


def kernel_mod_p(A: Sequence[Sequence[int]], p: int) -> list:
    """Basis of the left kernel {v : v A = 0 mod p} of an m x k matrix A."""
    m = len(A)
    if m == 0:
        return []
    k = len(A[0])
    # augment with identity to track row operations
    M = [[x % p for x in A[i]] + [int(i == j) for j in range(m)] for i in range(m)]
    row = 0
    for col in range(k):
        piv = next((i for i in range(row, m) if M[i][col] % p), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = pow(M[row][col], -1, p)
        M[row] = [(x * inv) % p for x in M[row]]
        for i in range(m):
            if i != row and M[i][col] % p:
                f = M[i][col]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[row])]
        row += 1
        if row == m:
            break
    return [r[k:] for r in M[row:]]


def solve_left_triangular(v: Sequence, H: Sequence[Sequence]) -> list:
    """Solve y H = v for lower-triangular H (rows), returning rationals."""
    n = len(H)
    y = [Fraction(0)] * n
    rem = [Fraction(x) for x in v]
    for i in range(n - 1, -1, -1):
        y[i] = rem[i] / H[i][i]
        if y[i]:
            for j in range(i + 1):
                rem[j] -= y[i] * H[i][j]
    return y


def gcd_of_minors(rows: Sequence[Sequence[int]]) -> int:
    """gcd of the maximal minors of a k x n integer matrix (k <= n)."""
    import itertools

    k = len(rows)
    n = len(rows[0])
    g = 0
    for cols in itertools.combinations(range(n), k):
        g = gcd(g, det_bareiss([[r[c] for c in cols] for r in rows]))
        if g == 1:
            return 1
    return g


def lll_gram(G: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4), fixed_first: bool = False):
    """LLL reduction driven by an exact positive definite Gram matrix.

    Returns the unimodular transform U (rows = new basis in old coordinates).
    With fixed_first the first vector is never swapped out.
    """
    n = len(G)
    U = identity(n)
    Gm = [[Fraction(x) for x in r] for r in G]

    def gram(i, j):
        return sum(U[i][a] * Gm[a][b] * U[j][b] for a in range(n) for b in range(n))

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        B = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                s = gram(i, j) - sum(mu[j][l] * mu[i][l] * B[l] for l in range(j))
                mu[i][j] = s / B[j]
            B[i] = gram(i, i) - sum(mu[i][l] ** 2 * B[l] for l in range(i))
        return mu, B

    mu, B = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                U[k] = [a - q * b for a, b in zip(U[k], U[j])]
                mu, B = gso()
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1] or (fixed_first and k == 1):
            k += 1
        else:
            U[k], U[k - 1] = U[k - 1], U[k]
            mu, B = gso()
            k = max(k - 1, 1)
    return U


def hnf_with_transform(rows: Sequence[Sequence[int]]):
    """Row-reduce integer rows to echelon form, tracking the unimodular transform.

    Returns (H, U) with U * rows = H; the nonzero rows of H come first and form
    a basis of the row lattice.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    A = [list(r) + [int(i == j) for j in range(m)] for i, r in enumerate(rows)]
    top = 0
    for c in range(n):
        while True:
            nz = [i for i in range(top, m) if A[i][c] != 0]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            for i in nz:
                if i != piv:
                    q = A[i][c] // A[piv][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[piv])]
        nz = [i for i in range(top, m) if A[i][c] != 0]
        if nz:
            i = nz[0]
            A[top], A[i] = A[i], A[top]
            if A[top][c] < 0:
                A[top] = [-a for a in A[top]]
            top += 1
    return [r[:n] for r in A], [r[n:] for r in A]
