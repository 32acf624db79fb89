"""Grouping polynomials into isomorphism classes of number fields.

A polynomial g of degree d defines a field isomorphic to K exactly when g has a
root in K.  Such a root is an integer of K whose conjugates are the roots of g,
so when every polynomial has its roots in (0, U) all of them show up in the
one-sided box 0 < s_i(y) < U of K.  Enumerating that box once per class claims
every polynomial of the class in one pass.
"""

from __future__ import annotations

import logging
import time
from typing import Iterable, Optional

import numpy as np

from ..exact.poly import IntPoly
from ..exact.sturm import SEVEN_PLUS_SQRT6
from ..latenum import box_candidates
from ..numfield.field import NumberField, maximal_order
from .robinson import poly_sort_key

log = logging.getLogger(__name__)


def _float_charpolys(K: NumberField, X: np.ndarray) -> np.ndarray:
    """Rounded characteristic polynomial coefficients (ascending) of many elements."""
    V = X @ K.E.T  # conjugates, one row per element
    n, d = V.shape
    # elementary symmetric functions, row-wise
    coeffs = np.zeros((n, d + 1))
    coeffs[:, 0] = 1.0
    for j in range(d):
        coeffs[:, 1:] = coeffs[:, 1:] - V[:, j : j + 1] * coeffs[:, :-1]
    # coeffs[k] multiplies x^(d-k); flip to ascending order
    return np.rint(coeffs[:, ::-1])


def dedup_fields(
    polys: Iterable[IntPoly],
    root_upper=SEVEN_PLUS_SQRT6,
    progress: Optional[callable] = None,
) -> list:
    """One field per isomorphism class, labelled by its smallest polynomial.

    Returns (field, members) pairs sorted by (disc, label); `members` are the
    input polynomials defining that field, ascending.
    """
    polys = sorted(set(polys), key=poly_sort_key)
    if not polys:
        return []
    d = polys[0].degree
    if any(p.degree != d for p in polys):
        raise ValueError("all polynomials must have the same degree")
    index = {p.coeffs: i for i, p in enumerate(polys)}
    owner = [None] * len(polys)
    classes = []
    U = float(root_upper)
    t0 = time.time()
    for i, f in enumerate(polys):
        if owner[i] is not None:
            continue
        K = maximal_order(f, check=False)
        cid = len(classes)
        members = [i]
        owner[i] = cid
        cands = box_candidates(K, [0.0] * d, [U] * d)
        if cands:
            X = np.array(cands, dtype=float)
            cps = _float_charpolys(K, X)
            for x, cp in zip(cands, cps):
                key = tuple(int(c) for c in cp)
                j = index.get(key)
                if j is None or owner[j] is not None:
                    continue
                # exact confirmation of the float hit
                if K.charpoly_coords(list(x)) != key:
                    continue
                owner[j] = cid
                members.append(j)
        classes.append((K, sorted(members)))
        if progress and len(classes) % 1000 == 0:
            progress(len(classes), i + 1, len(polys), time.time() - t0)
    out = [(K, [polys[j] for j in mem]) for K, mem in classes]
    out.sort(key=lambda t: (t[0].disc, poly_sort_key(t[0].min_poly)))
    return out
