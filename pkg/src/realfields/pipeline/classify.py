"""Fields K of degree <= 4 in which every element of 2 O_K^+ is a sum of squares.

The search runs in four stages per candidate field.

A. candidates: fields generated by an integer whose conjugates fit in an
   interval of length 7 + sqrt 6 (Robinson enumeration plus dedup), and for
   degree four also the composites of the quadratic candidates;
B. sieve: 2(w + k) for each integral basis element w != 1, with k >= 0 the
   least integer making w + k totally positive, must be a sum of P squares;
C. counterexample search: totally positive a of norm <= disc (the only
   candidates for indecomposables) by increasing trace, testing 2a;
D. certification: twice every class representative (norm <= disc, modulo
   unit squares) is a sum of P squares.

A field failing at B, C or D carries the failing element as counterexample.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
import os
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

from ..exact.poly import IntPoly
from ..exact.sturm import TWO_PLUS_SQRT6
from ..indecomp import class_reps_norm_le, default_unit_system
from ..latenum import DEFAULT_LIMIT, EnumerationLimitError, totally_positive_by_trace
from ..numfield.field import (
    NumberField,
    _is_squarefree_int,
    biquadratic_compositum,
    fields_isomorphic,
    house_lt,
    is_totally_positive,
    maximal_order,
    quadratic_field,
)
from ..sosrep import PythagorasTable, sum_of_squares
from .dedup import dedup_fields
from .robinson import RobinsonConfig, poly_sort_key, robinson_enumerate

log = logging.getLogger(__name__)

CHECKPOINT_EVERY = 1000


class ClassificationError(RuntimeError):
    """A resource failure at a specific field; the checkpoint allows a restart."""

    def __init__(self, label: str, cause: Exception):
        super().__init__(f"field {label}: {cause}")
        self.label = label
        self.cause = cause


# --- stage A helpers ---------------------------------------------------------


def _squarefree_kernel(n: int) -> int:
    k = 2
    while k * k <= n:
        while n % (k * k) == 0:
            n //= k * k
        k += 1
    return n


def quadratic_generators_with_small_house(mode: str = "interval") -> list:
    """Real quadratic fields generated by a quadratic integer of small size, by radicand.

    mode "interval": some generator has both conjugates in (0, 7 + sqrt 6),
    i.e. the translates used for degrees 3 and 4 (this gives 24 fields).
    mode "house": some generator has house < 2 + sqrt 6, read literally.
    Returns the fields Q(sqrt D) (defined by x^2 - D) sorted by D.
    """
    radicands = set()
    if mode == "interval":
        for f in robinson_enumerate(RobinsonConfig.boundary_variant(2)):
            c, b, _ = f.coeffs
            radicands.add(_squarefree_kernel(b * b - 4 * c))
    elif mode == "house":
        # alpha = (a + b sqrt D)/2 with |a| + b sqrt D < 2(2 + sqrt 6) < 9, b >= 1
        for D in range(2, 82):
            if not _is_squarefree_int(D):
                continue
            K = quadratic_field(D)
            # generators with b = 1 (or 1/2) suffice: they have the smallest house
            gens = [K([0, 1])] if K.disc % 4 == 0 else [K([0, 1]), K([-1, 2])]
            if any(house_lt(g, TWO_PLUS_SQRT6) for g in gens):
                radicands.add(D)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return [quadratic_field(D) for D in sorted(radicands)]


def biquadratic_candidates(quadratics: list) -> list:
    """Distinct composites Q(sqrt a, sqrt b) of the given fields, one per field, sorted by disc."""
    Ds = [-K.min_poly.coeffs[0] for K in quadratics]
    seen = {}
    for a, b in itertools.combinations(Ds, 2):
        key = frozenset({a, b, _squarefree_kernel(a * b)})
        seen.setdefault(key, (a, b))
    out = [biquadratic_compositum(a, b) for a, b in seen.values()]
    out.sort(key=lambda K: (K.disc, poly_sort_key(K.min_poly)))
    return out


def field_label(K: NumberField) -> str:
    return f"{K.degree}:{K.disc}:{','.join(str(c) for c in K.min_poly.coeffs)}"


# --- records ------------------------------------------------------------------


@dataclass
class FieldRecord:
    label: str
    degree: int
    disc: int
    poly: list
    source: str  # robinson | biquadratic | both | quadratic
    stage: str  # last stage reached: B, C or D
    passed: bool
    counterexample: Optional[list] = None  # coordinates of a with 2a not a sum of P squares
    certificate: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, rec: dict) -> "FieldRecord":
        return cls(**rec)


@dataclass
class ClassificationReport:
    degree: Optional[int] = None
    pythagoras: Optional[int] = None
    records: list = field(default_factory=list)
    biquadratic: dict = field(default_factory=dict)

    def sorted_records(self) -> list:
        return sorted(self.records, key=lambda r: (r.disc, poly_sort_key(IntPoly(tuple(r.poly)))))

    @property
    def summary(self) -> dict:
        rs = self.records
        return {
            "fields": len(rs),
            "excluded_B": sum(1 for r in rs if not r.passed and r.stage == "B"),
            "excluded_C": sum(1 for r in rs if not r.passed and r.stage == "C"),
            "excluded_D": sum(1 for r in rs if not r.passed and r.stage == "D"),
            "passed": sum(1 for r in rs if r.passed),
        }

    @property
    def passing(self) -> list:
        return [r for r in self.sorted_records() if r.passed]


# --- the stages ---------------------------------------------------------------


def _is_sos(K: NumberField, coords, P: int, limit: int) -> bool:
    return sum_of_squares(2 * K(list(coords)), P, limit) is not None


def stage_b(K: NumberField, P: int, limit: int = DEFAULT_LIMIT):
    """First shifted basis element w + k with 2(w + k) not a sum of P squares, else None."""
    d = K.degree
    for i in range(1, d):
        w = K([int(i == j) for j in range(d)])
        k = 0
        while not is_totally_positive(w + k):
            k += 1
        a = w + k
        if not _is_sos(K, a.coords, P, limit):
            return [int(c) for c in a.coords], {"basis_index": i, "shift": k}
    return None


def stage_c_trace_bound(K: NumberField, factor: float = 2.0) -> int:
    """Trace cutoff for the counterexample search: factor * d * disc^(1/d)."""
    return math.ceil(factor * K.degree * K.disc ** (1 / K.degree))


def stage_c(K: NumberField, P: int, trace_bound: int, limit: int = DEFAULT_LIMIT):
    """Smallest (trace, lex) totally positive a with norm <= disc and 2a not a sum of P squares."""
    for c in totally_positive_by_trace(K, trace_bound, limit):
        a = K(list(c))
        if not K.norm_le_coords(c, K.disc):
            continue
        if not _is_sos(K, c, P, limit):
            return [int(x) for x in c]
    return None


def stage_d(K: NumberField, P: int, limit: int = DEFAULT_LIMIT, unit_house_bound: int = 50):
    """Check twice every class representative; returns (counterexample or None, certificate)."""
    units = default_unit_system(K, unit_house_bound)
    reps = class_reps_norm_le(K, K.disc, units, limit)
    cert = {
        "classes": len(reps.reps),
        "units": len(units.generators),
        "units_complete": units.complete,
        "conditional": bool(reps.conditional or K.degree >= 3),
    }
    for r in reps.reps:
        if not _is_sos(K, r.coords, P, limit):
            return [int(x) for x in r.coords], cert
    return None, cert


def classify_field(
    K: NumberField,
    P: int,
    source: str,
    limit: int = DEFAULT_LIMIT,
    trace_factor: float = 2.0,
    unit_house_bound: int = 50,
) -> FieldRecord:
    rec = FieldRecord(field_label(K), K.degree, K.disc, list(K.min_poly.coeffs), source, "B", False)
    if K.degree == 1:
        rec.stage, rec.passed = "D", True
        rec.certificate = {"classes": 1, "conditional": False}
        return rec
    b = stage_b(K, P, limit)
    if b is not None:
        rec.counterexample, rec.certificate = b[0], dict(b[1])
        return rec
    rec.stage = "C"
    T = stage_c_trace_bound(K, trace_factor)
    ce = stage_c(K, P, T, limit)
    if ce is not None:
        rec.counterexample = ce
        rec.certificate = {"trace_bound": T}
        return rec
    rec.stage = "D"
    ce, cert = stage_d(K, P, limit, unit_house_bound)
    cert["trace_bound"] = T
    rec.certificate = cert
    if ce is not None:
        rec.counterexample = ce
        return rec
    rec.passed = True
    return rec


def verify_counterexample(rec: FieldRecord, P: int) -> bool:
    """Exact re-check: 2a totally positive and not a sum of P squares."""
    if rec.counterexample is None:
        return False
    K = maximal_order(IntPoly(tuple(rec.poly)))
    a = K(rec.counterexample)
    return a.is_integral and is_totally_positive(a) and sum_of_squares(2 * a, P) is None


# --- candidate lists ------------------------------------------------------------


def _merge_candidates(robinson_fields: list, composites: list) -> list:
    """(field, source) pairs; composites isomorphic to a Robinson field are merged into it."""
    by_disc = {}
    out = []
    for K in robinson_fields:
        entry = [K, "robinson"]
        by_disc.setdefault(K.disc, []).append(entry)
        out.append(entry)
    for L in composites:
        for entry in by_disc.get(L.disc, ()):
            if fields_isomorphic(entry[0], L):
                entry[1] = "both"
                break
        else:
            entry = [L, "biquadratic"]
            by_disc.setdefault(L.disc, []).append(entry)
            out.append(entry)
    out.sort(key=lambda e: (e[0].disc, poly_sort_key(e[0].min_poly)))
    return [tuple(e) for e in out]


def candidate_fields(degree: int, fields: Optional[list] = None, progress: Optional[Callable] = None) -> list:
    """Stage A: (field, source) pairs for the given degree.

    `fields` may supply the deduplicated Robinson fields (e.g. from a saved
    dedup run) instead of recomputing them.
    """
    if degree == 1:
        return [(maximal_order(IntPoly((0, 1))), "rational")]
    if degree == 2:
        return [(K, "quadratic") for K in quadratic_generators_with_small_house()]
    if fields is None:
        polys = robinson_enumerate(RobinsonConfig.boundary_variant(degree))
        fields = [K for K, _ in dedup_fields(polys, progress=progress)]
    elif any(K.degree != degree for K in fields):
        raise ValueError(f"supplied fields must all have degree {degree}")
    composites = biquadratic_candidates(quadratic_generators_with_small_house()) if degree == 4 else []
    return _merge_candidates(fields, composites)


# --- checkpointed driver ----------------------------------------------------------


def _save_state(path: str, state: dict):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(state, fh)
    os.replace(tmp, path)


def classify(
    degree: int,
    table: Optional[PythagorasTable] = None,
    state_path: Optional[str] = None,
    limit: int = DEFAULT_LIMIT,
    trace_factor: float = 2.0,
    unit_house_bound: int = 50,
    fields: Optional[list] = None,
    progress: Optional[Callable] = None,
) -> ClassificationReport:
    """Run stages A-D for one degree, resuming from state_path when it exists."""
    table = table or PythagorasTable()
    P = table.cap(degree)
    state = None
    if state_path and os.path.exists(state_path):
        with open(state_path) as fh:
            state = json.load(fh)
        if state.get("degree") != degree or state.get("pythagoras") != P:
            raise ValueError(f"state file {state_path} belongs to a different run")
    if state is None or "candidates" not in state:
        cands = candidate_fields(degree, fields, progress=None)
        state = {
            "degree": degree,
            "pythagoras": P,
            "candidates": [[K.to_json(), src] for K, src in cands],
            "done": {},
        }
        if state_path:
            _save_state(state_path, state)
    done = state["done"]
    t0 = time.time()
    for n, (kj, src) in enumerate(state["candidates"]):
        K = NumberField.from_json(kj)
        lab = field_label(K)
        if lab in done:
            continue
        try:
            rec = classify_field(K, P, src, limit, trace_factor, unit_house_bound)
        except (EnumerationLimitError, MemoryError) as exc:
            if state_path:
                _save_state(state_path, state)
            raise ClassificationError(lab, exc) from exc
        done[lab] = rec.to_json()
        if len(done) % CHECKPOINT_EVERY == 0:
            if state_path:
                _save_state(state_path, state)
            if progress:
                progress(len(done), len(state["candidates"]), time.time() - t0)
    if state_path:
        _save_state(state_path, state)
    report = ClassificationReport(degree, P, [FieldRecord.from_json(r) for r in done.values()])
    report.records = report.sorted_records()
    if degree == 4:
        report.biquadratic = biquadratic_summary(report)
    return report


def biquadratic_summary(report: ClassificationReport) -> dict:
    quads = quadratic_generators_with_small_house()
    comp = [r for r in report.records if r.source in ("biquadratic", "both")]
    surv = [r for r in comp if r.stage != "B"]
    return {
        "quadratic_fields": len(quads),
        "composites": len(comp),
        "survived_sieve": len(surv),
        "counterexamples_after_sieve": sum(1 for r in surv if not r.passed),
        "passed": [r.label for r in surv if r.passed],
    }
