"""Command line interface: `realfields <subcommand>`.

Structured output is line-delimited JSON on stdout; tables additionally go
to CSV and figures to PNG under --report-dir.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import sys
import time
from fractions import Fraction

import click

from .config import load_config
from .exact.poly import IntPoly
from .indecomp import UnitSystem, decompose_full, default_unit_system
from .latenum import square_below, square_box
from .numfield.field import NumberField, house, maximal_order
from .sosrep import sum_of_squares, universal_form, universality_spot_check

log = logging.getLogger("realfields")


def _emit(rec: dict, fh=None):
    click.echo(json.dumps(rec, sort_keys=True), file=fh)


def _parse_poly(text: str) -> IntPoly:
    return IntPoly.parse(text, require_monic=True)


def _parse_coords(text: str, d: int) -> list:
    vals = [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    if len(vals) != d:
        raise click.BadParameter(f"expected {d} coordinates, got {len(vals)}")
    return [int(v) if v.denominator == 1 else v for v in vals]


def _read_polys(path: str) -> list:
    """Polynomials from JSON lines ({"coeffs": [...]}) or plain 'c0,c1,...' lines."""
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("{"):
                rec = json.loads(line)
                if "coeffs" in rec:
                    out.append(IntPoly(tuple(rec["coeffs"])))
            else:
                out.append(_parse_poly(line))
    return out


def _report_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="key=value configuration file")
@click.option("-v", "--verbose", is_flag=True, help="progress messages on stderr")
@click.pass_context
def main(ctx, config_path, verbose):
    """Totally real number fields: sums of squares, indecomposables and universal forms."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(message)s", stream=sys.stderr)
    ctx.obj = load_config(config_path)


@main.command()
@click.option("--degree", type=click.Choice(["2", "3", "4"]), required=True)
@click.option("--boundary-variant", is_flag=True, help="drop the requirement of a root in (0, 1)")
@click.option("--output", type=click.Path(dir_okay=False), help="write the polynomials here instead of stdout")
def robinson(degree, boundary_variant, output):
    """Monic irreducible polynomials with all roots in (0, 7 + sqrt 6)."""
    from .pipeline.robinson import RobinsonConfig, robinson_enumerate

    d = int(degree)
    cfg = RobinsonConfig.boundary_variant(d) if boundary_variant else RobinsonConfig(d)
    t0 = time.time()
    polys = robinson_enumerate(cfg)
    fh = open(output, "w") if output else None
    try:
        for f in polys:
            _emit({"type": "poly", "coeffs": list(f.coeffs)}, fh)
    finally:
        if fh:
            fh.close()
    _emit({"type": "summary", "degree": d, "boundary_variant": boundary_variant, "count": len(polys), "seconds": round(time.time() - t0, 2)})


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--output", type=click.Path(dir_okay=False), help="write the field records here instead of stdout")
def dedup(file, output):
    """Group the polynomials in FILE into isomorphism classes of fields."""
    from .pipeline.dedup import dedup_fields

    polys = _read_polys(file)
    t0 = time.time()

    def progress(n, i, total, secs):
        log.info("%d fields after %d/%d polynomials (%.0f s)", n, i, total, secs)

    classes = dedup_fields(polys, progress=progress)
    fh = open(output, "w") if output else None
    try:
        for K, members in classes:
            _emit({"type": "field", "degree": K.degree, "disc": K.disc, "coeffs": list(K.min_poly.coeffs),
                   "field": K.to_json(), "members": len(members)}, fh)
    finally:
        if fh:
            fh.close()
    _emit({"type": "summary", "polynomials": len(polys), "fields": len(classes), "seconds": round(time.time() - t0, 2)})


def _read_fields(path: str) -> list:
    out = []
    with open(path) as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                if rec.get("type") == "field":
                    out.append(NumberField.from_json(rec["field"]))
    return out


@main.command()
@click.option("--degree", type=click.Choice(["2", "3", "4"]), required=True)
@click.option("--resume", "state", type=click.Path(dir_okay=False), help="state file (created if missing, resumed if present)")
@click.option("--fields", "fields_path", type=click.Path(exists=True, dir_okay=False), help="dedup output to use as the Robinson fields")
@click.option("--report-dir", default="reports", show_default=True)
@click.pass_obj
def classify(cfg, degree, state, fields_path, report_dir):
    """Fields of the given degree in which 2 O_K^+ consists of sums of squares."""
    from .pipeline.classify import classify as run
    from .pipeline.report import emit_jsonl, emit_report
    from .plots import plot_classification

    d = int(degree)
    fields = _read_fields(fields_path) if fields_path else None

    def progress(n, total, secs):
        log.info("%d/%d fields classified (%.0f s)", n, total, secs)

    rep = run(d, cfg.table, state, cfg.enumeration_limit, cfg.stage_c_trace_factor, cfg.unit_house_bound, fields, progress)
    out = _report_dir(report_dir)
    base = os.path.join(out, f"classify_{d}")
    with open(base + ".json", "wb") as fh:
        fh.write(emit_report(rep, "json"))
    with open(base + ".csv", "wb") as fh:
        fh.write(emit_report(rep, "csv"))
    plot_classification(rep, base + ".png")
    click.echo(emit_jsonl(rep), nl=False)


@main.command("quartic-trend")
@click.option("--d", "D", type=int, required=True, help="squarefree D; the family is Q(sqrt D, sqrt m)")
@click.option("--count", type=int, default=10, show_default=True)
@click.option("--report-dir", default="reports", show_default=True)
def quartic_trend_cmd(D, count, report_dir):
    """Least traces outside Q(sqrt D) against the discriminant, with log-log slopes."""
    from .pipeline.trends import biquadratic_family, quartic_trend
    from .plots import plot_quartic_trend

    table = quartic_trend(D, biquadratic_family(D, count))
    out = _report_dir(report_dir)
    base = os.path.join(out, f"quartic_trend_{D}")
    recs = table.to_records()
    with open(base + ".csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(recs[0]))
        w.writeheader()
        for r in recs:
            w.writerow({k: json.dumps(v) if isinstance(v, list) else v for k, v in r.items()})
    plot_quartic_trend(table, base + ".png")
    for r in recs:
        _emit({"type": "row", **r})
    _emit({"type": "summary", "D": D, "fields": len(recs), "slope_a": table.slope_a, "slope_b": table.slope_b})


@main.command("rank-trend")
@click.option("--max-d", type=int, default=100, show_default=True)
@click.option("--report-dir", default="reports", show_default=True)
@click.pass_obj
def rank_trend_cmd(cfg, max_d, report_dir):
    """Rank of the diagonal universal form for Q(sqrt D), D <= max-d (recorded, not asserted)."""
    from dataclasses import asdict

    from .pipeline.trends import universal_rank_trend
    from .plots import plot_rank_trend

    rows = universal_rank_trend(max_d, cfg.table)
    out = _report_dir(report_dir)
    base = os.path.join(out, "rank_trend")
    with open(base + ".csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(asdict(rows[0])))
        w.writeheader()
        for r in rows:
            w.writerow(asdict(r))
    plot_rank_trend(rows, base + ".png")
    for r in rows:
        _emit({"type": "row", **asdict(r)})


@main.command()
@click.argument("coeffs")
@click.option("--precision", type=int, default=None, help="bits for the embedding intervals")
@click.pass_obj
def field(cfg, coeffs, precision):
    """Ring of integers of Q[x]/(f), f given by ascending coefficients 'c0,c1,...'."""
    f = _parse_poly(coeffs)
    K = maximal_order(f)
    prec = precision or cfg.precision
    emb = K.root_intervals(prec)
    _emit({
        "poly": list(f.coeffs),
        "degree": K.degree,
        "disc": K.disc,
        "index": K.index,
        "basis": [[str(x) for x in row] for row in K.basis],
        "embeddings": [[str(iv.lo), str(iv.hi)] for iv in emb],
        "embeddings_float": [float(iv.mid) for iv in emb],
    })


def _element(poly: str, coords: str):
    K = maximal_order(_parse_poly(poly))
    return K, K(_parse_coords(coords, K.degree))


@main.command()
@click.option("--poly", required=True, help="field polynomial, ascending coefficients")
@click.option("--element", required=True, help="coordinates in the integral basis")
@click.option("--cap", "m", type=int, default=None, help="number of squares (default: configured cap)")
@click.pass_obj
def sos(cfg, poly, element, m):
    """Write an element as a sum of at most m squares, or certify that none exists."""
    K, tau = _element(poly, element)
    m = m or cfg.table.cap(K.degree)
    res = sum_of_squares(tau, m, cfg.enumeration_limit)
    if res is None:
        _emit({"element": tau.to_json(), "cap": m, "result": f"none (certified, cap {m})"})
    else:
        _emit({"element": tau.to_json(), "cap": m, "result": [x.to_json() for x in res]})


@main.command()
@click.option("--poly", required=True)
@click.option("--element", required=True)
def decompose(poly, element):
    """gamma = alpha0 + sum b_i^2 with norm(alpha0) <= disc, plus the first square below gamma."""
    K, g = _element(poly, element)
    beta = square_below(g)
    a0, squares = decompose_full(g)
    _emit({"element": g.to_json(), "box": [str(c) for c in square_box(g).bounds],
           "square_below": beta.to_json() if beta is not None else "none",
           "remainder": a0.to_json(), "remainder_norm": str(a0.norm()),
           "disc": K.disc, "squares": [b.to_json() for b in squares]})


@main.command("universal-form")
@click.option("--poly", required=True)
@click.option("--spot-check", "bound", type=int, default=None, help="test all elements up to this trace")
@click.option("--unit", "unit_coords", multiple=True, help="unit generator coordinates (repeatable); skips the unit search")
@click.pass_obj
def universal_form_cmd(cfg, poly, bound, unit_coords):
    """Diagonal universal form: class representatives of norm <= disc plus P ones."""
    K = maximal_order(_parse_poly(poly))
    if unit_coords:
        gens = [K(_parse_coords(u, K.degree)) for u in unit_coords]
        try:
            units = UnitSystem(K, gens, complete=len(gens) == K.degree - 1)
        except ValueError as exc:
            raise click.BadParameter(str(exc), param_hint="--unit")
    else:
        units = default_unit_system(K, cfg.unit_house_bound)
    Qf = universal_form(K, units, cfg.table)
    rec = {"poly": list(K.min_poly.coeffs), "disc": K.disc, "rank": Qf.rank, "conditional": Qf.conditional,
           "coefficients": [a.to_json() for a in Qf.coefficients]}
    if bound is not None:
        rec["spot_check_bound"] = bound
        rec["spot_check_failures"] = [a.to_json() for a in universality_spot_check(Qf, bound, cfg.enumeration_limit)]
    _emit(rec)


@main.command("house")
@click.option("--poly", required=True)
@click.option("--element", required=True)
@click.option("--precision", type=int, default=None)
@click.pass_obj
def house_cmd(cfg, poly, element, precision):
    """Certified interval for the house of an element."""
    K, a = _element(poly, element)
    iv = house(a, precision or cfg.precision)
    _emit({"element": a.to_json(), "lo": str(iv.lo), "hi": str(iv.hi), "approx": float(iv.mid)})


if __name__ == "__main__":  # pragma: no cover
    main()
