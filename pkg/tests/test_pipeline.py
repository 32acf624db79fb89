import json

import pytest
from click.testing import CliRunner

from realfields.cli import main
from realfields.config import Config, parse_config
from realfields.exact import IntPoly
from realfields.numfield import maximal_order, quadratic_field
from realfields.pipeline import (
    ClassificationReport,
    FieldRecord,
    InsufficientSampleError,
    RobinsonConfig,
    biquadratic_family,
    classify,
    dedup_fields,
    emit_jsonl,
    emit_report,
    parse_report,
    quartic_trend,
    robinson_enumerate,
    verify_counterexample,
)
from realfields.pipeline.classify import biquadratic_candidates, quadratic_generators_with_small_house


def P(*c):
    return IntPoly(tuple(c))


# --- Robinson enumeration ----------------------------------------------------------------


@pytest.fixture(scope="module")
def cubic_polys():
    return robinson_enumerate(RobinsonConfig.boundary_variant(3))


def test_robinson_quadratic_contains_known():
    polys = robinson_enumerate(RobinsonConfig.boundary_variant(2))
    assert P(1, -3, 1) in polys  # phi^2 and its conjugate
    for f in polys:
        assert f.degree == 2 and f.coeffs[-1] == 1


def test_robinson_cubic_count(cubic_polys):
    assert len(cubic_polys) == 2885
    assert len(robinson_enumerate(RobinsonConfig(3))) == 1554


def test_robinson_trace_window_empty():
    assert robinson_enumerate(RobinsonConfig(3, trace_max=4)) == []


def test_robinson_roots_in_range(cubic_polys):
    from realfields.exact import isolate_real_roots

    for f in cubic_polys[::97]:
        ivs = isolate_real_roots(f, 20)
        assert len(ivs) == 3
        assert ivs[0].lo > -1e-9 and float(ivs[-1].hi) < 7 + 6**0.5 + 1e-6


def test_robinson_rejects_degree():
    with pytest.raises(ValueError):
        RobinsonConfig(5)


# --- dedup ---------------------------------------------------------------------------------------


def test_cubic_dedup(cubic_polys):
    classes = dedup_fields(cubic_polys)
    assert len(classes) == 664
    assert sum(len(m) for _, m in classes) == len(cubic_polys)
    discs = [K.disc for K, _ in classes]
    assert discs == sorted(discs)
    assert discs[0] == 49


def test_dedup_rho_translates():
    # rho + 2, rho + 3 and 3 - rho have all roots in range and define one field
    polys = [P(-2, 8, -6, 1), P(-17, 23, -9, 1), P(-13, 23, -9, 1)]
    classes = dedup_fields(polys)
    assert len(classes) == 1


def test_dedup_mixed_degree():
    with pytest.raises(ValueError):
        dedup_fields([P(-2, 0, 1), P(-2, -4, 0, 1)])


# --- classification -----------------------------------------------------------------------------------


def test_quadratic_candidates():
    assert len(quadratic_generators_with_small_house()) == 24
    assert len(quadratic_generators_with_small_house("house")) == 20


def test_classify_quadratic(tmp_path):
    rep = classify(2, state_path=str(tmp_path / "s.json"))
    s = rep.summary
    assert s["fields"] == 24 and s["passed"] == 3
    assert sorted(r.disc for r in rep.passing) == [5, 8, 12]
    for r in rep.records:
        if not r.passed:
            assert verify_counterexample(r, rep.pythagoras)
    # resuming from a finished state reproduces the report without recomputation
    again = classify(2, state_path=str(tmp_path / "s.json"))
    assert [r.to_json() for r in again.records] == [r.to_json() for r in rep.records]


def test_classify_cubic():
    rep = classify(3)
    assert rep.summary["fields"] == 664
    assert sorted(r.disc for r in rep.passing) == [49, 148]
    assert all(r.certificate["conditional"] for r in rep.passing)
    for r in rep.records[:60]:
        if not r.passed:
            assert verify_counterexample(r, rep.pythagoras)


def test_classify_state_mismatch(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"degree": 3, "pythagoras": 6}))
    with pytest.raises(ValueError, match="different run"):
        classify(2, state_path=str(path))


def test_biquadratic_candidates():
    comp = biquadratic_candidates(quadratic_generators_with_small_house())
    assert len(comp) == 252
    assert 1600 in {K.disc for K in comp}


# --- reports ------------------------------------------------------------------------------------------------


def _small_report():
    rep = classify(2)
    return rep


@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_report_round_trip(fmt):
    rep = _small_report()
    back = parse_report(emit_report(rep, fmt), fmt)
    assert back.degree == rep.degree
    if fmt == "json":  # the CSV table carries records only
        assert back.pythagoras == rep.pythagoras and back.summary == rep.summary
    assert [r.to_json() for r in back.records] == [r.to_json() for r in rep.records]


def test_empty_report():
    rep = ClassificationReport(3, 6, [])
    for fmt in ("json", "csv"):
        back = parse_report(emit_report(rep, fmt), fmt)
        assert back.records == []
    assert rep.summary["fields"] == 0
    assert json.loads(emit_jsonl(rep).splitlines()[-1])["type"] == "summary"


def test_report_bad_format():
    with pytest.raises(ValueError):
        emit_report(ClassificationReport(2, 5, []), "xml")


def test_field_record_json():
    r = FieldRecord("2:5:-1,-1,1", 2, 5, [-1, -1, 1], "robinson", "D", True, None, {"classes": 1})
    assert FieldRecord.from_json(json.loads(json.dumps(r.to_json()))) == r


# --- trends --------------------------------------------------------------------------------------------------


def test_quartic_trend_small():
    fam = biquadratic_family(2, 5)
    assert len(fam) == 5 and all(K.degree == 4 for K in fam)
    table = quartic_trend(2, fam)
    for row in table.rows:
        assert 0 < row.t_a <= row.t_b
    assert table.slope_a > 0


def test_quartic_trend_insufficient():
    with pytest.raises(InsufficientSampleError, match="insufficient sample"):
        quartic_trend(2, biquadratic_family(2, 1))


# --- configuration ---------------------------------------------------------------------------------------------------


def test_config_parse():
    cfg = parse_config("# caps\npythagoras.3 = 5\nprecision=80\nstage_c_trace_factor = 2.5\n")
    assert cfg.table.cap(3) == 5 and cfg.table.cap(4) == 7
    assert cfg.precision == 80 and cfg.stage_c_trace_factor == 2.5
    assert Config().precision == 53
    with pytest.raises(ValueError, match="unknown configuration key"):
        parse_config("colour = blue\n")


# --- command line ---------------------------------------------------------------------------------------------------


def _lines(out):
    return [json.loads(l) for l in out.splitlines() if l.strip()]


def test_cli_field():
    res = CliRunner().invoke(main, ["field", "--", "-2,-4,0,1"])
    assert res.exit_code == 0, res.output
    rec = _lines(res.output)[0]
    assert rec["disc"] == 148 and rec["degree"] == 3


def test_cli_field_rejects_complex():
    res = CliRunner().invoke(main, ["field", "1,0,1"])
    assert res.exit_code != 0


def test_cli_sos_and_decompose():
    r = CliRunner()
    out = _lines(r.invoke(main, ["sos", "--poly=0,1", "--element=7", "--cap=3"]).output)[0]
    assert out["result"].startswith("none")
    res = r.invoke(main, ["decompose", "--poly=-2,0,1", "--element=4,1"])
    rec = _lines(res.output)[0]
    assert rec["square_below"] != "none" and int(rec["remainder_norm"]) <= rec["disc"]


def test_cli_universal_form():
    res = CliRunner().invoke(main, ["universal-form", "--poly=-5,0,1", "--spot-check", "20"])
    rec = _lines(res.output)[0]
    assert rec["rank"] == 8 and rec["spot_check_failures"] == []


def test_cli_robinson_and_dedup(tmp_path):
    r = CliRunner()
    out = tmp_path / "r.jsonl"
    res = r.invoke(main, ["robinson", "--degree", "3", "--boundary-variant", "--output", str(out)])
    assert _lines(res.output)[-1]["count"] == 2885
    res = r.invoke(main, ["dedup", str(out), "--output", str(tmp_path / "f.jsonl")])
    assert _lines(res.output)[-1]["fields"] == 664


def test_cli_classify_writes_reports(tmp_path):
    res = CliRunner().invoke(main, ["classify", "--degree", "2", "--report-dir", str(tmp_path)])
    assert res.exit_code == 0, res.output
    assert _lines(res.output)[-1]["passed"] == 3
    for ext in ("json", "csv", "png"):
        assert (tmp_path / f"classify_2.{ext}").stat().st_size > 0


def test_cli_quartic_trend(tmp_path):
    res = CliRunner().invoke(main, ["quartic-trend", "--d", "2", "--count", "5", "--report-dir", str(tmp_path)])
    assert res.exit_code == 0, res.output
    assert (tmp_path / "quartic_trend_2.csv").exists() and (tmp_path / "quartic_trend_2.png").exists()


def test_cli_config_file(tmp_path):
    cfg = tmp_path / "c.conf"
    cfg.write_text("pythagoras.2 = 3\n")
    res = CliRunner().invoke(main, ["--config", str(cfg), "sos", "--poly=-5,0,1", "--element=7,0"])
    assert _lines(res.output)[0]["cap"] == 3
