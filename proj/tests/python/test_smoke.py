import math
import pathlib

import pytest

import arvol

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"
TOY1 = {"degree": 1, "lambda": "1", "mode": "coeff-max", "E": [{"alpha": "0", "mult": "1/4"}], "Y": "0"}
PLAIN = {"degree": 1, "lambda": "1"}


def test_spec_round_trip():
    spec = arvol.normalize_spec(TOY1)
    assert spec["E"] == [{"alpha": "0", "mult": "1/4"}]
    assert arvol.normalize_spec(str(DATA / "toy1.json")) == spec


def test_bad_specs_raise():
    with pytest.raises(ValueError):
        arvol.normalize_spec({"degree": 1, "colour": "red"})
    with pytest.raises(ValueError, match="byte"):
        arvol.normalize_spec("{\"degree\": 1,, }")


def test_section_count():
    # Coefficients of degree <= 2 polynomials with absolute value below 4.
    assert arvol.section_count({"degree": 2, "lambda": "log(2)"}, 1) == {"lo": 343, "hi": 343}


def test_flags():
    assert arvol.validate_flag("0", 2, "full")["good"] is True
    assert arvol.validate_flag("1/2", 2, "full")["good"] is False


def test_volume_and_oracle():
    v = arvol.avol(PLAIN, 8, 16)
    assert abs(v["extrapolated"] - 2.0) < 0.2
    assert arvol.restricted_oracle(TOY1) == pytest.approx(1.0)
    r = arvol.restricted_volume(TOY1, "CL", 8, 20)
    assert abs(r["extrapolated"] - 1.0) < 0.1


def test_lemmas_and_reports():
    rep = arvol.lemma_suite(["rescale", "quot_exact"], 5, 7)
    assert all(k["violations"] == 0 for k in rep["kinds"])
    y = arvol.yuan(PLAIN, 6)
    assert y["report"]["satisfied"] is True
    checks = arvol.fe_bounds(TOY1, 1, 4)
    assert len(checks) == 4 and all(c["report"]["satisfied"] for c in checks)


def test_derivative():
    d = arvol.derivative(TOY1, m_lo=8, m_hi=24)
    assert math.isfinite(d["symmetric_estimate"])
    assert abs(d["symmetric_estimate"] + 2.0) < 0.3


def test_cap():
    with pytest.raises(RuntimeError):
        arvol.section_count({"degree": 1, "lambda": "1", "mode": "circle-sup"}, 6, cap=10)
