import json

import pytest

from residue_audit.pipeline import audit, verify_symbol_inverse
from residue_audit.reports import VerificationReport, reports_from_json, reports_to_json

SCHEMA = {"setting", "l", "case", "computed", "expected", "exact_match", "oracle_engine", "oracle_expected", "note"}


@pytest.fixture(scope="module")
def reports():
    return audit("DIM4_DINV", 2) + verify_symbol_inverse(4)


def test_schema_keys(reports):
    for d in json.loads(reports_to_json(reports)):
        assert SCHEMA <= set(d)
        assert isinstance(d["computed"], str)
        if d["oracle_engine"] is not None:
            assert len(d["oracle_engine"]) == 2


def test_json_round_trip(reports):
    text = reports_to_json(reports)
    back = reports_from_json(text)
    assert back == reports
    assert reports_to_json(back) == text


def test_symbol_reports_round_trip(reports):
    sym = [r for r in reports if r.kind == "symbol"]
    assert sym
    for r in reports_from_json(reports_to_json(sym)):
        assert r.computed == next(s for s in sym if s.case == r.case and s.tag == r.tag).computed


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        VerificationReport("DIM4_DINV", 2, "aI", None, None, True, kind="table")
