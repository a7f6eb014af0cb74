import json

import pytest

from residue_audit.clifford import vector_X, wick_trace
from residue_audit.exact import Poly
from residue_audit.expected import WICK_TEXT, PaperExpected, bracket, wick_expected


def test_every_key_resolves():
    exp = PaperExpected()
    for key in exp.keys():
        entry = exp.get(*key)
        assert entry.tag


def test_odd_entries_are_zero():
    exp = PaperExpected()
    assert exp.get("DIM6_DM2", "b", 5).value.is_zero()
    assert exp.get("DIM4_DINV", "INTERIOR", 3).tag == "b1202"


@pytest.mark.parametrize("tag", ["a26", "d45"])
def test_printed_wick_identities_hold(tag):
    l = WICK_TEXT[tag][0]
    n = 6
    assert wick_trace([vector_X(n, j) for j in range(1, l + 1)]) == wick_expected(tag, n).scale(8)


def test_bracket_parser():
    assert bracket(4, "g12[g34-g34]").is_zero()
    assert bracket(4, "-(g12)") == -bracket(4, "g12")
    with pytest.raises(ValueError):
        bracket(4, "g12]")


def test_unknown_lookups():
    exp = PaperExpected()
    with pytest.raises(KeyError):
        exp.get("DIM5", "aI", 2)
    with pytest.raises(KeyError):
        exp.get("DIM4_DINV", "aI", 7)
    with pytest.raises(KeyError):
        exp.get("DIM4_DINV", "Z", 2)


def test_overrides_file(tmp_path):
    path = tmp_path / "fixture.json"
    path.write_text(json.dumps({"DIM4_DINV/aIII/2": "h1*pi"}))
    exp = PaperExpected.from_overrides_file(path)
    assert str(exp.get("DIM4_DINV", "aIII", 2).value) == "h1*pi"
    assert exp.get("DIM4_DINV", "b", 2) == PaperExpected().get("DIM4_DINV", "b", 2)
