from fractions import Fraction

import pytest

from residue_audit.exact import DA, Poly, a, da, h1, omega, pi, scurv
from residue_audit.expected import PaperExpected, bracket
from residue_audit.gform import normal_derivative
from residue_audit.pipeline import (
    CHECKPOINTS,
    audit,
    boundary_case,
    boundary_total,
    case_reports,
    checkpoint_expected,
    checkpoint_value,
    enumerate_cases,
    find_case,
    interior_term,
    theorem_report,
    verify_symbol_inverse,
)

PIO = Poly.atom(pi) * Poly.atom(omega)


def _swap12(p: Poly, n: int) -> Poly:
    m = {}
    for k in range(1, n + 1):
        m[a(1, k)], m[a(2, k)] = Poly.atom(a(2, k)), Poly.atom(a(1, k))
        m[da(1, k)], m[da(2, k)] = Poly.atom(da(2, k)), Poly.atom(da(1, k))
    return p.subs(m)


def _da_part(p: Poly) -> Poly:
    return Poly({m: c for m, c in p.terms.items() if any(atom.kind == DA for atom, _ in m)})


@pytest.mark.parametrize("setting,orders", [("DIM4_DINV", {"b": (-2, -1), "c": (-1, -2)}), ("DIM6_DM2", {"b": (-2, -3), "c": (-3, -2)})])
def test_case_enumeration(setting, orders):
    cases = enumerate_cases(setting)
    assert [c.label for c in cases] == ["aI", "aII", "aIII", "b", "c"]
    for label, (r, ell) in orders.items():
        c = find_case(setting, label)
        assert (c.r, c.ell) == (r, ell)


@pytest.mark.parametrize("setting", ["DIM4_DINV", "DIM6_DM2"])
def test_factored_matches_direct(setting):
    for case in enumerate_cases(setting):
        assert boundary_case(setting, case, 2, route="direct") == boundary_case(setting, case, 2)


@pytest.mark.parametrize("setting,n", [("DIM4_DINV", 4), ("DIM6_DM2", 6)])
def test_odd_l_vanishes(setting, n):
    for l in range(1, n + 1, 2):
        assert interior_term(setting, l).is_zero()
        for case in enumerate_cases(setting):
            assert boundary_case(setting, case, l).is_zero()


def test_dim4_l2_values():
    g = bracket(4, "g12")
    h = Poly.atom(h1)
    assert boundary_case("DIM4_DINV", "aIII", 2) == (g * h).scale(Fraction(-3, 8)) * PIO
    assert boundary_total("DIM4_DINV", 2) == normal_derivative(g).scale(Fraction(-1, 2)) * PIO


def test_a_sum_identity():
    aii = boundary_case("DIM4_DINV", "aII", 4)
    target = normal_derivative(bracket(4, "g13g24-g14g23-g12g34")).scale(Fraction(-1, 2)) * PIO
    assert _da_part(aii) == target


@pytest.mark.parametrize("setting,n", [("DIM4_DINV", 4), ("DIM6_DM2", 6)])
def test_swap_covariance_l2(setting, n):
    for case in enumerate_cases(setting):
        v = boundary_case(setting, case, 2)
        assert _swap12(v, n) == v
    assert _swap12(interior_term(setting, 2), n) == interior_term(setting, 2)


def test_degenerate_frame_total_vanishes():
    n = 4
    m = {}
    for k in range(1, n + 1):
        m[a(2, k)] = Poly.atom(a(1, k))
        m[da(1, k)] = Poly()
        m[da(2, k)] = Poly()
    assert boundary_total("DIM4_DINV", 2).subs(m).is_zero()


def test_interior_constants():
    assert interior_term("DIM4_DINV", 2) == bracket(4, "g12").scale(Fraction(32, 3)) * Poly.atom(scurv) * Poly.atom(pi, 2)
    assert interior_term("DIM6_DM2", 2).degree_in(pi) == 3


def test_super_residue_vanishes():
    n = 6
    frame = {a(j, k): Poly.const(1 if j == k else 0) for j in range(1, n + 1) for k in range(1, n + 1)}
    assert interior_term("DIM6_DM2", 6).subs(frame).is_zero()


def test_reports_flag_known_defect():
    reps = {r.case: r for r in case_reports("DIM4_DINV", 2)}
    assert reps["aIII"].exact_match and reps["TOTAL"].exact_match
    assert not reps["aII"].exact_match and reps["aII"].tag == "35"


def test_theorem_dim4_l2():
    assert theorem_report("DIM4_DINV", 2).exact_match
    assert theorem_report("DIM4_DINV", 1).exact_match


def test_symbol_inverse_reports():
    reps = verify_symbol_inverse(4)
    assert len(reps) == 2 and all(r.exact_match for r in reps)
    bad = verify_symbol_inverse(4, zero_sigma0=True)
    assert not all(r.exact_match for r in bad)


@pytest.mark.parametrize("tag", sorted(CHECKPOINTS))
def test_checkpoints_are_scalar_symbols(tag):
    v, e = checkpoint_value(tag), checkpoint_expected(tag)
    assert v.is_scalar() and e.is_scalar()


def test_audit_adjudicates_mismatches():
    reps = audit("DIM4_DINV", 2)
    bad = [r for r in reps if not r.exact_match]
    assert bad, "the printed tables contain known defects"
    for r in bad:
        assert r.oracle_verdict == "engine"
        assert r.note.startswith(f"discrepancy with [{r.tag}]")
    assert {r.case for r in reps if r.kind == "symbol"} >= {"checkpoint 55", "checkpoint 33"}


def test_override_fixture_changes_expected():
    key = ("DIM4_DINV", "aIII", 2)
    exp = PaperExpected({key: Poly()})
    assert exp.get(*key).value.is_zero()
    assert exp.get(*key).tag.endswith("(override)")
