import pytest

from qpmut.arithio import validate
from qpmut.errors import AdmissibilityError, ParseError
from qpmut.verify import (ALL_CHECKS, Check, Report, check_g_basis, check_sign_coherence, corpus,
                          explore_checks, h_from_fpoly, parse_checks, run_full, run_matched_sequence,
                          run_scenario)
from qpmut.exactalg import LaurentPoly


def test_sign_coherence_examples():
    assert check_sign_coherence([(1, 0), (0, 1)])
    assert not check_sign_coherence([(1, 0), (-1, 1)])
    assert check_sign_coherence([(-1, 1), (0, 1)])


def test_g_basis_examples():
    assert check_g_basis([(1, 0), (0, 1)])
    assert check_g_basis([(-1, 1), (0, 1)])
    assert not check_g_basis([(2, 0), (0, 1)])


def test_h_from_fpoly():
    F = LaurentPoly(2, {(1, 1): 1, (1, 0): 1, (0, 0): 1})
    assert h_from_fpoly(F) == (-1, 0)


def test_sweep_a2_is_clean_and_deterministic():
    r1 = run_scenario("a2", 4)
    r2 = run_scenario("a2", 4)
    assert r1.ok
    assert r1.sequences == sum(2 ** k for k in range(5))
    assert {k: (c.passed, c.failed) for k, c in r1.checks.items()} == \
        {k: (c.passed, c.failed) for k, c in r2.checks.items()}
    doc = r1.to_json()
    validate(doc, "report")


def test_sweep_triangle_short():
    r = run_scenario("triangle", 3)
    assert r.ok, {k: c.counterexamples for k, c in r.checks.items() if c.failed}
    assert r.checks["involution_qp"].passed > 0


def test_matched_sequence_reports_admissibility():
    scen = corpus("triangle")
    r = run_matched_sequence(scen, [1, 2, 3, 1])
    assert r.ok
    from qpmut.qpalg import QP
    from qpmut.quiver import Quiver
    from qpmut.verify import Scenario
    bad = Scenario("tri0", QP.make(Quiver(3, [("a", 1, 2), ("b", 2, 3), ("c", 3, 1)])), 2)
    with pytest.raises(AdmissibilityError):
        run_matched_sequence(bad, [2, 1])


def test_failing_check_carries_payload():
    c = Check()
    c.record(False, {"path": [1, 2]})
    c.record(True)
    assert c.failed == 1 and c.counterexamples == [{"path": [1, 2]}]
    r = Report("x", 1)
    r.check("a").merge(c)
    assert not r.ok


def test_explore_checks_a3():
    r = explore_checks("a3", 10)
    assert r.ok
    assert r.timing["clusters"] == 14


def test_parse_checks():
    assert set(ALL_CHECKS) <= set(parse_checks("all"))
    assert parse_checks("fconj,cor610") == ("fconj", "cor610")
    with pytest.raises(ParseError):
        parse_checks("fconj,nope")


def test_run_full_subset():
    r = run_full("a2", 3, "fconj,closure,e_sym_symmetry")
    assert set(r.checks) == {"fconj", "closure", "e_sym_symmetry"}
    assert r.ok


def test_parallel_matches_serial():
    a = run_scenario("a2", 3, jobs=1)
    b = run_scenario("a2", 3, jobs=2)
    assert {k: (c.passed, c.failed) for k, c in a.checks.items()} == \
        {k: (c.passed, c.failed) for k, c in b.checks.items()}
