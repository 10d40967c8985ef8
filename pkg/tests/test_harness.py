import json

import pytest

from rosserlab import parse_formula
from rosserlab.constructions import run, trace_from_outputs
from rosserlab.corpus import fixture
from rosserlab.harness import (
    FAIL, PASS, UNKNOWN, CheckReport, declared_b2_pairs, reports_to_json, run_suite,
    verify_b2, verify_bell, verify_cb, verify_claim1, verify_consistency_statements,
    verify_delta0_completeness, verify_modus_ponens, verify_proof_predicate,
    verify_sat_consistency_link,
)
from rosserlab.proofs import scripted_source
from rosserlab.syntax import allow_empty_prefix

P = parse_formula


@pytest.fixture(scope="module")
def c1():
    return {k: run(k, fixture("C1")) for k in ("g1", "g2", "g3")}


def _binding(reports):
    return {(r.check_name, v.instance): v.status for r in reports for v in r.verdicts if v.binding}


def test_report_accounting():
    rep = CheckReport("x", "s")
    rep.add("a", PASS)
    rep.add("b", FAIL, binding=False)
    assert not rep.failed
    rep.add("c", FAIL, "why")
    assert rep.failed and [v.instance for v in rep.failures()] == ["c"]
    assert rep.summary["binding"][FAIL] == 1 and rep.summary["observational"][FAIL] == 1
    body = json.loads(reports_to_json([rep]))
    assert body["failed"] is True
    assert body["reports"][0]["verdicts"][2]["witness"] == "why"


def test_claim1_g1_passes_on_contradiction(c1):
    rep = verify_claim1(c1["g1"], 14600)
    assert not rep.failed and rep.summary["binding"][PASS] == 132


def test_claim1_without_switch_is_unknown():
    t = run("g1", fixture("S1"))
    rep = verify_claim1(t, 100)
    assert {v.status for v in rep.verdicts} == {UNKNOWN}


def test_modus_ponens_on_scripted_trace():
    t = trace_from_outputs([P("(R(0) -> (0=0))"), P("R(0)"), None])
    rep = verify_modus_ponens(t, [(P("R(0)"), P("(0=0)"))])
    # before any switch the verdict is only an observation
    assert rep.verdicts[0].status == UNKNOWN and not rep.verdicts[0].binding


def test_cb_rejects_non_universal(c1):
    with pytest.raises(ValueError):
        verify_cb(c1["g2"], P("R(0)"), 100)


def test_cb_g1_is_observational(c1):
    rep = verify_cb(c1["g1"], P("all x0 R(0)"), 14600)
    assert rep.verdicts and not any(v.binding for v in rep.verdicts)


def test_b2_requires_declared_pairs():
    t = run("g3", fixture("B2"))
    pairs = [(p, q) for p, q, _ in declared_b2_pairs(t.source())]
    assert len(pairs) == 20
    rep = verify_b2(t, pairs)
    assert not rep.failed
    with pytest.raises(ValueError):
        verify_b2(t, [(P("R(0)"), P("(0=0)"))])


def test_delta0_checker_validates_input(c1):
    with pytest.raises(ValueError):
        verify_delta0_completeness(c1["g2"], [P("R(0)")])
    rep = verify_delta0_completeness(c1["g2"], [P("(0=0)"), P("(S(0)=0)")])
    assert not rep.failed
    assert [v.binding for v in rep.verdicts] == [True, False]


def test_consistency_and_proof_predicate(c1):
    for t in c1.values():
        rep = verify_consistency_statements(t, 14600)
        conl = [v for v in rep.verdicts if v.instance.startswith("ConL")]
        assert len(conl) == 1 and conl[0].binding
        assert not verify_proof_predicate(t).failed


def test_con_l_fails_when_falsum_leaks():
    t = trace_from_outputs([P("~(0=0)")])
    rep = verify_consistency_statements(t, 60)
    assert rep.failed


def test_rp_fixture_keeps_falsum_blocked():
    t = run("g3", fixture("RP1"))
    rep = verify_consistency_statements(t, 14600)
    assert not [v for v in rep.failures() if v.instance.startswith("ConL")]


def test_satlink():
    s = scripted_source([(1, P("R(0)")), (4, P("~R(0)"))])
    rep = verify_sat_consistency_link(s, 10)
    assert not rep.failed
    assert [v.status for v in rep.verdicts if v.binding] == [PASS]
    rep = verify_sat_consistency_link(scripted_source([(1, P("(S(0)=0)"))]), 5, declared_sound=True)
    assert rep.failed


def test_bell_report():
    assert not verify_bell(run("g3", fixture("C1"))).failed
    assert not verify_bell(run("g3", fixture("S1"))).failed
    assert verify_bell(run("g1", fixture("C1"))).verdicts[0].status == UNKNOWN


def test_unknown_suite(c1):
    with pytest.raises(ValueError):
        run_suite("nope", c1["g1"], 100)


@pytest.mark.parametrize("kind", ["g1", "g2", "g3"])
def test_binding_statuses_survive_reversed_order(kind):
    sc = fixture("C1")
    up = run_suite("all", run(kind, sc), 14600)
    down = run_suite("all", run(kind, sc, order="reversed"), 14600)
    a, b = _binding(up), _binding(down)
    shared = a.keys() & b.keys()
    assert shared
    flips = {k for k in shared if {a[k], b[k]} == {PASS, FAIL}}
    assert not flips


@pytest.mark.parametrize("kind", ["g1", "g2", "g3"])
def test_binding_statuses_survive_empty_prefix_convention(kind):
    sc = fixture("C1")
    base = _binding(run_suite("all", run(kind, sc), 14600))
    with allow_empty_prefix():
        other = _binding(run_suite("all", run(kind, sc), 14600))
    shared = base.keys() & other.keys()
    flips = {k for k in shared if {base[k], other[k]} == {PASS, FAIL}}
    assert not flips
