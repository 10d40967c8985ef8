import json

import pytest

from rosserlab import Not, ScenarioError, parse_formula
from rosserlab.constructions import (
    PROCEDURE1, PROCEDURE2, bell_check, closure, compute_X, eval_rosser, is_critical, prf,
    run, run_g3, trace_from_json, trace_from_outputs,
)
from rosserlab.corpus import fixture
from rosserlab.godel import encode, xi
from rosserlab.proofs import p_set, scripted_source
from rosserlab.syntax import minus

from oracles import critical_oracle, e_oracle, g2_emissions, naive_closure

P = parse_formula


@pytest.fixture(scope="module")
def c1_traces():
    sc = fixture("C1")
    return {k: run(k, sc) for k in ("g1", "g2", "g3")}


def test_sound_stream_is_copied(tmp_path):
    sc = fixture("S1")
    for k in ("g1", "g2", "g3"):
        t = run(k, sc)
        assert t.mode == PROCEDURE1 and t.switch_point is None
        src = sc.source()
        assert list(t.outputs) == [src.proof_at(y) for y in range(sc.horizon)]


def test_switch_points(c1_traces):
    for k, t in c1_traces.items():
        assert t.mode == PROCEDURE2
        assert t.switch_point == 2099, k
    assert c1_traces["g3"].bell.condition == 1
    assert c1_traces["g3"].bell.witness == P("R(0)")


def test_g1_tail_matches_oracle(c1_traces):
    t = c1_traces["g1"]
    m = t.switch_point
    n, V = t.model
    vmap = V.as_map()
    for k in range(min(200, t.horizon - m)):
        x = xi(k)
        want = minus(x) if e_oracle(x, vmap, n) == 1 else Not(x)
        assert t.outputs[m + k] == want, k


def test_g1_model_is_least_b_model(c1_traces):
    from rosserlab.models import least_model

    t = c1_traces["g1"]
    n, V = t.model
    assert V == least_model(p_set(fixture("C1").source(), t.switch_point - 1), ("B",))


def test_g2_tail_matches_oracle(c1_traces):
    t = c1_traces["g2"]
    m = t.switch_point
    n, V = t.model
    vmap = V.as_map()
    want = g2_emissions([xi(k) for k in range(50)], vmap, n)
    assert list(t.outputs[m:m + len(want)]) == want
    for k in range(50):
        for f in (xi(k), Not(xi(k))):
            assert is_critical(f, V, n) == critical_oracle(f, vmap, n)


def test_g3_tail_lists_closure_then_enumeration(c1_traces):
    t = c1_traces["g3"]
    m = t.switch_point
    chis = sorted(t.closure.fixpoint, key=encode)
    assert list(t.outputs[m:m + len(chis)]) == chis
    assert list(t.outputs[m + len(chis):m + len(chis) + 20]) == [xi(k) for k in range(20)]


@pytest.mark.parametrize("texts, m", [
    (["~R(0)"], 5000),
    (["~R(0)"], 29361264),
    (["~R(0)", "(~R(0) -> ~R(S(0)))", "(~R(S(0)) -> ~(0=0))"], 20000),
    (["R(0)", "(0=0)"], 20000),
])
def test_closure_matches_naive(texts, m):
    Pset = frozenset(P(t) for t in texts)
    X = closure(Pset, m)
    assert X.fixpoint == naive_closure(Pset, m)
    assert all(a <= b for a, b in zip(X.levels, X.levels[1:]))


def test_closure_reaches_negated_universal():
    X = closure(frozenset([P("~R(0)")]), 29361264)
    assert P("~all x0 R(0)") in X.fixpoint and X.iterations == 1
    assert P("~all x0 R(0)") not in closure(frozenset([P("~R(0)")]), 29361263).fixpoint


def test_bell_conditions():
    assert bell_check(frozenset([P("~R(0)")]), frozenset([P("R(0)"), P("~R(0)")]))[0] == 1
    assert bell_check(frozenset([P("~(0=0)")]), frozenset())[0] == 3
    assert bell_check(frozenset([P("~R(0)")]), frozenset()) is None
    assert bell_check(frozenset([P("~(S(0)=0)")]), frozenset()) is None


@pytest.mark.parametrize("fid, stage, condition", [
    ("B2", 61, 1), ("BELL2a", 60, 2), ("BELL2b", 70, 2), ("BELL3a", 14034, 3), ("BELL3b", 14595, 3),
])
def test_bell_examples(fid, stage, condition):
    t = run("g3", fixture(fid))
    assert t.bell is not None
    assert (t.bell.stage, t.bell.condition) == (stage, condition)
    assert t.closure.base_bound == stage - 1


def test_enumerator_fixture_stays_quiet():
    t = run("g3", fixture("E1"))
    assert t.mode == PROCEDURE1 and t.bell is None
    X = compute_X(fixture("E1").source(), t.horizon - 1)
    assert P("~R(S(0))") in X.fixpoint


def test_determinism_and_json_round_trip():
    # g1 and g2 cannot decide Sat once a huge Rosser box enters the stream
    runs = [(f, k) for f in ("C1", "S3") for k in ("g1", "g2", "g3")] + [("BELL2a", "g3")]
    for fid, k in runs:
        if True:
            a = run(k, fixture(fid))
            b = run(k, fixture(fid))
            assert a.dumps() == b.dumps()
            back = trace_from_json(json.loads(a.dumps()))
            assert back.dumps() == a.dumps()
            assert back.outputs == a.outputs
            for f in (P("R(0)"), P("~R(0)"), P("(0=0)"), P("~(0=0)")):
                assert eval_rosser(back, f) == eval_rosser(a, f)


def test_eval_rosser_prefix_and_tail(c1_traces):
    t1 = c1_traces["g1"]
    assert eval_rosser(t1, P("R(0)")).status == "provable"
    assert eval_rosser(t1, P("~R(0)")).status == "blocked"
    # never reached in the materialized prefix, decided by the tail order
    far = P("~~(R(0)&all x0 R(0))")
    v = eval_rosser(t1, far)
    assert v.status in ("provable", "blocked") and v.where != "prefix"
    s = run("g1", fixture("S1"))
    assert eval_rosser(s, P("(0=0)")).provable
    assert eval_rosser(s, P("R(0)")).status == "unknown"


def test_prf_and_scripted_traces():
    t = trace_from_outputs([P("(0=0)"), None, P("~(0=0)")])
    assert prf(t, 50, 0) and not prf(t, 50, 1) and not prf(t, 49, 0)
    assert eval_rosser(t, P("(0=0)")).provable
    # the guard looks for ~~(0=0), not (0=0)
    assert eval_rosser(t, P("~(0=0)")).provable
    u = trace_from_outputs([P("~(0=0)"), P("(0=0)")])
    assert eval_rosser(u, P("(0=0)")).status == "blocked"
    with pytest.raises(ValueError):
        prf(t, 50, 3)
    with pytest.raises(ScenarioError):
        trace_from_outputs([])


def test_sat_based_runs_refuse_capped_codes():
    from rosserlab import DomainCapError

    with pytest.raises(DomainCapError):
        run("g1", fixture("BELL2a"))


def test_horizon_and_stage_zero_errors():
    with pytest.raises(ScenarioError):
        run("g1", fixture("S1"), horizon=0)
    with pytest.raises(ScenarioError):
        run("g4", fixture("S1"))
    bad = scripted_source([(0, P("~(0=0)"))])
    from rosserlab.constructions import run_g1

    with pytest.raises(ScenarioError):
        run_g1(bad, 5)
    t = run_g3(bad, 5)
    assert t.bell.stage == 0 and t.bell.condition == 3


def test_closure_hand_example():
    a, b = P("(0=0)"), P("(S(0)=0)")
    contra = P("(~(0=0) -> ~(S(0)=0))")
    m = 10**6
    X = closure(frozenset([Not(a), contra]), m)
    assert X.levels[0] == {Not(a), contra}
    assert X.levels[1] == {Not(a), contra, Not(b)}
    assert len(X.fixpoint) == 3


def test_instance_rule_example_is_past_the_caps():
    from rosserlab import DomainCapError

    m = encode(P("~all x0 (x0=x0)"))
    with pytest.raises(DomainCapError):
        closure(frozenset([P("~(0=0)")]), m)


def test_falsum_bell_witness():
    t = run_g3(scripted_source([(3, P("~(0=0)"))]), 10)
    assert (t.bell.stage, t.bell.condition, t.bell.witness) == (3, 3, P("(0=0)"))


def test_g2_covers_every_formula_in_bound():
    t = run("g2", fixture("C1"), horizon=3000)
    from rosserlab.godel import f_set

    seen = set(t.outputs)
    assert all(f in seen for f in f_set(800))


def test_g2_cb_example():
    from rosserlab.constructions import run_g2
    from rosserlab.godel import instances_within
    from rosserlab.proofs import inject_contradiction

    top = P("all x0 (x0=x0)")
    src = inject_contradiction(scripted_source([(10, top)]), 2098, P("R(0)"))
    t = run_g2(src, 2300)
    assert t.switch_point == 2099
    assert eval_rosser(t, top).provable
    for g in instances_within(top, 10**7):
        assert eval_rosser(t, g).provable, g
