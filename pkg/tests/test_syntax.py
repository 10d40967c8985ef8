import pytest
from hypothesis import given, settings, strategies as st

from rosserlab import (
    And, Box, Eq, Forall, Leq, Not, ParseError, Prod, Succ, Sum, Var, Zero,
    eval_delta0, eval_term, is_delta0, is_instance, minus, numeral, parse_formula,
    parse_term, print_formula, substitute,
)
from rosserlab.corpus import delta0_sentences
from rosserlab.syntax import (
    allow_empty_prefix, free_vars, instance_of, is_sentence, numeral_value,
    quantifier_skeleton,
)

from oracles import delta0_expand, is_instance_oracle, subst

X0, X1 = Var(0), Var(1)
EQ00 = Eq(Zero(), Zero())


# --------------------------------------------------------------------------
# parsing and printing


@pytest.mark.parametrize("text, expected", [
    ("(0=0)", EQ00),
    ("((0=0) -> (0=0))", Not(And(EQ00, Not(EQ00)))),
    ("all x0 ~((x0 <= S(0)) & ~(x0 = x0))",
     Forall(0, Not(And(Leq(X0, Succ(Zero())), Not(Eq(X0, X0)))))),
    ("((0=0) | R(0))", Not(And(Not(EQ00), Not(Box(Zero()))))),
    ("ex x1 R(x1)", Not(Forall(1, Not(Box(X1))))),
    ("(all x0 <= S(0)) (x0=x0)", Forall(0, Not(And(Leq(X0, Succ(Zero())), Not(Eq(X0, X0)))))),
])
def test_parse_expands_sugar(text, expected):
    assert parse_formula(text) == expected


@pytest.mark.parametrize("f, text", [
    (EQ00, "(0=0)"),
    (Not(EQ00), "~(0=0)"),
    (Forall(0, Eq(X0, X0)), "all x0 (x0=x0)"),
    (Box(numeral(2)), "R(S(S(0)))"),
])
def test_print_core(f, text):
    assert print_formula(f) == text


@pytest.mark.parametrize("bad", ["", "(0=0", "(0==0)", "R()", "all x (0=0)", "(0=0) junk", "~", "x0"])
def test_parse_errors_carry_position(bad):
    with pytest.raises(ParseError) as exc:
        parse_formula(bad)
    assert exc.value.pos >= 0


def test_deep_chains_do_not_recurse():
    f = parse_formula("~" * 5000 + "R(" + "S(" * 5000 + "0" + ")" * 5000 + ")")
    assert print_formula(f).count("~") == 5000
    assert numeral_value(parse_term("S(" * 3000 + "0" + ")" * 3000)) == 3000


def _terms(depth):
    leaf = st.one_of(st.just(Zero()), st.integers(0, 3).map(Var), st.integers(0, 4).map(numeral))
    if depth == 0:
        return leaf
    sub = _terms(depth - 1)
    return st.one_of(leaf, sub.map(Succ), st.tuples(sub, sub).map(lambda p: Sum(*p)),
                     st.tuples(sub, sub).map(lambda p: Prod(*p)))


def _formulas(depth):
    t = _terms(2)
    atom = st.one_of(st.tuples(t, t).map(lambda p: Eq(*p)), st.tuples(t, t).map(lambda p: Leq(*p)),
                     t.map(Box))
    if depth == 0:
        return atom
    sub = _formulas(depth - 1)
    return st.one_of(atom, sub.map(Not), st.tuples(sub, sub).map(lambda p: And(*p)),
                     st.tuples(st.integers(0, 3), sub).map(lambda p: Forall(*p)))


@settings(max_examples=300, deadline=None)
@given(_formulas(3))
def test_round_trip(f):
    assert parse_formula(print_formula(f)) == f


@settings(max_examples=200, deadline=None)
@given(_formulas(3), st.integers(0, 3), st.integers(0, 5))
def test_substitution_keeps_skeleton_and_matches_oracle(f, v, k):
    g = substitute(f, v, numeral(k))
    assert quantifier_skeleton(g) == quantifier_skeleton(f)
    assert g == subst(f, v, numeral(k))
    assert v not in free_vars(g)


@settings(max_examples=200, deadline=None)
@given(_formulas(3))
def test_minus_idempotent_on_non_negations(f):
    if not isinstance(minus(f), Not):
        assert minus(minus(f)) == minus(f)


# --------------------------------------------------------------------------
# numerals, minus, substitution examples


def test_numerals():
    assert numeral(0) == Zero()
    assert numeral(2) == Succ(Succ(Zero()))
    assert print_formula(Box(numeral(5))) == "R(S(S(S(S(S(0))))))"
    assert numeral_value(numeral(7)) == 7
    assert numeral_value(X0) is None


def test_minus_examples():
    assert minus(EQ00) == EQ00
    assert minus(Not(EQ00)) == EQ00
    assert minus(Not(Not(EQ00))) == Not(EQ00)


def test_substitute_examples():
    assert substitute(Eq(X0, X0), 0, numeral(3)) == Eq(numeral(3), numeral(3))
    f = Forall(0, Eq(X0, X0))
    assert substitute(f, 0, numeral(1)) == f
    g = And(Eq(X0, Zero()), Eq(X1, Zero()))
    assert substitute(g, 1, numeral(2)) == And(Eq(X0, Zero()), Eq(numeral(2), Zero()))


# --------------------------------------------------------------------------
# instances


def test_instance_examples():
    assert is_instance(Eq(numeral(3), numeral(3)), Forall(0, Eq(X0, X0)))
    assert is_instance(Eq(numeral(0), numeral(1)), Forall(0, Forall(1, Eq(X0, X1))))
    assert not is_instance(EQ00, EQ00)
    with allow_empty_prefix():
        assert is_instance(EQ00, EQ00)
    assert not is_instance(EQ00, EQ00)


def test_partial_prefix_and_witness():
    f = Forall(0, Forall(1, Eq(X0, X1)))
    assert is_instance(Forall(1, Eq(numeral(4), X1)), f)
    assert instance_of(Eq(numeral(2), numeral(5)), f) == {0: 2, 1: 5}
    assert not is_instance(Eq(numeral(2), numeral(5)), Forall(0, Eq(X0, X0)))


def test_instance_constructive_and_oracle():
    pool = [parse_formula(s) for s in (
        "all x0 (x0=x0)", "all x0 all x1 (x0<=x1)", "all x0 R(S(x0))", "all x1 R(x0)",
        "all x0 all x0 (x0=0)", "all x0 (all x1 (x1<=x0) & R(x0))")]
    cands = []
    for f in pool:
        for k in range(3):
            g = f
            while isinstance(g, Forall):
                g = substitute(g.body, g.var, numeral(k))
                cands.append(g)
    cands += [parse_formula(s) for s in ("(S(0)=0)", "R(0)", "R(x0)", "(0<=S(0))")]
    for f in pool:
        for c in cands:
            w = instance_of(c, f)
            assert (w is not None) == is_instance_oracle(c, f), (print_formula(c), print_formula(f))
            if w is not None:
                g = f
                while isinstance(g, Forall) and g != c:
                    g = substitute(g.body, g.var, numeral(w.get(g.var, 0)))
                assert g == c


# --------------------------------------------------------------------------
# Delta_0


def test_delta0_classification():
    assert is_delta0(EQ00)
    assert not is_delta0(Forall(0, Eq(X0, X0)))
    assert is_delta0(parse_formula("all x0 ~((x0 <= S(0)) & ~(x0=x0))"))
    assert not is_delta0(Box(Zero()))
    assert not is_delta0(parse_formula("all x0 ~((x0 <= x0) & ~(x0=x0))"))


def test_eval_delta0_examples():
    assert eval_delta0(EQ00)
    assert not eval_delta0(Eq(Succ(Zero()), Zero()))
    assert eval_delta0(parse_formula("(all x0 <= S(S(0))) (x0 <= S(S(S(0))))"))
    assert not eval_delta0(parse_formula("(all x0 <= S(S(S(S(0))))) (x0 <= S(S(S(0))))"))


def test_eval_delta0_rejects():
    with pytest.raises(ValueError):
        eval_delta0(Forall(0, Eq(X0, X0)))
    with pytest.raises(ValueError):
        eval_delta0(Eq(X0, Zero()))
    with pytest.raises(ValueError):
        eval_delta0(Box(Zero()))


def test_eval_delta0_matches_expansion_on_generated():
    for f in delta0_sentences(400, seed=11, max_depth=4):
        assert is_sentence(f) and is_delta0(f)
        assert eval_delta0(f) == delta0_expand(f)


def test_eval_term():
    assert eval_term(numeral(2), {}) == 2
    assert eval_term(Sum(numeral(2), numeral(3)), {}) == 5
    assert eval_term(Prod(numeral(2), Zero()), {}) == 0
    assert eval_term(Sum(X0, numeral(1)), {0: 4}) == 5
    with pytest.raises(KeyError):
        eval_term(X1, {})
