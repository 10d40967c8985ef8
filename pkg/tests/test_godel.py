from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from rosserlab import Box, CodeOverflowError, DomainCapError, Eq, Forall, Not, Var, Zero, numeral
from rosserlab.cli import enumerate_lines
from rosserlab.godel import (
    code_sort_key, d, decode, decode_formula, dot_imp, dot_neg, encode, encode_capped,
    f_count, f_set, formula_codes, formula_order, index_of, instances_within,
    negated_universal_codes, pair, rosser_box_code, unpair, xi,
)
from rosserlab.parser import parse_formula, print_formula
from rosserlab.syntax import implies, subformulas

from oracles import is_instance_oracle

GOLDEN = Path(__file__).parent / "golden" / "godel_golden.txt"


@pytest.mark.parametrize("text, code", [
    ("R(0)", 19), ("R(x0)", 41), ("(0=0)", 50), ("(0<=0)", 51), ("(0<=S(0))", 1481),
    ("~R(0)", 2099), ("all x0 R(0)", 2310), ("(S(0)<=S(0))", 4627),
    ("(R(0)&R(0))", 8370), ("~(0=0)", 14034), ("~(0<=0)", 14595),
    ("(R(0)&all x0 R(0))", 29871555),
])
def test_known_codes(text, code):
    f = parse_formula(text)
    assert encode(f) == code
    assert decode(code) == f


def test_golden_enumeration(regen_golden):
    lines = enumerate_lines(200)
    if regen_golden:
        GOLDEN.write_text("\n".join(lines) + "\n")
    assert GOLDEN.read_text().splitlines() == lines


def test_f_set_size_and_order():
    assert f_count(14600) == 132
    fs = f_set(14600)
    codes = [encode(f) for f in fs]
    assert codes == sorted(codes) and len(set(codes)) == len(codes)
    assert f_count(18) == 0 and f_set(18) == []
    assert xi(0) == parse_formula("R(0)")
    assert index_of(parse_formula("~(0=0)")) == fs.index(parse_formula("~(0=0)"))


def test_enumeration_is_monotone_and_coherent():
    codes = formula_codes(encode(xi(9999)))
    assert len(codes) == 10000
    assert all(codes[i] < codes[i + 1] for i in range(len(codes) - 1))
    for k in range(0, 10000, 37):
        f = xi(k)
        assert encode(f) == int(codes[k])
        assert index_of(f) == k
        # children come first
        for g in subformulas(f):
            if g != f:
                assert encode(g) < encode(f)


def test_decode_gaps():
    for c in (0, -3, 2, 3, 12, 20, 40):
        assert decode_formula(c) is None
    assert decode(1) == Zero()
    assert decode(encode(Var(2))) == Var(2)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_pair_unpair(a, b):
    assert unpair(pair(a, b)) == (a, b)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 200000))
def test_decode_encode_inverse(c):
    x = decode(c)
    if x is not None:
        assert encode(x) == c


def test_dot_operators():
    e = parse_formula("(0=0)")
    r = parse_formula("R(0)")
    assert dot_neg(encode(e)) == encode(Not(e)) == 14034
    assert dot_imp(encode(e), encode(r)) == encode(implies(e, r))
    assert rosser_box_code(3) == encode(Box(numeral(3)))
    with pytest.raises(CodeOverflowError):
        rosser_box_code(50)
    with pytest.raises(ValueError):
        dot_neg(2)
    with pytest.raises(ValueError):
        dot_imp(50, 20)


def test_d_of_sets():
    assert d([]) == 0
    assert d([parse_formula("R(0)"), parse_formula("(0=0)")]) == 50


def test_overflow_and_capped_encoding():
    deep = parse_formula("~" * 40 + "(0=0)")
    with pytest.raises(CodeOverflowError):
        encode(deep)
    assert encode_capped(deep, 10**8) is None
    assert encode_capped(parse_formula("(0=0)"), 49) is None
    assert encode_capped(parse_formula("(0=0)"), 50) == 50
    # overflowing formulas still sort after every materializable one
    assert code_sort_key(deep) > code_sort_key(parse_formula("(R(0)&all x0 R(0))"))
    assert formula_order(Not(deep), deep) == 1
    assert formula_order(deep, Not(deep)) == -1


def test_caps_from_environment(monkeypatch):
    monkeypatch.setenv("ROSSERLAB_FN_CAP", "10")
    with pytest.raises(DomainCapError):
        f_set(14600)
    monkeypatch.setenv("ROSSERLAB_CODE_LIMIT", "100")
    with pytest.raises(DomainCapError):
        index_of(parse_formula("~(0=0)"))


def test_negated_universal_codes():
    assert len(negated_universal_codes(29361263)) == 0
    codes = negated_universal_codes(29361264)
    assert list(codes) == [29361264]
    f = decode_formula(29361264)
    assert isinstance(f, Not) and isinstance(f.body, Forall)


def test_instances_within_matches_oracle():
    f = Forall(0, Forall(1, Eq(Var(0), Var(1))))
    bound = 10**7
    got = instances_within(f, bound)
    assert all(encode(g) <= bound and is_instance_oracle(g, f) for g in got)
    assert Forall(1, Eq(Zero(), Var(1))) in got
    assert Eq(Zero(), Zero()) in got
    fs = [g for g in f_set(20000)]
    assert all((g in got) == is_instance_oracle(g, f) for g in fs)
    assert instances_within(Eq(Zero(), Zero()), bound) == []
    assert print_formula(got[0]) == "(0=0)"
