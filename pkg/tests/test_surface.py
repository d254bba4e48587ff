import pytest
from hypothesis import given, settings, strategies as st

from forcett.conditions import Condition, EMPTY
from forcett.surface import (
    ParseError, parse_condition, parse_file, parse_term, show, show_judgment,
)
from forcett.syntax import (
    App, Fst, GEN, GenericAt, Lam, MW, Mode, N, N2, ONE, Pi, Rec2, Sigma, Succ, U, Var, WIT,
    WitnessAt, ZERO, mp_type, numeral,
)
from forcett.typecheck import Judgment

from support import SIMPLE_TYPES, conditions, raw_terms, typed_terms

C = Condition.of


def test_parse_examples():
    assert parse_term("f 5") == App(GEN, numeral(5))
    mp = "Pi (h : N -> N2) (((Sig (x : N) IsZero (h x)) -> N0) -> N0) -> Sig (x : N) IsZero (h x)"
    assert parse_term(mp) == mp_type()
    assert parse_term("MP") == mp_type()
    assert parse_term("lam x. x.1") == Lam(Fst(Var(0)))


def test_numerals_and_bits():
    assert parse_term("3") == numeral(3)
    assert parse_term("S S 0") == numeral(2)
    assert parse_term("1") == ONE
    assert parse_term("S 0") == Succ(ZERO)


def test_constants_and_many_reals():
    assert parse_term("w") == WIT
    assert parse_term("mw") == MW
    assert parse_term("f[{0=1}] 0") == App(GenericAt(C({0: 1})), ZERO)
    assert parse_term("w[{}]") == WitnessAt(EMPTY)


def test_binders_and_context_names():
    assert parse_term("Pi (x : N) N2") == Pi(N, N2)
    assert parse_term("Sig (x : N) N2") == Sigma(N, N2)
    assert parse_term("lam x y. x") == Lam(Lam(Var(1)))
    assert parse_term("g 0", names=("g",)) == App(Var(0), ZERO)
    assert parse_term("rec2 (x. U) N N2 (f 0)") == App(Rec2(U, N, N2), App(GEN, ZERO))
    # #k counts past the named context
    assert parse_term("#0") == Var(0)
    assert parse_term("#0", names=("a",)) == Var(1)


def test_parse_errors_carry_spans():
    with pytest.raises(ParseError) as e:
        parse_term("lam x. y")
    assert e.value.span == (1, 8)
    for bad in ("(", "f [", "Pi x N", "0 )", "{0=1}"):
        with pytest.raises(ParseError):
            parse_term(bad)


def test_condition_literals():
    assert parse_condition("{3=0, 0=1}") == C({0: 1, 3: 0})
    assert str(parse_condition("{3=0, 0=1}")) == "{0=1,3=0}"
    with pytest.raises(ParseError):
        parse_condition("{0=1, 0=0}")


@given(conditions(max_size=6))
def test_condition_round_trip(p):
    assert parse_condition(str(p)) == p


def test_file_items():
    src = """
    -- comment
    default-mode plain
    fuel 500
    def two : N := 2
    check term two : N
    check in (A : U, a : A) term a : A
    check term-eq f 3 = 0 : N2 at {3=0} mode forcing
    check term (3, 0) : Sig (x : N) IsZero (f x) at {} mode forcing cover {3=0} {3=1}
    """
    f = parse_file(src)
    assert f.fuel == 500
    assert [c.judgment.form for c in f.checks] == ["term", "term", "term", "term-eq", "term"]
    typed_def = f.checks[0].judgment
    assert typed_def.lhs == numeral(2) and typed_def.mode is Mode.PLAIN
    assert f.checks[2].judgment.context == (U, Var(0))
    assert f.checks[3].judgment.condition == C({3: 0})
    assert f.checks[4].judgment.cover == (C({3: 0}), C({3: 1}))
    assert f.checks[1].span[0] == 6


def test_parenthesized_judgment_body():
    j = parse_file("check term ((3, 0) : Sig (x : N) IsZero (f x)) at {} mode forcing").checks[0].judgment
    assert j.lhs.fst == numeral(3)


def test_file_errors():
    for bad in ("check term 0", "def x := y", "check bogus 0 : N", "check term 0 : N mode nope"):
        with pytest.raises(ParseError):
            parse_file(bad)


def _round_trip(t, names=()):
    text = show(t, names)
    assert parse_term(text, names) == t, text


def test_show_examples():
    assert show(Pi(N, N2)) == "N -> N2"
    assert show(numeral(1)) == "S 0"
    assert show(numeral(4)) == "4"
    assert show(ONE) == "1"
    _round_trip(Lam(Lam(App(Var(1), Var(0)))))
    _round_trip(mp_type())
    assert show(mp_type()).count("IsZero") == 2
    assert show(Var(0), ("IsZero",)) == "IsZero"


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(sorted(SIMPLE_TYPES)).flatmap(typed_terms))
def test_round_trip_typed(t):
    _round_trip(t)


@settings(max_examples=300, deadline=None)
@given(raw_terms())
def test_round_trip_raw(t):
    _round_trip(t, ("a", "b", "c"))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(sorted(SIMPLE_TYPES)).flatmap(lambda w: st.tuples(st.just(w), typed_terms(w))),
       conditions(), st.sampled_from([Mode.FORCING, Mode.MANY_REALS]))
def test_judgment_round_trip(pair, p, mode):
    want, t = pair
    j = Judgment.has_type(t, SIMPLE_TYPES[want], condition=p, mode=mode)
    assert parse_file(show_judgment(j)).checks[0].judgment == j


def test_item_text_drops_comments():
    src = "check term 0 : N -- first\n\ncheck term\n  0 -- split\n  : N\n"
    assert [c.text for c in parse_file(src).checks] == ["check term 0 : N"] * 2
