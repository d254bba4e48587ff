from hypothesis import given, settings, strategies as st

from forcett.syntax import (
    Lam, N, N2, ONE, Pi, Succ, Var, ZERO, alpha_eq, as_numeral, is_closed, numeral, shift, subst,
)

from support import oracle_subst, raw_terms


def test_subst_examples():
    assert subst(Var(0), ZERO) == ZERO
    assert subst(Succ(Var(0)), numeral(1)) == numeral(2)
    assert subst(Pi(N, Var(1)), N2) == Pi(N, N2)
    assert oracle_subst(Pi(N, Var(1)), N2) == Pi(N, N2)


def test_numeral_examples():
    assert numeral(0) == ZERO
    assert numeral(2) == Succ(Succ(ZERO))
    assert as_numeral(Lam(Var(0))) is None


def test_alpha_eq_examples():
    assert alpha_eq(Lam(Var(0), "x"), Lam(Var(0), "y"))
    assert not alpha_eq(numeral(1), ONE)
    assert not alpha_eq(Pi(N, Var(0)), Pi(N, N))


@settings(max_examples=400, deadline=None)
@given(raw_terms(), raw_terms())
def test_subst_matches_named_substitution(body, a):
    assert subst(body, a) == oracle_subst(body, a)


@given(raw_terms(), raw_terms())
def test_subst_leaves_closed_terms_alone(t, a):
    if is_closed(t):
        assert subst(shift(t, 1), a) == t


@given(st.integers(0, 200))
def test_numeral_round_trip(n):
    assert as_numeral(numeral(n)) == n


@given(raw_terms(), raw_terms(), raw_terms())
def test_alpha_eq_is_an_equivalence(a, b, c):
    assert alpha_eq(a, a)
    assert alpha_eq(a, b) == alpha_eq(b, a)
    if alpha_eq(a, b) and alpha_eq(b, c):
        assert alpha_eq(a, c)
