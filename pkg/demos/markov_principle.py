"""
Markov's principle and the generic point
========================================

Markov's principle is a well-formed type of plain type theory.  With the
generic point we can state an instance whose double negation holds (the
axiom ``w``) while no closed numeral witnesses it.
"""

from forcett import (
    EMPTY, Condition, Mode, check, check_type, dne_to_mp, dne_type, mp_type, parse_term,
    refute_sigma, show,
)

print("MP :", show(mp_type()))
print("MP is a type:", check_type((), EMPTY, mp_type(), Mode.PLAIN).accepted)

# double negation elimination proves MP
print("DNE |- MP :", check((dne_type(),), EMPTY, dne_to_mp(), mp_type(), Mode.PLAIN).accepted)

# w inhabits the double negation of the instance at f
w_type = parse_term("((Sig (x : N) IsZero (f x)) -> N0) -> N0")
print("w : not not Sig x. IsZero (f x) :", check((), EMPTY, parse_term("w"), w_type).accepted)

# a candidate witness (n, 0) checks only where bit n is 0
sigma = parse_term("Sig (x : N) IsZero (f x)")
for n in (0, 3, 7):
    cand = parse_term(f"({n}, 0)")
    here = check((), EMPTY, cand, sigma).accepted
    there = check((), Condition.of({n: 0}), cand, sigma).accepted
    cert = refute_sigma(cand)
    print(f"({n}, 0): at {{}} {here}, at {{{n}=0}} {there}, refuted at {cert.condition}")

# a candidate that inspects f still lands on a refuted branch
cand = parse_term("(rec2 (x. N) 0 (rec2 (x. N) (S 0) 2 (f (S 0))) (f 0), 0)")
cert = refute_sigma(cand)
print(f"{show(cand)} refuted at {cert.condition}, first component {cert.numeral}")

# with a generic point for every condition, the negation of MP is a constant
print("mw : not MP :", check((), EMPTY, parse_term("mw"), parse_term("MP -> N0"),
                               Mode.MANY_REALS).accepted)
