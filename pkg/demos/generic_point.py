"""
Evaluating with a generic point
===============================

The constant ``f : N -> N2`` only computes where a condition fixes its value.
Elsewhere evaluation stops, and we split the condition to continue.
"""

from forcett import EMPTY, Condition, parse_term, partition_eval, show, whnf

# f 5 has a value only once bit 5 is known
t = parse_term("f 5")
for p in (EMPTY, Condition.parse("{5=1}"), Condition.parse("{5=0}")):
    out = whnf(t, p)
    print(f"{str(p):8} f 5 ~> {show(out.result):6} stuck on {out.stuck_index}")

# a type that depends on the generic point: N1 where f 0 = 0, N where f 0 = 1
a = parse_term("rec2 (x. U) N1 N (f 0)")
print()
for c, out in partition_eval(a, EMPTY).leaves:
    print(f"{c} : {show(a)} ~> {show(out.result)}")

# evaluation splits once per index it needs, in the order it needs them
# (the numeral one is S 0; a bare 1 is the second boolean)
nested = parse_term("rec2 (x. N) (rec2 (x. N) 10 11 (f (S 0))) 20 (f 0)")
ev = partition_eval(nested, EMPTY)
print()
for c, out in ev.leaves:
    print(f"{str(c):12} -> {show(out.result)}")
print("leaves form a partition of {}:", ev.partition.is_valid())
