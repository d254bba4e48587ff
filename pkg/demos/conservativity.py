"""
Translating away the generic point
==================================

Judgments at a condition satisfied by a concrete ``g : N -> N2`` become
judgments of plain type theory once ``f`` is replaced by ``g`` and ``w`` by
``lam x. x (n, 0)``, where ``n`` is the first zero of ``g``.
"""

from pathlib import Path

from forcett import (
    Mode, build_generic_instance, check_judgment, conservativity_translate, parse_file,
    parse_term, show, show_judgment,
)

corpus = Path(__file__).resolve().parent.parent / "corpus" / "conservativity.ftt"
source = parse_file(corpus.read_text())

g = parse_term("lam x. 0")
inst = build_generic_instance(g)
print(f"g = {show(inst.g)}, first zero {inst.n_g}, w becomes {show(inst.v_g)}")
print()

for item in source.checks:
    j = item.judgment
    if j.mode is not Mode.FORCING or not check_judgment(j).accepted:
        continue
    plain = conservativity_translate(j, inst)
    verdict = check_judgment(plain).verdict
    print(f"{verdict:7} {show_judgment(plain)}")
