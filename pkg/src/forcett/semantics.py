"""Executable fragments of the forcing semantics.

``forces_base`` decides ``p ⊩ t : B`` when ``B`` evaluates to a base type on
every branch.  At Π-types the relation quantifies over every extension and
every argument, so ``spot_check_pi`` only samples it.  ``refute_sigma``
shows that a closed term cannot inhabit ``Σ(x:N) IsZero (f x)`` at the empty
condition, and ``conservativity_translate`` replaces ``f`` and ``w`` by a
concrete function ``g`` and the term ``v_g``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace as dc_replace
from typing import Optional, Sequence

from forcett.conditions import (
    Condition, EMPTY, Leaf, Partition, SplitTree, extend, extends, graft,
)
from forcett.reduction import (
    DEFAULT_FUEL, DEFAULT_SPLIT_DEPTH, FuelExhausted, WhnfOutcome, partition_eval,
    whnf, whnf_strict,
)
from forcett.syntax import (
    App, Bool, Empty, Fst, GEN, Generic, GenericAt, Lam, Mode, N, N2, Nat, NotMP,
    One, Pair, Pi, Sigma, Succ, Term, Unit, Univ, Var, WIT, WitnessAt, Zero,
    ZERO, as_bit, as_numeral, exists_zero, is_closed, is_zero, mode_violations,
    numeral, replace, subst, subterms,
)
from forcett.typecheck import Judgment, check, check_type, check_judgment

_BASE = (Empty, Unit, Bool, Nat, Univ)


class NonBaseClassifier(ValueError):
    pass


class GenericInstanceError(ValueError):
    pass


class IncompatibleGeneric(GenericInstanceError):
    def __init__(self, n: int, expected: int, got: Optional[int]):
        super().__init__(f"g {n} evaluates to {got if got is not None else 'no bit'}, expected {expected}")
        self.n, self.expected, self.got = n, expected, got


class NoZeroFound(GenericInstanceError):
    pass


class TranslationError(ValueError):
    pass


# -- the decidable base fragment --------------------------------------------


@dataclass(frozen=True)
class ForcingQuery:
    """``condition ⊩ subject`` (a type) or ``condition ⊩ subject : classifier``."""

    condition: Condition
    subject: Term
    classifier: Optional[Term] = None
    depth_bound: int = DEFAULT_SPLIT_DEPTH
    mode: Mode = Mode.FORCING

    def __post_init__(self) -> None:
        if not is_closed(self.subject):
            raise ValueError("forcing queries need a closed subject")


@dataclass(frozen=True)
class ForcingResult:
    holds: bool
    partition: Optional[Partition]
    leaves: tuple[tuple[Condition, Term, Term], ...] = ()  # (leaf, base type, subject whnf)
    reason: str = ""

    def __bool__(self) -> bool:
        return self.holds


def _inhabits(value: Term, base: Term) -> bool:
    match base:
        case Nat():
            return as_numeral(value) is not None
        case Bool():
            return as_bit(value) is not None
        case Unit():
            return isinstance(value, Zero)
        case Univ():
            return isinstance(value, (Empty, Unit, Bool, Nat))
    return False


def forces_base(q: ForcingQuery, fuel: int = DEFAULT_FUEL) -> ForcingResult:
    """Decide the forcing clause for a base-type classifier.

    The classifier is typechecked first.  Then it is evaluated over a
    partition of the condition, and the subject is evaluated over a
    partition of each leaf.  The query holds when every subject leaf is a
    canonical inhabitant of its base type.
    """
    p = q.condition
    if q.classifier is None:
        if not check_type((), p, q.subject, q.mode, fuel).accepted:
            return ForcingResult(False, None, reason="subject is not a type at the condition")
        ev = partition_eval(q.subject, p, q.mode, fuel, q.depth_bound)
        leaves = tuple((c, Univ(), out.result) for c, out in ev.leaves)
        for c, _, a in leaves:
            if not isinstance(a, _BASE):
                raise NonBaseClassifier(f"type evaluates to {a!r} at {c}")
        return ForcingResult(True, ev.partition, leaves)
    if not check_type((), p, q.classifier, q.mode, fuel).accepted:
        return ForcingResult(False, None, reason="classifier is not a type at the condition")
    classifier_eval = partition_eval(q.classifier, p, q.mode, fuel, q.depth_bound)
    type_leaves = [(c, out.result) for c, out in classifier_eval.leaves]
    tree: SplitTree = classifier_eval.partition.witness
    for c, b in type_leaves:
        if not isinstance(b, _BASE):
            raise NonBaseClassifier(f"classifier evaluates to {b!r} at {c}")
    subtrees: dict[Condition, SplitTree] = {}
    leaves: list[tuple[Condition, Term, Term]] = []
    holds = True
    for c, b in type_leaves:
        sub = partition_eval(q.subject, c, q.mode, fuel, q.depth_bound)
        subtrees[c] = sub.partition.witness
        for leaf, out in sub.leaves:
            if isinstance(b, Univ) and isinstance(out.result, (Pi, Sigma)):
                raise NonBaseClassifier(f"type code {out.result!r} at {leaf} is not a base type")
            leaves.append((leaf, b, out.result))
            holds = holds and _inhabits(out.result, b)
    part = Partition.from_tree(graft(tree, subtrees))
    leaves.sort(key=lambda x: x[0])
    reason = "" if holds else "some leaf is not a canonical inhabitant"
    return ForcingResult(holds, part, tuple(leaves), reason)


# -- sampling at Π-types ----------------------------------------------------


@dataclass(frozen=True)
class SampleOutcome:
    condition: Condition
    argument: Term
    status: str  # 'pass' | 'fail' | 'skipped' | 'sample-ill-typed' | 'not-an-extension'
    detail: str = ""


@dataclass(frozen=True)
class SpotCheckReport:
    outcomes: tuple[SampleOutcome, ...]

    @property
    def failures(self) -> tuple[SampleOutcome, ...]:
        return tuple(o for o in self.outcomes if o.status == "fail")

    @property
    def diagnostics(self) -> tuple[SampleOutcome, ...]:
        return tuple(o for o in self.outcomes if o.status in ("sample-ill-typed", "not-an-extension"))

    @property
    def all_pass(self) -> bool:
        return all(o.status == "pass" for o in self.outcomes)


def spot_check_pi(p: Condition, t: Term, dom: Term, cod: Term,
                  samples: Sequence[tuple[Condition, Term]],
                  mode: Mode = Mode.FORCING, fuel: int = DEFAULT_FUEL) -> SpotCheckReport:
    """Sample ``p ⊩ t : Π(x:dom) cod``; ``cod`` is a one-binder body.

    For each ``(q, a)`` with ``q ⊩ a : dom`` it checks ``q ⊩ t a : cod[a]``.
    This approximates the Π clause and never proves it.
    """
    out: list[SampleOutcome] = []
    for q, a in samples:
        if not extends(q, p):
            out.append(SampleOutcome(q, a, "not-an-extension", f"{q} does not extend {p}"))
            continue
        if not is_closed(a) or not check((), q, a, dom, mode, fuel).accepted:
            out.append(SampleOutcome(q, a, "sample-ill-typed", f"argument does not have type {dom!r}"))
            continue
        if not forces_base(ForcingQuery(q, a, dom, mode=mode), fuel):
            out.append(SampleOutcome(q, a, "skipped", "argument not forced at the domain"))
            continue
        res = forces_base(ForcingQuery(q, App(t, a), subst(cod, a), mode=mode), fuel)
        out.append(SampleOutcome(q, a, "pass" if res.holds else "fail", res.reason))
    return SpotCheckReport(tuple(out))


# -- refuting inhabitants of Σ(x:N) IsZero (f x) -----------------------------


@dataclass(frozen=True)
class RefutationCertificate:
    candidate: Term
    condition: Condition
    numeral: int
    generic: Term = GEN
    mode: Mode = Mode.FORCING
    partition: Optional[Partition] = None

    def replay(self, fuel: int = DEFAULT_FUEL) -> bool:
        """Re-run both reductions at the recorded condition."""
        first = whnf(Fst(self.candidate), self.condition, self.mode, fuel)
        if first.exhausted or as_numeral(first.result) != self.numeral:
            return False
        ty = whnf(is_zero(App(self.generic, numeral(self.numeral))), self.condition, self.mode, fuel)
        return not ty.exhausted and isinstance(ty.result, Empty)


@dataclass(frozen=True)
class CannotRefute:
    candidate: Term
    reason: str

    def replay(self, fuel: int = DEFAULT_FUEL) -> bool:
        return False


def sigma_type(q: Optional[Condition] = None) -> Term:
    """``Σ(x:N) IsZero (f x)``, or the ``f_q`` variant."""
    return exists_zero(GEN if q is None else GenericAt(q))


def refute_sigma(t: Term, fuel: int = DEFAULT_FUEL, q: Optional[Condition] = None,
                 max_depth: int = DEFAULT_SPLIT_DEPTH):
    """Find a condition where ``t.1`` is some ``n`` and ``IsZero (f n)`` is empty.

    The first projection is evaluated over a partition of the empty condition.
    On the leaf that takes bit 1 at every split it is some numeral ``n``.
    Setting bit ``n`` to 1 (if it is not yet set) makes the second component
    uninhabitable there.  Returns :class:`CannotRefute` when ``t.1`` does not
    evaluate to a numeral.
    """
    if not is_closed(t):
        raise ValueError("refute_sigma needs a closed term")
    mode = Mode.FORCING if q is None else Mode.MANY_REALS
    generic = GEN if q is None else GenericAt(q)
    try:
        ev = partition_eval(Fst(t), EMPTY, mode, fuel, max_depth)
    except FuelExhausted as e:
        return CannotRefute(t, f"first projection has no whnf: {e}")
    r = ev.partition.all_ones_leaf()
    n = as_numeral(ev.outcome_at(r).result)
    if n is None:
        return CannotRefute(t, f"first projection evaluates to {ev.outcome_at(r).result!r} at {r}")
    if n not in r and (q is None or n not in q):
        r = extend(r, n, 1)
    cert = RefutationCertificate(t, r, n, generic, mode, ev.partition)
    if not cert.replay(fuel):
        return CannotRefute(t, f"IsZero at {n} is not empty at {r}")
    return cert


# -- conservativity ---------------------------------------------------------


@dataclass(frozen=True)
class GenericInstance:
    """A closed plain ``g : N → N2`` verified against a condition up to a bound."""

    g: Term
    condition: Condition
    n_g: int
    v_g: Term
    scan_bound: int
    bits: tuple[tuple[int, int], ...] = field(default=(), repr=False)

    def value(self, n: int, fuel: int = DEFAULT_FUEL) -> Optional[int]:
        for k, b in self.bits:
            if k == n:
                return b
        return as_bit(whnf(App(self.g, numeral(n)), EMPTY, Mode.PLAIN, fuel).result)

    def compatible_with(self, p: Condition) -> bool:
        return all(self.value(n) == b for n, b in p.items)


def v_term(n: int) -> Term:
    """``λx. x (n, 0)``."""
    return Lam(App(Var(0), Pair(numeral(n), ZERO)), "x")


def build_generic_instance(g: Term, p: Condition = EMPTY, scan_bound: int = 64,
                           fuel: int = DEFAULT_FUEL) -> GenericInstance:
    if not is_closed(g):
        raise GenericInstanceError("g must be closed")
    if mode_violations(g, Mode.PLAIN):
        raise GenericInstanceError("g must be a plain term")
    if not check((), EMPTY, g, Pi(N, N2, "_"), Mode.PLAIN, fuel).accepted:
        raise GenericInstanceError("g does not have type N -> N2")
    bits: list[tuple[int, int]] = []
    for n in sorted(set(range(scan_bound + 1)) | p.dom):
        got = as_bit(whnf_strict(App(g, numeral(n)), EMPTY, Mode.PLAIN, fuel).result)
        expected = p.get(n, 0)
        if got != expected:
            raise IncompatibleGeneric(n, expected, got)
        bits.append((n, got))
    zeros = [n for n, b in bits if b == 0]
    if not zeros:
        raise NoZeroFound(f"g takes no zero value up to {scan_bound}")
    return GenericInstance(g, p, zeros[0], v_term(zeros[0]), scan_bound, tuple(bits))


def conservativity_translate(j: Judgment, inst: GenericInstance) -> Judgment:
    """Replace ``f`` by ``g`` and then ``w`` by ``v_g``; the result is a plain judgment."""
    if j.mode is not Mode.FORCING:
        raise TranslationError(f"expected a forcing-mode judgment, got {j.mode}")
    if any(isinstance(s, (GenericAt, WitnessAt, NotMP)) for t in j.terms() for s in subterms(t)):
        raise TranslationError("many-reals constants are not supported by the translation")
    if not inst.compatible_with(j.condition):
        raise TranslationError(f"g is not compatible with {j.condition}")
    out = j.map_terms(lambda t: replace(replace(t, GEN, inst.g), WIT, inst.v_g))
    return dc_replace(out, condition=EMPTY, mode=Mode.PLAIN, cover=None)
