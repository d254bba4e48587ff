"""Condition-indexed weak head reduction.

``step`` performs one reduction through an evaluation context

    E ::= [] | E u | E.1 | E.2 | S E | f E | rec0 C E | rec1 C a E
        | rec2 C a0 a1 E | recN C z g E

or classifies the term as a whnf.  ``f n`` reduces at ``p`` only when
``n`` is in the domain of ``p``; otherwise evaluation is stuck on that
index and ``partition_eval`` splits the condition there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from forcett.conditions import Condition, EMPTY, Leaf, Partition, Split, SplitTree, extend
from forcett.syntax import (
    App, Fst, Generic, GenericAt, HOLE, Lam, Mode, NotMP, One, Pair, Rec0, Rec1,
    Rec2, RecN, Snd, Succ, Term, Var, Witness, WitnessAt, Zero, ONE, as_numeral,
    bit, check_mode, is_closed, numeral, subst,
)

DEFAULT_FUEL = 100_000
DEFAULT_SPLIT_DEPTH = 32


class FuelExhausted(Exception):
    def __init__(self, message: str, outcome: Optional["WhnfOutcome"] = None):
        super().__init__(message)
        self.outcome = outcome


class SplitDepthExceeded(Exception):
    pass


# -- whnf classes -----------------------------------------------------------


@dataclass(frozen=True)
class Canonical:
    """Constructor- or binder-headed; no reduction at any extension."""


@dataclass(frozen=True)
class ProperStuck:
    """Of the form ``E[f k]`` with ``k`` outside the condition."""

    index: int
    context: Term
    head: Term  # the generic point blocking evaluation

    @property
    def redex(self) -> Term:
        return App(self.head, numeral(self.index))


@dataclass(frozen=True)
class Neutral:
    """Headed by a variable or an opaque axiom."""


@dataclass(frozen=True)
class Improper:
    """A dead end no well-typed term reaches, e.g. ``0 0``."""


CANONICAL = Canonical()
NEUTRAL = Neutral()
IMPROPER = Improper()

WhnfClass = Union[Canonical, ProperStuck, Neutral, Improper]
_CLASSES = (Canonical, ProperStuck, Neutral, Improper)


@dataclass(frozen=True)
class Stepped:
    term: Term


@dataclass(frozen=True)
class NoStep:
    cls: WhnfClass


StepResult = Union[Stepped, NoStep]


# -- one step ---------------------------------------------------------------

_OPAQUE = (Witness, WitnessAt, NotMP)
_ELIMINATORS = (Rec0, Rec1, Rec2, RecN, Generic, GenericAt)


def _wrap(cls: WhnfClass, rebuild) -> WhnfClass:
    if isinstance(cls, ProperStuck):
        return ProperStuck(cls.index, rebuild(cls.context), cls.head)
    return cls


def _step(t: Term, p: Condition) -> Union[Term, WhnfClass]:
    match t:
        case Var():
            return NEUTRAL
        case Succ(n):
            r = _step(n, p)
            if not isinstance(r, _CLASSES):
                return Succ(r)
            if isinstance(r, Canonical):
                return CANONICAL if as_numeral(n) is not None else IMPROPER
            return _wrap(r, Succ)
        case Fst(e) | Snd(e):
            r = _step(e, p)
            proj = type(t)
            if not isinstance(r, _CLASSES):
                return proj(r)
            if isinstance(r, Canonical):
                if isinstance(e, Pair):
                    return e.fst if proj is Fst else e.snd
                return IMPROPER
            return _wrap(r, proj)
        case App(fn, arg):
            r = _step(fn, p)
            if not isinstance(r, _CLASSES):
                return App(r, arg)
            if not isinstance(r, Canonical):
                return _wrap(r, lambda c: App(c, arg))
            if isinstance(fn, Lam):
                return subst(fn.body, arg)
            if isinstance(fn, _OPAQUE):
                return NEUTRAL
            if not isinstance(fn, _ELIMINATORS):
                return IMPROPER
            return _eliminate(fn, arg, p)
    return CANONICAL


def _eliminate(fn: Term, arg: Term, p: Condition) -> Union[Term, WhnfClass]:
    ra = _step(arg, p)
    if not isinstance(ra, _CLASSES):
        return App(fn, ra)
    if isinstance(ra, ProperStuck):
        return _wrap(ra, lambda c: App(fn, c))
    if isinstance(ra, Improper):
        return IMPROPER
    if isinstance(ra, Neutral):
        # open-term extension: recN computes on S of a neutral
        if isinstance(fn, RecN) and isinstance(arg, Succ):
            return App(App(fn.s, arg.pred), App(fn, arg.pred))
        return NEUTRAL
    match fn:
        case Rec1(_, a) if isinstance(arg, Zero):
            return a
        case Rec2(_, a0, a1) if isinstance(arg, (Zero, One)):
            return a0 if isinstance(arg, Zero) else a1
        case RecN(_, z, s):
            if isinstance(arg, Zero):
                return z
            if isinstance(arg, Succ):
                return App(App(s, arg.pred), App(fn, arg.pred))
        case Generic() | GenericAt():
            n = as_numeral(arg)
            if n is None:
                return IMPROPER
            if isinstance(fn, GenericAt) and n in fn.cond:
                return ONE
            if n in p:
                return bit(p[n])
            return ProperStuck(n, HOLE, fn)
    return IMPROPER


def step(t: Term, p: Condition = EMPTY, mode: Mode = Mode.FORCING) -> StepResult:
    """One outermost reduction step at condition ``p``, or the whnf class."""
    check_mode(t, mode)
    r = _step(t, p)
    if isinstance(r, _CLASSES):
        return NoStep(r)
    return Stepped(r)


# -- whnf -------------------------------------------------------------------


@dataclass(frozen=True)
class WhnfOutcome:
    result: Term
    cls: Optional[WhnfClass]
    steps: int
    exhausted: bool = False

    @property
    def stuck_index(self) -> Optional[int]:
        return self.cls.index if isinstance(self.cls, ProperStuck) else None


def whnf(t: Term, p: Condition = EMPTY, mode: Mode = Mode.FORCING,
         fuel: int = DEFAULT_FUEL) -> WhnfOutcome:
    """Iterate ``step`` to a p-whnf; ``exhausted`` is set when fuel runs out."""
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    check_mode(t, mode)
    steps = 0
    while steps < fuel:
        r = _step(t, p)
        if isinstance(r, _CLASSES):
            return WhnfOutcome(t, r, steps)
        t = r
        steps += 1
    r = _step(t, p)
    if isinstance(r, _CLASSES):
        return WhnfOutcome(t, r, steps)
    return WhnfOutcome(t, None, steps, exhausted=True)


def whnf_strict(t: Term, p: Condition = EMPTY, mode: Mode = Mode.FORCING,
                fuel: int = DEFAULT_FUEL) -> WhnfOutcome:
    out = whnf(t, p, mode, fuel)
    if out.exhausted:
        raise FuelExhausted(f"no whnf within {fuel} steps at {p}", out)
    return out


# -- evaluation over a partition --------------------------------------------


@dataclass(frozen=True)
class PartitionEval:
    leaves: tuple[tuple[Condition, WhnfOutcome], ...]
    partition: Partition

    def outcome_at(self, q: Condition) -> WhnfOutcome:
        for c, out in self.leaves:
            if c == q:
                return out
        raise KeyError(q)


def partition_eval(t: Term, p: Condition = EMPTY, mode: Mode = Mode.FORCING,
                   fuel: int = DEFAULT_FUEL,
                   max_depth: int = DEFAULT_SPLIT_DEPTH) -> PartitionEval:
    """Evaluate ``t`` at ``p``, splitting on every stuck index until proper."""
    if not is_closed(t):
        raise ValueError("partition_eval needs a closed term")
    check_mode(t, mode)
    leaves: list[tuple[Condition, WhnfOutcome]] = []

    def go(q: Condition, depth: int) -> SplitTree:
        out = whnf_strict(t, q, mode, fuel)
        k = out.stuck_index
        if k is None:
            leaves.append((q, out))
            return Leaf(q)
        if depth >= max_depth:
            raise SplitDepthExceeded(f"more than {max_depth} splits below {p}")
        return Split(q, k, go(extend(q, k, 0), depth + 1), go(extend(q, k, 1), depth + 1))

    tree = go(p, 0)
    leaves.sort(key=lambda item: item[0])
    return PartitionEval(tuple(leaves), Partition.from_tree(tree))
