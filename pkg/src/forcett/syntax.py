"""Terms of the core calculus, de Bruijn substitution and numeral helpers.

Binders are nameless: ``Var(0)`` is the innermost bound variable.  Every
binder keeps a display name that takes no part in equality, so ``==`` on
terms is alpha-equivalence.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Union

from forcett.conditions import Condition


class Mode(enum.Enum):
    """Which calculus is active."""

    PLAIN = "plain"
    FORCING = "forcing"
    MANY_REALS = "many-reals"

    def __str__(self) -> str:
        return self.value


class ModeViolation(Exception):
    """A constant occurs that the active mode does not admit."""


# -- term constructors ------------------------------------------------------


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Rec0:
    motive: "Term"
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class Rec1:
    motive: "Term"
    a: "Term"
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class Rec2:
    motive: "Term"
    a0: "Term"
    a1: "Term"
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class RecN:
    motive: "Term"
    z: "Term"
    s: "Term"
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class Univ:
    pass


@dataclass(frozen=True)
class Nat:
    pass


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Unit:
    pass


@dataclass(frozen=True)
class Bool:
    pass


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Succ:
    pred: "Term"


@dataclass(frozen=True)
class Pi:
    dom: "Term"
    cod: "Term"
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class Lam:
    body: "Term"
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Sigma:
    dom: "Term"
    cod: "Term"
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class Pair:
    fst: "Term"
    snd: "Term"


@dataclass(frozen=True)
class Fst:
    pair: "Term"


@dataclass(frozen=True)
class Snd:
    pair: "Term"


@dataclass(frozen=True)
class Generic:
    """The generic point ``f``."""


@dataclass(frozen=True)
class Witness:
    """The axiom ``w``."""


@dataclass(frozen=True)
class GenericAt:
    """``f_q``: one generic point per condition (many-reals mode)."""

    cond: Condition


@dataclass(frozen=True)
class WitnessAt:
    cond: Condition


@dataclass(frozen=True)
class NotMP:
    """``mw``, the witness of the negation of Markov's principle."""


@dataclass(frozen=True)
class Hole:
    """The hole of an evaluation context; never produced by the parser."""


Term = Union[
    Var, Rec0, Rec1, Rec2, RecN, Univ, Nat, Empty, Unit, Bool, Zero, One, Succ,
    Pi, Lam, App, Sigma, Pair, Fst, Snd, Generic, Witness, GenericAt,
    WitnessAt, NotMP, Hole,
]

U = Univ()
N = Nat()
N0 = Empty()
N1 = Unit()
N2 = Bool()
ZERO = Zero()
ONE = One()
GEN = Generic()
WIT = Witness()
MW = NotMP()
HOLE = Hole()

Context = tuple  # tuple of types, innermost binding last


# -- generic traversal ------------------------------------------------------


def map_children(t: Term, f: Callable[[Term, int], Term]) -> Term:
    """Rebuild ``t`` with ``f(child, binders_entered)`` applied to each child."""
    match t:
        case Rec0(c, name=nm):
            return Rec0(f(c, 1), nm)
        case Rec1(c, a, name=nm):
            return Rec1(f(c, 1), f(a, 0), nm)
        case Rec2(c, a0, a1, name=nm):
            return Rec2(f(c, 1), f(a0, 0), f(a1, 0), nm)
        case RecN(c, z, s, name=nm):
            return RecN(f(c, 1), f(z, 0), f(s, 0), nm)
        case Succ(n):
            return Succ(f(n, 0))
        case Pi(a, b, name=nm):
            return Pi(f(a, 0), f(b, 1), nm)
        case Sigma(a, b, name=nm):
            return Sigma(f(a, 0), f(b, 1), nm)
        case Lam(b, name=nm):
            return Lam(f(b, 1), nm)
        case App(g, a):
            return App(f(g, 0), f(a, 0))
        case Pair(a, b):
            return Pair(f(a, 0), f(b, 0))
        case Fst(p):
            return Fst(f(p, 0))
        case Snd(p):
            return Snd(f(p, 0))
    return t


def children(t: Term) -> Iterator[tuple[Term, int]]:
    """Yield ``(child, binders_entered)`` pairs."""
    out: list[tuple[Term, int]] = []

    def visit(c: Term, k: int) -> Term:
        out.append((c, k))
        return c

    map_children(t, visit)
    return iter(out)


def subterms(t: Term) -> Iterator[Term]:
    yield t
    for c, _ in children(t):
        yield from subterms(c)


# -- de Bruijn machinery ----------------------------------------------------


def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    """Add ``d`` to every free index ``>= cutoff``."""
    if d == 0:
        return t
    match t:
        case Var(i):
            return Var(i + d) if i >= cutoff else t
    return map_children(t, lambda c, k: shift(c, d, cutoff + k))


def subst_at(t: Term, depth: int, a: Term) -> Term:
    """Replace index ``depth`` by ``a`` (given at depth 0) and close the gap."""
    match t:
        case Var(i):
            if i == depth:
                return shift(a, depth)
            return Var(i - 1) if i > depth else t
    return map_children(t, lambda c, k: subst_at(c, depth + k, a))


def subst(body: Term, a: Term) -> Term:
    """Instantiate the outermost binder of ``body`` with ``a``."""
    return subst_at(body, 0, a)


def free_indices(t: Term, depth: int = 0) -> set[int]:
    match t:
        case Var(i):
            return {i - depth} if i >= depth else set()
    out: set[int] = set()
    for c, k in children(t):
        out |= free_indices(c, depth + k)
    return out


def is_closed(t: Term) -> bool:
    return not free_indices(t)


def occurs(t: Term, index: int = 0) -> bool:
    return index in free_indices(t)


def abstract(t: Term, a: Term, depth: int = 0) -> Term:
    """Turn ``t`` into a one-binder body whose bound variable marks each ``a``.

    ``t`` and ``a`` live in the same scope; other free indices are shifted up.
    """
    if t == shift(a, depth):
        return Var(depth)
    match t:
        case Var(i):
            return Var(i + 1) if i >= depth else t
    return map_children(t, lambda c, k: abstract(c, a, depth + k))


def alpha_eq(t: Term, u: Term) -> bool:
    return t == u


def replace(t: Term, target: Term, replacement: Term) -> Term:
    """Replace every occurrence of the constant ``target`` by closed ``replacement``."""
    if t == target:
        return replacement
    return map_children(t, lambda c, k: replace(c, target, replacement))


def plug(ctx: Term, e: Term) -> Term:
    """Fill the hole of an evaluation context."""
    if isinstance(ctx, Hole):
        return e
    return map_children(ctx, lambda c, k: plug(c, e))


# -- numerals ---------------------------------------------------------------


def numeral(n: int) -> Term:
    if n < 0:
        raise ValueError("numerals are non-negative")
    t: Term = ZERO
    for _ in range(n):
        t = Succ(t)
    return t


def as_numeral(t: Term) -> Optional[int]:
    n = 0
    while isinstance(t, Succ):
        t = t.pred
        n += 1
    return n if isinstance(t, Zero) else None


def as_bit(t: Term) -> Optional[int]:
    if isinstance(t, Zero):
        return 0
    if isinstance(t, One):
        return 1
    return None


def bit(b: int) -> Term:
    return ONE if b else ZERO


# -- mode discipline --------------------------------------------------------

_FORCING_ONLY = (Generic, Witness)
_MANY_REALS_ONLY = (GenericAt, WitnessAt, NotMP)


def mode_violations(t: Term, mode: Mode) -> list[Term]:
    bad = []
    for s in subterms(t):
        if mode is Mode.PLAIN and isinstance(s, _FORCING_ONLY + _MANY_REALS_ONLY):
            bad.append(s)
        elif mode is Mode.FORCING and isinstance(s, _MANY_REALS_ONLY):
            bad.append(s)
    return bad


def check_mode(t: Term, mode: Mode) -> None:
    bad = mode_violations(t, mode)
    if bad:
        raise ModeViolation(f"constant {bad[0]!r} is not available in {mode} mode")


# -- derived forms used throughout ------------------------------------------


def arrow(a: Term, b: Term) -> Term:
    return Pi(a, shift(b, 1), "_")


def neg(a: Term) -> Term:
    return arrow(a, N0)


IS_ZERO = Lam(App(Rec2(U, N1, N0, "x"), Var(0)), "y")


def is_zero(t: Term) -> Term:
    """``IsZero t``, with IsZero the lambda sending 0 to N1 and 1 to N0."""
    return App(IS_ZERO, t)


def exists_zero(h: Term) -> Term:
    """``Sigma (x : N) IsZero (h x)`` for a function ``h`` at the current depth."""
    return Sigma(N, is_zero(App(shift(h, 1), Var(0))), "x")


def mp_type() -> Term:
    """Markov's principle as a closed type."""
    h = Var(0)
    body = arrow(neg(neg(exists_zero(h))), exists_zero(h))
    return Pi(arrow(N, N2), body, "h")


def dne_type() -> Term:
    a = Var(0)
    return Pi(U, arrow(neg(neg(a)), a), "A")


GENERIC_TYPE = arrow(N, N2)


def witness_type(generic: Term = GEN) -> Term:
    """``not not Sigma (x : N) IsZero (g x)`` for a closed ``g``."""
    return neg(neg(exists_zero(generic)))


def constant_type(t: Term) -> Optional[Term]:
    """Type of a forcing constant, or None for other terms."""
    match t:
        case Generic() | GenericAt():
            return GENERIC_TYPE
        case Witness():
            return witness_type(GEN)
        case WitnessAt(q):
            return witness_type(GenericAt(q))
        case NotMP():
            return neg(mp_type())
    return None


def dne_to_mp() -> Term:
    """``lam h. d T(h)`` in a context holding ``d : dne_type()``."""
    return Lam(App(Var(1), exists_zero(Var(0))), "h")


def recn_step_type(motive: Term) -> Term:
    """``Pi (x : N) (C[x] -> C[S x])`` for the one-binder ``motive``."""
    at_succ = subst(shift(motive, 1, 1), Succ(Var(0)))
    return Pi(N, arrow(motive, at_succ), "n")


def var_type(ctx: Context, i: int) -> Term:
    if not 0 <= i < len(ctx):
        raise IndexError(f"unbound variable #{i}")
    return shift(ctx[-1 - i], i + 1)
