"""Generators and independent oracles shared by the test modules.

The oracles deliberately avoid the package's own machinery:

* ``named_subst`` substitutes on named terms with explicit renaming;
* ``Evaluator`` is a big-step, environment-based, call-by-name evaluator;
* ``all_partitions`` enumerates every split tree over a small index set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from hypothesis import strategies as st

from forcett.conditions import Condition
from forcett.syntax import (
    App, Bool, Empty, Fst, GEN, Generic, GenericAt, Lam, N, N0, N1, N2, Nat, ONE,
    Pair, Pi, Rec0, Rec1, Rec2, RecN, Sigma, Snd, Succ, Unit, Univ, U, Var, ZERO,
    Zero, One, numeral, arrow,
)

INDEX_UNIVERSE = 6


# -- conditions -------------------------------------------------------------


def conditions(max_index: int = INDEX_UNIVERSE - 1, max_size: int = 4):
    return st.dictionaries(st.integers(0, max_index), st.integers(0, 1), max_size=max_size).map(Condition.of)


@lru_cache(maxsize=None)
def all_partitions(p: Condition, universe: tuple[int, ...]) -> frozenset[frozenset[Condition]]:
    """Every leaf set derivable from ``p`` with split indices drawn from ``universe``."""
    out = {frozenset({p})}
    for n in universe:
        if n in p:
            continue
        lo = all_partitions(Condition.of({**p.as_dict(), n: 0}), universe)
        hi = all_partitions(Condition.of({**p.as_dict(), n: 1}), universe)
        out |= {a | b for a in lo for b in hi}
    return frozenset(out)


# -- named terms and substitution --------------------------------------------


@dataclass(frozen=True)
class NVar:
    name: str


@dataclass(frozen=True)
class NBind:
    """A binder node: ``kind`` is the constructor, ``parts`` the unbound children."""

    kind: type
    name: str
    body: object
    parts: tuple = ()


@dataclass(frozen=True)
class NNode:
    kind: type
    parts: tuple


def to_named(t, names: tuple[str, ...] = (), counter=None):
    counter = counter if counter is not None else itertools.count()
    match t:
        case Var(i):
            return NVar(names[-1 - i]) if i < len(names) else NVar(f"free{i - len(names)}")
        case Lam(b):
            x = f"v{next(counter)}"
            return NBind(Lam, x, to_named(b, names + (x,), counter))
        case Pi(a, b) | Sigma(a, b):
            x = f"v{next(counter)}"
            return NBind(type(t), x, to_named(b, names + (x,), counter), (to_named(a, names, counter),))
        case Rec0(c) | Rec1(c) | Rec2(c) | RecN(c):
            x = f"v{next(counter)}"
            rest = {Rec0: (), Rec1: (t.a,) if isinstance(t, Rec1) else (),
                    Rec2: (t.a0, t.a1) if isinstance(t, Rec2) else (),
                    RecN: (t.z, t.s) if isinstance(t, RecN) else ()}[type(t)]
            return NBind(type(t), x, to_named(c, names + (x,), counter),
                         tuple(to_named(r, names, counter) for r in rest))
        case App(g, a):
            return NNode(App, (to_named(g, names, counter), to_named(a, names, counter)))
        case Pair(a, b):
            return NNode(Pair, (to_named(a, names, counter), to_named(b, names, counter)))
        case Succ(a) | Fst(a) | Snd(a):
            return NNode(type(t), (to_named(a, names, counter),))
    return t  # constants


def from_named(n, names: tuple[str, ...] = ()):
    match n:
        case NVar(x):
            for i, y in enumerate(reversed(names)):
                if y == x:
                    return Var(i)
            return Var(len(names) + int(x[len("free"):]))
        case NBind(kind, x, body, parts):
            b = from_named(body, names + (x,))
            ps = [from_named(p, names) for p in parts]
            if kind is Lam:
                return Lam(b)
            if kind in (Pi, Sigma):
                return kind(ps[0], b)
            return kind(b, *ps)
        case NNode(kind, parts):
            return kind(*(from_named(p, names) for p in parts))
    return n


def _free(n) -> set[str]:
    match n:
        case NVar(x):
            return {x}
        case NBind(_, x, body, parts):
            return (_free(body) - {x}).union(*(_free(p) for p in parts))
        case NNode(_, parts):
            return set().union(*(_free(p) for p in parts))
    return set()


def _rename(n, old: str, new: str):
    return named_subst(n, old, NVar(new))


_fresh_counter = itertools.count()


def named_subst(n, x: str, a):
    """Capture-avoiding ``n[a/x]`` on named terms."""
    match n:
        case NVar(y):
            return a if y == x else n
        case NBind(kind, y, body, parts):
            parts2 = tuple(named_subst(p, x, a) for p in parts)
            if y == x:
                return NBind(kind, y, body, parts2)
            if y in _free(a):
                z = f"r{next(_fresh_counter)}"
                body, y = _rename(body, y, z), z
            return NBind(kind, y, named_subst(body, x, a), parts2)
        case NNode(kind, parts):
            return NNode(kind, tuple(named_subst(p, x, a) for p in parts))
    return n


def oracle_subst(body, a):
    """Instantiate the outermost binder of a one-binder ``body`` with ``a``.

    Free indices become names ``free{k}`` on both sides, so the outer scope
    needs no explicit name list.
    """
    counter = itertools.count()
    nb = to_named(body, ("hole",), counter)
    na = to_named(a, (), counter)
    return from_named(named_subst(nb, "hole", na))


# -- an independent evaluator ----------------------------------------------


class Blocked(Exception):
    def __init__(self, index: int):
        super().__init__(index)
        self.index = index


class Wrong(Exception):
    """The evaluator met an ill-typed configuration."""


@dataclass(frozen=True)
class Thunk:
    env: tuple
    term: object


@dataclass(frozen=True)
class Delayed:
    """A suspended computation given as a Python callable."""

    compute: object


@dataclass(frozen=True)
class VNum:
    n: int


@dataclass(frozen=True)
class VBit:
    b: int  # ZERO evaluates to VNum(0); only One gives VBit(1)


@dataclass(frozen=True)
class VClosure:
    env: tuple
    body: object


@dataclass(frozen=True)
class VPair:
    fst: Thunk
    snd: Thunk


@dataclass(frozen=True)
class VType:
    name: str


@dataclass(frozen=True)
class VRec:
    env: tuple
    rec: object


@dataclass(frozen=True)
class VGen:
    q: Optional[Condition]


class Evaluator:
    """Big-step call-by-name evaluation of closed terms at a condition."""

    def __init__(self, p: Condition, budget: int = 20_000):
        self.p = p
        self.budget = budget

    def tick(self):
        self.budget -= 1
        if self.budget < 0:
            raise RecursionError("evaluation budget exhausted")

    def force(self, th):
        if isinstance(th, Delayed):
            return th.compute()
        return self.eval(th.env, th.term)

    def eval(self, env: tuple, t):
        self.tick()
        match t:
            case Var(i):
                return self.force(env[i])
            case Zero():
                return VNum(0)
            case One():
                return VBit(1)
            case Succ(a):
                v = self.eval(env, a)
                if not isinstance(v, VNum):
                    raise Wrong("successor of a non-number")
                return VNum(v.n + 1)
            case Lam(b):
                return VClosure(env, b)
            case Pair(a, b):
                return VPair(Thunk(env, a), Thunk(env, b))
            case Fst(e) | Snd(e):
                v = self.eval(env, e)
                if not isinstance(v, VPair):
                    raise Wrong("projection from a non-pair")
                return self.force(v.fst if isinstance(t, Fst) else v.snd)
            case Univ() | Nat() | Empty() | Unit() | Bool():
                return VType(type(t).__name__)
            case Pi() | Sigma():
                return VType(type(t).__name__)
            case Rec0() | Rec1() | Rec2() | RecN():
                return VRec(env, t)
            case Generic():
                return VGen(None)
            case GenericAt(q):
                return VGen(q)
            case App(g, a):
                return self.apply(self.eval(env, g), Thunk(env, a))
        raise Wrong(f"cannot evaluate {t!r}")

    def apply(self, fv, arg: Thunk):
        match fv:
            case VClosure(env, body):
                return self.eval((arg,) + env, body)
            case VGen(q):
                v = self.force(arg)
                if not isinstance(v, VNum):
                    raise Wrong("generic point at a non-number")
                if q is not None and v.n in q:
                    return VBit(1)
                if v.n not in self.p:
                    raise Blocked(v.n)
                return VBit(1) if self.p[v.n] else VNum(0)
            case VRec(env, rec):
                v = self.force(arg)
                match rec:
                    case Rec1(_, a) if v == VNum(0):
                        return self.eval(env, a)
                    case Rec2(_, a0, a1) if v in (VNum(0), VBit(1)):
                        return self.eval(env, a0 if v == VNum(0) else a1)
                    case RecN(_, z, s) if isinstance(v, VNum):
                        if v.n == 0:
                            return self.eval(env, z)
                        pred = Thunk((), numeral(v.n - 1))
                        step_fn = self.apply(self.eval(env, s), pred)
                        return self.apply(step_fn, Delayed(lambda: self.apply(fv, pred)))
                raise Wrong("recursor applied to a bad scrutinee")
        raise Wrong("application of a non-function")


def evaluate(t, p: Condition):
    """``('value', v)`` or ``('blocked', k)`` for a closed term."""
    try:
        return ("value", Evaluator(p).eval((), t))
    except Blocked as b:
        return ("blocked", b.index)


def value_term(v):
    """Term for a first-order value, to compare with a whnf."""
    match v:
        case VNum(n):
            return numeral(n)
        case VBit(1):
            return ONE
        case VType(name):
            return {"Univ": U, "Nat": N, "Empty": N0, "Unit": N1, "Bool": N2}.get(name)
    return None


# -- well-typed closed terms --------------------------------------------------

NN = arrow(N, N)
NN2 = arrow(N, N2)
SNB = Sigma(N, N2, "_")

SIMPLE_TYPES = {"N": N, "N2": N2, "N1": N1, "U": U, "NN": NN, "NN2": NN2, "SNB": SNB}


def _vars(ctx: tuple, want: str):
    return [Var(i) for i, ty in enumerate(reversed(ctx)) if ty == want]


@st.composite
def typed_terms(draw, want: str = "N", ctx: tuple = (), depth: int = 3, max_index: int = INDEX_UNIVERSE - 1):
    """A closed-in-``ctx`` term of simple type ``want``.

    ``ctx`` lists simple type names, innermost last.  Generic-point
    arguments stay at most ``max_index`` so every stuck index is small.
    """
    rec = lambda w, c=ctx, d=depth - 1: typed_terms(w, c, d, max_index)  # noqa: E731
    small = lambda: st.integers(0, max_index).map(numeral)  # noqa: E731
    leaves = {
        "N": [small()],
        "N2": [st.just(ZERO), st.just(ONE), small().map(lambda n: App(GEN, n))],
        "N1": [st.just(ZERO)],
        "U": [st.sampled_from([N, N2, N1, N0])],
        "NN": [st.just(Lam(Var(0)))],
        "NN2": [st.just(GEN), st.just(Lam(ZERO))],
        "SNB": [st.builds(Pair, small(), st.sampled_from([ZERO, ONE]))],
    }[want]
    vs = _vars(ctx, want)
    if vs:
        leaves = leaves + [st.sampled_from(vs)]
    if depth <= 0:
        return draw(st.one_of(leaves))
    compound = {
        "N": [
            st.builds(Succ, rec("N")),
            st.builds(App, rec("NN"), rec("N")),
            st.builds(lambda z, s, n: App(RecN(N, z, Lam(Lam(s))), n),
                      rec("N"), rec("N", ctx + ("N", "N")), small()),
            st.builds(lambda a, b, c: App(Rec2(N, a, b), c), rec("N"), rec("N"), rec("N2")),
            st.builds(Fst, rec("SNB")),
            st.builds(lambda body, a: App(Lam(body), a), rec("N", ctx + ("N",)), rec("N")),
        ],
        "N2": [
            st.builds(lambda n: App(GEN, n), rec("N")),
            st.builds(App, rec("NN2"), small()),
            st.builds(lambda a, b, c: App(Rec2(N2, a, b), c), rec("N2"), rec("N2"), rec("N2")),
            st.builds(lambda z, s, n: App(RecN(N2, z, Lam(Lam(s))), n),
                      rec("N2"), rec("N2", ctx + ("N", "N2")), small()),
            st.builds(Snd, rec("SNB")),
            st.builds(lambda a, u: App(Rec1(N2, a), u), rec("N2"), rec("N1")),
        ],
        "N1": [st.builds(lambda b: App(Rec2(N1, ZERO, ZERO), b), rec("N2"))],
        "U": [st.builds(lambda a, b, c: App(Rec2(U, a, b), c), rec("U"), rec("U"), rec("N2"))],
        "NN": [st.builds(Lam, rec("N", ctx + ("N",)))],
        "NN2": [st.builds(Lam, rec("N2", ctx + ("N",)))],
        "SNB": [st.builds(Pair, rec("N"), rec("N2"))],
    }[want]
    return draw(st.one_of(leaves + compound))


# -- arbitrary (possibly ill-typed, possibly open) terms -------------------------


def raw_terms(max_leaves: int = 12, max_var: int = 2):
    consts = st.sampled_from([U, N, N0, N1, N2, ZERO, ONE, GEN])
    leaves = st.one_of(consts, st.integers(0, max_var).map(Var), st.integers(0, 4).map(numeral))

    def extend(children):
        return st.one_of(
            st.builds(App, children, children),
            st.builds(Lam, children),
            st.builds(Pi, children, children),
            st.builds(Sigma, children, children),
            st.builds(Pair, children, children),
            st.builds(Fst, children),
            st.builds(Snd, children),
            st.builds(Succ, children),
            st.builds(Rec2, children, children, children),
            st.builds(RecN, children, children, children),
            st.builds(Rec1, children, children),
            st.builds(Rec0, children),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)
