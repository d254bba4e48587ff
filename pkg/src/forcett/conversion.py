"""Algorithmic judgmental equality at a condition.

Both sides are brought to p-whnf.  Whenever evaluation is stuck on
``f k`` the condition is split at ``k`` and both halves must convert,
which is the locality rule read backwards.  Equality at Π-types goes
through η (compare applications to a fresh variable), at Σ-types
through both projections.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from forcett.conditions import Condition, EMPTY, extend
from forcett.reduction import (
    DEFAULT_FUEL, DEFAULT_SPLIT_DEPTH, Neutral, SplitDepthExceeded, whnf_strict,
)
from forcett.syntax import (
    App, Bool, Empty, Fst, Generic, GenericAt, Mode, N, N0, N1, N2, Nat, NotMP,
    One, Pi, Rec0, Rec1, Rec2, RecN, Sigma, Snd, Succ, Term, Unit, Univ, Var,
    Witness, WitnessAt, Zero, ONE, ZERO, constant_type, recn_step_type, shift,
    subst, var_type,
)

_BASE_TYPES = (Univ, Nat, Empty, Unit, Bool)


@dataclass(frozen=True)
class ConvProblem:
    context: tuple
    condition: Condition
    lhs: Term
    rhs: Term
    classifier: Optional[Term] = None  # None compares lhs, rhs as types


@dataclass(frozen=True)
class ConvResult:
    ok: bool
    trace: tuple[str, ...] = field(default=(), compare=False)

    def __bool__(self) -> bool:
        return self.ok


class Converter:
    """Stateful only in its diagnostic trace."""

    def __init__(self, mode: Mode = Mode.FORCING, fuel: int = DEFAULT_FUEL,
                 max_splits: int = DEFAULT_SPLIT_DEPTH):
        self.mode = mode
        self.fuel = fuel
        self.max_splits = max_splits
        self.trace: list[str] = []

    def _whnf(self, t: Term, p: Condition):
        return whnf_strict(t, p, self.mode, self.fuel)

    def _split(self, p: Condition, k: int, depth: int,
               branch: Callable[[Condition, int], bool]) -> bool:
        if depth >= self.max_splits:
            raise SplitDepthExceeded(f"more than {self.max_splits} splits in conversion")
        self.trace.append(f"split {p} at {k}")
        return branch(extend(p, k, 0), depth + 1) and branch(extend(p, k, 1), depth + 1)

    def _fail(self, p: Condition, what: str, a: Term, b: Term) -> bool:
        from forcett.surface import show  # the printer depends on this module

        try:
            self.trace.append(f"{what} mismatch at {p}: {show(a)} vs {show(b)}")
        except ValueError:
            self.trace.append(f"{what} mismatch at {p}: {a!r} vs {b!r}")
        return False

    # -- types --------------------------------------------------------------

    def types(self, ctx: tuple, p: Condition, a: Term, b: Term, depth: int = 0) -> bool:
        if a == b:
            return True
        wa, wb = self._whnf(a, p), self._whnf(b, p)
        k = wa.stuck_index if wa.stuck_index is not None else wb.stuck_index
        if k is not None:
            return self._split(p, k, depth, lambda q, d: self.types(ctx, q, a, b, d))
        x, y = wa.result, wb.result
        if isinstance(x, _BASE_TYPES) and type(x) is type(y):
            return True
        if (isinstance(x, Pi) and isinstance(y, Pi)) or (isinstance(x, Sigma) and isinstance(y, Sigma)):
            return (self.types(ctx, p, x.dom, y.dom, depth)
                    and self.types(ctx + (x.dom,), p, x.cod, y.cod, depth))
        if isinstance(wa.cls, Neutral) and isinstance(wb.cls, Neutral):
            if self.neutrals(ctx, p, x, y, depth) is not None:
                return True
        return self._fail(p, "type", x, y)

    # -- terms --------------------------------------------------------------

    def terms(self, ctx: tuple, p: Condition, t: Term, u: Term, ty: Term,
              depth: int = 0) -> bool:
        if t == u:
            return True
        wty = self._whnf(ty, p)
        if wty.stuck_index is not None:
            return self._split(p, wty.stuck_index, depth,
                               lambda q, d: self.terms(ctx, q, t, u, ty, d))
        match wty.result:
            case Univ():
                return self.types(ctx, p, t, u, depth)
            case Pi(dom, cod):
                x = Var(0)
                return self.terms(ctx + (dom,), p, App(shift(t, 1), x),
                                  App(shift(u, 1), x), cod, depth)
            case Sigma(dom, cod):
                return (self.terms(ctx, p, Fst(t), Fst(u), dom, depth)
                        and self.terms(ctx, p, Snd(t), Snd(u), subst(cod, Fst(t)), depth))
        wt, wu = self._whnf(t, p), self._whnf(u, p)
        k = wt.stuck_index if wt.stuck_index is not None else wu.stuck_index
        if k is not None:
            return self._split(p, k, depth, lambda q, d: self.terms(ctx, q, t, u, ty, d))
        x, y = wt.result, wu.result
        if isinstance(x, Zero) and isinstance(y, Zero) or isinstance(x, One) and isinstance(y, One):
            return True
        if isinstance(x, Succ) and isinstance(y, Succ):
            return self.terms(ctx, p, x.pred, y.pred, N, depth)
        if isinstance(wt.cls, Neutral) and isinstance(wu.cls, Neutral):
            if self.neutrals(ctx, p, x, y, depth) is not None:
                return True
        return self._fail(p, "term", x, y)

    # -- neutral spines -----------------------------------------------------

    def neutrals(self, ctx: tuple, p: Condition, t: Term, u: Term,
                 depth: int = 0) -> Optional[Term]:
        """Type of ``t`` if the two whnf spines are equal, else None."""
        match t, u:
            case Var(i), Var(j):
                return var_type(ctx, i) if i == j else None
            case (Generic() | GenericAt() | Witness() | WitnessAt() | NotMP()), _:
                return constant_type(t) if t == u else None
            case Rec0(c), Rec0(d):
                if self.types(ctx + (N0,), p, c, d, depth):
                    return Pi(N0, c)
            case Rec1(c, a), Rec1(d, b):
                if (self.types(ctx + (N1,), p, c, d, depth)
                        and self.terms(ctx, p, a, b, subst(c, ZERO), depth)):
                    return Pi(N1, c)
            case Rec2(c, a0, a1), Rec2(d, b0, b1):
                if (self.types(ctx + (N2,), p, c, d, depth)
                        and self.terms(ctx, p, a0, b0, subst(c, ZERO), depth)
                        and self.terms(ctx, p, a1, b1, subst(c, ONE), depth)):
                    return Pi(N2, c)
            case RecN(c, z, s), RecN(d, z2, s2):
                if (self.types(ctx + (N,), p, c, d, depth)
                        and self.terms(ctx, p, z, z2, subst(c, ZERO), depth)
                        and self.terms(ctx, p, s, s2, recn_step_type(c), depth)):
                    return Pi(N, c)
            case App(h, a), App(h2, b):
                head_ty = self.neutrals(ctx, p, h, h2, depth)
                if head_ty is None:
                    return None
                fn_ty = self._whnf(head_ty, p).result
                if isinstance(fn_ty, Pi) and self.terms(ctx, p, a, b, fn_ty.dom, depth):
                    return subst(fn_ty.cod, a)
            case Fst(e), Fst(e2):
                pair_ty = self._pair_type(ctx, p, e, e2, depth)
                if pair_ty is not None:
                    return pair_ty.dom
            case Snd(e), Snd(e2):
                pair_ty = self._pair_type(ctx, p, e, e2, depth)
                if pair_ty is not None:
                    return subst(pair_ty.cod, Fst(e))
            case Succ(a), Succ(b):
                if self.terms(ctx, p, a, b, N, depth):
                    return N
        return None

    def _pair_type(self, ctx, p, e, e2, depth) -> Optional[Sigma]:
        ty = self.neutrals(ctx, p, e, e2, depth)
        if ty is None:
            return None
        w = self._whnf(ty, p).result
        return w if isinstance(w, Sigma) else None


def conv(problem: ConvProblem, fuel: int = DEFAULT_FUEL, mode: Mode = Mode.FORCING,
         max_splits: int = DEFAULT_SPLIT_DEPTH) -> ConvResult:
    """Decide ``lhs = rhs`` (at ``classifier``, or as types) at the problem's condition."""
    c = Converter(mode, fuel, max_splits)
    ctx, p = tuple(problem.context), problem.condition
    if problem.classifier is None:
        ok = c.types(ctx, p, problem.lhs, problem.rhs)
    else:
        ok = c.terms(ctx, p, problem.lhs, problem.rhs, problem.classifier)
    return ConvResult(ok, tuple(c.trace))


def convertible_types(a: Term, b: Term, p: Condition = EMPTY, ctx: tuple = (),
                      mode: Mode = Mode.FORCING) -> bool:
    return conv(ConvProblem(ctx, p, a, b), mode=mode).ok
