"""Bidirectional checking of judgments ``Γ ⊢_p J``.

Lambdas carry no domain annotation, so a lambda only checks against a
Π-type.  A β-redex ``(λx. t) a`` is typed by inferring ``a`` and using its
type as the domain of ``x``; this is a legitimate instance of λ-introduction
followed by application, and keeps redexes produced by ι-reduction typable.

When a classifier is stuck on ``f k`` at ``p`` the checker applies the
locality rule: it checks the judgment at ``p(k↦0)`` and ``p(k↦1)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace as dc_replace
from typing import Callable, Iterator, Optional

from forcett.conditions import (
    Condition, EMPTY, Partition, extend, find_partition_witness,
)
from forcett.conversion import ConvProblem, Converter
from forcett.reduction import (
    DEFAULT_FUEL, DEFAULT_SPLIT_DEPTH, FuelExhausted, SplitDepthExceeded, whnf_strict,
)
from forcett.syntax import (
    App, Bool, Empty, Fst, Generic, GenericAt, Hole, Lam, Mode, ModeViolation,
    N, N0, N1, N2, Nat, NotMP, One, Pair, Pi, Rec0, Rec1, Rec2, RecN, Sigma, Snd,
    Succ, Term, U, Unit, Univ, Var, Witness, WitnessAt, Zero, ONE, ZERO,
    abstract, constant_type, mode_violations, recn_step_type, shift, subst,
    var_type,
)


class TypeCheckError(Exception):
    def __init__(self, message: str, problem: Optional[ConvProblem] = None,
                 trace: tuple[str, ...] = ()):
        super().__init__(message)
        self.problem = problem
        self.trace = trace


class NoRuleApplies(TypeCheckError):
    pass


class TypeMismatch(TypeCheckError):
    pass


class ConversionFailure(TypeCheckError):
    pass


class InvalidPartition(TypeCheckError):
    pass


class _StuckAt(Exception):
    def __init__(self, index: int):
        super().__init__(index)
        self.index = index


_MAX_COMBOS = 64


# -- judgments and certificates ---------------------------------------------

FORMS = ("ctx", "type", "type-eq", "term", "term-eq")


@dataclass(frozen=True)
class Judgment:
    """One of the five judgment forms, annotated by a condition and a mode.

    ``lhs`` is the type (forms ``type``/``type-eq``) or the term (forms
    ``term``/``term-eq``); ``rhs`` is the other side of an equation and
    ``type`` the classifier of term judgments.  ``cover`` optionally lists
    the leaves of a partition to apply the locality rule with.
    """

    form: str
    context: tuple = ()
    lhs: Optional[Term] = None
    rhs: Optional[Term] = None
    type: Optional[Term] = None
    condition: Condition = EMPTY
    mode: Mode = Mode.FORCING
    cover: Optional[tuple[Condition, ...]] = None

    def __post_init__(self) -> None:
        if self.form not in FORMS:
            raise ValueError(f"unknown judgment form {self.form!r}")

    @classmethod
    def ctx(cls, context=(), **kw) -> "Judgment":
        return cls("ctx", tuple(context), **kw)

    @classmethod
    def is_type(cls, a: Term, context=(), **kw) -> "Judgment":
        return cls("type", tuple(context), a, **kw)

    @classmethod
    def type_eq(cls, a: Term, b: Term, context=(), **kw) -> "Judgment":
        return cls("type-eq", tuple(context), a, b, **kw)

    @classmethod
    def has_type(cls, t: Term, a: Term, context=(), **kw) -> "Judgment":
        return cls("term", tuple(context), t, None, a, **kw)

    @classmethod
    def term_eq(cls, t: Term, u: Term, a: Term, context=(), **kw) -> "Judgment":
        return cls("term-eq", tuple(context), t, u, a, **kw)

    def terms(self) -> Iterator[Term]:
        yield from self.context
        for t in (self.lhs, self.rhs, self.type):
            if t is not None:
                yield t

    def map_terms(self, fn: Callable[[Term], Term]) -> "Judgment":
        opt = lambda t: None if t is None else fn(t)  # noqa: E731
        return dc_replace(self, context=tuple(fn(a) for a in self.context),
                          lhs=opt(self.lhs), rhs=opt(self.rhs), type=opt(self.type))

    def at(self, condition: Condition, mode: Optional[Mode] = None) -> "Judgment":
        return dc_replace(self, condition=condition, mode=mode or self.mode, cover=None)


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    span: Optional[tuple[int, int]] = None
    problem: Optional[ConvProblem] = None
    condition: Optional[Condition] = None


@dataclass(frozen=True)
class Certificate:
    judgment: Judgment
    verdict: str
    trace: tuple[str, ...] = field(default=(), compare=False)
    partitions: tuple[Partition, ...] = field(default=(), compare=False)
    diagnostics: tuple[Diagnostic, ...] = field(default=(), compare=False)

    @property
    def accepted(self) -> bool:
        return self.verdict == "accept"

    def __bool__(self) -> bool:
        return self.accepted

    def replay(self, fuel: int = DEFAULT_FUEL) -> bool:
        return check_judgment(self.judgment, fuel).verdict == self.verdict


# -- the checker ------------------------------------------------------------


def _spine(t: Term) -> tuple[Term, list[Term]]:
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    return t, args[::-1]


def _peel(t: Term, k: int) -> Term:
    for _ in range(k):
        t = t.body
    return t


def _count_lams(t: Term) -> int:
    n = 0
    while isinstance(t, Lam):
        t, n = t.body, n + 1
    return n


def _instantiate(body: Term, args: list[Term]) -> Term:
    """Substitute closed-over ``args`` (all in the outer scope) for the binders."""
    k = len(args)
    for i in range(k - 1, -1, -1):
        body = subst(body, shift(args[i], i))
    return body


class Checker:
    def __init__(self, mode: Mode = Mode.FORCING, fuel: int = DEFAULT_FUEL,
                 max_splits: int = DEFAULT_SPLIT_DEPTH):
        self.mode = mode
        self.fuel = fuel
        self.max_splits = max_splits
        self.conv = Converter(mode, fuel, max_splits)
        self.trace: list[str] = []
        self.partitions: list[Partition] = []
        self._depth = 0

    def _whnf(self, t: Term, p: Condition):
        return whnf_strict(t, p, self.mode, self.fuel)

    def _loc(self, p: Condition, k: int, run: Callable[[Condition], None]) -> None:
        if self._depth >= self.max_splits:
            raise SplitDepthExceeded(f"more than {self.max_splits} locality splits")
        self.trace.append(f"loc {p} at {k}")
        self.partitions.append(Partition.split(p, k))
        self._depth += 1
        try:
            run(extend(p, k, 0))
            run(extend(p, k, 1))
        finally:
            self._depth -= 1

    def _constant(self, t: Term) -> Term:
        needs_many = isinstance(t, (GenericAt, WitnessAt, NotMP))
        if self.mode is Mode.PLAIN or (needs_many and self.mode is not Mode.MANY_REALS):
            raise ModeViolation(f"{t!r} is not available in {self.mode} mode")
        return constant_type(t)

    # -- contexts and types ---------------------------------------------------

    def check_ctx(self, ctx: tuple, p: Condition) -> None:
        for i, a in enumerate(ctx):
            self.check_type(ctx[:i], p, a)

    def check_type(self, ctx: tuple, p: Condition, a: Term) -> None:
        match a:
            case Univ() | Nat() | Empty() | Unit() | Bool():
                self.trace.append(f"{type(a).__name__}-F")
            case Pi(dom, cod) | Sigma(dom, cod):
                self.trace.append(f"{type(a).__name__}-F")
                self.check_type(ctx, p, dom)
                self.check_type(ctx + (dom,), p, cod)
            case _:
                self.trace.append("U-El")
                self.check(ctx, p, a, U)

    def convert_types(self, ctx: tuple, p: Condition, got: Term, want: Term) -> None:
        mark = len(self.conv.trace)
        if not self.conv.types(ctx, p, got, want):
            raise ConversionFailure(
                f"type mismatch at {p}", ConvProblem(ctx, p, got, want),
                tuple(self.conv.trace[mark:]))
        self.trace.append("conv")

    # -- checking -------------------------------------------------------------

    def check(self, ctx: tuple, p: Condition, t: Term, a: Term) -> None:
        wa = self._whnf(a, p)
        if wa.stuck_index is not None:
            self._loc(p, wa.stuck_index, lambda q: self.check(ctx, q, t, a))
            return
        ty = wa.result
        match t, ty:
            case Lam(body), Pi(dom, cod):
                self.trace.append("Π-I")
                self.check(ctx + (dom,), p, body, cod)
                return
            case Lam(), _:
                raise TypeMismatch(f"a lambda cannot have type {ty!r}")
            case Pair(x, y), Sigma(dom, cod):
                self.trace.append("Σ-I")
                self.check(ctx, p, x, dom)
                self.check(ctx, p, y, subst(cod, x))
                return
            case Zero(), Nat() | Unit() | Bool():
                self.trace.append(f"0-I:{type(ty).__name__}")
                return
            # a projection of a literal pair sits in a non-dependent Σ built around the goal
            case Fst(Pair(x, y)), _:
                self.trace.append("Σ-E1:pair")
                self.check(ctx, p, x, a)
                self.infer(ctx, p, y)
                return
            case Snd(Pair(x, y)), _:
                self.trace.append("Σ-E2:pair")
                self.infer(ctx, p, x)
                self.check(ctx, p, y, a)
                return
        head, args = _spine(t)
        if isinstance(head, Lam) and args and _count_lams(head) >= len(args):
            self._check_beta(ctx, p, head, args, a)
            return
        try:
            got = self.infer(ctx, p, t)
        except _StuckAt as e:
            self._loc(p, e.index, lambda q: self.check(ctx, q, t, a))
            return
        self.convert_types(ctx, p, got, a)

    # -- inference ------------------------------------------------------------

    def infer(self, ctx: tuple, p: Condition, t: Term) -> Term:
        match t:
            case Var(i):
                try:
                    return var_type(ctx, i)
                except IndexError as e:
                    raise NoRuleApplies(str(e)) from None
            case Univ():
                raise NoRuleApplies("U is a type but not an element of U")
            case Nat() | Empty() | Unit() | Bool():
                self.trace.append(f"{type(t).__name__}:U")
                return U
            case Zero():
                return N
            case One():
                return N2
            case Succ(n):
                self.trace.append("S-I")
                self.check(ctx, p, n, N)
                return N
            case Pi(dom, cod) | Sigma(dom, cod):
                self.trace.append(f"{type(t).__name__}:U")
                self.check(ctx, p, dom, U)
                self.check(ctx + (dom,), p, cod, U)
                return U
            case Lam():
                raise NoRuleApplies("cannot infer the type of an unannotated lambda")
            case Pair(x, y):
                self.trace.append("Σ-I(non-dependent)")
                return Sigma(self.infer(ctx, p, x), shift(self.infer(ctx, p, y), 1), "_")
            case Fst(e) | Snd(e):
                sig = self._whnf(self.infer(ctx, p, e), p)
                if sig.stuck_index is not None:
                    raise _StuckAt(sig.stuck_index)
                if not isinstance(sig.result, Sigma):
                    raise TypeMismatch(f"projection from non-Σ type {sig.result!r}")
                self.trace.append(f"Σ-E{1 if isinstance(t, Fst) else 2}")
                return sig.result.dom if isinstance(t, Fst) else subst(sig.result.cod, Fst(e))
            case Rec0(c):
                self.trace.append("N0-E")
                self.check_type(ctx + (N0,), p, c)
                return Pi(N0, c, t.name)
            case Rec1(c, x):
                self.trace.append("N1-E")
                self.check_type(ctx + (N1,), p, c)
                self.check(ctx, p, x, subst(c, ZERO))
                return Pi(N1, c, t.name)
            case Rec2(c, x0, x1):
                self.trace.append("N2-E")
                self.check_type(ctx + (N2,), p, c)
                self.check(ctx, p, x0, subst(c, ZERO))
                self.check(ctx, p, x1, subst(c, ONE))
                return Pi(N2, c, t.name)
            case RecN(c, z, s):
                self.trace.append("N-E")
                self.check_type(ctx + (N,), p, c)
                self.check(ctx, p, z, subst(c, ZERO))
                self.check(ctx, p, s, recn_step_type(c))
                return Pi(N, c, t.name)
            case App():
                head, args = _spine(t)
                if isinstance(head, Lam):
                    return self._infer_beta(ctx, p, head, args)
                return self._apply(ctx, p, self.infer(ctx, p, head), args)
            case Generic() | GenericAt():
                self.trace.append("f-I")
                return self._constant(t)
            case Witness() | WitnessAt():
                self.trace.append("w-term")
                return self._constant(t)
            case NotMP():
                self.trace.append("mw-term")
                return self._constant(t)
            case Hole():
                raise NoRuleApplies("a context hole is not a term")
        raise NoRuleApplies(f"no rule applies to {t!r}")

    def _apply(self, ctx: tuple, p: Condition, fn_ty: Term, args: list[Term]) -> Term:
        for arg in args:
            w = self._whnf(fn_ty, p)
            if w.stuck_index is not None:
                raise _StuckAt(w.stuck_index)
            if not isinstance(w.result, Pi):
                raise TypeMismatch(f"applying a term of non-Π type {w.result!r}")
            self.trace.append("Π-E")
            self.check(ctx, p, arg, w.result.dom)
            fn_ty = subst(w.result.cod, arg)
        return fn_ty

    # -- β-redexes ------------------------------------------------------------

    def _try_check(self, ctx: tuple, p: Condition, t: Term, a: Term) -> bool:
        mark, pmark = len(self.trace), len(self.partitions)
        try:
            self.check(ctx, p, t, a)
            return True
        except TypeCheckError:
            del self.trace[mark:], self.partitions[pmark:]
            return False

    def _arg_types(self, ctx: tuple, p: Condition, a: Term) -> list[Term]:
        """The inferred type of ``a``, plus N2 and N1 when ``0`` makes N ambiguous."""
        ty = self.infer(ctx, p, a)
        out = [ty]
        if ty == N:
            out += [b for b in (N2, N1) if self._try_check(ctx, p, a, b)]
        return out

    def _domains(self, ctx: tuple, p: Condition, args: list[Term]) -> list[list[Term]]:
        """Candidate domain lists for binders receiving ``args``."""
        out: list[list[Term]] = []
        for types in itertools.islice(
                itertools.product(*(self._arg_types(ctx, p, a) for a in args)), _MAX_COMBOS):
            plain = [shift(ty, i) for i, ty in enumerate(types)]
            abstracted = []
            for i, ty in enumerate(types):
                d = ty
                for j in range(i):
                    d = abstract(d, shift(args[j], j))
                abstracted.append(d)
            out += [abstracted, plain] if abstracted != plain else [plain]
        return out

    def _with_domains(self, ctx: tuple, p: Condition, args: list[Term],
                      run: Callable[[tuple], Term]) -> Term:
        error: Optional[TypeCheckError] = None
        for doms in self._domains(ctx, p, args):
            mark, pmark = len(self.trace), len(self.partitions)
            try:
                ext = tuple(ctx)
                for d in doms:
                    self.check_type(ext, p, d)
                    ext = ext + (d,)
                self.trace.append(f"β-domains x{len(doms)}")
                return run(ext)
            except TypeCheckError as e:
                del self.trace[mark:], self.partitions[pmark:]
                error = error or e
        raise error

    def _infer_beta(self, ctx: tuple, p: Condition, head: Lam, args: list[Term]) -> Term:
        k = min(_count_lams(head), len(args))
        body = _peel(head, k)
        if isinstance(body, Lam):
            raise NoRuleApplies("cannot infer the type of a partially applied lambda")
        inner = self._with_domains(ctx, p, args[:k], lambda ext: self.infer(ext, p, body))
        return self._apply(ctx, p, _instantiate(inner, args[:k]), args[k:])

    def _check_beta(self, ctx: tuple, p: Condition, head: Lam, args: list[Term],
                    a: Term) -> None:
        n = len(args)
        body = _peel(head, n)

        def run(ext: tuple) -> Term:
            self.check(ext, p, body, shift(a, n))
            return a

        self._with_domains(ctx, p, args, run)


# -- public entry points ----------------------------------------------------


def _reject(j: Judgment, checker: Optional[Checker], exc: Exception) -> Certificate:
    problem = getattr(exc, "problem", None)
    extra = tuple(getattr(exc, "trace", ()))
    diag = Diagnostic("error", f"{type(exc).__name__}: {exc}", problem=problem,
                      condition=problem.condition if problem else None)
    trace = tuple(checker.trace) + extra if checker else extra
    parts = tuple(checker.partitions) if checker else ()
    return Certificate(j, "reject", trace, parts, (diag,))


def _run(j: Judgment, checker: Checker) -> None:
    ctx, p = j.context, j.condition
    checker.check_ctx(ctx, p)
    if j.form == "type":
        checker.check_type(ctx, p, j.lhs)
    elif j.form == "type-eq":
        checker.check_type(ctx, p, j.lhs)
        checker.check_type(ctx, p, j.rhs)
        checker.convert_types(ctx, p, j.lhs, j.rhs)
    elif j.form == "term":
        checker.check_type(ctx, p, j.type)
        checker.check(ctx, p, j.lhs, j.type)
    elif j.form == "term-eq":
        checker.check_type(ctx, p, j.type)
        checker.check(ctx, p, j.lhs, j.type)
        checker.check(ctx, p, j.rhs, j.type)
        mark = len(checker.conv.trace)
        if not checker.conv.terms(ctx, p, j.lhs, j.rhs, j.type):
            raise ConversionFailure(
                f"terms are not equal at {p}",
                ConvProblem(ctx, p, j.lhs, j.rhs, j.type), tuple(checker.conv.trace[mark:]))
        checker.trace.append("conv")


def check_judgment(j: Judgment, fuel: int = DEFAULT_FUEL,
                   max_splits: int = DEFAULT_SPLIT_DEPTH) -> Certificate:
    """Check any judgment; never raises on ill-formed input."""
    if j.mode is Mode.PLAIN and j.condition != EMPTY:
        return _reject(j, None, TypeCheckError("plain-mode judgments carry no condition"))
    for t in j.terms():
        bad = mode_violations(t, j.mode)
        if bad:
            return _reject(j, None, ModeViolation(f"{bad[0]!r} is not available in {j.mode} mode"))
    checker = Checker(j.mode, fuel, max_splits)
    if j.cover is not None:
        tree = find_partition_witness(j.condition, j.cover)
        if tree is None:
            return _reject(j, checker, InvalidPartition(
                f"{', '.join(map(str, j.cover))} is not a partition of {j.condition}"))
        part = Partition.from_tree(tree)
        checker.partitions.append(part)
        checker.trace.append(f"loc cover of {j.condition}")
        leaves = [check_judgment(j.at(q), fuel, max_splits) for q in part.leaves]
        for cert in leaves:
            checker.trace.extend(cert.trace)
            checker.partitions.extend(cert.partitions)
        bad = [c for c in leaves if not c.accepted]
        if bad:
            diags = tuple(d for c in bad for d in c.diagnostics)
            return Certificate(j, "reject", tuple(checker.trace), tuple(checker.partitions), diags)
        return Certificate(j, "accept", tuple(checker.trace), tuple(checker.partitions))
    try:
        _run(j, checker)
    except (TypeCheckError, ModeViolation, FuelExhausted, SplitDepthExceeded) as e:
        return _reject(j, checker, e)
    return Certificate(j, "accept", tuple(checker.trace), tuple(checker.partitions))


def infer(ctx: tuple, p: Condition, t: Term, mode: Mode = Mode.FORCING,
          fuel: int = DEFAULT_FUEL) -> Term:
    """Infer a type of ``t``; raises :class:`TypeCheckError` when none exists."""
    checker = Checker(mode, fuel)
    try:
        return checker.infer(tuple(ctx), p, t)
    except _StuckAt as e:
        raise TypeCheckError(f"the type of {t!r} depends on bit {e.index}, unknown at {p}") from None


def check(ctx: tuple, p: Condition, t: Term, a: Term, mode: Mode = Mode.FORCING,
          fuel: int = DEFAULT_FUEL) -> Certificate:
    return check_judgment(Judgment.has_type(t, a, ctx, condition=p, mode=mode), fuel)


def check_type(ctx: tuple, p: Condition, a: Term, mode: Mode = Mode.FORCING,
               fuel: int = DEFAULT_FUEL) -> Certificate:
    return check_judgment(Judgment.is_type(a, ctx, condition=p, mode=mode), fuel)
