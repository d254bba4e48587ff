"""Concrete syntax: terms, conditions, source files and a printer.

Terms::

    Pi (x : A) B    Sig (x : A) B    A -> B    lam x y. t    t u    (t, u)
    t.1  t.2        recN (x. C) z s  rec2 (x. C) a0 a1  rec1 (x. C) a  rec0 (x. C)
    U N N0 N1 N2    0 1 S t  7       f  w  mw  f[{0=1}]  w[{0=1}]   #3

``0`` is the shared zero of N, N1 and N2, ``1`` the second bit of N2, and a
numeral ``n >= 2`` abbreviates ``S (... (S 0))``; the numeral one is ``S 0``.
``#k`` names the free de Bruijn index ``k``.  Comments run from ``--`` to the
end of the line.

File items::

    def NAME [: TYPE] := TERM
    check [in (x : A, y : B)] FORM [at COND] [mode MODE] [cover COND ...]
    fuel N | split-depth N | scan-bound N | default-mode MODE

where FORM is ``wf``, ``type A``, ``type-eq A = B``, ``term t : A`` or
``term-eq t = u : A``, optionally wrapped in parentheses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from forcett.conditions import Condition
from forcett.reduction import DEFAULT_FUEL, DEFAULT_SPLIT_DEPTH
from forcett.syntax import (
    App, Bool, Empty, Fst, Generic, GenericAt, Hole, Lam, Mode, N, N0, N1, N2, Nat,
    NotMP, One, Pair, Pi, Rec0, Rec1, Rec2, RecN, Sigma, Snd, Succ, Term, U, Unit,
    Univ, Var, Witness, WitnessAt, Zero, GEN, IS_ZERO, MW, ONE, WIT, ZERO,
    as_numeral, dne_type, mp_type, numeral, occurs,
)
from forcett.typecheck import Judgment


class ParseError(ValueError):
    def __init__(self, message: str, span: tuple[int, int]):
        super().__init__(f"{span[0]}:{span[1]}: {message}")
        self.span = span


# -- tokens -----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<arrow>->)
  | (?P<assign>:=)
  | (?P<proj>\.[12](?![0-9]))
  | (?P<index>\#\d+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*(?:-[A-Za-z][A-Za-z0-9_']*)*)
  | (?P<punct>[().,:=\[\]{}])
""", re.VERBOSE)

KEYWORDS = frozenset({
    "lam", "Pi", "Sig", "recN", "rec2", "rec1", "rec0", "S", "U", "N", "N0", "N1",
    "N2", "f", "w", "mw", "def", "check", "in", "at", "mode", "cover", "wf", "type",
    "type-eq", "term", "term-eq", "fuel", "split-depth", "scan-bound", "default-mode",
})

_CONSTANTS = {"U": U, "N": N, "N0": N0, "N1": N1, "N2": N2, "f": GEN, "w": WIT, "mw": MW}

PRELUDE: dict[str, Term] = {"IsZero": IS_ZERO, "MP": mp_type(), "DNE": dne_type()}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.line, self.col)


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", (line, pos - line_start + 1))
        kind = m.lastgroup
        if kind != "ws":
            tok_kind = "kw" if kind == "ident" and m.group() in KEYWORDS else kind
            out.append(Token(tok_kind, m.group(), line, pos - line_start + 1))
        for i, ch in enumerate(m.group()):
            if ch == "\n":
                line, line_start = line + 1, pos + i + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


# -- file items -------------------------------------------------------------


@dataclass(frozen=True)
class Definition:
    name: str
    term: Term
    type: Optional[Term]
    span: tuple[int, int]


@dataclass(frozen=True)
class CheckItem:
    judgment: Judgment
    span: tuple[int, int]
    text: str = field(default="", compare=False)


@dataclass(frozen=True)
class Directive:
    name: str
    value: Union[int, Mode]
    span: tuple[int, int]


Item = Union[Definition, CheckItem, Directive]


@dataclass(frozen=True)
class SourceFile:
    items: tuple[Item, ...]

    @property
    def checks(self) -> tuple[CheckItem, ...]:
        return tuple(i for i in self.items if isinstance(i, CheckItem))

    @property
    def definitions(self) -> dict[str, Term]:
        return {i.name: i.term for i in self.items if isinstance(i, Definition)}

    def setting(self, name: str, default):
        """Last value of a directive, or ``default``."""
        vals = [i.value for i in self.items if isinstance(i, Directive) and i.name == name]
        return vals[-1] if vals else default

    @property
    def fuel(self) -> int:
        return self.setting("fuel", DEFAULT_FUEL)

    @property
    def split_depth(self) -> int:
        return self.setting("split-depth", DEFAULT_SPLIT_DEPTH)

    @property
    def scan_bound(self) -> int:
        return self.setting("scan-bound", 64)


# -- parser -----------------------------------------------------------------


_ATOM_START = {"ident", "num", "index"}
_ATOM_KW = {"U", "N", "N0", "N1", "N2", "f", "w", "mw"}


class Parser:
    def __init__(self, text: str, definitions: Optional[dict[str, Term]] = None):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.defs: dict[str, Term] = dict(PRELUDE)
        self.defs.update(definitions or {})

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("kw", "punct", "arrow", "assign", "proj")

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def fail(self, message: str):
        found = self.tok.text or "end of input"
        raise ParseError(f"{message}, found {found!r}", self.tok.span)

    def name(self) -> str:
        if self.tok.kind != "ident":
            self.fail("expected a name")
        return self.advance().text

    def binder(self) -> str:
        if self.tok.kind == "ident":
            return self.advance().text
        self.fail("expected a binder name")

    # -- terms

    def term(self, scope: list[str]) -> Term:
        if self.at("lam"):
            self.advance()
            names = [self.binder()]
            while self.tok.kind == "ident":
                names.append(self.advance().text)
            self.expect(".")
            body = self.term(scope + names)
            for nm in reversed(names):
                body = Lam(body, nm)
            return body
        if self.at("Pi") or self.at("Sig"):
            ctor = Pi if self.advance().text == "Pi" else Sigma
            self.expect("(")
            nm = self.binder()
            self.expect(":")
            dom = self.term(scope)
            self.expect(")")
            return ctor(dom, self.term(scope + [nm]), nm)
        lhs = self.app(scope)
        if self.at("->"):
            self.advance()
            return Pi(lhs, self.term(scope + ["_"]), "_")
        return lhs

    def _starts_arg(self) -> bool:
        t = self.tok
        if t.kind in _ATOM_START:
            return True
        return (t.kind == "kw" and t.text in _ATOM_KW | {"S", "recN", "rec2", "rec1", "rec0"}) \
            or (t.kind == "punct" and t.text == "(")

    def app(self, scope: list[str]) -> Term:
        head = self.head(scope)
        while self._starts_arg():
            head = App(head, self.arg(scope))
        return head

    def arg(self, scope: list[str]) -> Term:
        if self.at("S"):
            self.advance()
            return Succ(self.arg(scope))
        if self.at("recN") or self.at("rec2") or self.at("rec1") or self.at("rec0"):
            return self.recursor(scope)
        return self.postfix(scope)

    def head(self, scope: list[str]) -> Term:
        return self.arg(scope)

    def recursor(self, scope: list[str]) -> Term:
        kw = self.advance().text
        self.expect("(")
        nm = self.binder()
        self.expect(".")
        motive = self.term(scope + [nm])
        self.expect(")")
        n_args = {"rec0": 0, "rec1": 1, "rec2": 2, "recN": 2}[kw]
        args = [self.postfix(scope) for _ in range(n_args)]
        match kw:
            case "rec0":
                return Rec0(motive, nm)
            case "rec1":
                return Rec1(motive, args[0], nm)
            case "rec2":
                return Rec2(motive, args[0], args[1], nm)
        return RecN(motive, args[0], args[1], nm)

    def postfix(self, scope: list[str]) -> Term:
        t = self.atom(scope)
        while self.tok.kind == "proj":
            t = Fst(t) if self.advance().text == ".1" else Snd(t)
        return t

    def atom(self, scope: list[str]) -> Term:
        t = self.tok
        if t.kind == "num":
            self.advance()
            n = int(t.text)
            return ONE if n == 1 else numeral(n)
        if t.kind == "index":
            self.advance()
            return Var(int(t.text[1:]) + len(scope))
        if t.kind == "ident":
            self.advance()
            for depth, nm in enumerate(reversed(scope)):
                if nm == t.text and nm != "_":
                    return Var(depth)
            if t.text in self.defs:
                return self.defs[t.text]
            raise ParseError(f"unbound name {t.text!r}", t.span)
        if t.kind == "kw" and t.text in _ATOM_KW:
            self.advance()
            if t.text in ("f", "w") and self.at("["):
                self.advance()
                q = self.condition()
                self.expect("]")
                return GenericAt(q) if t.text == "f" else WitnessAt(q)
            return _CONSTANTS[t.text]
        if self.at("("):
            self.advance()
            a = self.term(scope)
            if self.at(","):
                self.advance()
                b = self.term(scope)
                self.expect(")")
                return Pair(a, b)
            self.expect(")")
            return a
        self.fail("expected a term")

    def condition(self) -> Condition:
        start = self.expect("{")
        pairs: dict[int, int] = {}
        while not self.at("}"):
            if pairs:
                self.expect(",")
            if self.tok.kind != "num":
                self.fail("expected an index")
            k = int(self.advance().text)
            self.expect("=")
            if self.tok.text not in ("0", "1"):
                self.fail("expected a bit")
            if k in pairs:
                raise ParseError(f"duplicate index {k} in condition", start.span)
            pairs[k] = int(self.advance().text)
        self.expect("}")
        return Condition.of(pairs)

    # -- files

    def source_file(self) -> SourceFile:
        items: list[Item] = []
        mode = Mode.FORCING
        seen: set[str] = set()
        while self.tok.kind != "eof":
            start = self.tok
            if self.at("def"):
                self.advance()
                nm = self.name()
                if nm in seen:
                    raise ParseError(f"duplicate definition {nm!r}", start.span)
                seen.add(nm)
                ty = None
                if self.at(":"):
                    self.advance()
                    ty = self.term([])
                self.expect(":=")
                body = self.term([])
                self.defs[nm] = body
                items.append(Definition(nm, body, ty, start.span))
                if ty is not None:
                    items.append(CheckItem(Judgment.has_type(body, ty, mode=mode), start.span,
                                           f"def {nm}"))
            elif self.at("check"):
                self.advance()
                j = self.judgment(mode)
                end = self.tok
                items.append(CheckItem(j, start.span, self._slice(start, end)))
            elif self.at("fuel") or self.at("split-depth") or self.at("scan-bound"):
                key = self.advance().text
                if self.tok.kind != "num":
                    self.fail("expected a number")
                items.append(Directive(key, int(self.advance().text), start.span))
            elif self.at("default-mode"):
                self.advance()
                mode = self.mode()
                items.append(Directive("default-mode", mode, start.span))
            else:
                self.fail("expected def, check or a directive")
        return SourceFile(tuple(items))

    def _slice(self, start: Token, end: Token) -> str:
        """Source text of an item, comments dropped and lines joined."""
        lines = self.text.splitlines()
        if start.line == end.line or end.kind == "eof" and start.line == len(lines):
            chunk = [lines[start.line - 1][start.col - 1:end.col - 1 if start.line == end.line else None]]
        else:
            chunk = [lines[start.line - 1][start.col - 1:]] + lines[start.line:end.line - 1]
        chunk = [re.sub(r"--.*", "", s).strip() for s in chunk]
        return " ".join(s for s in chunk if s)

    def mode(self) -> Mode:
        text = self.tok.text
        try:
            m = Mode(text)
        except ValueError:
            self.fail("expected plain, forcing or many-reals")
        self.advance()
        return m

    def judgment(self, default_mode: Mode) -> Judgment:
        ctx: list[Term] = []
        scope: list[str] = []
        if self.at("in"):
            self.advance()
            self.expect("(")
            while not self.at(")"):
                if ctx:
                    self.expect(",")
                nm = self.binder()
                self.expect(":")
                ctx.append(self.term(scope))
                scope.append(nm)
            self.expect(")")
        kind = self.tok.text if self.tok.kind == "kw" else ""
        if kind not in ("wf", "type", "type-eq", "term", "term-eq"):
            self.fail("expected wf, type, type-eq, term or term-eq")
        self.advance()
        if kind != "wf" and self.at("("):
            save = self.i
            try:
                self.advance()
                parts = self.form_body(kind, scope)
                self.expect(")")
            except ParseError:
                self.i = save
                parts = self.form_body(kind, scope)
        else:
            parts = self.form_body(kind, scope)
        cond, mode, cover = Condition(), default_mode, None
        while True:
            if self.at("at"):
                self.advance()
                cond = self.condition()
            elif self.at("mode"):
                self.advance()
                mode = self.mode()
            elif self.at("cover"):
                self.advance()
                leaves = [self.condition()]
                while self.at("{"):
                    leaves.append(self.condition())
                cover = tuple(leaves)
            else:
                break
        form = "ctx" if kind == "wf" else kind
        lhs, rhs, ty = parts
        return Judgment(form, tuple(ctx), lhs, rhs, ty, cond, mode, cover)

    def form_body(self, kind: str, scope: list[str]):
        match kind:
            case "wf":
                return None, None, None
            case "type":
                return self.term(scope), None, None
            case "type-eq":
                a = self.term(scope)
                self.expect("=")
                return a, self.term(scope), None
            case "term":
                t = self.term(scope)
                self.expect(":")
                return t, None, self.term(scope)
        t = self.term(scope)
        self.expect("=")
        u = self.term(scope)
        self.expect(":")
        return t, u, self.term(scope)


def parse_term(text: str, names: tuple[str, ...] = (),
               definitions: Optional[dict[str, Term]] = None) -> Term:
    """Parse a term; ``names`` lists the context, innermost last."""
    p = Parser(text, definitions)
    t = p.term(list(names))
    if p.tok.kind != "eof":
        p.fail("unexpected input after term")
    return t


def parse_condition(text: str) -> Condition:
    p = Parser(text)
    c = p.condition()
    if p.tok.kind != "eof":
        p.fail("unexpected input after condition")
    return c


def parse_file(text: str) -> SourceFile:
    return Parser(text).source_file()


# -- printer ----------------------------------------------------------------

_TERM, _APP, _ARG = 0, 1, 2


def fresh_name(base: str, used: set[str]) -> str:
    base = base if base and base != "_" and base not in KEYWORDS \
        and re.fullmatch(r"[A-Za-z][A-Za-z0-9_']*", base) and base not in PRELUDE else "x"
    name, k = base, 0
    while name in used:
        k += 1
        name = f"{base}{k}"
    return name


def _binder(name: str, body: Term, names: list[str]) -> str:
    if not occurs(body, 0) and name == "_":
        return "_"
    return fresh_name(name, set(names))


def show(t: Term, names: tuple[str, ...] = ()) -> str:
    """Print ``t`` so that ``parse_term`` reads it back, given the same ``names``."""
    return _show(t, list(names), _TERM)


def _paren(s: str, own: int, need: int) -> str:
    return f"({s})" if own < need else s


def _show(t: Term, names: list[str], need: int) -> str:
    if t == IS_ZERO and "IsZero" not in names:
        return "IsZero"
    match t:
        case Var(i):
            if i >= len(names):
                return f"#{i - len(names)}"
            nm = names[-1 - i]
            if nm == "_" or nm in names[len(names) - i:]:
                raise ValueError(f"variable #{i} is shadowed in {names}")
            return nm
        case Univ():
            return "U"
        case Nat():
            return "N"
        case Empty():
            return "N0"
        case Unit():
            return "N1"
        case Bool():
            return "N2"
        case Zero():
            return "0"
        case One():
            return "1"
        case Generic():
            return "f"
        case Witness():
            return "w"
        case NotMP():
            return "mw"
        case GenericAt(q):
            return f"f[{q}]"
        case WitnessAt(q):
            return f"w[{q}]"
        case Hole():
            return "[]"
        case Succ(pred):
            n = as_numeral(t)
            if n is not None and n != 1:
                return str(n)
            return _paren(f"S {_show(pred, names, _ARG)}", _APP, need)
        case Pair(a, b):
            return f"({_show(a, names, _TERM)}, {_show(b, names, _TERM)})"
        case Fst(e):
            return f"{_show(e, names, _ARG)}.1"
        case Snd(e):
            return f"{_show(e, names, _ARG)}.2"
        case Lam():
            bound: list[str] = []
            body: Term = t
            while isinstance(body, Lam):
                nm = _binder(body.name, body.body, names + bound)
                bound.append(nm)
                body = body.body
            return _paren(f"lam {' '.join(bound)}. {_show(body, names + bound, _TERM)}", _TERM, need)
        case Pi(a, b, name=nm) if not occurs(b, 0):
            s = f"{_show(a, names, _APP)} -> {_show(b, names + ['_'], _TERM)}"
            return _paren(s, _TERM, need)
        case Pi(a, b, name=nm) | Sigma(a, b, name=nm):
            kw = "Pi" if isinstance(t, Pi) else "Sig"
            x = _binder(nm, b, names)
            if x == "_":
                x = fresh_name("x", set(names))
            s = f"{kw} ({x} : {_show(a, names, _TERM)}) {_show(b, names + [x], _TERM)}"
            return _paren(s, _TERM, need)
        case Rec0() | Rec1() | Rec2() | RecN():
            x = fresh_name(t.name, set(names))
            head = {Rec0: "rec0", Rec1: "rec1", Rec2: "rec2", RecN: "recN"}[type(t)]
            parts = [f"{head} ({x}. {_show(t.motive, names + [x], _TERM)})"]
            match t:
                case Rec1(_, a):
                    parts.append(_show(a, names, _ARG))
                case Rec2(_, a0, a1):
                    parts += [_show(a0, names, _ARG), _show(a1, names, _ARG)]
                case RecN(_, z, s):
                    parts += [_show(z, names, _ARG), _show(s, names, _ARG)]
            return _paren(" ".join(parts), _APP, need)
        case App():
            spine: list[Term] = []
            h: Term = t
            while isinstance(h, App):
                spine.append(h.arg)
                h = h.fn
            head_need = _APP if isinstance(h, (Rec0, Rec1, Rec2, RecN)) else _ARG
            parts = [_show(h, names, head_need)] + [_show(a, names, _ARG) for a in reversed(spine)]
            return _paren(" ".join(parts), _APP, need)
    raise TypeError(f"cannot print {t!r}")


def show_judgment(j: Judgment) -> str:
    names: list[str] = []
    ctx_parts = []
    for a in j.context:
        nm = fresh_name("x", set(names))
        ctx_parts.append(f"{nm} : {show(a, tuple(names))}")
        names.append(nm)
    ns = tuple(names)
    body = {
        "ctx": lambda: "wf",
        "type": lambda: f"type {show(j.lhs, ns)}",
        "type-eq": lambda: f"type-eq {show(j.lhs, ns)} = {show(j.rhs, ns)}",
        "term": lambda: f"term {show(j.lhs, ns)} : {show(j.type, ns)}",
        "term-eq": lambda: f"term-eq {show(j.lhs, ns)} = {show(j.rhs, ns)} : {show(j.type, ns)}",
    }[j.form]()
    out = "check "
    if ctx_parts:
        out += f"in ({', '.join(ctx_parts)}) "
    out += f"{body} at {j.condition} mode {j.mode}"
    if j.cover is not None:
        out += " cover " + " ".join(map(str, j.cover))
    return out
