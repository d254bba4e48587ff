"""Command-line front end: ``forcett COMMAND ...``.

Exit status is 0 when everything is accepted, 1 when some judgment is
rejected (or no refutation is found, or evaluation runs out of fuel) and
2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

from forcett.conditions import Condition, Partition
from forcett.conversion import ConvProblem, conv
from forcett.reduction import (
    Canonical, DEFAULT_FUEL, DEFAULT_SPLIT_DEPTH, FuelExhausted, Improper, Neutral,
    ProperStuck, SplitDepthExceeded, WhnfOutcome, partition_eval, whnf,
)
from forcett.semantics import (
    CannotRefute, GenericInstanceError, RefutationCertificate, TranslationError,
    build_generic_instance, conservativity_translate, refute_sigma,
)
from forcett.surface import (
    CheckItem, ParseError, fresh_name, parse_condition, parse_file, parse_term, show,
    show_judgment,
)
from forcett.syntax import Mode, ModeViolation, Term
from forcett.typecheck import Certificate, Diagnostic, Judgment, check_judgment

EXIT_OK, EXIT_REJECT, EXIT_USAGE = 0, 1, 2


# -- serialization ----------------------------------------------------------


def _names(n: int) -> list[str]:
    names: list[str] = []
    for _ in range(n):
        names.append(fresh_name("x", set(names)))
    return names


def _opt(t: Optional[Term], names: Sequence[str]) -> Optional[str]:
    return None if t is None else show(t, tuple(names))


def judgment_dict(j: Judgment) -> dict:
    names = _names(len(j.context))
    return {
        "form": j.form,
        "context": [[names[i], show(a, tuple(names[:i]))] for i, a in enumerate(j.context)],
        "lhs": _opt(j.lhs, names),
        "rhs": _opt(j.rhs, names),
        "type": _opt(j.type, names),
        "condition": str(j.condition),
        "mode": str(j.mode),
        "cover": None if j.cover is None else [str(c) for c in j.cover],
    }


def partition_dict(part: Partition) -> dict:
    return {"root": str(part.root), "leaves": [str(c) for c in part.leaves]}


def _problem_dict(problem: Optional[ConvProblem]) -> Optional[dict]:
    if problem is None:
        return None
    names = _names(len(problem.context))
    return {
        "context": [[names[i], show(a, tuple(names[:i]))] for i, a in enumerate(problem.context)],
        "condition": str(problem.condition),
        "lhs": show(problem.lhs, tuple(names)),
        "rhs": show(problem.rhs, tuple(names)),
        "classifier": _opt(problem.classifier, names),
    }


def diagnostic_dict(d: Diagnostic) -> dict:
    return {
        "severity": d.severity,
        "message": d.message,
        "span": None if d.span is None else list(d.span),
        "condition": None if d.condition is None else str(d.condition),
        "problem": _problem_dict(d.problem),
    }


def certificate_dict(cert: Certificate, span=None) -> dict:
    return {
        "kind": "judgment",
        "verdict": cert.verdict,
        "span": None if span is None else list(span),
        "judgment": judgment_dict(cert.judgment),
        "trace": list(cert.trace),
        "partitions": [partition_dict(p) for p in cert.partitions],
        "diagnostics": [diagnostic_dict(d) for d in cert.diagnostics],
    }


def refutation_dict(r) -> dict:
    if isinstance(r, CannotRefute):
        return {"kind": "cannot-refute", "candidate": show(r.candidate), "reason": r.reason}
    return {
        "kind": "refutation",
        "candidate": show(r.candidate),
        "condition": str(r.condition),
        "numeral": r.numeral,
        "generic": show(r.generic),
        "mode": str(r.mode),
        "partition": None if r.partition is None else partition_dict(r.partition),
        "replays": r.replay(),
    }


def _class_name(out: WhnfOutcome) -> str:
    if out.exhausted:
        return "exhausted"
    return {Canonical: "canonical", ProperStuck: "proper-stuck", Neutral: "neutral",
            Improper: "improper"}[type(out.cls)]


def whnf_dict(out: WhnfOutcome, p: Condition) -> dict:
    return {
        "condition": str(p),
        "term": show(out.result),
        "class": _class_name(out),
        "stuck_index": out.stuck_index,
        "steps": out.steps,
    }


def _emit(args, payload, text_lines: Sequence[str]) -> None:
    if args.emit == "json":
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        for line in text_lines:
            print(line)


def _cert_text(cert: Certificate, label: str) -> list[str]:
    lines = [f"{cert.verdict}  {label}"]
    for d in cert.diagnostics:
        where = f" at {d.condition}" if d.condition is not None else ""
        lines.append(f"  {d.severity}{where}: {d.message}")
        if d.problem is not None:
            pd = _problem_dict(d.problem)
            lines.append(f"    {pd['lhs']}  =/=  {pd['rhs']}")
    return lines


def _with_span(cert: Certificate, span) -> Certificate:
    diags = tuple(Diagnostic(d.severity, d.message, d.span or span, d.problem, d.condition)
                  for d in cert.diagnostics)
    return Certificate(cert.judgment, cert.verdict, cert.trace, cert.partitions, diags)


# -- commands ---------------------------------------------------------------


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def check_items(items: Sequence[CheckItem], fuel: int, split_depth: int, jobs: int = 1) -> list[Certificate]:
    """Check items, concurrently when ``jobs > 1``; results keep source order."""
    run = lambda item: _with_span(check_judgment(item.judgment, fuel, split_depth), item.span)  # noqa: E731
    if jobs <= 1:
        return [run(i) for i in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run, items))


def cmd_check(args) -> int:
    sf = parse_file(_read(args.file))
    fuel = args.fuel or sf.fuel
    depth = args.split_depth or sf.split_depth
    certs = check_items(sf.checks, fuel, depth, args.jobs)
    payload = [certificate_dict(c, i.span) for c, i in zip(certs, sf.checks)]
    lines: list[str] = []
    for c, i in zip(certs, sf.checks):
        lines += _cert_text(c, f"{args.file}:{i.span[0]}: {i.text or show_judgment(c.judgment)}")
    accepted = sum(c.accepted for c in certs)
    lines.append(f"{accepted}/{len(certs)} accepted")
    _emit(args, payload, lines)
    return EXIT_OK if accepted == len(certs) else EXIT_REJECT


def cmd_whnf(args) -> int:
    p = parse_condition(args.cond)
    out = whnf(parse_term(args.term), p, Mode(args.mode), args.fuel or DEFAULT_FUEL)
    lines = [show(out.result)]
    if out.stuck_index is not None:
        lines.append(f"  stuck on f {out.stuck_index} at {p}")
    if out.exhausted:
        lines.append(f"  no whnf within {out.steps} steps")
    _emit(args, whnf_dict(out, p), lines)
    return EXIT_REJECT if out.exhausted else EXIT_OK


def cmd_partition_eval(args) -> int:
    p = parse_condition(args.cond)
    ev = partition_eval(parse_term(args.term), p, Mode(args.mode), args.fuel or DEFAULT_FUEL,
                        args.split_depth or DEFAULT_SPLIT_DEPTH)
    payload = {"partition": partition_dict(ev.partition),
               "leaves": [whnf_dict(out, c) for c, out in ev.leaves]}
    lines = [f"{c} -> {show(out.result)}" for c, out in ev.leaves]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_conv(args) -> int:
    p = parse_condition(args.cond)
    ty = parse_term(args.type) if args.type else None
    problem = ConvProblem((), p, parse_term(args.lhs), parse_term(args.rhs), ty)
    res = conv(problem, args.fuel or DEFAULT_FUEL, Mode(args.mode),
               args.split_depth or DEFAULT_SPLIT_DEPTH)
    payload = {"equal": res.ok, "problem": _problem_dict(problem), "trace": list(res.trace)}
    _emit(args, payload, ["true" if res.ok else "false"] + [f"  {s}" for s in res.trace])
    return EXIT_OK if res.ok else EXIT_REJECT


def cmd_refute_sigma(args) -> int:
    q = parse_condition(args.q) if args.q else None
    r = refute_sigma(parse_term(args.term), args.fuel or DEFAULT_FUEL, q)
    if isinstance(r, RefutationCertificate):
        lines = [f"refuted at {r.condition}: first component is {r.numeral}, "
                 f"IsZero ({show(r.generic)} {r.numeral}) is N0 there"]
    else:
        lines = [f"cannot refute: {r.reason}"]
    _emit(args, refutation_dict(r), lines)
    return EXIT_OK if isinstance(r, RefutationCertificate) else EXIT_REJECT


def cmd_conservativity(args) -> int:
    sf = parse_file(_read(args.file))
    fuel = args.fuel or sf.fuel
    depth = args.split_depth or sf.split_depth
    g = parse_term(args.generic, definitions=sf.definitions)
    try:
        inst = build_generic_instance(g, parse_condition(args.cond), args.scan_bound or sf.scan_bound, fuel)
    except GenericInstanceError as e:
        _emit(args, {"kind": "instance-error", "message": str(e)}, [f"error: {e}"])
        return EXIT_REJECT
    payload: list[dict] = []
    lines = [f"g = {show(inst.g)}, n_g = {inst.n_g}, v_g = {show(inst.v_g)}"]
    ok = True
    for item in sf.checks:
        j = item.judgment
        if j.mode is not Mode.FORCING or not check_judgment(j, fuel, depth).accepted:
            lines.append(f"skipped  {item.text}")
            continue
        try:
            translated = conservativity_translate(j, inst)
        except TranslationError as e:
            ok = False
            lines.append(f"error  {item.text}: {e}")
            payload.append({"kind": "translation-error", "span": list(item.span), "message": str(e)})
            continue
        cert = _with_span(check_judgment(translated, fuel, depth), item.span)
        ok = ok and cert.accepted
        payload.append(certificate_dict(cert, item.span))
        lines += _cert_text(cert, show_judgment(translated))
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_REJECT


# -- argument parsing -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="forcett", description="Type checker and evaluator for type theory with a generic Cohen real.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, cond=True, mode=True):
        if cond:
            p.add_argument("--cond", default="{}", help="forcing condition, e.g. {0=1,3=0}")
        if mode:
            p.add_argument("--mode", default="forcing", choices=[m.value for m in Mode])
        p.add_argument("--fuel", type=int, default=None, help=f"step bound (default {DEFAULT_FUEL})")
        p.add_argument("--split-depth", type=int, default=None,
                       help=f"maximal nesting of condition splits (default {DEFAULT_SPLIT_DEPTH})")
        p.add_argument("--emit", choices=["text", "json"], default="text")

    p = sub.add_parser("check", help="check every judgment in a file")
    p.add_argument("file")
    p.add_argument("--jobs", type=int, default=1, help="check items concurrently")
    common(p, cond=False, mode=False)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("whnf", help="weak head normal form at a condition")
    p.add_argument("term")
    common(p)
    p.set_defaults(run=cmd_whnf)

    p = sub.add_parser("partition-eval", help="evaluate over the partition the term's stuck points induce")
    p.add_argument("term")
    common(p)
    p.set_defaults(run=cmd_partition_eval)

    p = sub.add_parser("conv", help="decide judgmental equality at a condition")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--type", default=None, help="compare as terms of this type (default: as types)")
    common(p)
    p.set_defaults(run=cmd_conv)

    p = sub.add_parser("refute-sigma", help="show a closed term is not a witness of Sig (x : N) IsZero (f x)")
    p.add_argument("term")
    p.add_argument("--q", default=None, help="use the generic point f[q] instead of f")
    common(p, cond=False, mode=False)
    p.set_defaults(run=cmd_refute_sigma)

    p = sub.add_parser("conservativity", help="replace f and w by a concrete function and re-check in plain mode")
    p.add_argument("file")
    p.add_argument("--generic", required=True, help="closed term g : N -> N2")
    p.add_argument("--scan-bound", type=int, default=None)
    common(p, mode=False)
    p.set_defaults(run=cmd_conservativity)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ModeViolation, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (FuelExhausted, SplitDepthExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_REJECT


if __name__ == "__main__":
    sys.exit(main())
