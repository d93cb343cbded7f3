"""Command line front end.

Exit status: 0 on success or PASS, 1 on FAIL/DISTINCT/rejected judgments,
2 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import perm
from .errors import ParseError, RescalcError, TypingError
from .multicat import coherence_report, from_judgment, sym_extract
from .parse import parse_context, parse_judgment, parse_signature, parse_type
from .rewrite import eta_measures, normalize, step_budget
from .signature import atoms_of, make_signature
from .syntax import System, judgment_str, to_str
from .typecheck import SYSTEM_KIND, check


class InputError(Exception):
    pass


# ------------------------------------------------------------ inputs

def _read_judgments(args, want):
    if args.file:
        try:
            with open(args.file, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as e:
            raise InputError(f"cannot read {args.file}: {e.strerror}") from e
        texts = [ln for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    else:
        texts = args.judgment if isinstance(args.judgment, list) else [args.judgment]
        texts = [t for t in texts if t]
    if len(texts) != want:
        raise InputError(f"expected {want} judgment(s), got {len(texts)}")
    return [parse_judgment(t) for t in texts]


def _type_atoms(types):
    out = set()
    for t in types:
        out.update(atoms_of(t))
    return out


def _signature(args, system, types):
    kind = SYSTEM_KIND[system]
    if args.sig:
        try:
            with open(args.sig, encoding="utf-8") as fh:
                return parse_signature(fh.read(), default_kind=kind)
        except OSError as e:
            raise InputError(f"cannot read {args.sig}: {e.strerror}") from e
    if args.atoms:
        atoms = [a.strip() for a in args.atoms.split(",") if a.strip()]
    else:
        atoms = sorted(_type_atoms(types))
    return make_signature(kind, atoms, {})


def _judgment_types(j):
    ctx, s, a = j
    types = [t for _, t in ctx] + [a]
    stack = [s]
    while stack:
        t = stack.pop()
        types.extend(b for _, b in getattr(t, "binders", ()))
        stack.extend(t.children)
    return types


def _parse_source(text):
    """``x:a, y:b`` or a bare list of types ``a, b``."""
    if ":" in text:
        return parse_context(text)
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur)
    return [parse_type(p) for p in parts]


# ------------------------------------------------------------ commands

def cmd_check(args, system, out):
    (j,) = _read_judgments(args, 1)
    ctx, s, a = j
    sig = _signature(args, system, _judgment_types(j))
    try:
        d = check(sig, system, ctx, s, a)
    except TypingError as e:
        out({"verdict": "REJECTED", "judgment": judgment_str(ctx, s, a), "error": str(e)},
            [f"REJECTED: {e}"])
        return 1
    out({"verdict": "OK", "derivation": d.to_json()}, ["OK"] + d.pretty().splitlines())
    return 0


def cmd_normalize(args, system, out):
    (j,) = _read_judgments(args, 1)
    ctx, s, a = j
    sig = _signature(args, system, _judgment_types(j))
    check(sig, system, ctx, s, a)
    nf, trace = normalize(sig, system, ctx, s)
    lines = [f"nf: {to_str(nf)}", f"steps: {len(trace.steps)}"]
    if args.trace:
        sz, e1, e2 = trace.initial_measures
        lines.append(f"start: size={sz} eta1={e1} eta2={e2}")
        lines += trace.lines(with_terms=args.terms)
    data = {"nf": to_str(nf), "steps": len(trace.steps)}
    if args.trace:
        data["trace"] = trace.to_json()
    out(data, lines)
    return 0


def cmd_equal(args, system, out):
    j1, j2 = _read_judgments(args, 2)
    sig = _signature(args, system, _judgment_types(j1) + _judgment_types(j2))
    f = from_judgment(sig, system, *j1)
    g = from_judgment(sig, system, *j2)
    same_hom = f.source == g.source and f.target == g.target
    equal = same_hom and f == g
    verdict = "EQUAL" if equal else "DISTINCT"
    c1, c2 = to_str(f.canon_nf), to_str(g.canon_nf)
    lines = [verdict, f"  first:  {c1}", f"  second: {c2}"]
    if not same_hom:
        lines.append("  (the judgments live in different hom-sets)")
    out({"verdict": verdict, "first": c1, "second": c2, "same_hom": same_hom}, lines)
    return 0 if equal else 1


def cmd_measures(args, system, out):
    (j,) = _read_judgments(args, 1)
    ctx, s, a = j
    sig = _signature(args, system, _judgment_types(j))
    check(sig, system, ctx, s, a)
    e1, e2 = eta_measures(sig, dict(ctx), s)
    budget = step_budget(s.size, e1, e2)
    out({"size": s.size, "eta1": e1, "eta2": e2, "budget": budget},
        [f"size={s.size} eta1={e1} eta2={e2} budget={budget}"])
    return 0


def cmd_coherence(args, system, out):
    source = _parse_source(args.context)
    src_types = [t if not isinstance(t, tuple) else t[1] for t in source]
    a = parse_type(args.type)
    sig = _signature(args, system, src_types + [a])
    rep = coherence_report(sig, system, source, a, args.bound)
    out(rep.to_json(), rep.lines())
    return 0 if rep.verdict else 1


def cmd_sym(args, system, out):
    (j,) = _read_judgments(args, 1)
    sig = _signature(args, system, _judgment_types(j))
    f = from_judgment(sig, system, *j)
    p = sym_extract(f)
    out({"sym": list(p.images), "nf": to_str(f.canon_nf)}, [f"sym: {p}", f"nf: {to_str(f.canon_nf)}"])
    return 0


def cmd_shuffles(args, system, out):
    try:
        profile = [int(x) for x in args.profile.split(",") if x.strip()]
    except ValueError as e:
        raise InputError(f"bad profile {args.profile!r}") from e
    if any(n < 0 for n in profile):
        raise InputError("profile entries must be natural numbers")
    shs = perm.enumerate_shuffles(profile)
    lines = [f"count: {len(shs)}"]
    if args.list:
        lines += [str(p) for p in shs]
    out({"profile": profile, "count": len(shs), "shuffles": [list(p.images) for p in shs]}, lines)
    return 0


COMMANDS = {
    "check": cmd_check,
    "normalize": cmd_normalize,
    "equal": cmd_equal,
    "measures": cmd_measures,
    "coherence": cmd_coherence,
    "sym": cmd_sym,
    "shuffles": cmd_shuffles,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", default="auto", choices=[s.value for s in System])
    common.add_argument("--sig", help="signature file")
    common.add_argument("--atoms", help="comma separated atoms (default: atoms of the input)")
    common.add_argument("--json", action="store_true", help="structured output")

    p = argparse.ArgumentParser(prog="rescalc", description="Resource calculi toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def judg(name, n, helptext):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("judgment", nargs="*" if n > 1 else "?",
                        help="judgment text 'x:a, ... |- s : b'")
        sp.add_argument("-f", "--file", help="file with one judgment per line")
        return sp

    judg("check", 1, "type check and print the derivation")
    sp = judg("normalize", 1, "normalize and optionally print the trace")
    sp.add_argument("--trace", action="store_true")
    sp.add_argument("--terms", action="store_true", help="include the term after each step")
    judg("equal", 2, "compare two judgments as morphisms")
    judg("measures", 1, "size and eta measures")
    judg("sym", 1, "underlying permutation of a symmetric representable morphism")
    sp = sub.add_parser("coherence", parents=[common], help="enumerate normal inhabitants")
    sp.add_argument("--context", required=True, help="'x:a, y:b' or 'a, b'")
    sp.add_argument("--type", required=True)
    sp.add_argument("--bound", type=int, default=64, help="size bound")
    sp = sub.add_parser("shuffles", parents=[common], help="shuffles of a profile")
    sp.add_argument("profile", help="comma separated block sizes, e.g. 2,1")
    sp.add_argument("--list", action="store_true")
    return p


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    system = System.parse(args.system)

    def out(data, lines):
        if args.json:
            stdout.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
        else:
            stdout.write("\n".join(lines) + "\n")

    try:
        return COMMANDS[args.command](args, system, out)
    except ParseError as e:
        out({"error": str(e), "kind": "ParseError"}, [f"parse error: {e}"])
    except InputError as e:
        out({"error": str(e), "kind": "InputError"}, [f"error: {e}"])
    except RescalcError as e:
        out({"error": str(e), "kind": type(e).__name__}, [f"error: {type(e).__name__}: {e}"])
    return 2


if __name__ == "__main__":
    sys.exit(main())
