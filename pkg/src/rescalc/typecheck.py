"""Syntax-directed type checking for the four systems.

At every merging node the premise contexts are the order-preserving
restrictions of the conclusion context to each premise's free variables, so
the shuffle recording the interleaving is forced. In ``rep`` that shuffle must
be the identity.

The explicit-substitution rule leaves the split of the remaining context into
a left and right part free. We fix it (``esub_cut``) so that every judgment
has exactly one derivation; in ``rep`` the fixed split is the only one that can
succeed anyway.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import perm
from .errors import (ContextMismatch, FragmentViolation, InvalidType, NotLinear,
                     NotSymmetricSystem, ShuffleViolation, TypeMismatch)
from .signature import Arrow, Kind, Tensor, atoms_of, kind_valid, strictify, type_size  # noqa: F401
from .syntax import (Abs, App, ESub, Gen, Lst, System, Var, fragment_violation,
                     judgment_str, linearity_violation)

SYSTEM_KIND = {
    System.REP: Kind.REPRESENTABLE,
    System.SYMREP: Kind.REPRESENTABLE,
    System.SYMCLOSED: Kind.CLOSED,
    System.AUTO: Kind.AUTONOMOUS,
}


@dataclass(frozen=True)
class Derivation:
    rule: str
    ctx: tuple
    term: object
    type: object
    premises: tuple
    shuffle: perm.Permutation
    blocks: tuple
    system: System

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()

    def pretty(self, indent=0):
        pad = "  " * indent
        blocks = "[" + ",".join(map(str, self.blocks)) + "]"
        sh = "" if self.rule in ("var", "abs") else f"  shuffle={self.shuffle} blocks={blocks}"
        lines = [f"{pad}{self.rule}: {judgment_str(self.ctx, self.term, self.type)}{sh}"]
        for p in self.premises:
            lines.append(p.pretty(indent + 1))
        return "\n".join(lines)

    def to_json(self):
        return {
            "rule": self.rule,
            "judgment": judgment_str(self.ctx, self.term, self.type),
            "shuffle": list(self.shuffle.images),
            "blocks": list(self.blocks),
            "premises": [p.to_json() for p in self.premises],
        }


def restrict(ctx, names):
    names = set(names)
    return tuple(b for b in ctx if b[0] in names)


def natural_order(s):
    """Variable order of the context built with identity shuffles everywhere."""
    if isinstance(s, Var):
        return [s.name]
    if isinstance(s, Abs):
        bound = set(s.names)
        return [v for v in natural_order(s.body) if v not in bound]
    if isinstance(s, ESub):
        body = natural_order(s.body)
        bound = set(s.names)
        if bound:
            first = next(i for i, v in enumerate(body) if v in bound)
        else:
            first = len(body)
        left = [v for v in body[:first] if v not in bound]
        right = [v for v in body[first:] if v not in bound]
        return left + natural_order(s.arg) + right
    out = []
    for c in s.children:
        out.extend(natural_order(c))
    return out


def esub_cut(ctx, s):
    """Length of the left part of the remaining context for ``s = ESub``."""
    gamma = set(s.arg.fv)
    bound = set(s.names)
    rest = [x for x, _ in ctx if x not in gamma]
    if gamma:
        n = 0
        for x, _ in ctx:
            if x in gamma:
                return n
            n += 1
    if bound:
        order = natural_order(s.body)
        first = next(i for i, v in enumerate(order) if v in bound)
        return sum(1 for v in order[:first] if v not in bound)
    return len(rest)


def _merge_shuffle(ctx, premise_ctxs):
    index = {x: i for i, (x, _) in enumerate(ctx, 1)}
    images = tuple(index[x] for pc in premise_ctxs for x, _ in pc)
    return perm.Permutation._raw(images), tuple(len(pc) for pc in premise_ctxs)


class Checker:
    def __init__(self, sig, system):
        self.sig = sig
        self.system = System.parse(system)
        self.kind = SYSTEM_KIND[self.system]
        self._ok = set()

    def valid(self, t, path):
        if t in self._ok:
            return
        if not all(n in self.sig.atoms for n in atoms_of(t)):
            raise InvalidType(f"type {t} uses an atom outside the signature", path)
        if not kind_valid(self.kind, t):
            raise InvalidType(f"type {t} is not valid in system {self.system.value}", path)
        self._ok.add(t)

    def node(self, rule, ctx, s, a, premises, path, shuffle=None, blocks=None):
        if shuffle is None:
            shuffle = perm.identity(len(ctx))
            blocks = (len(ctx),)
        elif self.system is System.REP and not shuffle.is_identity():
            raise ShuffleViolation(
                f"contexts of {rule} premises are not concatenated in order (shuffle {shuffle})", path)
        return Derivation(rule, tuple(ctx), s, a, tuple(premises), shuffle, tuple(blocks), self.system)

    def merge(self, rule, ctx, s, kids, path, offset=0):
        pctx = [restrict(ctx, c.fv) for c in kids]
        prem = [self.derive(pc, c, path + (i + offset,)) for i, (pc, c) in enumerate(zip(pctx, kids))]
        sh, blocks = _merge_shuffle(ctx, pctx)
        return prem, sh, blocks

    def derive(self, ctx, s, path=()):
        if isinstance(s, Var):
            if len(ctx) != 1 or ctx[0][0] != s.name:
                raise ContextMismatch(f"variable {s.name} needs the context [{s.name}]", path)
            return self.node("var", ctx, s, ctx[0][1], (), path)
        if isinstance(s, Lst):
            prem, sh, bl = self.merge("list", ctx, s, s.items, path)
            return self.node("list", ctx, s, Tensor(tuple(p.type for p in prem)), prem, path, sh, bl)
        if isinstance(s, Gen):
            if s.name not in self.sig.arrows:
                raise TypeMismatch(f"unknown generator {s.name}", path)
            srcs, tgt = self.sig.arrows[s.name]
            for t in (*srcs, tgt):
                if not kind_valid(self.kind, t):
                    raise FragmentViolation(f"generator {s.name} has a type outside {self.system.value}", path)
            if len(srcs) != len(s.args):
                raise TypeMismatch(f"generator {s.name} expects {len(srcs)} arguments, got {len(s.args)}", path)
            prem, sh, bl = self.merge("gen", ctx, s, s.args, path)
            for i, (p, want) in enumerate(zip(prem, srcs)):
                if p.type != want:
                    raise TypeMismatch(f"argument {i + 1} of {s.name} has type {p.type}, expected {want}", path)
            return self.node("gen", ctx, s, tgt, prem, path, sh, bl)
        if isinstance(s, App):
            prem, sh, bl = self.merge("app", ctx, s, s.children, path)
            ft = prem[0].type
            if not isinstance(ft, Arrow):
                raise TypeMismatch(f"applied term has type {ft}, not an arrow", path)
            if len(ft.args) != len(s.args):
                raise TypeMismatch(f"function of type {ft} applied to {len(s.args)} arguments", path)
            for i, (p, want) in enumerate(zip(prem[1:], ft.args)):
                if p.type != want:
                    raise TypeMismatch(f"argument {i + 1} has type {p.type}, expected {want}", path)
            return self.node("app", ctx, s, ft.result, prem, path, sh, bl)
        if isinstance(s, Abs):
            for x, t in s.binders:
                self.valid(t, path)
                if any(x == y for y, _ in ctx):
                    raise NotLinear(f"binder {x} clashes with a context variable", path)
            body = self.derive(tuple(ctx) + s.binders, s.body, path + (0,))
            return self.node("abs", ctx, s, Arrow(tuple(t for _, t in s.binders), body.type), (body,), path)
        if isinstance(s, ESub):
            for x, t in s.binders:
                self.valid(t, path)
                if any(x == y for y, _ in ctx):
                    raise NotLinear(f"binder {x} clashes with a context variable", path)
            gamma = restrict(ctx, s.arg.fv)
            gset = set(s.arg.fv)
            rest = tuple(b for b in ctx if b[0] not in gset)
            c = esub_cut(ctx, s)
            body_ctx = rest[:c] + s.binders + rest[c:]
            arg = self.derive(gamma, s.arg, path + (1,))
            want = Tensor(tuple(t for _, t in s.binders))
            if arg.type != want:
                raise TypeMismatch(f"substituted term has type {arg.type}, binders expect {want}", path)
            body = self.derive(body_ctx, s.body, path + (0,))
            sh, bl = _merge_shuffle(ctx, [rest[:c], gamma, rest[c:]])
            return self.node("esub", ctx, s, body.type, (body, arg), path, sh, bl)
        raise TypeError(f"not a term: {s!r}")


def _validate(sig, system, ctx, s):
    system = System.parse(system)
    chk = Checker(sig, system)
    names = [x for x, _ in ctx]
    if len(set(names)) != len(names):
        raise ContextMismatch("context repeats a variable")
    for _, t in ctx:
        chk.valid(t, ())
    bad = fragment_violation(s, system)
    if bad:
        raise FragmentViolation(bad[1], bad[0])
    bad = linearity_violation(s)
    if bad:
        raise NotLinear(bad[1], bad[0])
    if set(names) != set(s.fv):
        raise ContextMismatch(
            f"context variables {sorted(names)} differ from free variables {sorted(s.fv)}")
    return chk


def check(sig, system, ctx, s, a):
    """Return the derivation of ``ctx |- s : a`` or raise a TypingError."""
    ctx = tuple(ctx)
    chk = _validate(sig, system, ctx, s)
    chk.valid(a, ())
    d = chk.derive(ctx, s)
    if d.type != a:
        raise TypeMismatch(f"term has type {d.type}, expected {a}", ())
    return d


def infer(sig, system, s, env=None):
    """Context in natural order, type and derivation.

    Free variables carry no annotation in the term, so their types come from
    ``env`` (a mapping name -> type).
    """
    env = env or {}
    missing = [x for x in s.fv if x not in env]
    if missing:
        raise ContextMismatch(f"no type given for free variable {missing[0]}")
    ctx = tuple((x, env[x]) for x in natural_order(s))
    chk = _validate(sig, system, ctx, s)
    d = chk.derive(ctx, s)
    return ctx, d.type, d


def synth(s, env, sig=None, record=None, path=()):
    """Type of ``s`` from free-variable types alone, trusting well-typedness.

    With ``record`` a dict, also stores the type of every subterm by path.
    """
    if isinstance(s, Var):
        t = env[s.name]
    elif isinstance(s, Lst):
        t = Tensor(tuple(synth(c, env, sig, record, path + (i,)) for i, c in enumerate(s.items)))
    elif isinstance(s, ESub):
        synth(s.arg, env, sig, record, path + (1,))
        inner = dict(env)
        inner.update(s.binders)
        t = synth(s.body, inner, sig, record, path + (0,))
    elif isinstance(s, Abs):
        inner = dict(env)
        inner.update(s.binders)
        t = Arrow(tuple(a for _, a in s.binders), synth(s.body, inner, sig, record, path + (0,)))
    elif isinstance(s, App):
        ft = synth(s.fun, env, sig, record, path + (0,))
        for i, c in enumerate(s.args):
            synth(c, env, sig, record, path + (i + 1,))
        t = ft.result
    else:
        for i, c in enumerate(s.args):
            synth(c, env, sig, record, path + (i,))
        t = sig.arrows[s.name][1]
    if record is not None:
        record[path] = t
    return t


def admissible_permute(d, sigma):
    """Derivation of ``act(ctx, sigma) |- s : a`` built from ``d``."""
    if not d.system.symmetric:
        raise NotSymmetricSystem("permutation is admissible only in symmetric systems")
    if sigma.degree != len(d.ctx):
        raise perm.DegreeMismatch(f"permutation of degree {sigma.degree} on a context of length {len(d.ctx)}")
    if sigma.is_identity():
        return d
    new_ctx = tuple(perm.act(d.ctx, sigma))
    if d.rule == "var":
        raise AssertionError("a one-variable context has no nontrivial permutation")
    if d.rule == "abs":
        k = len(d.term.binders)
        body = admissible_permute(d.premises[0], perm.block_sum([sigma, perm.identity(k)]))
        return Derivation("abs", new_ctx, d.term, d.type, (body,), perm.identity(len(new_ctx)),
                          (len(new_ctx),), d.system)
    if d.rule == "esub":
        return _permute_esub(d, new_ctx)
    tau0, parts = perm.shuffle_decompose(perm.compose(sigma.inverse(), d.shuffle), d.blocks)
    prem = tuple(admissible_permute(p, lam.inverse()) for p, lam in zip(d.premises, parts))
    return Derivation(d.rule, new_ctx, d.term, d.type, prem, tau0, d.blocks, d.system)


def _reindex(old, new):
    """Permutation rho with ``act(old, rho) == new``."""
    index = {x: i for i, (x, _) in enumerate(old, 1)}
    return perm.Permutation([index[x] for x, _ in new])


def _permute_esub(d, new_ctx):
    s = d.term
    body_d, arg_d = d.premises
    gset = set(s.arg.fv)
    gamma = restrict(new_ctx, gset)
    rest = tuple(b for b in new_ctx if b[0] not in gset)
    c = esub_cut(new_ctx, s)
    body_ctx = rest[:c] + s.binders + rest[c:]
    body = admissible_permute(body_d, _reindex(body_d.ctx, body_ctx))
    arg = admissible_permute(arg_d, _reindex(arg_d.ctx, gamma))
    sh, bl = _merge_shuffle(new_ctx, [rest[:c], gamma, rest[c:]])
    return Derivation("esub", new_ctx, s, d.type, (body, arg), sh, bl, d.system)
