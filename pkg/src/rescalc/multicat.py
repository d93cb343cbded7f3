"""Free multicategories of resource terms, their structure maps, models and
coherence experiments.

A morphism ``source -> target`` is a class of terms typed in the context
``v1:source[0], ..., vn:source[n-1]``; two morphisms are equal when their
normal forms are structurally equivalent.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from . import perm
from .equiv import struct_canon
from .errors import (BadSuffix, NonDiscrete, NotAnArrow, NotATensor, NotSymmetricSystem,
                     NotSymRep, ShapeMismatch, SpanMismatch, StructureMismatch, TypingError)
from .rewrite import is_normal, normalize, rename_free, substitute
from .signature import Arrow, Atom, Tensor, strictify, strictify_context
from .syntax import (Abs, App, ESub, FreshNames, Gen, Lst, System, Var, all_names, alpha_key,
                     context_str, rename_bound, strip_L, to_str)
from .typecheck import Checker, admissible_permute, check


def var_names(n, start=1):
    return [f"v{i}" for i in range(start, start + n)]


class Morphism:
    """A class of terms ``v1:a1, ..., vn:an |- rep : target``."""

    __slots__ = ("sig", "system", "source", "target", "rep", "_nf", "_canon", "_key", "_deriv")

    def __init__(self, sig, system, source, target, rep):
        self.sig = sig
        self.system = System.parse(system)
        self.source = tuple(source)
        self.target = target
        self.rep = rep
        self._nf = None
        self._canon = None
        self._key = None
        self._deriv = None

    @property
    def ctx(self):
        return tuple(zip(var_names(len(self.source)), self.source))

    @property
    def nf(self):
        if self._nf is None:
            self._nf = normalize(self.sig, self.system, self.ctx, self.rep, typecheck=False)[0]
        return self._nf

    @property
    def canon_nf(self):
        if self._canon is None:
            self._canon = struct_canon(self.nf)
        return self._canon

    @property
    def key(self):
        if self._key is None:
            self._key = alpha_key(self.canon_nf)
        return self._key

    def __eq__(self, other):
        return (isinstance(other, Morphism) and self.system == other.system
                and self.source == other.source and self.target == other.target
                and self.key == other.key)

    def __hash__(self):
        return hash((self.source, self.target, self.key))

    def __repr__(self):
        return f"Morphism({context_str(self.ctx)} |- {to_str(self.rep)} : {self.target})"

    def derivation(self):
        if self._deriv is None:
            self._deriv = check(self.sig, self.system, self.ctx, self.rep, self.target)
        return self._deriv


def from_judgment(sig, system, ctx, s, a, verify=True):
    """Morphism for ``ctx |- s : a``; context variables are renamed to ``v1..vn``."""
    ctx = list(ctx)
    if verify:
        check(sig, system, ctx, s, a)
    names = var_names(len(ctx))
    if (all_names(s) - set(s.fv)) & set(names):
        s = rename_bound(s, FreshNames(all_names(s) | set(names), prefix="w"))
    clash = (set(names) - {x for x, _ in ctx}) & all_names(s)
    if clash or [x for x, _ in ctx] != names:
        tmp = {x: f"__t{i}" for i, (x, _) in enumerate(ctx)}
        s = rename_free(s, tmp)
        s = rename_free(s, {f"__t{i}": n for i, n in enumerate(names)})
    return Morphism(sig, system, [t for _, t in ctx], a, s)


def identity(sig, system, a):
    Checker(sig, system).valid(a, ())
    return Morphism(sig, system, [a], a, Var("v1"))


def compose(f, gs):
    """``f . <g1, ..., gn>``: plug each ``gs[i]`` into the i-th source of ``f``."""
    gs = list(gs)
    if len(gs) != len(f.source):
        raise ShapeMismatch(f"{len(f.source)} sources but {len(gs)} morphisms")
    for i, g in enumerate(gs):
        if g.target != f.source[i]:
            raise ShapeMismatch(f"morphism {i + 1} has target {g.target}, expected {f.source[i]}")
        if g.system != f.system:
            raise ShapeMismatch("morphisms live in different systems")
    renamed = []
    off = 0
    for g in gs:
        n = len(g.source)
        mapping = {f"v{j}": f"__c{off + j}" for j in range(1, n + 1)}
        renamed.append(rename_free(g.rep, mapping))
        off += n
    body = substitute(f.rep, var_names(len(gs)), renamed)
    body = rename_free(body, {f"__c{j}": f"v{j}" for j in range(1, off + 1)})
    source = [t for g in gs for t in g.source]
    return Morphism(f.sig, f.system, source, f.target, body)


def _fresh(term, n, prefix="w"):
    used = all_names(term)
    out = []
    i = 0
    while len(out) < n:
        i += 1
        if f"{prefix}{i}" not in used:
            out.append(f"{prefix}{i}")
    return out


def rep_elim(f, k):
    """Split the tensor source at 0-based position ``k`` into its components."""
    if not 0 <= k < len(f.source) or not isinstance(f.source[k], Tensor):
        raise NotATensor(f"source {k} is not a tensor")
    comps = f.source[k].args
    ws = _fresh(f.rep, len(comps))
    term = substitute(f.rep, [f"v{k + 1}"], [Lst([Var(w) for w in ws])])
    ctx = list(f.ctx[:k]) + list(zip(ws, comps)) + list(f.ctx[k + 1:])
    return from_judgment(f.sig, f.system, ctx, term, f.target, verify=False)


def rep_intro(f, span):
    """Bundle the sources in ``span = (start, length)`` into one tensor source."""
    start, length = span
    if start < 0 or length < 0 or start + length > len(f.source):
        raise SpanMismatch(f"span {span} outside a source of length {len(f.source)}")
    x = _fresh(f.rep, 1, "t")[0]
    binders = f.ctx[start:start + length]
    t = Tensor(tuple(a for _, a in binders))
    term = ESub(f.rep, binders, Var(x))
    ctx = list(f.ctx[:start]) + [(x, t)] + list(f.ctx[start + length:])
    return from_judgment(f.sig, f.system, ctx, term, f.target, verify=False)


def curry(f, k):
    """Abstract the last ``k`` sources."""
    n = len(f.source)
    if not 0 <= k <= n:
        raise BadSuffix(f"cannot curry {k} of {n} sources")
    binders = f.ctx[n - k:]
    term = Abs(binders, f.rep)
    a = Arrow(tuple(t for _, t in binders), f.target)
    return from_judgment(f.sig, f.system, f.ctx[:n - k], term, a, verify=False)


def uncurry(f):
    if not isinstance(f.target, Arrow):
        raise NotAnArrow(f"target {f.target} is not an arrow")
    ws = _fresh(f.rep, len(f.target.args))
    term = App(f.rep, [Var(w) for w in ws])
    ctx = list(f.ctx) + list(zip(ws, f.target.args))
    return from_judgment(f.sig, f.system, ctx, term, f.target.result, verify=False)


def sym_act(f, sigma):
    """Retype the same term at the source permuted by ``sigma``."""
    if not f.system.symmetric:
        raise NotSymmetricSystem("symmetry acts only in symmetric systems")
    d = admissible_permute(f.derivation(), sigma)
    return from_judgment(f.sig, f.system, d.ctx, f.rep, f.target, verify=False)


def sym_extract(f):
    """The permutation pi with ``strict(target) = act(strict(source), pi)``."""
    if f.system is not System.SYMREP:
        raise NotSymRep("sym is defined on symmetric representable morphisms")
    if not f.sig.discrete:
        raise NonDiscrete("sym needs a discrete signature")
    pos = {}
    n = 0
    for x, a in f.ctx:
        k = len(strictify(a))
        pos[x] = list(range(n + 1, n + k + 1))
        n += k
    frames, core = strip_L(f.canon_nf)
    for fr in frames:
        if not isinstance(fr.arg, Var):
            raise NotSymRep("normal form has a non-variable substitution argument")
        src = pos.pop(fr.arg.name)
        for y, b in fr.binders:
            k = len(strictify(b))
            pos[y], src = src[:k], src[k:]
    images = []

    def leaves(t):
        if isinstance(t, Var):
            images.extend(pos[t.name])
        elif isinstance(t, Lst):
            for c in t.items:
                leaves(c)
        else:
            raise NotSymRep("normal form core is not a list of variables")

    leaves(core)
    return perm.Permutation(images)


# ------------------------------------------------------------ models

class Model:
    """Multicategory interface used by ``interpret``."""

    def obj(self, a, i):
        raise NotImplementedError

    def identity(self, o):
        raise NotImplementedError

    def compose(self, f, gs):
        raise NotImplementedError

    def tensor_intro(self, objs):
        raise StructureMismatch(f"{type(self).__name__} has no tensors")

    def let(self, h, start, k):
        raise StructureMismatch(f"{type(self).__name__} has no tensors")

    def act(self, f, sigma):
        raise StructureMismatch(f"{type(self).__name__} is not symmetric")

    def lam(self, h, k):
        raise StructureMismatch(f"{type(self).__name__} is not closed")

    def ev(self, o):
        raise StructureMismatch(f"{type(self).__name__} is not closed")


@dataclass(frozen=True)
class PermArrow:
    """``source -> target`` in the permutation model; objects are atom lists."""
    source: tuple
    target: tuple
    perm: perm.Permutation


class PermModel(Model):
    """Objects are strictified types, morphisms the permutations relating them."""

    def obj(self, a, i):
        if isinstance(a, Atom):
            return tuple(i.get(a.name, (a.name,))) if i else (a.name,)
        if isinstance(a, Tensor):
            out = ()
            for b in a.args:
                out += self.obj(b, i)
            return out
        raise StructureMismatch("the permutation model has no arrows")

    @staticmethod
    def flat(objs):
        return tuple(x for o in objs for x in o)

    def identity(self, o):
        return PermArrow((o,), o, perm.identity(len(o)))

    def compose(self, f, gs):
        if tuple(g.target for g in gs) != f.source:
            raise StructureMismatch("composite does not match sources")
        p = perm.compose(perm.block_sum([g.perm for g in gs]), f.perm)
        return PermArrow(tuple(o for g in gs for o in g.source), f.target, p)

    def tensor_intro(self, objs):
        objs = tuple(objs)
        t = self.flat(objs)
        return PermArrow(objs, t, perm.identity(len(t)))

    def let(self, h, start, k):
        src = h.source[:start] + (self.flat(h.source[start:start + k]),) + h.source[start + k:]
        return PermArrow(src, h.target, h.perm)

    def act(self, f, sigma):
        hat = perm.expand(sigma, [len(o) for o in f.source])
        return PermArrow(tuple(perm.act(f.source, sigma)), f.target,
                         perm.compose(hat.inverse(), f.perm))

    def check(self, f):
        return list(f.target) == perm.act(self.flat(f.source), f.perm)


@dataclass(frozen=True)
class Tally:
    source: tuple
    target: Counter = field(hash=False)


class TallyModel(Model):
    """Objects are atom multisets; a morphism only witnesses equal totals."""

    def obj(self, a, i):
        return Counter(strictify(a))

    def _m(self, source, target):
        total = Counter()
        for o in source:
            total += o
        if total != target:
            raise StructureMismatch("atom counts differ")
        return Tally(tuple(source), target)

    def identity(self, o):
        return self._m((o,), o)

    def compose(self, f, gs):
        return self._m(tuple(o for g in gs for o in g.source), f.target)

    def tensor_intro(self, objs):
        total = Counter()
        for o in objs:
            total += o
        return self._m(tuple(objs), total)

    def let(self, h, start, k):
        merged = Counter()
        for o in h.source[start:start + k]:
            merged += o
        return self._m(h.source[:start] + (merged,) + h.source[start + k:], h.target)

    def act(self, f, sigma):
        return self._m(tuple(perm.act(f.source, sigma)), f.target)


class FreeModel(Model):
    """The free multicategory itself; ``interpret`` with the inclusion is the identity."""

    def __init__(self, sig, system):
        self.sig = sig
        self.system = System.parse(system)

    def obj(self, a, i):
        return a

    def identity(self, o):
        return identity(self.sig, self.system, o)

    def compose(self, f, gs):
        return compose(f, gs)

    def tensor_intro(self, objs):
        objs = list(objs)
        names = var_names(len(objs))
        return Morphism(self.sig, self.system, objs, Tensor(tuple(objs)), Lst([Var(x) for x in names]))

    def let(self, h, start, k):
        return rep_intro(h, (start, k))

    def act(self, f, sigma):
        return f if sigma.is_identity() else sym_act(f, sigma)

    def lam(self, h, k):
        return curry(h, k)

    def ev(self, o):
        names = var_names(len(o.args) + 1)
        return Morphism(self.sig, self.system, [o, *o.args], o.result,
                        App(Var(names[0]), [Var(x) for x in names[1:]]))

    def gen(self, name):
        srcs, tgt = self.sig.arrows[name]
        return Morphism(self.sig, self.system, srcs, tgt,
                        Gen(name, [Var(x) for x in var_names(len(srcs))]))


def interpret(i, model, f):
    """Interpret a morphism in ``model``; ``i`` maps atoms and generators."""
    i = i or {}
    return _interp(i, model, f.derivation())


def _reindexed(model, m, d):
    # m has source act(d.ctx, d.shuffle); bring it back to d.ctx
    if d.shuffle.is_identity():
        return m
    return model.act(m, d.shuffle.inverse())


def _gen_arrow(i, model, name):
    if name in i:
        return i[name]
    if isinstance(model, FreeModel):
        return model.gen(name)
    raise StructureMismatch(f"no interpretation for generator {name}")


def _interp(i, model, d):
    ob = lambda a: model.obj(a, i)  # noqa: E731
    if d.rule == "var":
        return model.identity(ob(d.type))
    if d.rule == "list":
        m = model.compose(model.tensor_intro([ob(p.type) for p in d.premises]),
                          [_interp(i, model, p) for p in d.premises])
        return _reindexed(model, m, d)
    if d.rule == "gen":
        m = model.compose(_gen_arrow(i, model, d.term.name), [_interp(i, model, p) for p in d.premises])
        return _reindexed(model, m, d)
    if d.rule == "app":
        m = model.compose(model.ev(ob(d.premises[0].type)), [_interp(i, model, p) for p in d.premises])
        return _reindexed(model, m, d)
    if d.rule == "abs":
        return model.lam(_interp(i, model, d.premises[0]), len(d.term.binders))
    body, arg = d.premises
    c = d.blocks[0]
    k = len(d.term.binders)
    h = model.let(_interp(i, model, body), c, k)
    ids = [model.identity(ob(a)) for _, a in body.ctx]
    parts = ids[:c] + [_interp(i, model, arg)] + ids[c + k:]
    return _reindexed(model, model.compose(h, parts), d)


# ------------------------------------------------------------ enumeration

def _as_ctx(ctx):
    ctx = list(ctx)
    if ctx and not isinstance(ctx[0], tuple):
        ctx = list(zip(var_names(len(ctx)), ctx))
    return ctx


def _destructure(ctx):
    """Frames ``[y := x]`` fully destructuring tensor variables, and the atomic leaves."""
    frames = []
    leaves = []
    counter = itertools.count(1)
    work = list(ctx)
    while work:
        x, a = work.pop(0)
        if isinstance(a, Atom):
            leaves.append((x, a.name))
            continue
        ys = [(f"y{next(counter)}", b) for b in a.args]
        frames.append((ys, x))
        work[0:0] = ys
    return frames, leaves


def _fill(a, pick):
    if isinstance(a, Atom):
        return Var(pick(a.name))
    return Lst([_fill(b, pick) for b in a.args])


def _topo_orders(frames, cap):
    """Dependency-respecting frame orders (outermost first), at most ``cap``."""
    out = []
    binds = [{y for y, _ in ys} for ys, _ in frames]

    def go(done, rest):
        if len(out) >= cap:
            return
        if not rest:
            out.append(list(done))
            return
        for j in rest:
            arg = frames[j][1]
            if any(arg in binds[k] for k in rest if k != j):
                continue
            go(done + [j], [k for k in rest if k != j])

    go([], list(range(len(frames))))
    return out


def normal_inhabitant_terms(sig, system, ctx, a, size_bound, orders_cap=6):
    """Grammar members typable at ``(ctx, a)`` with their derivations, a few frame orders each."""
    system = System.parse(system)
    if not sig.discrete:
        raise NonDiscrete("enumeration needs a discrete signature")
    if system not in (System.REP, System.SYMREP):
        raise StructureMismatch("enumeration supports rep and symrep only")
    ctx = _as_ctx(ctx)
    frames, leaves = _destructure(ctx)
    want = strictify(a)
    if Counter(want) != Counter(n for _, n in leaves):
        return []
    by_atom = {}
    for x, n in leaves:
        by_atom.setdefault(n, []).append(x)
    atoms = sorted(by_atom)
    choices = [list(itertools.permutations(by_atom[n])) for n in atoms]
    orders = _topo_orders(frames, orders_cap)
    out = []
    for combo in itertools.product(*choices):
        queues = {n: list(p) for n, p in zip(atoms, combo)}
        core = _fill(a, lambda n: queues[n].pop(0))
        for order in orders:
            t = core
            for j in reversed(order):
                ys, x = frames[j]
                t = ESub(t, ys, Var(x))
            if t.size > size_bound:
                continue
            try:
                d = check(sig, system, ctx, t, a)
            except TypingError:
                continue
            out.append((t, d))
    return out


def _classes(sig, system, ctx, a, found):
    """Group ``(term, derivation)`` pairs by canonical form, one morphism per class."""
    seen = {}
    for t, d in found:
        c = struct_canon(t)
        k = alpha_key(c)
        if k not in seen:
            m = from_judgment(sig, system, ctx, t, a, verify=False)
            if m.rep is t and is_normal(sig, dict(ctx), t):
                m._nf, m._canon, m._key, m._deriv = t, c, k, d
            seen[k] = m
    return list(seen.values())


def enumerate_normal_inhabitants(sig, system, ctx, a, size_bound):
    """One morphism per structural-equivalence class of normal inhabitants."""
    ctx = _as_ctx(ctx)
    return _classes(sig, system, ctx, a, normal_inhabitant_terms(sig, system, ctx, a, size_bound))


@dataclass
class CoherenceReport:
    judgment: str
    system: System
    inhabitants: int
    classes: list
    sym: list
    verdict: bool
    witnesses: list

    def lines(self):
        out = [f"judgment: {self.judgment}", f"system: {self.system.value}",
               f"inhabitants: {self.inhabitants}", f"classes: {len(self.classes)}"]
        for n, m in enumerate(self.classes):
            line = f"  class {n + 1}: {to_str(m.canon_nf)}"
            if self.sym:
                line += f"  sym={self.sym[n]}"
            out.append(line)
        for w in self.witnesses:
            out.append(f"  witness: {w}")
        out.append("PASS" if self.verdict else "FAIL")
        return out

    def to_json(self):
        return {
            "judgment": self.judgment,
            "system": self.system.value,
            "inhabitants": self.inhabitants,
            "classes": [to_str(m.canon_nf) for m in self.classes],
            "sym": [list(p.images) for p in self.sym],
            "verdict": "PASS" if self.verdict else "FAIL",
            "witnesses": self.witnesses,
        }


def realizable_permutations(source, target):
    """All pi with ``strict(target) = act(strict(source), pi)``."""
    src = strictify_context(source)
    tgt = strictify(target)
    if Counter(src) != Counter(tgt):
        return []
    slots = {}
    for i, n in enumerate(src, 1):
        slots.setdefault(n, []).append(i)
    per_atom = sorted(slots)
    out = []
    for combo in itertools.product(*[itertools.permutations(slots[n]) for n in per_atom]):
        q = {n: list(c) for n, c in zip(per_atom, combo)}
        out.append(perm.Permutation([q[n].pop(0) for n in tgt]))
    return out


def coherence_report(sig, system, ctx, a, size_bound):
    system = System.parse(system)
    ctx = _as_ctx(ctx)
    terms = normal_inhabitant_terms(sig, system, ctx, a, size_bound)
    classes = _classes(sig, system, ctx, a, terms)
    witnesses = []
    sym = []
    if system is System.REP:
        ok = len(classes) <= 1
        if not ok:
            witnesses.append(f"{to_str(classes[0].rep)} differs from {to_str(classes[1].rep)}")
    else:
        sym = [sym_extract(m) for m in classes]
        ok = len(set(sym)) == len(sym)
        if not ok:
            witnesses.append("two classes share a permutation")
        pm = PermModel()
        for m, p in zip(classes, sym):
            q = interpret(None, pm, m).perm
            if q != p:
                ok = False
                witnesses.append(f"model permutation {q} differs from sym {p} on {to_str(m.rep)}")
        expected = realizable_permutations([t for _, t in ctx], a)
        if set(sym) != set(expected):
            ok = False
            witnesses.append(f"{len(sym)} classes but {len(expected)} realizable permutations")
    return CoherenceReport(f"{context_str(ctx)} |- ? : {a}", system, len(terms),
                           classes, sym, ok, witnesses)
