"""Linear substitution, beta/eta steps, normalization and termination measures.

Eta-expansion is only allowed in restricted contexts. A position is
*eta1-blocked* when the path reaching it from the nearest ``:=`` runs
through ESub bodies only (the hole would sit in an L-context right under
the substitution), and *eta2-blocked* when the same holds for the function
position of an application. Beta redexes are allowed anywhere.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum

from .errors import (ArityMismatch, IllTyped, InvalidRedex, NotFree, StepBudgetExceeded,
                     TypingError, format_path)
from .signature import Arrow, Tensor, arrow_size, tensor_size
from .syntax import (Abs, App, ESub, FreshNames, Lst, Var, all_names, is_AT, is_LT,
                     plug_L, replace_at, strip_L, subterm_at, to_str, with_children)
from .typecheck import check, synth


class RedexKind(Enum):
    BETA1 = "Beta1"
    BETA2 = "Beta2"
    ETA1 = "Eta1"
    ETA2 = "Eta2"

    def __str__(self):
        return self.value

    @property
    def is_beta(self):
        return self in (RedexKind.BETA1, RedexKind.BETA2)


@dataclass(frozen=True)
class Redex:
    position: tuple
    kind: RedexKind

    def __str__(self):
        return f"{self.kind} @ {format_path(self.position)}"


# ------------------------------------------------------------ substitution

def substitute(s, xs, ts):
    """Simultaneous linear substitution ``s{xs := ts}``, routed by name."""
    xs = list(xs)
    ts = list(ts)
    if len(xs) != len(ts):
        raise ArityMismatch(f"{len(xs)} variables but {len(ts)} terms")
    if len(set(xs)) != len(xs):
        raise ArityMismatch("substituted variables repeat")
    free = set(s.fv)
    for x in xs:
        if x not in free:
            raise NotFree(f"{x} is not free in the term")
    avoid = all_names(s)
    for t in ts:
        avoid |= all_names(t)
    return _subst(s, dict(zip(xs, ts)), _Renamer(avoid))


class _Renamer:
    def __init__(self, avoid):
        self.avoid = set(avoid)

    def __call__(self, base):
        n = 1
        while f"{base}_{n}" in self.avoid:
            n += 1
        name = f"{base}_{n}"
        self.avoid.add(name)
        return name


def _restrict(m, fv):
    return {x: m[x] for x in fv if x in m}


def _subst(t, m, fresh):
    if not m:
        return t
    if isinstance(t, Var):
        return m[t.name]
    if isinstance(t, (ESub, Abs)):
        body = t.body
        inner = {x: u for x, u in _restrict(m, body.fv).items() if x not in t.names}
        incoming = set()
        for u in inner.values():
            incoming.update(u.fv)
        binders = t.binders
        if incoming & set(t.names):
            ren = {}
            new = []
            for x, a in binders:
                if x in incoming:
                    y = fresh(x)
                    ren[x] = Var(y)
                    new.append((y, a))
                else:
                    new.append((x, a))
            body = _subst(body, ren, fresh)
            binders = tuple(new)
        body = _subst(body, inner, fresh)
        if isinstance(t, Abs):
            return Abs(binders, body)
        return ESub(body, binders, _subst(t.arg, _restrict(m, t.arg.fv), fresh))
    return with_children(t, [_subst(c, _restrict(m, c.fv), fresh) for c in t.children])


def rename_free(s, mapping):
    """Rename free variables by a name -> name mapping."""
    keys = [x for x in mapping if x in s.fv]
    return substitute(s, keys, [Var(mapping[x]) for x in keys]) if keys else s


def occurrence_substitute(s, xs, ts):
    """Reference substitution threading ``xs``/``ts`` by occurrence order.

    Used as a test oracle for ``substitute``.
    """
    from .syntax import occurrences
    xs = list(xs)
    ts = list(ts)
    pair = dict(zip(xs, ts))
    order = occurrences(xs, s)
    if sorted(order) != sorted(xs):
        raise NotFree("substituted variables must each occur once")

    def go(t, xs_here):
        if not xs_here:
            return t
        if isinstance(t, Var):
            return pair[t.name]
        kids = t.children
        out = []
        rest = list(xs_here)
        for i, c in enumerate(kids):
            hidden = set(t.names) if isinstance(t, Abs) or (isinstance(t, ESub) and i == 0) else set()
            mine = [x for x in occurrences(rest, c) if x not in hidden]
            rest = [x for x in rest if x not in mine]
            out.append(go(c, mine))
        return with_children(t, out)

    return go(s, order)


# ------------------------------------------------------------ redexes

def _walk(s, types):
    """Yield ``(path, node, eta1_ok, eta2_ok)`` in pre-order."""
    stack = [((), s, False, False)]
    while stack:
        path, t, under_assign, under_fun = stack.pop()
        yield path, t, not under_assign, not under_fun
        kids = t.children
        for i in range(len(kids) - 1, -1, -1):
            if isinstance(t, ESub):
                if i == 0:
                    st = (under_assign, under_fun)
                else:
                    st = (True, False)
            elif isinstance(t, App) and i == 0:
                st = (False, True)
            else:
                st = (False, False)
            stack.append((path + (i,), kids[i]) + st)


def _beta_at(t):
    if isinstance(t, ESub):
        core = strip_L(t.arg)[1]
        if isinstance(core, Lst) and len(core.items) == len(t.binders):
            return RedexKind.BETA1
    elif isinstance(t, App):
        core = strip_L(t.fun)[1]
        if isinstance(core, Abs) and len(core.binders) == len(t.args):
            return RedexKind.BETA2
    return None


def _eta_at(t, a, eta1_ok, eta2_ok):
    if isinstance(a, Tensor) and eta1_ok and not is_LT(t):
        return RedexKind.ETA1
    if isinstance(a, Arrow) and eta2_ok and not is_AT(t):
        return RedexKind.ETA2
    return None


def redexes_unchecked(sig, env, s):
    """All redexes of a term assumed well-typed under the variable typing ``env``."""
    types = {}
    synth(s, env, sig, types)
    out = []
    for path, t, e1, e2 in _walk(s, types):
        b = _beta_at(t)
        if b:
            out.append(Redex(path, b))
        e = _eta_at(t, types[path], e1, e2)
        if e:
            out.append(Redex(path, e))
    return out


def _checked(sig, system, ctx, s, a):
    try:
        return check(sig, system, ctx, s, a)
    except TypingError as e:
        raise IllTyped(f"ill-typed input: {e}", e.path) from e


def _type_of(sig, system, ctx, s):
    """Check ``ctx |- s`` and return its type."""
    env = dict(ctx)
    try:
        a = synth(s, env, sig)
    except (KeyError, AttributeError, TypeError) as e:
        raise IllTyped(f"cannot synthesize a type: {e}") from e
    _checked(sig, system, ctx, s, a)
    return a


def find_redexes(sig, system, ctx, s):
    _type_of(sig, system, ctx, s)
    return redexes_unchecked(sig, dict(ctx), s)


# ------------------------------------------------------------ steps

def _rename_chain_apart(frames, core, avoid):
    """Rename L-chain binders that clash with ``avoid``; returns new (frames, core)."""
    term = plug_L(frames, core)
    clash = set(avoid)
    fresh = _Renamer(all_names(term) | clash)

    def go(t, depth):
        if depth == len(frames):
            return t
        inner = go(t.body, depth + 1)
        names = t.names
        if clash & set(names):
            ren = {}
            new = []
            for x, a in t.binders:
                if x in clash:
                    y = fresh(x)
                    ren[x] = Var(y)
                    new.append((y, a))
                else:
                    new.append((x, a))
            inner = _subst(inner, _restrict(ren, inner.fv), fresh)
            return ESub(inner, new, t.arg)
        return ESub(inner, t.binders, t.arg)

    return strip_L(go(term, 0))


def contract(sig, env, s, r, fresh):
    """Apply redex ``r`` to ``s``; ``env`` types the free variables."""
    t = subterm_at(s, r.position)
    if r.kind is RedexKind.BETA1:
        frames, core = strip_L(t.arg)
        frames, core = _rename_chain_apart(frames, core, t.body.fv)
        new = plug_L(frames, substitute(t.body, t.names, core.items))
    elif r.kind is RedexKind.BETA2:
        frames, core = strip_L(t.fun)
        avoid = set()
        for u in t.args:
            avoid.update(u.fv)
        frames, core = _rename_chain_apart(frames, core, avoid)
        new = plug_L(frames, substitute(core.body, core.names, t.args))
    else:
        types = {}
        synth(s, env, sig, types)
        a = types[r.position]
        fresh.avoid |= all_names(s)
        ys = [fresh() for _ in a.args]
        binders = tuple(zip(ys, a.args))
        if r.kind is RedexKind.ETA1:
            new = ESub(Lst([Var(y) for y in ys]), binders, t)
        else:
            new = Abs(binders, App(t, [Var(y) for y in ys]))
    return replace_at(s, r.position, new)


def step(sig, system, ctx, s, r, fresh=None):
    """Contract a redex of a well-typed term."""
    found = find_redexes(sig, system, ctx, s)
    if r not in found:
        raise InvalidRedex(f"no {r.kind} redex at {format_path(r.position)}")
    if fresh is None:
        fresh = FreshNames(all_names(s) | {x for x, _ in ctx})
    return contract(sig, dict(ctx), s, r, fresh)


# ------------------------------------------------------------ measures

def eta_measures(sig, env, s):
    types = {}
    synth(s, env, sig, types)
    e1 = e2 = 0
    for path, t, ok1, ok2 in _walk(s, types):
        a = types[path]
        if ok1 and not is_LT(t):
            e1 += tensor_size(a)
        if ok2 and not is_AT(t):
            e2 += arrow_size(a)
    return e1, e2


def measure(sig, system, ctx, s, kind):
    kind = kind.lower()
    if kind == "size":
        return s.size
    _type_of(sig, system, ctx, s)
    e1, e2 = eta_measures(sig, dict(ctx), s)
    if kind == "eta1":
        return e1
    if kind == "eta2":
        return e2
    raise ValueError(f"unknown measure {kind}")


# ------------------------------------------------------------ normalization

@dataclass
class Trace:
    initial: object
    initial_measures: tuple
    steps: list = field(default_factory=list)
    measures: list = field(default_factory=list)

    @property
    def final(self):
        return self.steps[-1][1] if self.steps else self.initial

    def lines(self, with_terms=False):
        out = []
        for n, ((r, t), (sz, e1, e2)) in enumerate(zip(self.steps, self.measures), 1):
            out.append(f"step {n}: {r.kind} @ {format_path(r.position)} ; size={sz} eta1={e1} eta2={e2}")
            if with_terms:
                out.append(f"  {to_str(t)}")
        return out

    def to_json(self):
        sz, e1, e2 = self.initial_measures
        return {
            "initial": to_str(self.initial),
            "initial_measures": {"size": sz, "eta1": e1, "eta2": e2},
            "steps": [
                {"n": n, "kind": str(r.kind), "position": list(r.position), "term": to_str(t),
                 "size": m[0], "eta1": m[1], "eta2": m[2]}
                for n, ((r, t), m) in enumerate(zip(self.steps, self.measures), 1)
            ],
        }


def step_budget(size, e1, e2):
    return size + e1 + e2 + 16


def normalize(sig, system, ctx, s, strategy=None, budget=None, typecheck=True):
    """Normalize ``s``; returns ``(nf, trace)``.

    ``strategy`` picks a redex from the ordered list (default: the first,
    i.e. leftmost-outermost with beta first).
    """
    env = dict(ctx)
    if typecheck:
        _type_of(sig, system, ctx, s)
    e1, e2 = eta_measures(sig, env, s)
    trace = Trace(s, (s.size, e1, e2))
    if budget is None:
        budget = step_budget(s.size, e1, e2)
    fresh = FreshNames(all_names(s) | set(env))
    while True:
        rs = redexes_unchecked(sig, env, s)
        if not rs:
            return s, trace
        if len(trace.steps) >= budget:
            raise StepBudgetExceeded(f"more than {budget} steps")
        r = strategy(rs) if strategy else rs[0]
        s = contract(sig, env, s, r, fresh)
        trace.steps.append((r, s))
        trace.measures.append((s.size,) + eta_measures(sig, env, s))


def random_strategy(seed):
    rng = random.Random(seed)
    return lambda rs: rng.choice(rs)


def is_normal(sig, env, s):
    return not redexes_unchecked(sig, env, s)


def equivalent(sig, system, ctx, s, t, a):
    """Equality in the free multicategory: normal forms are structurally equivalent."""
    from .equiv import struct_equiv
    _checked(sig, system, ctx, s, a)
    _checked(sig, system, ctx, t, a)
    return struct_equiv(normalize(sig, system, ctx, s, typecheck=False)[0],
                        normalize(sig, system, ctx, t, typecheck=False)[0])


def struct_canon(s):
    from .equiv import struct_canon as _c
    return _c(s)


def struct_equiv(s, t):
    from .equiv import struct_equiv as _e
    return _e(s, t)


__all__ = [
    "Redex", "RedexKind", "Trace", "substitute", "occurrence_substitute", "find_redexes", "step",
    "normalize", "measure", "struct_canon", "struct_equiv", "equivalent", "rename_free",
]
