"""Resource terms: AST, free variables, occurrences, positions, alpha-equivalence
and the concrete-syntax printer.

Terms are immutable and named. Binders carry Church annotations as
``(name, type)`` pairs. Alpha-equivalence is decided on ``alpha_key``, a
nameless rendering in which bound variables become binding indices.

Positions are tuples of child indices: List item i is child i, ESub body is
0 and its argument 1, Abs body is 0, App function is 0 and argument i is
i + 1, Gen argument i is child i.
"""
from __future__ import annotations

from enum import Enum

from .signature import Arrow, Tensor


class System(Enum):
    REP = "rep"
    SYMREP = "symrep"
    SYMCLOSED = "symclosed"
    AUTO = "auto"

    @property
    def symmetric(self):
        return self is not System.REP

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        return cls(text.lower())


class Term:
    __slots__ = ("fv", "size", "_hash")

    def __eq__(self, other):
        return self is other or (type(self) is type(other) and hash(self) == hash(other)
                                 and self._key() == other._key())

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{type(self).__name__}({to_str(self)!r})"

    def __str__(self):
        return to_str(self)


def _merge_fv(parts):
    seen = []
    for p in parts:
        for v in p:
            if v not in seen:
                seen.append(v)
    return tuple(seen)


class Var(Term):
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name
        self.fv = (name,)
        self.size = 1
        self._hash = hash(("Var", name))

    def _key(self):
        return self.name

    @property
    def children(self):
        return ()


class Lst(Term):
    __slots__ = ("items",)

    def __init__(self, items):
        self.items = tuple(items)
        self.fv = _merge_fv(t.fv for t in self.items)
        self.size = 1 + sum(t.size for t in self.items)
        self._hash = hash(("Lst", self.items))

    def _key(self):
        return self.items

    @property
    def children(self):
        return self.items


class ESub(Term):
    """``body[x1:a1, ..., xk:ak := arg]``."""
    __slots__ = ("body", "binders", "arg")

    def __init__(self, body, binders, arg):
        self.body = body
        self.binders = tuple(binders)
        self.arg = arg
        bound = {x for x, _ in self.binders}
        self.fv = _merge_fv([[v for v in body.fv if v not in bound], arg.fv])
        self.size = 1 + body.size + arg.size
        self._hash = hash(("ESub", body, self.binders, arg))

    def _key(self):
        return (self.body, self.binders, self.arg)

    @property
    def names(self):
        return tuple(x for x, _ in self.binders)

    @property
    def children(self):
        return (self.body, self.arg)


class Abs(Term):
    __slots__ = ("binders", "body")

    def __init__(self, binders, body):
        self.binders = tuple(binders)
        self.body = body
        bound = {x for x, _ in self.binders}
        self.fv = tuple(v for v in body.fv if v not in bound)
        self.size = 1 + body.size
        self._hash = hash(("Abs", self.binders, body))

    def _key(self):
        return (self.binders, self.body)

    @property
    def names(self):
        return tuple(x for x, _ in self.binders)

    @property
    def children(self):
        return (self.body,)


class App(Term):
    __slots__ = ("fun", "args")

    def __init__(self, fun, args):
        self.fun = fun
        self.args = tuple(args)
        self.fv = _merge_fv([fun.fv] + [t.fv for t in self.args])
        self.size = 1 + fun.size + sum(t.size for t in self.args)
        self._hash = hash(("App", fun, self.args))

    def _key(self):
        return (self.fun, self.args)

    @property
    def children(self):
        return (self.fun,) + self.args


class Gen(Term):
    __slots__ = ("name", "args")

    def __init__(self, name, args):
        self.name = name
        self.args = tuple(args)
        self.fv = _merge_fv(t.fv for t in self.args)
        self.size = 1 + sum(t.size for t in self.args)
        self._hash = hash(("Gen", name, self.args))

    def _key(self):
        return (self.name, self.args)

    @property
    def children(self):
        return self.args


def with_children(t, kids):
    """Rebuild ``t`` with new children, in child-index order."""
    if isinstance(t, Var):
        return t
    if isinstance(t, Lst):
        return Lst(kids)
    if isinstance(t, ESub):
        return ESub(kids[0], t.binders, kids[1])
    if isinstance(t, Abs):
        return Abs(t.binders, kids[0])
    if isinstance(t, App):
        return App(kids[0], kids[1:])
    return Gen(t.name, kids)


def bound_at(t, i):
    """Names bound by ``t`` over its child ``i``."""
    if isinstance(t, ESub) and i == 0 or isinstance(t, Abs):
        return t.names
    return ()


# ---------------------------------------------------------------- queries

def free_vars(s):
    return list(s.fv)


def size(s):
    return s.size


def occurrences(xs, s):
    """Free occurrences of members of ``xs`` in traversal order."""
    xs = set(xs)
    out = []

    def walk(t, hidden):
        if isinstance(t, Var):
            if t.name in xs and t.name not in hidden:
                out.append(t.name)
            return
        for i, c in enumerate(t.children):
            b = bound_at(t, i)
            walk(c, hidden | set(b) if b else hidden)

    walk(s, frozenset())
    return out


def is_linear(s):
    """Every free variable occurs once and every binder binds exactly one occurrence."""
    return linearity_violation(s) is None


def linearity_violation(s):
    """Return ``(path, message)`` for the first linearity failure, or None."""
    def count(t, path):
        # returns list of free var occurrences (with repetition) or raises
        if isinstance(t, Var):
            return [t.name]
        occ = []
        for i, c in enumerate(t.children):
            sub = count(c, path + (i,))
            b = bound_at(t, i)
            if b:
                if len(set(b)) != len(b):
                    raise _Lin(path, "repeated binder variable")
                for x in b:
                    n = sub.count(x)
                    if n != 1:
                        raise _Lin(path, f"bound variable {x} used {n} times")
                sub = [v for v in sub if v not in b]
            occ.extend(sub)
        if len(set(occ)) != len(occ):
            dup = next(v for v in occ if occ.count(v) > 1)
            raise _Lin(path, f"variable {dup} used more than once")
        return occ

    try:
        count(s, ())
    except _Lin as e:
        return e.path, e.msg
    return None


class _Lin(Exception):
    def __init__(self, path, msg):
        self.path = path
        self.msg = msg


def all_names(s):
    """Every variable name occurring in ``s``, free or bound."""
    out = set()
    stack = [s]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            out.add(t.name)
        elif isinstance(t, (ESub, Abs)):
            out.update(t.names)
        stack.extend(t.children)
    return out


def strip_L(s):
    """Split ``s`` as ``L[core]``: returns the ESub frames outermost-first and the core."""
    frames = []
    while isinstance(s, ESub):
        frames.append(s)
        s = s.body
    return frames, s


def plug_L(frames, core):
    """Inverse of ``strip_L`` (capture-allowing)."""
    for f in reversed(frames):
        core = ESub(core, f.binders, f.arg)
    return core


def is_LT(s):
    return isinstance(strip_L(s)[1], Lst)


def is_AT(s):
    return isinstance(strip_L(s)[1], Abs)


def subterms(s):
    """All subterm occurrences as ``(path, term)`` in pre-order."""
    out = []
    stack = [((), s)]
    while stack:
        path, t = stack.pop()
        out.append((path, t))
        kids = t.children
        for i in range(len(kids) - 1, -1, -1):
            stack.append((path + (i,), kids[i]))
    return out


def subterm_at(s, path):
    for i in path:
        s = s.children[i]
    return s


def replace_at(s, path, new):
    if not path:
        return new
    kids = list(s.children)
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return with_children(s, kids)


def in_fragment(s, system):
    """Structural fragment membership."""
    return fragment_violation(s, system) is None


def fragment_violation(s, system):
    system = System.parse(system)
    if system is System.AUTO:
        return None
    if system in (System.REP, System.SYMREP):
        banned = (Abs, App)
    else:
        banned = (Lst, ESub)
    for path, t in subterms(s):
        if isinstance(t, banned):
            return path, f"{type(t).__name__} node outside the {system.value} fragment"
    return None


# ------------------------------------------------------------ alpha

def alpha_key(s):
    """Nameless rendering: bound variables become their binding index."""
    env = {}
    counter = [0]

    def bind(names):
        saved = [(x, env.get(x)) for x in names]
        for x in names:
            env[x] = counter[0]
            counter[0] += 1
        return saved

    def unbind(saved):
        for x, old in saved:
            if old is None:
                env.pop(x, None)
            else:
                env[x] = old

    def go(t):
        if isinstance(t, Var):
            i = env.get(t.name)
            return ("f", t.name) if i is None else ("b", i)
        if isinstance(t, Lst):
            return ("L",) + tuple(go(c) for c in t.items)
        if isinstance(t, ESub):
            arg = go(t.arg)
            saved = bind(t.names)
            body = go(t.body)
            unbind(saved)
            return ("S", tuple(a for _, a in t.binders), body, arg)
        if isinstance(t, Abs):
            saved = bind(t.names)
            body = go(t.body)
            unbind(saved)
            return ("A", tuple(a for _, a in t.binders), body)
        if isinstance(t, App):
            return ("P", go(t.fun)) + tuple(go(c) for c in t.args)
        return ("G", t.name) + tuple(go(c) for c in t.args)

    return go(s)


def alpha_eq(s, t):
    return alpha_key(s) == alpha_key(t)


def rename_bound(s, fresh):
    """Rename every binder to ``fresh()`` names, in pre-order (ESub argument first)."""
    def go(t, env):
        if isinstance(t, Var):
            return Var(env.get(t.name, t.name))
        if isinstance(t, ESub):
            arg = go(t.arg, env)
            new = [(fresh(), a) for _, a in t.binders]
            inner = dict(env)
            inner.update((x, y) for (x, _), (y, _) in zip(t.binders, new))
            return ESub(go(t.body, inner), new, arg)
        if isinstance(t, Abs):
            new = [(fresh(), a) for _, a in t.binders]
            inner = dict(env)
            inner.update((x, y) for (x, _), (y, _) in zip(t.binders, new))
            return Abs(new, go(t.body, inner))
        return with_children(t, [go(c, env) for c in t.children])

    return go(s, {})


class FreshNames:
    """Deterministic fresh-name supply: ``prefix1``, ``prefix2``, ... skipping ``avoid``."""

    def __init__(self, avoid=(), prefix="y"):
        self.avoid = set(avoid)
        self.prefix = prefix
        self.n = 0

    def __call__(self):
        while True:
            self.n += 1
            name = f"{self.prefix}{self.n}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


def canonical_names(s, prefix="b"):
    """Alpha-rename all binders to ``prefix0, prefix1, ...`` avoiding free names."""
    free = set(s.fv)
    counter = [0]

    def fresh():
        while True:
            name = f"{prefix}{counter[0]}"
            counter[0] += 1
            if name not in free:
                return name

    return rename_bound(s, fresh)


# ------------------------------------------------------------ printing

def type_str(t):
    return str(t)


def _binders_str(bs):
    return ",".join(f"{x}:{a}" for x, a in bs)


def to_str(t):
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Lst):
        return "<" + ",".join(to_str(c) for c in t.items) + ">"
    if isinstance(t, ESub):
        bs = _binders_str(t.binders)
        return f"{_postfix_operand(t.body)}[{bs + ' ' if bs else ' '}:= {to_str(t.arg)}]"
    if isinstance(t, Abs):
        return f"\\<{_binders_str(t.binders)}>. {to_str(t.body)}"
    if isinstance(t, App):
        return f"{_postfix_operand(t.fun)} <" + ",".join(to_str(c) for c in t.args) + ">"
    return f"{t.name}(" + ",".join(to_str(c) for c in t.args) + ")"


def _postfix_operand(t):
    s = to_str(t)
    return f"({s})" if isinstance(t, Abs) else s


def context_str(ctx):
    return ", ".join(f"{x}:{a}" for x, a in ctx)


def judgment_str(ctx, s, a):
    c = context_str(ctx)
    return f"{c + ' ' if c else ''}|- {to_str(s)} : {a}"


def is_tensor(t):
    return isinstance(t, Tensor)


def is_arrow(t):
    return isinstance(t, Arrow)
