"""Canonical representatives for structural equivalence.

Explicit substitutions float outwards through every constructor except an
abstraction whose binders they mention (directly or through other floated
substitutions they depend on). Once every substitution sits as high as it
can, each level (the root and every abstraction body) is a stack of frames
over a substitution-free core, and only the order of the frames is left to
fix. A frame must stay above any frame whose argument mentions its binders;
among the admissible orders we take the one listing frames by the first
time a traversal of the core reaches them, inlining a frame's argument at
the occurrence of its binder. Frames with no binders are never reached that
way and are ordered by the shape of their argument.
"""
from __future__ import annotations

from .syntax import (Abs, App, ESub, Gen, Lst, Var, alpha_key, all_names, canonical_names,
                     rename_bound)


class _Frame:
    __slots__ = ("binders", "names", "arg", "fv", "idx")

    def __init__(self, binders, arg):
        self.binders = binders
        self.names = frozenset(x for x, _ in binders)
        self.arg = arg
        self.fv = _ir_fv(arg)
        self.idx = None


# IR: ("var", x) | ("lst", kids) | ("app", kids) | ("gen", name, kids)
#     | ("abs", binders, stack) with stack = ("stk", frames, core)

def _ir_fv(ir, acc=None):
    acc = set() if acc is None else acc
    tag = ir[0]
    if tag == "var":
        acc.add(ir[1])
    elif tag == "lst" or tag == "app":
        for k in ir[1]:
            _ir_fv(k, acc)
    elif tag == "gen":
        for k in ir[2]:
            _ir_fv(k, acc)
    elif tag == "abs":
        inner = _ir_fv(ir[2])
        acc |= inner - {x for x, _ in ir[1]}
    else:  # stk
        inner = _ir_fv(ir[2])
        for f in ir[1]:
            inner |= f.fv
        for f in ir[1]:
            inner -= f.names
        acc |= inner
    return acc


def _float(t):
    """Return ``(core_ir, frames)`` with every substitution extruded."""
    if isinstance(t, Var):
        return ("var", t.name), []
    if isinstance(t, ESub):
        cb, fb = _float(t.body)
        ca, fa = _float(t.arg)
        return cb, fb + fa + [_Frame(t.binders, ca)]
    if isinstance(t, Abs):
        cb, fb = _float(t.body)
        blocked = set(t.names)
        stuck = []
        free = list(fb)
        changed = True
        while changed:
            changed = False
            for f in list(free):
                if f.fv & blocked:
                    stuck.append(f)
                    free.remove(f)
                    blocked |= f.names
                    changed = True
        return ("abs", t.binders, ("stk", stuck, cb)), free
    frames = []
    cores = []
    for c in t.children:
        cc, fc = _float(c)
        cores.append(cc)
        frames.extend(fc)
    if isinstance(t, Lst):
        return ("lst", cores), frames
    if isinstance(t, App):
        return ("app", cores), frames
    return ("gen", t.name, cores), frames


class _Orderer:
    """Assigns traversal indices to frames and abstraction nodes."""

    def __init__(self, root):
        self.binder_frame = {}
        self.binder_abs = {}
        self.abs_idx = {}
        self.counter = 0
        self.abs_counter = 0
        self._index(root)

    def _index(self, ir):
        tag = ir[0]
        if tag == "var":
            return
        if tag in ("lst", "app"):
            for k in ir[1]:
                self._index(k)
        elif tag == "gen":
            for k in ir[2]:
                self._index(k)
        elif tag == "abs":
            for pos, (x, _) in enumerate(ir[1]):
                self.binder_abs[x] = (id(ir), pos)
            self._index(ir[2])
        else:
            for f in ir[1]:
                for x in f.names:
                    self.binder_frame[x] = f
                self._index(f.arg)
            self._index(ir[2])

    def visit(self, ir):
        tag = ir[0]
        if tag == "var":
            f = self.binder_frame.get(ir[1])
            if f is not None and f.idx is None:
                self.visit_frame(f)
        elif tag in ("lst", "app"):
            for k in ir[1]:
                self.visit(k)
        elif tag == "gen":
            for k in ir[2]:
                self.visit(k)
        elif tag == "abs":
            self.abs_idx[id(ir)] = self.abs_counter
            self.abs_counter += 1
            self.visit(ir[2])
        else:
            self.visit(ir[2])
            while True:
                pending = [f for f in ir[1] if f.idx is None]
                if not pending:
                    break
                self.visit_frame(min(pending, key=self.shape_key))

    def visit_frame(self, f):
        f.idx = self.counter
        self.counter += 1
        self.visit(f.arg)

    def shape_key(self, f):
        return repr(self.desc(f, {}))

    def desc(self, f, local):
        return (tuple(repr(a) for _, a in f.binders), self.shape(f.arg, local))

    def shape(self, ir, local):
        """Order-independent description; unvisited frames are described inline."""
        tag = ir[0]
        if tag == "var":
            x = ir[1]
            f = self.binder_frame.get(x)
            if f is not None:
                pos = [y for y, _ in f.binders].index(x)
                if f.idx is not None:
                    return ("i", f.idx, pos)
                return ("g", self.desc(f, local), pos)
            if x in self.binder_abs:
                node, pos = self.binder_abs[x]
                if node in local:
                    return ("l", local[node], pos)
                return ("a", self.abs_idx[node], pos)
            return ("f", x)
        if tag in ("lst", "app"):
            return (tag,) + tuple(self.shape(k, local) for k in ir[1])
        if tag == "gen":
            return (tag, ir[1]) + tuple(self.shape(k, local) for k in ir[2])
        if tag == "abs":
            inner = dict(local)
            inner[id(ir)] = len(local)
            return ("abs", tuple(repr(a) for _, a in ir[1]), self.shape(ir[2], inner))
        frames = sorted(repr(self.desc(f, local)) for f in ir[1])
        return ("stk", tuple(frames), self.shape(ir[2], local))


def _build(ir):
    tag = ir[0]
    if tag == "var":
        return Var(ir[1])
    if tag == "lst":
        return Lst([_build(k) for k in ir[1]])
    if tag == "app":
        kids = [_build(k) for k in ir[1]]
        return App(kids[0], kids[1:])
    if tag == "gen":
        return Gen(ir[1], [_build(k) for k in ir[2]])
    if tag == "abs":
        return Abs(ir[1], _build(ir[2]))
    frames = list(ir[1])
    order = []
    while frames:
        ready = [f for f in frames if not any(g is not f and g.names & f.fv for g in frames)]
        f = min(ready, key=lambda f: f.idx)
        order.append(f)
        frames.remove(f)
    t = _build(ir[2])
    for f in reversed(order):
        t = ESub(t, f.binders, _build(f.arg))
    return t


def struct_canon(s):
    """Canonical representative of the structural-equivalence class of ``s``."""
    avoid = all_names(s)
    counter = [0]

    def fresh():
        while True:
            counter[0] += 1
            name = f"u{counter[0]}"
            if name not in avoid:
                return name

    unique = rename_bound(s, fresh)
    core, frames = _float(unique)
    root = ("stk", frames, core)
    _Orderer(root).visit(root)
    return canonical_names(_build(root))


def canon_key(s):
    return alpha_key(struct_canon(s))


def struct_equiv(s, t):
    return canon_key(s) == canon_key(t)
