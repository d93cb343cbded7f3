"""Random well-typed terms for property tests.

Generation is type-directed: ``TermGen.term(a, budget)`` builds a term of
type ``a`` whose free variables are fresh and recorded in ``env``. Binding
constructs capture variables already present in the generated body, so
every binder is used exactly once by construction.
"""
from __future__ import annotations

import random

from .signature import Arrow, Atom, Tensor
from .syntax import Abs, App, ESub, Gen, Lst, System, Var
from .typecheck import SYSTEM_KIND, check, natural_order
from .signature import kind_valid


class GenerationFailed(Exception):
    pass


class TermGen:
    def __init__(self, rng, sig, system, atoms=None, max_arity=3, type_depth=2):
        self.rng = rng if isinstance(rng, random.Random) else random.Random(rng)
        self.sig = sig
        self.system = System.parse(system)
        self.atoms = sorted(atoms or sig.atoms)
        self.max_arity = max_arity
        self.type_depth = type_depth
        self.env = {}
        self.n = 0

    # names and types
    def fresh(self, prefix="x"):
        self.n += 1
        return f"{prefix}{self.n}"

    def rand_type(self, depth=None):
        depth = self.type_depth if depth is None else depth
        r = self.rng
        if depth <= 0 or r.random() < 0.45:
            return Atom(r.choice(self.atoms))
        k = r.randint(0, self.max_arity - 1)
        args = tuple(self.rand_type(depth - 1) for _ in range(k))
        if self.system in (System.REP, System.SYMREP):
            return Tensor(args)
        if self.system is System.SYMCLOSED:
            return Arrow(args, self.rand_type(depth - 1))
        if r.random() < 0.5:
            return Tensor(args)
        return Arrow(args, self.rand_type(depth - 1))

    @property
    def has_tensor(self):
        return self.system is not System.SYMCLOSED

    @property
    def has_arrow(self):
        return self.system in (System.SYMCLOSED, System.AUTO)

    def var(self, a):
        x = self.fresh()
        self.env[x] = a
        return Var(x)

    def split(self, budget, k):
        if k == 0:
            return []
        cuts = sorted(self.rng.randint(0, max(budget, 0)) for _ in range(k - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [max(budget, 0)])]
        return [max(p, 1) for p in parts]

    def pick_binders(self, q):
        """Choose free variables of ``q`` to bind, respecting rep ordering."""
        order = natural_order(q)
        k = self.rng.randint(0, min(3, len(order)))
        if self.system is System.REP:
            i = self.rng.randint(0, len(order) - k)
            return order[i:i + k]
        return self.rng.sample(order, k)

    # generation
    def term(self, a, budget):
        r = self.rng
        if budget <= 1:
            return self.var(a)
        opts = ["var", "esub", "esub", "intro", "intro"]
        if self.has_arrow:
            opts += ["app", "app"]
        gens = [f for f, (srcs, tgt) in self.sig.arrows.items()
                if tgt == a and all(kind_valid(SYSTEM_KIND[self.system], t) for t in (*srcs, tgt))]
        if gens:
            opts.append("gen")
        if not self.has_tensor:
            opts = [o for o in opts if o != "esub"]
        if budget > 3 and r.random() < 0.8:
            opts.remove("var")
        choice = r.choice(opts)
        if choice == "var":
            return self.var(a)
        if choice == "intro":
            if isinstance(a, Tensor):
                return Lst([self.term(b, n) for b, n in zip(a.args, self.split(budget - 1, len(a.args)))])
            if isinstance(a, Arrow):
                return self.abs_intro(a, budget)
            return self.var(a)
        if choice == "esub":
            b1, b2 = self.split(budget - 1, 2)
            q = self.term(a, b1)
            ys = self.pick_binders(q)
            binders = [(y, self.env.pop(y)) for y in ys]
            p = self.term(Tensor(tuple(t for _, t in binders)), b2)
            return ESub(q, binders, p)
        if choice == "app":
            dom = tuple(self.rand_type(1) for _ in range(r.randint(0, 2)))
            parts = self.split(budget - 1, len(dom) + 1)
            f = self.term(Arrow(dom, a), parts[0])
            return App(f, [self.term(b, n) for b, n in zip(dom, parts[1:])])
        f = r.choice(gens)
        srcs = self.sig.arrows[f][0]
        return Gen(f, [self.term(b, n) for b, n in zip(srcs, self.split(budget - 1, len(srcs)))])

    def abs_intro(self, a, budget):
        body = self.term(a.result, budget - 1)
        free = natural_order(body)
        chosen = []
        for b in a.args:
            cands = [x for x in free if self.env.get(x) == b and x not in chosen]
            if not cands:
                break
            chosen.append(self.rng.choice(cands))
        else:
            binders = [(x, self.env.pop(x)) for x in chosen]
            return Abs(binders, body)
        ys = [self.fresh("z") for _ in a.args]
        f = self.term(a, budget - 1 - len(ys)) if budget > 3 else self.var(a)
        return Abs(list(zip(ys, a.args)), App(f, [Var(y) for y in ys]))

    def judgment(self, a=None, budget=12):
        """Return ``(ctx, term, type)``; rep contexts follow the natural order."""
        self.env = {}
        a = a if a is not None else self.rand_type()
        s = self.term(a, budget)
        order = natural_order(s)
        if self.system.symmetric:
            self.rng.shuffle(order)
        return [(x, self.env[x]) for x in order], s, a


def random_judgment(rng, sig, system, max_size=30, a=None, budget=None, tries=200, **kw):
    """A well-typed judgment with term size at most ``max_size``."""
    g = TermGen(rng, sig, system, **kw)
    for _ in range(tries):
        b = budget if budget is not None else g.rng.randint(1, max(2, max_size // 2))
        ctx, s, t = g.judgment(a, b)
        if s.size <= max_size:
            check(sig, system, ctx, s, t)
            return ctx, s, t
    raise GenerationFailed(f"no term of size <= {max_size} after {tries} tries")
