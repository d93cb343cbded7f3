import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from rescalc.errors import ArityMismatch, InvalidRedex, NotFree, StepBudgetExceeded
from rescalc.generate import random_judgment
from rescalc.parse import parse_judgment, parse_term
from rescalc.rewrite import (Redex, RedexKind, contract, equivalent, find_redexes, measure,
                             normalize, occurrence_substitute, redexes_unchecked, rename_free, step,
                             struct_canon, struct_equiv, substitute)
from rescalc.signature import make_signature
from rescalc.syntax import FreshNames, Var, all_names, alpha_eq, free_vars, to_str
from rescalc.typecheck import check

AUTO = make_signature("autonomous", ["a", "b"], {"f": (["a", "b"], "a"), "g": ([], "b")})
REP = make_signature("representable", ["a", "b"])
ROOT = ()


def judgment(text):
    return parse_judgment(text)


def auto_judgments(max_size=20):
    return st.integers(0, 10**9).map(
        lambda seed: random_judgment(random.Random(seed), AUTO, "auto", max_size=max_size))


def test_substitute_examples():
    t = parse_term("<u,w>")
    assert substitute(Var("x"), ["x"], [t]) == t
    got = substitute(parse_term("<y,x>"), ["x", "y"], [Var("u"), Var("v")])
    assert got == parse_term("<v,u>")
    assert got == occurrence_substitute(parse_term("<y,x>"), ["x", "y"], [Var("u"), Var("v")])


def test_substitute_errors():
    with pytest.raises(ArityMismatch):
        substitute(Var("x"), ["x"], [])
    with pytest.raises(NotFree):
        substitute(Var("x"), ["y"], [Var("z")])


def test_substitute_avoids_capture():
    s = parse_term("<x, y[y:a := z]>")
    got = substitute(s, ["x"], [Var("y")])
    assert free_vars(got) == ["y", "z"]
    assert alpha_eq(got, parse_term("<y, q[q:a := z]>"))


def test_find_redexes_examples():
    ctx, s, _ = judgment("x:(a * b) |- x : (a * b)")
    assert find_redexes(AUTO, "auto", ctx, s) == [Redex(ROOT, RedexKind.ETA1)]
    ctx, s, _ = judgment("x:(a * b) |- <y1,y2>[y1:a,y2:b := x] : (a * b)")
    assert find_redexes(AUTO, "auto", ctx, s) == []
    ctx, s, _ = judgment("z:(a) |- x[x:a := <y>[y:a := z]] : a")
    assert find_redexes(AUTO, "auto", ctx, s) == [Redex(ROOT, RedexKind.BETA1)]


def test_eta_blocked_positions():
    # directly under := and in function position nothing expands
    ctx, s, _ = judgment("x:(a * b), h:[a] -o b, y:a |- <<u,v>[u:a,v:b := x], h <y>> : ((a * b) * b)")
    kinds = {(r.position, r.kind) for r in find_redexes(AUTO, "auto", ctx, s)}
    assert ((0, 1), RedexKind.ETA1) not in kinds
    assert ((1, 0), RedexKind.ETA2) not in kinds
    ctx, s, _ = judgment("x:((a * b)) |- <p>[p:(a * b) := x] : ((a * b))")
    kinds = {(r.position, r.kind) for r in find_redexes(AUTO, "auto", ctx, s)}
    assert kinds == {((0, 0), RedexKind.ETA1)}


def test_step_examples():
    ctx, s, _ = judgment("u:a, v:b |- <y,x>[x:a,y:b := <u,v>] : (b * a)")
    assert step(AUTO, "auto", ctx, s, Redex(ROOT, RedexKind.BETA1)) == parse_term("<v,u>")
    ctx, s, _ = judgment("x:(a * b) |- x : (a * b)")
    got = step(AUTO, "auto", ctx, s, Redex(ROOT, RedexKind.ETA1))
    assert alpha_eq(got, parse_term("<y1,y2>[y1:a,y2:b := x]"))
    ctx, s, _ = judgment("f:[a] -o b |- f : [a] -o b")
    got = step(AUTO, "auto", ctx, s, Redex(ROOT, RedexKind.ETA2))
    assert alpha_eq(got, parse_term("\\<y:a>. f <y>"))
    with pytest.raises(InvalidRedex):
        step(AUTO, "auto", ctx, s, Redex(ROOT, RedexKind.BETA2))


def test_beta_through_substitution_chain():
    ctx, s, a = judgment("z:(a) |- x[x:a := <y>[y:a := z]] : a")
    nf, trace = normalize(AUTO, "auto", ctx, s)
    assert alpha_eq(nf, parse_term("y[y:a := z]"))
    assert [r.kind for r, _ in trace.steps] == [RedexKind.BETA1]


def test_beta2_through_chain():
    ctx, s, a = judgment("w:a, p:(b) |- (\\<x:a>. f(x, y))[y:b := p] <w> : a")
    nf, trace = normalize(AUTO, "auto", ctx, s)
    assert trace.steps[0][0].kind is RedexKind.BETA2
    assert struct_equiv(nf, parse_term("f(w, y)[y:b := p]"))


def test_normalize_examples():
    ctx, s, _ = judgment("x:a |- x : a")
    nf, trace = normalize(AUTO, "auto", ctx, s)
    assert nf == s and trace.steps == []
    ctx, s, _ = judgment("x:(a * b) |- x : (a * b)")
    nf, trace = normalize(AUTO, "auto", ctx, s)
    assert len(trace.steps) == 1
    assert trace.initial_measures == (1, 1, 0) and trace.measures == [(5, 0, 0)]
    assert trace.lines() == ["step 1: Eta1 @ / ; size=5 eta1=0 eta2=0"]
    assert trace.to_json()["steps"][0]["kind"] == "Eta1"


def test_normalize_is_deterministic():
    ctx, s, _ = judgment("x:((a * b) * [a] -o b) |- x : ((a * b) * [a] -o b)")
    n1, t1 = normalize(AUTO, "auto", ctx, s)
    n2, t2 = normalize(AUTO, "auto", ctx, s)
    assert n1 == n2 and t1.lines(True) == t2.lines(True)


def test_step_budget_guard():
    ctx, s, _ = judgment("x:(a * b) |- x : (a * b)")
    with pytest.raises(StepBudgetExceeded):
        normalize(AUTO, "auto", ctx, s, budget=0)


def test_measure_examples():
    ctx, s, _ = judgment("x:(a * b) |- x : (a * b)")
    assert measure(AUTO, "auto", ctx, s, "eta1") == 1
    ctx, s, _ = judgment("x:(a * b) |- <y1,y2>[y1:a,y2:b := x] : (a * b)")
    assert measure(AUTO, "auto", ctx, s, "eta1") == 0
    assert measure(AUTO, "auto", ctx, s, "size") == s.size == 5


def test_struct_canon_examples():
    p = parse_term("<>[ := x][ := y]")
    q = parse_term("<>[ := y][ := x]")
    assert alpha_eq(struct_canon(p), struct_canon(q))
    inner = parse_term("<s1[x:a,y:a := t], s2>")
    assert struct_equiv(inner, parse_term("<s1,s2>[x:a,y:a := t]"))
    plain = parse_term("f(<x,y>, z)")
    assert struct_canon(plain) == plain
    assert not struct_equiv(parse_term("<x>"), parse_term("<y>"))
    # a substitution cannot leave the abstraction binding its argument
    lam = parse_term("\\<z:a>. <x>[x:a := <z>]")
    assert not struct_equiv(lam, parse_term("(\\<z:a>. <x>)[x:a := <z>]"))


def test_equivalent_examples():
    ctx, s, a = judgment("u:a, v:b |- <y,x>[x:a,y:b := <u,v>] : (b * a)")
    nf, _ = normalize(AUTO, "auto", ctx, s)
    assert equivalent(AUTO, "auto", ctx, s, nf, a)
    ctx, s, a = judgment("x:a, y:a |- <x,y> : (a * a)")
    assert not equivalent(AUTO, "auto", ctx, s, parse_term("<y,x>"), a)


@settings(max_examples=200, deadline=None)
@given(auto_judgments(), st.randoms(use_true_random=False))
def test_substitution_laws(j, rnd):
    ctx, s, a = j
    xs = [x for x, _ in ctx]
    if not xs:
        return
    rnd.shuffle(xs)
    xs = xs[:rnd.randint(1, len(xs))]
    ts = [parse_term(f"<r{i}, q{i}>") for i in range(len(xs))]
    got = substitute(s, xs, ts)
    assert got.size == s.size + sum(t.size for t in ts) - len(xs)
    assert alpha_eq(got, occurrence_substitute(s, xs, ts))
    # exchange: substituting one variable at a time gives the same term
    one = s
    for x, t in zip(xs, ts):
        one = substitute(one, [x], [t])
    assert alpha_eq(one, got)


@settings(max_examples=200, deadline=None)
@given(auto_judgments(), st.integers(0, 10**9))
def test_subject_substitution(j, seed):
    ctx, s, a = j
    if not ctx:
        return
    rng = random.Random(seed)
    k = rng.randrange(len(ctx))
    x, b = ctx[k]
    c2, t, _ = random_judgment(rng, AUTO, "auto", max_size=12, a=b)
    t = rename_free(t, {y: f"t_{y}" for y, _ in c2})
    c2 = [(f"t_{y}", ty) for y, ty in c2]
    new_ctx = list(ctx[:k]) + c2 + list(ctx[k + 1:])
    check(AUTO, "auto", new_ctx, substitute(s, [x], [t]), a)


def _steps(env, s, kinds):
    fresh = FreshNames(all_names(s) | set(env))
    return [contract(AUTO, env, s, r, fresh) for r in redexes_unchecked(AUTO, env, s)
            if r.kind in kinds]


BETA = (RedexKind.BETA1, RedexKind.BETA2)
ETA = (RedexKind.ETA1, RedexKind.ETA2)


def _closure(env, terms, kinds, depth):
    seen = list(terms)
    frontier = list(terms)
    for _ in range(depth):
        frontier = [u for t in frontier for u in _steps(env, t, kinds)]
        seen.extend(frontier)
    return seen


def _beta_then_eta(rng):
    while True:
        ctx, s, a = random_judgment(rng, AUTO, "auto", max_size=12)
        env = dict(ctx)
        betas = _steps(env, s, BETA)
        if betas:
            t = rng.choice(betas)
            etas = _steps(env, t, ETA)
            if etas:
                return env, s, rng.choice(etas)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_beta_eta_commute(seed):
    env, s, target = _beta_then_eta(random.Random(seed))
    found = _closure(env, _closure(env, [s], ETA, 2), BETA, 2)
    assert any(struct_equiv(u, target) for u in found), to_str(s)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_normal_forms_are_struct_closed(seed):
    rng = random.Random(seed)
    ctx, s, a = random_judgment(rng, AUTO, "auto", max_size=20)
    nf, _ = normalize(AUTO, "auto", ctx, s)
    env = dict(ctx)
    moved = oracles.random_equiv_walk(nf, rng, 4)
    assert not redexes_unchecked(AUTO, env, moved)
    check(AUTO, "auto", ctx, moved, a)
