"""Acceptance suite: one test per criterion, named ``test_c<N>_<name>``.

Run standalone with ``python tests/test_acceptance.py``; the conftest hook
prints one PASS/FAIL line per criterion at the end of the session.
"""
import io
import itertools
import math
import random
import sys
import time
from pathlib import Path

import pytest

import oracles
from rescalc import perm
from rescalc.cli import main as cli_main
from rescalc.equiv import struct_equiv
from rescalc.generate import TermGen, random_judgment
from rescalc.multicat import (PermModel, coherence_report, compose, curry, from_judgment, interpret,
                              realizable_permutations, rep_elim, rep_intro, sym_act, uncurry)
from rescalc.rewrite import (RedexKind, contract, eta_measures, is_normal, normalize,
                             random_strategy, redexes_unchecked)
from rescalc.signature import Arrow, Atom, Tensor, make_signature
from rescalc.syntax import FreshNames, all_names, judgment_str, to_str
from rescalc.typecheck import check

REP = make_signature("representable", ["a", "b"])
CLOSED = make_signature("closed", ["a", "b"], {"f": (["a", "b"], "a"), "g": ([], "b")})
AUTO = make_signature("autonomous", ["a", "b"], {"f": (["a", "b"], "a"), "g": ([], "b")})
SIGS = {"rep": REP, "symrep": REP, "symclosed": CLOSED, "auto": AUTO}
DISCRETE = {"rep": REP, "symrep": REP, "symclosed": make_signature("closed", ["a", "b"]),
            "auto": make_signature("autonomous", ["a", "b"])}
MEASURE_INDEX = {RedexKind.BETA1: 0, RedexKind.BETA2: 0, RedexKind.ETA1: 1, RedexKind.ETA2: 2}
GOLDEN = Path(__file__).parent / "golden"


def one_step(sig, env, s, r):
    return contract(sig, env, s, r, FreshNames(all_names(s) | set(env)))


def typed_in(sig, system, ctx, a):
    def ok(t):
        try:
            check(sig, system, ctx, t, a)
        except Exception:
            return False
        return True
    return ok


# ------------------------------------------------------------ 1

def _profiles():
    for n in range(8):
        yield from oracles.compositions(n)
    # profiles with empty blocks
    for n in range(6):
        for c in oracles.compositions(n):
            for i in range(len(c) + 1):
                yield c[:i] + (0,) + c[i:]
    yield (0, 0)
    yield (0, 2, 0, 1, 0)


def test_c1_shuffle_algebra():
    t0 = time.perf_counter()
    checked = 0
    for blocks in _profiles():
        n = sum(blocks)
        shuffles = perm.enumerate_shuffles(blocks)
        multinomial = math.factorial(n) // math.prod(math.factorial(k) for k in blocks)
        assert len(shuffles) == multinomial == len(set(shuffles)), blocks
        assert all(perm.is_shuffle(t, blocks) for t in shuffles)
        # every (shuffle, block perms) pair gives a distinct permutation that decomposes back to it
        seen = set()
        part_choices = [perm.all_permutations(k) for k in blocks]
        for tau0 in shuffles:
            for parts in itertools.product(*part_choices):
                sigma = perm.compose(tau0, perm.block_sum(list(parts)))
                assert sigma not in seen
                seen.add(sigma)
                got = perm.shuffle_decompose(sigma, blocks)
                assert got == (tau0, list(parts)), (sigma, blocks)
        assert len(seen) == math.factorial(n)
        checked += 1
    assert checked > 150
    assert time.perf_counter() - t0 < 10


# ------------------------------------------------------------ 2

def test_c2_canonicity_of_typing():
    t0 = time.perf_counter()
    rng = random.Random(0)
    judgments = 0
    for skel in oracles.symrep_skeletons(8):
        for term, env in oracles.type_skeleton(skel, ["a", "b"], rng):
            for order in itertools.permutations(sorted(term.fv)):
                ctx = [(x, env[x]) for x in order]
                found = oracles.all_derivations(ctx, term)
                assert len(found) <= 1, judgment_str(ctx, term, None)
                if found:
                    a, tree = found[0]
                    d = check(REP, "symrep", ctx, term, a)
                    assert oracles.derivation_tree(d) == tree
                judgments += 1
    assert judgments > 100_000
    assert time.perf_counter() - t0 < 120


# ------------------------------------------------------------ 3

def test_c3_subject_reduction_and_measures():
    rng = random.Random(3)
    terms = steps = 0
    while terms < 1000:
        ctx, s, a = random_judgment(rng, AUTO, "auto", max_size=30, budget=rng.randint(4, 20))
        env = dict(ctx)
        terms += 1
        # every one-step reduct of every term along a random reduction path
        while True:
            rs = redexes_unchecked(AUTO, env, s)
            if not rs:
                break
            before = (s.size,) + eta_measures(AUTO, env, s)
            for r in rs:
                t = one_step(AUTO, env, s, r)
                check(AUTO, "auto", ctx, t, a)
                after = (t.size,) + eta_measures(AUTO, env, t)
                i = MEASURE_INDEX[r.kind]
                assert after[i] < before[i], (judgment_str(ctx, s, a), r, to_str(t))
                steps += 1
            s = one_step(AUTO, env, s, rng.choice(rs))
    assert steps > 1000


# ------------------------------------------------------------ 4

def test_c4_confluence_and_unique_normal_form():
    rng = random.Random(4)
    for i in range(500):
        ctx, s, a = random_judgment(rng, AUTO, "auto", max_size=30, budget=rng.randint(4, 20))
        nf0, _ = normalize(AUTO, "auto", ctx, s)
        for k in range(50):
            # the default budget is the measure-derived one; exceeding it raises
            nf, _ = normalize(AUTO, "auto", ctx, s, strategy=random_strategy(1000 * i + k),
                              typecheck=False)
            assert struct_equiv(nf, nf0), (judgment_str(ctx, s, a), to_str(nf0), to_str(nf))


# ------------------------------------------------------------ 5

def test_c5_strong_bisimulation():
    rng = random.Random(5)
    systems = ["auto", "symclosed", "symrep", "rep"]
    triples = 0
    while triples < 500:
        system = systems[triples % len(systems)]
        sig = SIGS[system]
        ctx, s, a = random_judgment(rng, sig, system, max_size=30, budget=rng.randint(4, 20))
        env = dict(ctx)
        rs = redexes_unchecked(sig, env, s)
        if not rs:
            continue
        # in rep not every structural move keeps the term typable there
        keep = typed_in(sig, system, ctx, a) if system == "rep" else None
        s2 = oracles.random_equiv_walk(s, rng, rng.randint(1, 6), keep=keep)
        check(sig, system, ctx, s2, a)
        r = rng.choice(rs)
        t = one_step(sig, env, s, r)
        assert any(struct_equiv(t, one_step(sig, env, s2, r2))
                   for r2 in redexes_unchecked(sig, env, s2)), (to_str(s), to_str(s2), r)
        triples += 1


# ------------------------------------------------------------ 6

def _grammar_class_member(t, env):
    return any(oracles.in_rep_nf_grammar(m, env) for m in oracles.equiv_class(t).values())


def test_c6_normal_form_grammar():
    rng = random.Random(6)
    normalized = reducible = 0
    while normalized < 500:
        ctx, s, a = random_judgment(rng, REP, "rep", max_size=18, budget=rng.randint(2, 10))
        env = dict(ctx)
        nf, _ = normalize(REP, "rep", ctx, s)
        for t in (s, nf):
            assert is_normal(REP, env, t) == _grammar_class_member(t, env), to_str(t)
        reducible += not is_normal(REP, env, s)
        normalized += 1
    assert reducible > 100
    # and members of the grammar, moved around by structural steps, are redex-free
    for _ in range(500):
        ctx, t = oracles.random_rep_nf(rng, ["a", "b"])
        env = dict(ctx)
        a = oracles.type_of_tree(_core(t), {**env, **_binders(t)})
        check(REP, "rep", ctx, t, a)
        moved = oracles.random_equiv_walk(t, rng, 3, keep=typed_in(REP, "rep", ctx, a))
        assert is_normal(REP, env, t) and is_normal(REP, env, moved)


def _core(t):
    while hasattr(t, "binders"):
        t = t.body
    return t


def _binders(t):
    out = {}
    while hasattr(t, "binders"):
        out.update(t.binders)
        t = t.body
    return out


# ------------------------------------------------------------ 7 and 8

def _sequences(max_len):
    for n in range(1, max_len + 1):
        yield from itertools.product("ab", repeat=n)


def _types(seq):
    # units only where the context is short enough to keep the search at desk scale
    return oracles.types_with_strict(tuple(seq), 3, 0 if len(seq) == 4 else 1)


def test_c7_representable_coherence():
    t0 = time.perf_counter()
    matched = mismatched = 0
    for seq in _sequences(4):
        ctx = [Atom(x) for x in seq]
        for ty in _types(seq):
            r = coherence_report(REP, "rep", ctx, ty, 64)
            assert len(r.classes) == 1, (seq, str(ty))
            matched += 1
        for other in itertools.product("ab", repeat=len(seq)):
            if other == seq:
                continue
            for ty in _types(other):
                assert coherence_report(REP, "rep", ctx, ty, 64).classes == [], (seq, str(ty))
                mismatched += 1
    assert matched > 500 and mismatched > 500
    assert time.perf_counter() - t0 < 60


def test_c8_symmetric_coherence():
    pm = PermModel()
    reports = 0
    for seq in _sequences(4):
        ctx = [Atom(x) for x in seq]
        for target in sorted(set(itertools.permutations(seq))):
            for ty in _types(target):
                r = coherence_report(REP, "symrep", ctx, ty, 64)
                expected = realizable_permutations(ctx, ty)
                assert len(r.classes) == len(expected) == len(set(r.sym)), (seq, str(ty))
                assert set(r.sym) == set(expected)
                for m, p in zip(r.classes, r.sym):
                    assert interpret(None, pm, m).perm == p
                reports += 1
        # a different multiset of atoms has no inhabitant at all
        for other in itertools.product("ab", repeat=len(seq)):
            if sorted(other) == sorted(seq):
                continue
            for ty in _types(other)[:4]:
                assert coherence_report(REP, "symrep", ctx, ty, 64).classes == []
    assert reports > 500


# ------------------------------------------------------------ 9

def _random_morphism(rng, system):
    sig = DISCRETE[system]
    ctx, s, a = random_judgment(rng, sig, system, max_size=20, budget=rng.randint(2, 14))
    return from_judgment(sig, system, ctx, s, a)


def test_c9_bijection_round_trips():
    rng = random.Random(9)
    elim_first = intro_first = 0
    while elim_first < 500 or intro_first < 500:
        f = _random_morphism(rng, rng.choice(["rep", "symrep", "auto"]))
        ks = [i for i, t in enumerate(f.source) if isinstance(t, Tensor)]
        if ks:
            k = rng.choice(ks)
            assert rep_intro(rep_elim(f, k), (k, len(f.source[k].args))) == f
            elim_first += 1
        start = rng.randint(0, len(f.source))
        length = rng.randint(0, len(f.source) - start)
        assert rep_elim(rep_intro(f, (start, length)), start) == f
        intro_first += 1
    curry_first = uncurry_first = 0
    while curry_first < 500 or uncurry_first < 500:
        f = _random_morphism(rng, rng.choice(["symclosed", "auto"]))
        assert uncurry(curry(f, rng.randint(0, len(f.source)))) == f
        curry_first += 1
        if isinstance(f.target, Arrow):
            assert curry(uncurry(f), len(f.target.args)) == f
            uncurry_first += 1
        else:
            g = curry(f, rng.randint(0, len(f.source)))
            assert curry(uncurry(g), len(g.target.args)) == g
            uncurry_first += 1


# ------------------------------------------------------------ 10

def _shuffled(rng, m):
    # generated terms seldom permute their context, so act by a random permutation
    images = list(range(1, len(m.source) + 1))
    rng.shuffle(images)
    return sym_act(m, perm.Permutation(images))


def test_c10_interpretation_functoriality():
    rng = random.Random(10)
    pm = PermModel()
    nontrivial = 0
    for i in range(400):
        system = "symrep" if i % 4 else "rep"
        # a product target spreads the source over several variables
        gen = TermGen(rng, REP, system)
        a = Tensor(tuple(gen.rand_type(1) for _ in range(rng.randint(2, 4))))
        ctx, s, _ = random_judgment(rng, REP, system, max_size=24, a=a, budget=rng.randint(4, 14))
        f = from_judgment(REP, system, ctx, s, a)
        if system == "symrep":
            f = _shuffled(rng, f)
        gs = []
        for t in f.source:
            c2, s2, _ = random_judgment(rng, REP, system, max_size=14, a=t,
                                        budget=rng.randint(1, 8))
            g = from_judgment(REP, system, c2, s2, t)
            gs.append(_shuffled(rng, g) if system == "symrep" else g)
        lhs = interpret(None, pm, compose(f, gs))
        rhs = pm.compose(interpret(None, pm, f), [interpret(None, pm, g) for g in gs])
        assert lhs == rhs and pm.check(lhs)
        nontrivial += not lhs.perm.is_identity()
    assert nontrivial > 100


# ------------------------------------------------------------ 11

@pytest.mark.parametrize("case", ["eta_chain", "action_at_distance", "unit_collapse",
                                  "shuffle_remark"])
def test_c11_cli_golden_corpus(case):
    for path in sorted(GOLDEN.glob(f"{case}*.args")):
        argv = path.read_text(encoding="utf-8").splitlines()
        buf = io.StringIO()
        code = cli_main(argv, stdout=buf)
        expected = path.with_suffix(".out").read_text(encoding="utf-8")
        assert buf.getvalue() + f"exit: {code}\n" == expected, path.name


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
