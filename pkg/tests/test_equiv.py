import random
from collections import defaultdict

from hypothesis import given, settings, strategies as st

import oracles
from rescalc.equiv import canon_key, struct_canon, struct_equiv
from rescalc.generate import random_judgment
from rescalc.parse import parse_term
from rescalc.signature import make_signature
from rescalc.syntax import alpha_eq, alpha_key, free_vars

AUTO = make_signature("autonomous", ["a", "b"], {"f": (["a", "b"], "a"), "g": ([], "b")})


def test_canon_is_idempotent_on_examples():
    for text in ["<>[ := x][ := y]", "<u,v>[u:a := <p>][v:a := <q>]",
                 "\\<z:a>. <x, w>[x:a := <z>][w:b := y]", "f(x[x:a := <p>], y)"]:
        c = struct_canon(parse_term(text))
        assert alpha_eq(struct_canon(c), c)


def test_dependent_frames_keep_their_order():
    s = parse_term("<u>[u:a := <v>][v:a := w]")
    nested = parse_term("<u>[u:a := <v>[v:a := w]]")
    assert alpha_eq(struct_canon(s), s)
    assert alpha_eq(struct_canon(nested), s)


def test_unit_substitutions_commute():
    assert struct_equiv(parse_term("<x>[ := p][ := q]"), parse_term("<x>[ := q][ := p]"))
    assert not struct_equiv(parse_term("<x>[ := p]"), parse_term("<x>[ := q]"))


def test_exhaustive_small_terms():
    # every term of size <= 7 of the representable fragment: canonical keys
    # are constant on each brute-force class and separate distinct classes
    classes = {}
    for s in oracles.symrep_skeletons(7):
        members = oracles.equiv_class(s)
        keys = {canon_key(t) for t in members.values()}
        assert len(keys) == 1
        classes[frozenset(members)] = keys.pop()
    by_key = defaultdict(set)
    for members, key in classes.items():
        by_key[key].add(members)
    assert all(len(v) == 1 for v in by_key.values())
    assert len(by_key) > 4000


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_random_autonomous_classes(seed):
    rng = random.Random(seed)
    ctx, s, a = random_judgment(rng, AUTO, "auto", max_size=10)
    members = oracles.equiv_class(s)
    keys = {canon_key(t) for t in members.values()}
    assert len(keys) == 1
    assert alpha_key(struct_canon(s)) in members


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_canon_invariant_along_walks(seed):
    rng = random.Random(seed)
    ctx, s, a = random_judgment(rng, AUTO, "auto", max_size=24)
    t = oracles.random_equiv_walk(s, rng, rng.randint(1, 8))
    assert alpha_eq(struct_canon(s), struct_canon(t))
    assert set(free_vars(struct_canon(s))) == set(free_vars(s))
