"""Permutations of [n] as 1-based image tuples, block shuffles and the
canonical shuffle decomposition.

Conventions: ``compose(s, t)(i) = s(t(i))`` and ``act(xs, s)[i] = xs[s(i)]``,
which makes ``act`` a right action.

The hot kernels come from the compiled ``_perm_ext`` module when it is
built, otherwise from ``_perm_py``. Set ``RESCALC_PURE=1`` to force the
fallback.
"""
from __future__ import annotations

import itertools
import os

from .errors import DegreeMismatch, LengthMismatch

if os.environ.get("RESCALC_PURE"):
    from . import _perm_py as _k
else:
    try:
        from . import _perm_ext as _k
    except ImportError:
        from . import _perm_py as _k

BACKEND = "compiled" if _k.__name__.endswith("_perm_ext") else "python"


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation: {list(images)}")
        self.images = images

    @classmethod
    def _raw(cls, images):
        p = object.__new__(cls)
        p.images = images
        return p

    @classmethod
    def identity(cls, n):
        return cls._raw(tuple(range(1, n + 1)))

    @property
    def degree(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i - 1]

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __lt__(self, other):
        return self.images < other.images

    def __repr__(self):
        return f"Permutation({list(self.images)})"

    def __str__(self):
        return "[" + ",".join(map(str, self.images)) + "]"

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.images, 1))

    def inverse(self):
        return Permutation._raw(_k.inverse(self.images))

    def __matmul__(self, other):
        return compose(self, other)


def _check_profile(sigma, blocks):
    if sum(blocks) != sigma.degree:
        raise DegreeMismatch(
            f"profile {list(blocks)} sums to {sum(blocks)}, permutation has degree {sigma.degree}")
    if any(n < 0 for n in blocks):
        raise ValueError("block sizes must be natural numbers")


def identity(n):
    return Permutation.identity(n)


def compose(sigma, tau):
    if sigma.degree != tau.degree:
        raise DegreeMismatch(f"cannot compose degrees {sigma.degree} and {tau.degree}")
    return Permutation._raw(_k.compose(sigma.images, tau.images))


def block_sum(perms):
    return Permutation._raw(_k.block_sum([p.images for p in perms]))


def is_shuffle(sigma, blocks):
    blocks = tuple(blocks)
    _check_profile(sigma, blocks)
    return _k.is_shuffle(sigma.images, blocks)


def enumerate_shuffles(blocks):
    """All shuffles for the profile, sorted by image array."""
    return [Permutation._raw(p) for p in _k.shuffles(tuple(blocks))]


def shuffle_decompose(sigma, blocks):
    """Return ``(tau0, parts)`` with ``sigma = tau0 . (+)parts`` and tau0 a shuffle."""
    blocks = tuple(blocks)
    _check_profile(sigma, blocks)
    tau0, parts = _k.decompose(sigma.images, blocks)
    return Permutation._raw(tau0), [Permutation._raw(p) for p in parts]


def act(xs, sigma):
    xs = list(xs)
    if len(xs) != sigma.degree:
        raise LengthMismatch(f"list of length {len(xs)} acted on by degree {sigma.degree}")
    return [xs[i - 1] for i in sigma.images]


def stabilizer(xs):
    xs = list(xs)
    n = len(xs)
    return {Permutation._raw(tuple(p)) for p in itertools.permutations(range(1, n + 1))
            if all(xs[p[i] - 1] == xs[i] for i in range(n))}


def all_permutations(n):
    return [Permutation._raw(p) for p in itertools.permutations(range(1, n + 1))]


def expand(sigma, lengths):
    """Blow each point i of sigma up into a block of ``lengths[i-1]`` points.

    ``lengths`` are the block lengths of the *target* list, so that
    ``act(concat(B), expand(sigma, len(B))) == concat(act(B, sigma))``.
    """
    starts = [0]
    for n in lengths:
        starts.append(starts[-1] + n)
    out = []
    for j in sigma.images:
        out.extend(range(starts[j - 1] + 1, starts[j] + 1))
    return Permutation._raw(tuple(out))
