"""Types, signatures and their validity per signature kind."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import DuplicateName, FlavorMismatch, InvalidType, NonRepresentableType


class Kind(Enum):
    REPRESENTABLE = "representable"
    CLOSED = "closed"
    AUTONOMOUS = "autonomous"


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Tensor:
    args: tuple

    def __str__(self):
        return "(" + " * ".join(map(str, self.args)) + ")"


@dataclass(frozen=True)
class Arrow:
    args: tuple
    result: object

    def __str__(self):
        return "[" + ", ".join(map(str, self.args)) + "] -o " + str(self.result)


Type = Atom | Tensor | Arrow


def tensor(*args):
    return Tensor(tuple(args))


def arrow(args, result):
    return Arrow(tuple(args), result)


UNIT = Tensor(())


def atoms_of(t):
    if isinstance(t, Atom):
        yield t.name
    else:
        for a in t.args:
            yield from atoms_of(a)
        if isinstance(t, Arrow):
            yield from atoms_of(t.result)


def kind_valid(kind, t):
    """Grammar membership ignoring the atom set."""
    if isinstance(t, Atom):
        return True
    if isinstance(t, Tensor):
        if kind is Kind.CLOSED:
            return False
        return all(kind_valid(kind, a) for a in t.args)
    if kind is Kind.REPRESENTABLE:
        return False
    return all(kind_valid(kind, a) for a in t.args) and kind_valid(kind, t.result)


@dataclass(frozen=True)
class Signature:
    kind: Kind
    atoms: frozenset
    arrows: dict = field(default_factory=dict, hash=False, compare=True)

    @property
    def discrete(self):
        return not self.arrows

    def __hash__(self):
        return hash((self.kind, self.atoms, tuple(sorted(self.arrows))))


def type_valid(sig, t):
    return kind_valid(sig.kind, t) and all(n in sig.atoms for n in atoms_of(t))


def make_signature(kind, atoms, arrows=None):
    """Build a validated signature. ``arrows`` maps names to ``(sources, target)``;
    bare strings are read as atoms."""
    if isinstance(kind, str):
        kind = Kind(kind.lower())
    atoms = list(atoms)
    if len(set(atoms)) != len(atoms):
        raise DuplicateName("repeated atom name")
    arrows = dict(arrows or {})
    clash = set(arrows) & set(atoms)
    if clash:
        raise DuplicateName(f"generator name shared with an atom: {sorted(clash)[0]}")
    sig = Signature(kind, frozenset(atoms), {})
    checked = {}
    for name, (sources, target) in arrows.items():
        sources = [Atom(t) if isinstance(t, str) else t for t in sources]
        target = Atom(target) if isinstance(target, str) else target
        for t in (*sources, target):
            if not type_valid(sig, t):
                raise InvalidType(f"type {t} of generator {name} is not valid for a {kind.value} signature")
        checked[name] = (tuple(sources), target)
    return Signature(kind, frozenset(atoms), checked)


def strictify(t):
    """Flatten a representable type to its list of atom names."""
    if isinstance(t, Atom):
        return [t.name]
    if isinstance(t, Tensor):
        out = []
        for a in t.args:
            out.extend(strictify(a))
        return out
    raise NonRepresentableType(f"cannot strictify {t}")


def strictify_context(types):
    out = []
    for t in types:
        out.extend(strictify(t))
    return out


def type_size(t, flavor):
    """Type size in one of the flavors ``rep``, ``closed``, ``tensor1``, ``arrow2``."""
    flavor = flavor.lower()
    if flavor == "rep":
        if isinstance(t, Arrow):
            raise FlavorMismatch(f"{t} is not representable")
    elif flavor == "closed":
        if not kind_valid(Kind.CLOSED, t):
            raise FlavorMismatch(f"{t} is not a closed type")
    elif flavor not in ("tensor1", "arrow2"):
        raise FlavorMismatch(f"unknown flavor {flavor}")
    return _size(t, flavor)


def _size(t, flavor):
    if isinstance(t, Atom):
        return 0
    inner = sum(_size(a, flavor) for a in t.args)
    if isinstance(t, Tensor):
        return inner + (0 if flavor == "arrow2" else 1)
    inner += _size(t.result, flavor)
    return inner + (0 if flavor == "tensor1" else 1)


def tensor_size(t):
    return _size(t, "tensor1")


def arrow_size(t):
    return _size(t, "arrow2")
