"""Resource calculi for representable, closed and autonomous multicategories.

Linear terms with explicit substitution, their typing and reduction, and the
free multicategories they present.
"""
from .errors import RescalcError
from .multicat import (FreeModel, Morphism, PermModel, TallyModel, coherence_report, compose,
                       curry, enumerate_normal_inhabitants, from_judgment, identity, interpret,
                       rep_elim, rep_intro, sym_act, sym_extract, uncurry)
from .parse import parse_judgment, parse_signature, parse_term, parse_type
from .perm import BACKEND, Permutation, enumerate_shuffles, shuffle_decompose
from .rewrite import find_redexes, normalize, step, substitute
from .equiv import struct_canon, struct_equiv
from .signature import Arrow, Atom, Kind, Signature, Tensor, make_signature, strictify
from .syntax import System, to_str
from .typecheck import check, infer

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Arrow", "Atom", "FreeModel", "Kind", "Morphism", "PermModel", "Permutation",
    "RescalcError", "Signature", "System", "TallyModel", "Tensor", "check", "coherence_report",
    "compose", "curry", "enumerate_normal_inhabitants", "enumerate_shuffles", "find_redexes",
    "from_judgment", "identity", "infer", "interpret", "make_signature", "normalize",
    "parse_judgment", "parse_signature", "parse_term", "parse_type", "rep_elim", "rep_intro",
    "shuffle_decompose", "step", "strictify", "struct_canon", "struct_equiv", "substitute",
    "sym_act", "sym_extract", "to_str", "uncurry",
]
