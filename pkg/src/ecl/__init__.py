"""Quantifier elimination and decisions for EC_L, the model completion of the
empty theory, with interpretation tooling around it."""

from __future__ import annotations

from .decide import DecisionResult, Verdict, decide, decide_with_diagram, naive_universal_check
from .errors import (
    ArityError,
    EclError,
    InvariantViolation,
    ParseError,
    ResourceLimitError,
    SignatureError,
    UnknownSymbolError,
)
from .euf import congruence_close, euf_equivalent, ground_valid, satisfiable
from .interp import (
    Translation,
    binary_reduction,
    compose,
    identity_translation,
    induced_structure,
    obligations,
    pairing_terms,
    translate,
)
from .kernels import BACKEND
from .qe import (
    Caps,
    ElementaryExistential,
    compute_star,
    elementary_decomposition,
    eliminate,
    enumerate_congruences,
    simplify_open,
)
from .structures import FiniteStructure, diagram, eval_formula, extension_satisfies, parse_structure
from .syntax import Signature, parse_formula, parse_term_text, print_formula, print_term
from .trep import cantor_pair, cantor_unpair, r_axioms, r_fragment_model, trep_axioms

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ArityError",
    "Caps",
    "DecisionResult",
    "EclError",
    "ElementaryExistential",
    "FiniteStructure",
    "InvariantViolation",
    "ParseError",
    "ResourceLimitError",
    "Signature",
    "SignatureError",
    "Translation",
    "UnknownSymbolError",
    "Verdict",
    "binary_reduction",
    "cantor_pair",
    "cantor_unpair",
    "compose",
    "compute_star",
    "congruence_close",
    "decide",
    "decide_with_diagram",
    "diagram",
    "elementary_decomposition",
    "eliminate",
    "enumerate_congruences",
    "euf_equivalent",
    "eval_formula",
    "extension_satisfies",
    "ground_valid",
    "identity_translation",
    "induced_structure",
    "naive_universal_check",
    "obligations",
    "pairing_terms",
    "parse_formula",
    "parse_structure",
    "parse_term_text",
    "print_formula",
    "print_term",
    "r_axioms",
    "r_fragment_model",
    "satisfiable",
    "simplify_open",
    "translate",
    "trep_axioms",
]
