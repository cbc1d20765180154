"""Three-valued decision procedure for EC_L, with and without a finite diagram."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Mapping

from .errors import InvariantViolation, ResourceLimitError
from .euf import ground_valid, satisfiable
from .qe import DEFAULT_CAPS, Caps, eliminate
from .structures import (
    FiniteStructure,
    count_structures,
    diagram,
    enumerate_structures,
    eval_formula,
)
from .syntax import (
    And,
    App,
    Bot,
    Eq,
    Forall,
    Formula,
    Imp,
    Not,
    Or,
    Rel,
    Signature,
    TRUE,
    Top,
    Var,
    atoms,
    check_formula,
    conj,
    formula_subterms,
    free_vars,
    is_quantifier_free,
    neg,
    signature_of,
    strip_prefix,
    term_key,
    to_core,
)


class Verdict(enum.Enum):
    VALID = "VALID"
    UNSAT = "UNSAT"
    CONTINGENT = "CONTINGENT"

    @property
    def exit_code(self) -> int:
        return {"VALID": 0, "UNSAT": 1, "CONTINGENT": 2}[self.value]

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class DecisionResult:
    verdict: Verdict
    qf_equivalent: Formula
    # literal assignments: one satisfying the image, one satisfying its negation
    satisfying: Mapping | None = None
    falsifying: Mapping | None = None

    @property
    def token(self) -> str:
        return self.verdict.value


def _three_way(g: Formula, hyp: Formula | None = None) -> DecisionResult:
    """Valid/unsatisfiable/contingent for ``g`` under the open hypothesis ``hyp``."""
    if hyp is None:
        hyp = TRUE
    valid = ground_valid(Imp(hyp, g))
    unsat = ground_valid(Imp(hyp, neg(g)))
    if valid and unsat:
        raise InvariantViolation("a formula and its negation are both valid")
    base, nbase = conj(hyp, g), conj(hyp, neg(g))
    sat = None if unsat else satisfiable(base)
    fal = None if valid else satisfiable(nbase)
    if valid:
        return DecisionResult(Verdict.VALID, g, sat, None)
    if unsat:
        return DecisionResult(Verdict.UNSAT, g, None, fal)
    return DecisionResult(Verdict.CONTINGENT, g, sat, fal)


def decide(
    f: Formula,
    signature: Signature | None = None,
    caps: Caps = DEFAULT_CAPS,
    trace=None,
) -> DecisionResult:
    """Whether EC_L proves ``f``, refutes it, or neither."""
    if free_vars(f):
        raise ValueError(f"not a sentence: free variables {sorted(free_vars(f))}")
    if signature is not None:
        check_formula(f, signature)
    return _three_way(eliminate(f, caps, trace))


def decide_with_diagram(
    M: FiniteStructure,
    f: Formula,
    prefix: str = "e",
    caps: Caps = DEFAULT_CAPS,
    trace=None,
) -> DecisionResult:
    """Decide ``f`` relative to EC_L plus the diagram of ``M``.

    ``f`` may mention the element constants ``e0, e1, ...`` (see
    :func:`structures.element_names`). The theory is complete, so a
    contingent answer signals a bug and raises :class:`InvariantViolation`.
    """
    if free_vars(f):
        raise ValueError(f"not a sentence: free variables {sorted(free_vars(f))}")
    sig, lits = diagram(M, prefix)
    check_formula(f, sig)
    res = _three_way(eliminate(f, caps, trace), conj(*lits))
    if res.verdict is Verdict.CONTINGENT:
        raise InvariantViolation("EC_L plus a finite diagram left a sentence undecided")
    return res


# ---------------------------------------------------------------------------
# Finite-model oracle for universal sentences


def model_bound(f: Formula, signature: Signature | None = None) -> int:
    """Size bound for countermodels of a universal sentence.

    Distinct subterms of the matrix together with quantified variables that
    the matrix never mentions; at least one element when constants exist.
    """
    prefix, matrix = strip_prefix(f, Forall)
    sig = signature or signature_of(f)
    terms = set(formula_subterms(matrix))
    terms |= {Var(v) for v in prefix}
    return max(len(terms), 1 if sig.constants else 0)


def naive_universal_check(
    f: Formula,
    signature: Signature | None = None,
    method: str = "auto",
    max_model: int | None = None,
    limit: int = 200_000,
) -> bool:
    """True iff the universal sentence ``f`` holds in every structure up to the bound.

    ``exhaustive`` evaluates ``f`` in every enumerated structure. ``lazy``
    searches for a countermodel while filling function tables on demand.
    ``auto`` is exhaustive when the structure count is at most ``limit``.
    """
    prefix, matrix = strip_prefix(f, Forall)
    if not is_quantifier_free(matrix):
        raise ValueError("expected a universal sentence")
    if free_vars(f):
        raise ValueError("expected a sentence")
    sig = signature or signature_of(f)
    check_formula(f, sig)
    bound = model_bound(f, sig)
    if max_model is not None:
        if bound > max_model:
            raise ResourceLimitError(f"model bound {bound} exceeds max_model = {max_model}")
    if method == "auto":
        total = sum(count_structures(sig, n) for n in range(bound + 1))
        method = "exhaustive" if total <= limit else "lazy"
    if method == "exhaustive":
        return all(eval_formula(M, f) for M in enumerate_structures(sig, bound, limit=limit))
    if method == "lazy":
        start = 1 if sig.constants else 0
        return not any(_countermodel(prefix, matrix, n) for n in range(start, bound + 1))
    raise ValueError(f"unknown method {method!r}")


def _countermodel(prefix, matrix: Formula, n: int) -> bool:
    """Whether some structure of size ``n`` and assignment falsify ``matrix``."""
    terms = sorted(set(formula_subterms(matrix)) | {Var(v) for v in prefix}, key=term_key)
    target = to_core(Not(matrix))
    rel_atoms = list(dict.fromkeys(a for a in atoms(target) if isinstance(a, Rel)))
    val: dict = {}
    table: dict = {}

    def rec(i: int, used: int) -> bool:
        if i == len(terms):
            return _relations_exist(target, val, rel_atoms)
        t = terms[i]
        if isinstance(t, App):
            key = (t.fn, tuple(val[a] for a in t.args))
            if key in table:
                val[t] = table[key]
                ok = rec(i + 1, used)
                del val[t]
                return ok
        else:
            key = None
        for v in range(min(used + 1, n)):
            val[t] = v
            if key is not None:
                table[key] = v
            if rec(i + 1, max(used, v + 1)):
                return True
            if key is not None:
                del table[key]
        val.pop(t, None)
        return False

    return rec(0, 0)


def _relations_exist(target: Formula, val: dict, rel_atoms) -> bool:
    keys = sorted({(a.name, tuple(val[t] for t in a.args)) for a in rel_atoms})
    for bits in itertools.product((False, True), repeat=len(keys)):
        rels = dict(zip(keys, bits))
        if _eval(target, val, rels):
            return True
    return False


def _eval(f: Formula, val: dict, rels: dict) -> bool:
    if isinstance(f, Eq):
        return val[f.left] == val[f.right]
    if isinstance(f, Rel):
        return rels[(f.name, tuple(val[t] for t in f.args))]
    if isinstance(f, Not):
        return not _eval(f.arg, val, rels)
    if isinstance(f, And):
        return all(_eval(c, val, rels) for c in f.args)
    if isinstance(f, Or):
        return any(_eval(c, val, rels) for c in f.args)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    raise TypeError(f"unexpected connective {f!r}")


__all__ = [
    "DecisionResult",
    "Verdict",
    "decide",
    "decide_with_diagram",
    "model_bound",
    "naive_universal_check",
]
