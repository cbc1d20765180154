"""Seeded cross-check suites: resultants against extension search, and ground
validity against finite-model enumeration."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .decide import naive_universal_check
from .euf import ground_valid
from .qe import compute_star
from .random_corpus import random_instance, random_signature, random_universal
from .structures import eval_formula, extension_satisfies
from .syntax import Forall, print_formula, strip_prefix


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    total: int = 0
    failures: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.passed}/{self.total}"


def resultant_suite(cases: int, seed: int, max_theta: int = 6, max_model: int = 4) -> SuiteResult:
    """``M |= theta*(u)`` against both extension searches."""
    rng = random.Random(seed)
    out = SuiteResult("resultant")
    realized = 0
    for i in range(cases):
        M, u, e = random_instance(rng, max_theta=max_theta, max_model=max_model)
        star = compute_star(e)
        truth = eval_formula(M, star.star_formula, dict(zip(e.free_vars, u)))
        cons = extension_satisfies(M, u, e, "constructive") is not None
        blind = extension_satisfies(M, u, e, "blind") is not None
        out.total += 1
        realized += truth
        if truth == cons == blind:
            out.passed += 1
        else:
            out.failures.append((i, print_formula(e.formula()), M.to_text(), u, truth, cons, blind))
    out.stats["realized"] = realized
    return out


def euf_suite(cases: int, seed: int, max_subterms: int = 5) -> SuiteResult:
    """``ground_valid`` of a universal matrix against bounded model enumeration."""
    rng = random.Random(seed)
    out = SuiteResult("euf")
    valid = 0
    for i in range(cases):
        sig = random_signature(rng, max_symbols=2, max_arity=2, constants=True)
        f = random_universal(rng, sig, max_subterms=max_subterms, quantifiers=rng.randint(1, 2))
        _, matrix = strip_prefix(f, Forall)
        a = ground_valid(matrix)
        b = naive_universal_check(f, sig)
        out.total += 1
        valid += a
        if a == b:
            out.passed += 1
        else:
            out.failures.append((i, print_formula(f), a, b))
    out.stats["valid"] = valid
    return out


SUITES = {"res": resultant_suite, "euf": euf_suite}

__all__ = ["SUITES", "SuiteResult", "euf_suite", "resultant_suite"]
