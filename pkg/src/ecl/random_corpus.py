"""Seeded generators for signatures, terms, formulas and structures.

Every generator takes a :class:`random.Random` instance and nothing else
random, so a corpus is a pure function of its seed.
"""

from __future__ import annotations

import itertools
import random

from .qe import ElementaryExistential, enumerate_congruences
from .structures import random_structure
from .syntax import (
    FUN,
    REL,
    App,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    Rel,
    Signature,
    Symbol,
    Term,
    Var,
    conj,
    disj,
    formula_subterms,
    subterm_closure,
)

FUN_NAMES = ("F", "G", "H")
REL_NAMES = ("P", "Q", "R")
CONST_NAMES = ("c", "d")


def random_signature(
    rng: random.Random,
    max_symbols: int = 2,
    max_arity: int = 2,
    relations: bool = True,
    constants: bool = False,
) -> Signature:
    """At least one and at most ``max_symbols`` symbols, one function among them."""
    k = rng.randint(1, max_symbols)
    syms = [Symbol(FUN_NAMES[0], FUN, rng.randint(1, max_arity))]
    for i in range(1, k):
        kinds = ["fun"] + (["rel"] if relations else []) + (["const"] if constants else [])
        kind = rng.choice(kinds)
        if kind == "fun":
            syms.append(Symbol(FUN_NAMES[i], FUN, rng.randint(1, max_arity)))
        elif kind == "rel":
            syms.append(Symbol(REL_NAMES[i], REL, rng.randint(1, max_arity)))
        else:
            syms.append(Symbol(CONST_NAMES[i % 2], FUN, 0))
    return Signature(syms)


def random_term(rng: random.Random, sig: Signature, variables, depth: int) -> Term:
    leaves = [Var(v) for v in variables] + [App(c, ()) for c in sig.constants]
    funs = sorted((n, a) for n, a in sig.functions.items() if a > 0)
    if depth <= 0 or not funs or (leaves and rng.random() < 0.4):
        if not leaves:
            raise ValueError("no leaves to build a term from")
        return rng.choice(leaves)
    name, arity = rng.choice(funs)
    return App(name, tuple(random_term(rng, sig, variables, depth - 1) for _ in range(arity)))


def random_atom(rng: random.Random, sig: Signature, variables, depth: int = 2) -> Formula:
    rels = sorted(sig.relations.items())
    if rels and rng.random() < 0.35:
        name, arity = rng.choice(rels)
        return Rel(name, tuple(random_term(rng, sig, variables, depth) for _ in range(arity)))
    return Eq(random_term(rng, sig, variables, depth), random_term(rng, sig, variables, depth))


def random_qf(rng: random.Random, sig: Signature, variables, size: int = 3, depth: int = 2) -> Formula:
    """Random quantifier-free formula with about ``size`` atoms."""
    if size <= 1:
        a = random_atom(rng, sig, variables, depth)
        return Not(a) if rng.random() < 0.4 else a
    left = rng.randint(1, size - 1)
    parts = (random_qf(rng, sig, variables, left, depth), random_qf(rng, sig, variables, size - left, depth))
    f = conj(*parts) if rng.random() < 0.5 else disj(*parts)
    return Not(f) if rng.random() < 0.15 else f


def random_sentence(
    rng: random.Random,
    sig: Signature,
    quantifiers: int = 2,
    size: int = 3,
    depth: int = 2,
) -> Formula:
    """A sentence with ``quantifiers`` quantifiers placed at random depths."""
    return _random_formula(rng, sig, [], quantifiers, max(size, 1), depth)


def _random_formula(rng, sig, scope, quantifiers, size, depth) -> Formula:
    grounded = bool(scope) or bool(sig.constants)
    if quantifiers == 0:
        return random_qf(rng, sig, scope, size, depth)
    if size >= 2 and grounded and rng.random() < 0.3:
        left = rng.randint(1, size - 1)
        q = rng.randint(0, quantifiers)
        a = _random_formula(rng, sig, scope, q, left, depth)
        b = _random_formula(rng, sig, scope, quantifiers - q, size - left, depth)
        return conj(a, b) if rng.random() < 0.5 else disj(a, b)
    v = f"x{len(scope)}"
    body = _random_formula(rng, sig, scope + [v], quantifiers - 1, size, depth)
    return Exists(v, body) if rng.random() < 0.5 else Forall(v, body)


def random_universal(
    rng: random.Random,
    sig: Signature,
    max_subterms: int = 5,
    quantifiers: int = 2,
    size: int = 3,
    tries: int = 200,
) -> Formula:
    """A universal sentence whose matrix has at most ``max_subterms`` distinct subterms."""
    names = [f"x{i}" for i in range(quantifiers)]
    for _ in range(tries):
        body = random_qf(rng, sig, names, rng.randint(1, size), 2)
        if len(formula_subterms(body)) <= max_subterms:
            for v in reversed(names):
                body = Forall(v, body)
            return body
    raise RuntimeError("could not meet the subterm bound")


def random_ee(
    rng: random.Random,
    sig: Signature,
    n_free: int = 1,
    n_bound: int = 1,
    max_theta: int = 6,
    depth: int = 2,
) -> ElementaryExistential:
    """A random elementary existential with a full relation assignment on class tuples."""
    free = tuple(f"x{i}" for i in range(n_free))
    bound = tuple(f"y{i}" for i in range(n_bound))
    variables = free + bound
    terms = {Var(v) for v in variables} | {App(c, ()) for c in sig.constants}
    theta = subterm_closure(terms)
    for _ in range(rng.randint(0, 4)):
        t = random_term(rng, sig, variables, depth)
        cand = subterm_closure(list(theta) + [t])
        if len(cand) <= max_theta:
            theta = cand
    if len(theta) > max_theta:
        raise ValueError("max_theta smaller than the number of variables and constants")
    parts = list(enumerate_congruences(theta))
    classes = rng.choice(parts)
    reps = [c[0] for c in classes]
    eps = {}
    for name, arity in sorted(sig.relations.items()):
        for tup in itertools.product(reps, repeat=arity):
            eps[(name, tup)] = rng.random() < 0.5
    return ElementaryExistential(tuple(theta), free, bound, classes, eps)


def random_instance(rng: random.Random, max_theta: int = 6, max_model: int = 4):
    """(M, u, e) with small signature, structure and elementary formula."""
    sig = random_signature(rng, max_symbols=2, max_arity=2)
    n_free = rng.randint(0, 2)
    e = random_ee(rng, sig, n_free=n_free, n_bound=rng.randint(1, 2), max_theta=max_theta)
    size = rng.randint(1 if n_free else 0, max_model)
    M = random_structure(sig, size, rng)
    u = tuple(rng.randrange(size) for _ in range(n_free))
    return M, u, e


__all__ = [
    "random_atom",
    "random_ee",
    "random_instance",
    "random_qf",
    "random_sentence",
    "random_signature",
    "random_structure",
    "random_term",
    "random_universal",
]
