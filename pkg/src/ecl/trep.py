"""Open theories of numerals and finite function tables, and finite fragments of R.

Numerals come in three styles:

* ``constants``: a fresh constant ``n<k>`` per number;
* ``successor``: ``S(S(...(zero)))``;
* ``tprfu``: successor written through a binary ``U`` as ``U(n0, x)``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ParseError, SignatureError
from .structures import FiniteStructure
from .syntax import (
    FUN,
    REL,
    App,
    Eq,
    Forall,
    Formula,
    Iff,
    Not,
    Rel,
    Signature,
    Symbol,
    Term,
    Var,
    _atom,
    _pos,
    disj,
    read_sexprs,
)

STYLES = ("constants", "successor", "tprfu")

# symbol names for the language of R
ZERO, SUCC, PLUS, TIMES, LESS = "zero", "S", "plus", "times", "lt"


# ---------------------------------------------------------------------------
# Cantor pairing


def cantor_pair(n: int, m: int) -> int:
    if n < 0 or m < 0:
        raise ValueError("cantor_pair is defined on non-negative integers")
    return (n + m) * (n + m + 1) // 2 + n


def cantor_unpair(p: int) -> tuple[int, int]:
    if p < 0:
        raise ValueError("cantor_unpair is defined on non-negative integers")
    w = (math.isqrt(8 * p + 1) - 1) // 2
    n = p - w * (w + 1) // 2
    return n, w - n


# ---------------------------------------------------------------------------
# Numerals


def numeral(n: int, style: str = "successor") -> Term:
    if n < 0:
        raise ValueError("numerals denote non-negative integers")
    if style == "constants":
        return App(f"n{n}", ())
    if style == "successor":
        t: Term = App(ZERO, ())
        for _ in range(n):
            t = App(SUCC, (t,))
        return t
    if style == "tprfu":
        zero = App("n0", ())
        t = zero
        for _ in range(n):
            t = App("U", (zero, t))
        return t
    raise ValueError(f"unknown numeral style {style!r}")


def numeral_signature(count: int, style: str) -> Signature:
    if style == "constants":
        return Signature(Symbol(f"n{k}", FUN, 0) for k in range(count))
    if style == "successor":
        return Signature([Symbol(ZERO, FUN, 0), Symbol(SUCC, FUN, 1)])
    if style == "tprfu":
        return Signature([Symbol("n0", FUN, 0), Symbol("U", FUN, 2)])
    raise ValueError(f"unknown numeral style {style!r}")


# ---------------------------------------------------------------------------
# Tables


@dataclass(frozen=True)
class RepTables:
    """Finite graphs of functions and disjoint positive/negative predicate tables."""

    numerals: int
    functions: Mapping = field(default_factory=dict)  # name -> (arity, {args: value})
    predicates: Mapping = field(default_factory=dict)  # name -> (arity, pos set, neg set)

    def __post_init__(self) -> None:
        if self.numerals < 1:
            raise ValueError("at least one numeral is required")
        n = self.numerals
        funcs = {}
        for name, (arity, table) in self.functions.items():
            entries = {}
            for args, val in dict(table).items():
                args = tuple(args)
                if len(args) != arity:
                    raise ValueError(f"{name}: entry {args} does not have arity {arity}")
                if not all(0 <= a < n for a in args + (val,)):
                    raise ValueError(f"{name}: entry {args} -> {val} leaves the numeral range [0,{n})")
                entries[args] = val
            funcs[name] = (arity, entries)
        preds = {}
        for name, (arity, pos, neg) in self.predicates.items():
            pos, neg = frozenset(map(tuple, pos)), frozenset(map(tuple, neg))
            if pos & neg:
                raise ValueError(f"{name}: positive and negative tuples overlap")
            for tup in pos | neg:
                if len(tup) != arity or not all(0 <= a < n for a in tup):
                    raise ValueError(f"{name}: bad tuple {tup}")
            preds[name] = (arity, pos, neg)
        names = list(funcs) + list(preds)
        if len(set(names)) != len(names):
            raise ValueError("function and predicate names must be distinct")
        object.__setattr__(self, "functions", dict(sorted(funcs.items())))
        object.__setattr__(self, "predicates", dict(sorted(preds.items())))

    def signature(self, style: str = "constants") -> Signature:
        base = numeral_signature(self.numerals, style)
        extra = [Symbol(f, FUN, a) for f, (a, _) in self.functions.items()]
        extra += [Symbol(p, REL, a) for p, (a, _, _) in self.predicates.items()]
        clash = [s.name for s in extra if s.name in base]
        if clash:
            raise SignatureError(f"table names {clash} clash with the numeral symbols")
        return Signature(list(base) + extra)


def trep_axioms(tables: RepTables, style: str = "constants") -> list[Formula]:
    """Distinct numerals, one equation per table entry, one literal per predicate tuple."""
    tables.signature(style)
    num = [numeral(k, style) for k in range(tables.numerals)]
    out: list[Formula] = []
    for i, j in itertools.combinations(range(tables.numerals), 2):
        out.append(Not(Eq(num[i], num[j])))
    for name, (_, table) in tables.functions.items():
        for args in sorted(table):
            out.append(Eq(App(name, tuple(num[a] for a in args)), num[table[args]]))
    for name, (_, pos, neg) in tables.predicates.items():
        for tup in sorted(pos):
            out.append(Rel(name, tuple(num[a] for a in tup)))
        for tup in sorted(neg):
            out.append(Not(Rel(name, tuple(num[a] for a in tup))))
    return out


def table_structure(tables: RepTables, style: str = "constants") -> FiniteStructure:
    """The structure on [0, N) reading the tables off, with 0 for unlisted entries."""
    sig = tables.signature(style)
    n = tables.numerals
    funcs: dict = {}
    if style == "constants":
        for k in range(n):
            funcs[f"n{k}"] = {(): k}
    elif style == "successor":
        funcs[ZERO] = {(): 0}
        funcs[SUCC] = {(k,): (k + 1 if k + 1 < n else 0) for k in range(n)}
    else:
        funcs["n0"] = {(): 0}
        funcs["U"] = {
            (a, b): (b + 1 if a == 0 and b + 1 < n else 0) for a in range(n) for b in range(n)
        }
    for name, (arity, table) in tables.functions.items():
        funcs[name] = {args: table.get(args, 0) for args in itertools.product(range(n), repeat=arity)}
    rels = {name: pos for name, (_, pos, _) in tables.predicates.items()}
    return FiniteStructure(sig, n, funcs, rels)


def random_tables(rng: random.Random, max_numerals: int = 5) -> RepTables:
    n = rng.randint(1, max_numerals)
    funcs, preds = {}, {}
    for i in range(rng.randint(0, 2)):
        arity = rng.randint(1, 2)
        cells = list(itertools.product(range(n), repeat=arity))
        chosen = rng.sample(cells, rng.randint(0, len(cells)))
        funcs[f"F{i}"] = (arity, {c: rng.randrange(n) for c in chosen})
    for i in range(rng.randint(0, 2)):
        arity = rng.randint(1, 2)
        pos, neg = set(), set()
        for c in itertools.product(range(n), repeat=arity):
            r = rng.random()
            if r < 0.35:
                pos.add(c)
            elif r < 0.7:
                neg.add(c)
        preds[f"P{i}"] = (arity, pos, neg)
    return RepTables(n, funcs, preds)


def parse_tables(text: str) -> RepTables:
    """Read ``(tables (numerals N) (fun NAME ARITY ((args) val) ...) (pred NAME ARITY (pos ...) (neg ...)))``."""
    items = read_sexprs(text)
    if len(items) != 1 or not isinstance(items[0], list) or not items[0] or _atom(items[0][0]) != "tables":
        raise ParseError("expected a single (tables ...) form", _pos(items[0]) if items else 0)
    numerals = None
    funcs: dict = {}
    preds: dict = {}
    for clause in items[0][1:]:
        if not isinstance(clause, list) or not clause:
            raise ParseError("expected a clause", _pos(clause))
        head = _atom(clause[0])
        if head == "numerals" and len(clause) == 2:
            numerals = _nat(clause[1])
        elif head == "fun" and len(clause) >= 3:
            name, arity = _atom(clause[1]), _nat(clause[2])
            table = {}
            for entry in clause[3:]:
                if not isinstance(entry, list) or len(entry) != 2 or not isinstance(entry[0], list):
                    raise ParseError("expected ((args) value)", _pos(entry))
                table[tuple(_nat(a) for a in entry[0])] = _nat(entry[1])
            funcs[name] = (arity, table)
        elif head == "pred" and len(clause) >= 3:
            name, arity = _atom(clause[1]), _nat(clause[2])
            signs: dict = {"pos": set(), "neg": set()}
            for part in clause[3:]:
                if not isinstance(part, list) or not part or _atom(part[0]) not in signs:
                    raise ParseError("expected (pos ...) or (neg ...)", _pos(part))
                for tup in part[1:]:
                    if not isinstance(tup, list):
                        raise ParseError("expected a tuple", _pos(tup))
                    signs[_atom(part[0])].add(tuple(_nat(a) for a in tup))
            preds[name] = (arity, signs["pos"], signs["neg"])
        else:
            raise ParseError(f"unknown tables clause {head!r}", _pos(clause))
    if numerals is None:
        raise ParseError("missing (numerals N)", _pos(items[0]))
    try:
        return RepTables(numerals, funcs, preds)
    except ValueError as exc:
        raise ParseError(str(exc), _pos(items[0])) from None


def print_tables(tables: RepTables) -> str:
    lines = [f"(tables (numerals {tables.numerals})"]
    for name, (arity, table) in tables.functions.items():
        entries = " ".join(f"(({' '.join(map(str, a))}) {v})" for a, v in sorted(table.items()))
        lines.append(f"  (fun {name} {arity}{' ' if entries else ''}{entries})")
    for name, (arity, pos, neg) in tables.predicates.items():
        p = " ".join(f"({' '.join(map(str, t))})" for t in sorted(pos))
        q = " ".join(f"({' '.join(map(str, t))})" for t in sorted(neg))
        lines.append(f"  (pred {name} {arity} (pos{' ' if p else ''}{p}) (neg{' ' if q else ''}{q}))")
    return "\n".join(lines) + ")"


def _nat(item: object) -> int:
    tok = _atom(item)
    if not tok.isdigit():
        raise ParseError(f"expected a natural number, got {tok!r}", _pos(item))
    return int(tok)


# ---------------------------------------------------------------------------
# Robinson's R


def r_signature() -> Signature:
    return Signature(
        [
            Symbol(ZERO, FUN, 0),
            Symbol(SUCC, FUN, 1),
            Symbol(PLUS, FUN, 2),
            Symbol(TIMES, FUN, 2),
            Symbol(LESS, REL, 2),
        ]
    )


def r_axioms(b: int) -> list[Formula]:
    """Addition and multiplication facts for n, m <= b and the order scheme for n <= b."""
    if b < 0:
        raise ValueError("bound must be non-negative")
    num = lambda k: numeral(k, "successor")  # noqa: E731
    out: list[Formula] = []
    for n in range(b + 1):
        for m in range(b + 1):
            out.append(Eq(App(PLUS, (num(n), num(m))), num(n + m)))
    for n in range(b + 1):
        for m in range(b + 1):
            out.append(Eq(App(TIMES, (num(n), num(m))), num(n * m)))
    x = Var("x")
    for n in range(b + 1):
        lhs = Rel(LESS, (x, num(n)))
        if n == 0:
            out.append(Forall("x", Not(lhs)))
        else:
            out.append(Forall("x", Iff(lhs, disj(*(Eq(x, num(k)) for k in range(n))))))
    return out


def r_fragment_model(b: int) -> FiniteStructure:
    """The standard model with everything above ``b + 1`` identified to one element.

    The identified element has id ``b + 2``. Arithmetic is computed on
    representatives and collapsed; ``<`` is the image of the standard order,
    so the identified element is below itself.
    """
    if b < 0:
        raise ValueError("bound must be non-negative")
    top = b + 2
    dom = range(b + 3)
    clip = lambda v: min(v, top)  # noqa: E731
    funcs = {
        ZERO: {(): 0},
        SUCC: {(a,): clip(a + 1) for a in dom},
        PLUS: {(a, c): clip(a + c) for a in dom for c in dom},
        TIMES: {(a, c): clip(a * c) for a in dom for c in dom},
    }
    lt = frozenset((a, c) for a in dom for c in dom if a < c or (a == c == top))
    return FiniteStructure(r_signature(), b + 3, funcs, {LESS: lt})


__all__ = [
    "LESS",
    "PLUS",
    "RepTables",
    "STYLES",
    "SUCC",
    "TIMES",
    "ZERO",
    "cantor_pair",
    "cantor_unpair",
    "numeral",
    "numeral_signature",
    "parse_tables",
    "print_tables",
    "r_axioms",
    "r_fragment_model",
    "r_signature",
    "random_tables",
    "table_structure",
    "trep_axioms",
]
