"""First-order syntax: signatures, terms, formulas, parsing and printing.

Formulas use a fully parenthesized prefix grammar::

    (forall x (imp (P x) (exists y (= (F y) x))))

Terms and formulas are immutable, hashable values. Everything that needs an
enumeration order uses :func:`term_key`, which sorts by (height, symbol name,
arguments).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from .errors import ArityError, ParseError, SignatureError, UnknownSymbolError

FUN = "fun"
REL = "rel"

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
KEYWORDS = frozenset(
    ["forall", "exists", "and", "or", "not", "imp", "iff", "=", "true", "false"]
)


# ---------------------------------------------------------------------------
# Signatures


@dataclass(frozen=True)
class Symbol:
    name: str
    kind: str  # FUN or REL
    arity: int


class Signature:
    """A finite set of function and relation symbols with arities."""

    __slots__ = ("_symbols",)

    def __init__(self, symbols: Iterable[Symbol] = ()):
        table: dict[str, Symbol] = {}
        for s in symbols:
            if s.kind not in (FUN, REL):
                raise SignatureError(f"bad symbol kind {s.kind!r}")
            if s.arity < 0:
                raise SignatureError(f"negative arity for {s.name}")
            if not IDENT_RE.match(s.name) or s.name in KEYWORDS:
                raise SignatureError(f"invalid symbol name {s.name!r}")
            old = table.get(s.name)
            if old is not None and old != s:
                raise SignatureError(f"symbol {s.name} declared twice")
            table[s.name] = s
        self._symbols = dict(sorted(table.items()))

    @classmethod
    def build(
        cls,
        functions: Mapping[str, int] | None = None,
        relations: Mapping[str, int] | None = None,
        constants: Iterable[str] = (),
    ) -> "Signature":
        syms = [Symbol(n, FUN, a) for n, a in (functions or {}).items()]
        syms += [Symbol(n, FUN, 0) for n in constants]
        syms += [Symbol(n, REL, a) for n, a in (relations or {}).items()]
        return cls(syms)

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Read ``(fun NAME ARITY)``, ``(rel NAME ARITY)`` and ``(const NAME)`` items."""
        syms = []
        for item in read_sexprs(text):
            if not isinstance(item, list) or not item:
                raise ParseError("expected a parenthesized declaration", _pos(item))
            head = _atom(item[0])
            if head == "const" and len(item) == 2:
                syms.append(Symbol(_atom(item[1]), FUN, 0))
            elif head in (FUN, REL) and len(item) == 3:
                try:
                    arity = int(_atom(item[2]))
                except ValueError:
                    raise ParseError("arity must be an integer", _pos(item[2])) from None
                syms.append(Symbol(_atom(item[1]), head, arity))
            else:
                raise ParseError(f"bad declaration {head!r}", _pos(item[0]))
        return cls(syms)

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self._symbols.values())

    def __len__(self) -> int:
        return len(self._symbols)

    def __contains__(self, name: object) -> bool:
        return name in self._symbols

    def __getitem__(self, name: str) -> Symbol:
        return self._symbols[name]

    def get(self, name: str) -> Symbol | None:
        return self._symbols.get(name)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Signature) and self._symbols == other._symbols

    def __hash__(self) -> int:
        return hash(tuple(self._symbols.values()))

    def __repr__(self) -> str:
        return f"Signature({self.to_text()!r})"

    @property
    def functions(self) -> dict[str, int]:
        return {s.name: s.arity for s in self if s.kind == FUN}

    @property
    def relations(self) -> dict[str, int]:
        return {s.name: s.arity for s in self if s.kind == REL}

    @property
    def constants(self) -> list[str]:
        return [s.name for s in self if s.kind == FUN and s.arity == 0]

    def names(self) -> list[str]:
        return list(self._symbols)

    def is_function(self, name: str) -> bool:
        s = self.get(name)
        return s is not None and s.kind == FUN

    def is_relation(self, name: str) -> bool:
        s = self.get(name)
        return s is not None and s.kind == REL

    def union(self, other: "Signature") -> "Signature":
        return Signature(list(self) + list(other))

    def with_constants(self, names: Iterable[str]) -> "Signature":
        return Signature(list(self) + [Symbol(n, FUN, 0) for n in names])

    def restrict(self, names: Iterable[str]) -> "Signature":
        keep = set(names)
        return Signature(s for s in self if s.name in keep)

    def to_text(self) -> str:
        parts = []
        for s in self:
            if s.kind == FUN and s.arity == 0:
                parts.append(f"(const {s.name})")
            else:
                parts.append(f"({s.kind} {s.name} {s.arity})")
        return "\n".join(parts)


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    name: str
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_h", hash(("v", self.name)))

    def __hash__(self) -> int:
        return self._h

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple = ()
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))
        object.__setattr__(self, "_h", hash(("a", self.fn, self.args)))

    def __hash__(self) -> int:
        return self._h

    def __str__(self) -> str:
        return print_term(self)


Term = Union[Var, App]


def const(name: str) -> App:
    return App(name, ())


def app(fn: str, *args: Term) -> App:
    return App(fn, tuple(args))


@lru_cache(maxsize=1 << 16)
def height(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(height(a) for a in t.args)


@lru_cache(maxsize=1 << 16)
def term_key(t: Term) -> tuple:
    """Total order on terms: height, then symbol name, then arguments."""
    if isinstance(t, Var):
        return (0, t.name, ())
    return (height(t), t.fn, tuple(term_key(a) for a in t.args))


def term_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset([t.name])
    out: set[str] = set()
    for a in t.args:
        out |= term_vars(a)
    return frozenset(out)


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


def subterm_closure(terms: Iterable[Term]) -> list[Term]:
    """Least subterm-closed superset of ``terms``, sorted by :func:`term_key`."""
    seen: set[Term] = set()
    for t in terms:
        for s in subterms(t):
            seen.add(s)
    return sorted(seen, key=term_key)


def substitute_term(t: Term, binding: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return binding.get(t.name, t)
    if not t.args:
        return t
    new = tuple(substitute_term(a, binding) for a in t.args)
    if all(n is o for n, o in zip(new, t.args)):
        return t
    return App(t.fn, new)


def term_symbols(t: Term) -> Iterator[str]:
    if isinstance(t, App):
        yield t.fn
        for a in t.args:
            yield from term_symbols(a)


# ---------------------------------------------------------------------------
# Formulas


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self) -> str:
        return "TRUE"


@dataclass(frozen=True, repr=False)
class Bot(Formula):
    def __repr__(self) -> str:
        return "FALSE"


TRUE = Top()
FALSE = Bot()


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Rel(Formula):
    name: str
    args: tuple = ()

    def __post_init__(self) -> None:
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple = ()

    def __post_init__(self) -> None:
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Or(Formula):
    args: tuple = ()

    def __post_init__(self) -> None:
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


ATOMS = (Eq, Rel)
QUANTIFIERS = (Exists, Forall)


def conj(*fs: Formula) -> Formula:
    """Conjunction with flattening and unit/zero folding."""
    out: list[Formula] = []
    for f in fs:
        if isinstance(f, Top):
            continue
        if isinstance(f, Bot):
            return FALSE
        if isinstance(f, And):
            out.extend(f.args)
        else:
            out.append(f)
    if not out:
        return TRUE
    if len(out) == 1:
        return out[0]
    return And(tuple(out))


def disj(*fs: Formula) -> Formula:
    out: list[Formula] = []
    for f in fs:
        if isinstance(f, Bot):
            continue
        if isinstance(f, Top):
            return TRUE
        if isinstance(f, Or):
            out.extend(f.args)
        else:
            out.append(f)
    if not out:
        return FALSE
    if len(out) == 1:
        return out[0]
    return Or(tuple(out))


def neg(f: Formula) -> Formula:
    if isinstance(f, Top):
        return FALSE
    if isinstance(f, Bot):
        return TRUE
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def exists(vars_: Sequence[str] | str, body: Formula) -> Formula:
    if isinstance(vars_, str):
        vars_ = [vars_]
    for v in reversed(list(vars_)):
        body = Exists(v, body)
    return body


def forall(vars_: Sequence[str] | str, body: Formula) -> Formula:
    if isinstance(vars_, str):
        vars_ = [vars_]
    for v in reversed(list(vars_)):
        body = Forall(v, body)
    return body


def children(f: Formula) -> tuple:
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, (And, Or)):
        return f.args
    if isinstance(f, (Imp, Iff)):
        return (f.left, f.right)
    if isinstance(f, QUANTIFIERS):
        return (f.body,)
    return ()


def atom_terms(f: Formula) -> tuple:
    if isinstance(f, Eq):
        return (f.left, f.right)
    if isinstance(f, Rel):
        return f.args
    return ()


def atoms(f: Formula) -> Iterator[Formula]:
    """Atomic subformulas in left-to-right order (with repetitions)."""
    if isinstance(f, ATOMS):
        yield f
        return
    for c in children(f):
        yield from atoms(c)


def formula_terms(f: Formula) -> Iterator[Term]:
    for a in atoms(f):
        yield from atom_terms(a)


def formula_subterms(f: Formula) -> list[Term]:
    return subterm_closure(formula_terms(f))


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, ATOMS):
        out: set[str] = set()
        for t in atom_terms(f):
            out |= term_vars(t)
        return frozenset(out)
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    out = set()
    for c in children(f):
        out |= free_vars(c)
    return frozenset(out)


def all_vars(f: Formula) -> frozenset[str]:
    """Every variable name occurring in ``f``, free or bound."""
    out: set[str] = set()
    for a in atoms(f):
        for t in atom_terms(a):
            out |= term_vars(t)
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, QUANTIFIERS):
            out.add(g.var)
        stack.extend(children(g))
    return frozenset(out)


def symbols_of(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    for a in atoms(f):
        if isinstance(a, Rel):
            out.add(a.name)
        for t in atom_terms(a):
            out.update(term_symbols(t))
    return frozenset(out)


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, QUANTIFIERS):
        return False
    return all(is_quantifier_free(c) for c in children(f))


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def strip_prefix(f: Formula, kind: type) -> tuple[list[str], Formula]:
    vs: list[str] = []
    while isinstance(f, kind):
        vs.append(f.var)
        f = f.body
    return vs, f


def is_universal(f: Formula) -> bool:
    """A block of universal quantifiers over a quantifier-free matrix."""
    return is_quantifier_free(strip_prefix(f, Forall)[1])


def is_existential(f: Formula) -> bool:
    return is_quantifier_free(strip_prefix(f, Exists)[1])


def is_ground(f: Formula) -> bool:
    return is_quantifier_free(f) and not free_vars(f)


def check_formula(f: Formula, sig: Signature) -> None:
    """Raise unless every symbol of ``f`` is declared in ``sig`` with the right arity."""
    for a in atoms(f):
        if isinstance(a, Rel):
            s = sig.get(a.name)
            if s is None or s.kind != REL:
                raise UnknownSymbolError(f"undeclared relation {a.name}")
            if s.arity != len(a.args):
                raise ArityError(f"{a.name} expects {s.arity} arguments, got {len(a.args)}")
        for t in atom_terms(a):
            _check_term(t, sig)


def _check_term(t: Term, sig: Signature) -> None:
    if isinstance(t, Var):
        if t.name in sig:
            raise SignatureError(f"variable {t.name} clashes with a declared symbol")
        return
    s = sig.get(t.fn)
    if s is None or s.kind != FUN:
        raise UnknownSymbolError(f"undeclared function {t.fn}")
    if s.arity != len(t.args):
        raise ArityError(f"{t.fn} expects {s.arity} arguments, got {len(t.args)}")
    for a in t.args:
        _check_term(a, sig)


def signature_of(f: Formula) -> Signature:
    """Smallest signature containing the symbols of ``f`` (variables stay variables)."""
    syms: set[Symbol] = set()

    def visit(t: Term) -> None:
        if isinstance(t, App):
            syms.add(Symbol(t.fn, FUN, len(t.args)))
            for a in t.args:
                visit(a)

    for a in atoms(f):
        if isinstance(a, Rel):
            syms.add(Symbol(a.name, REL, len(a.args)))
        for t in atom_terms(a):
            visit(t)
    return Signature(syms)


# ---------------------------------------------------------------------------
# Fresh names and substitution


_SUFFIX = re.compile(r"_\d+\Z")


def fresh_name(base: str, avoid: Iterable[str] | Callable[[str], bool]) -> str:
    """``base_1``, ``base_2``, ... : the first name not in ``avoid``."""
    taken = avoid if callable(avoid) else set(avoid).__contains__
    stem = _SUFFIX.sub("", base)
    i = 1
    while True:
        cand = f"{stem}_{i}"
        if not taken(cand):
            return cand
        i += 1


def substitute(f: Formula, binding: Mapping[str, Term]) -> Formula:
    """Simultaneous capture-avoiding substitution of terms for free variables."""
    binding = {k: v for k, v in binding.items() if not (isinstance(v, Var) and v.name == k)}
    if not binding:
        return f
    return _subst(f, binding)


def _subst(f: Formula, binding: Mapping[str, Term]) -> Formula:
    if isinstance(f, Eq):
        return Eq(substitute_term(f.left, binding), substitute_term(f.right, binding))
    if isinstance(f, Rel):
        return Rel(f.name, tuple(substitute_term(t, binding) for t in f.args))
    if isinstance(f, (Top, Bot)):
        return f
    if isinstance(f, Not):
        return Not(_subst(f.arg, binding))
    if isinstance(f, And):
        return And(tuple(_subst(c, binding) for c in f.args))
    if isinstance(f, Or):
        return Or(tuple(_subst(c, binding) for c in f.args))
    if isinstance(f, Imp):
        return Imp(_subst(f.left, binding), _subst(f.right, binding))
    if isinstance(f, Iff):
        return Iff(_subst(f.left, binding), _subst(f.right, binding))
    if isinstance(f, QUANTIFIERS):
        body_free = free_vars(f.body)
        inner = {k: v for k, v in binding.items() if k != f.var and k in body_free}
        if not inner:
            return f
        incoming: set[str] = set()
        for t in inner.values():
            incoming |= term_vars(t)
        var = f.var
        if var in incoming:
            avoid = incoming | all_vars(f.body) | set(inner)
            var = fresh_name(f.var, avoid)
            inner[f.var] = Var(var)
        return type(f)(var, _subst(f.body, inner))
    raise TypeError(f"not a formula: {f!r}")


def rename_apart(f: Formula, avoid: Iterable[str]) -> Formula:
    """Rename bound variables so none of them lies in ``avoid`` or repeats."""
    taken = set(avoid) | free_vars(f)

    def go(g: Formula) -> Formula:
        if isinstance(g, QUANTIFIERS):
            v = g.var
            body = g.body
            if v in taken:
                nv = fresh_name(v, lambda n: n in taken or n in all_vars(body))
                body = substitute(body, {v: Var(nv)})
                v = nv
            taken.add(v)
            return type(g)(v, go(body))
        if isinstance(g, ATOMS) or isinstance(g, (Top, Bot)):
            return g
        return map_children(g, go)

    return go(f)


def map_children(f: Formula, fn: Callable[[Formula], Formula]) -> Formula:
    if isinstance(f, Not):
        return Not(fn(f.arg))
    if isinstance(f, And):
        return And(tuple(fn(c) for c in f.args))
    if isinstance(f, Or):
        return Or(tuple(fn(c) for c in f.args))
    if isinstance(f, Imp):
        return Imp(fn(f.left), fn(f.right))
    if isinstance(f, Iff):
        return Iff(fn(f.left), fn(f.right))
    if isinstance(f, QUANTIFIERS):
        return type(f)(f.var, fn(f.body))
    return f


# ---------------------------------------------------------------------------
# Normal forms


def to_core(f: Formula) -> Formula:
    """Eliminate ``imp`` and ``iff``; result uses only not/and/or/exists/forall."""
    if isinstance(f, Imp):
        return Or((Not(to_core(f.left)), to_core(f.right)))
    if isinstance(f, Iff):
        a, b = to_core(f.left), to_core(f.right)
        return Or((And((a, b)), And((Not(a), Not(b)))))
    return map_children(f, to_core)


def nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form over {not, and, or, exists, forall}, with unit folding."""
    if isinstance(f, Top):
        return FALSE if negate else TRUE
    if isinstance(f, Bot):
        return TRUE if negate else FALSE
    if isinstance(f, ATOMS):
        return Not(f) if negate else f
    if isinstance(f, Not):
        return nnf(f.arg, not negate)
    if isinstance(f, And):
        parts = [nnf(c, negate) for c in f.args]
        return disj(*parts) if negate else conj(*parts)
    if isinstance(f, Or):
        parts = [nnf(c, negate) for c in f.args]
        return conj(*parts) if negate else disj(*parts)
    if isinstance(f, Imp):
        if negate:
            return conj(nnf(f.left), nnf(f.right, True))
        return disj(nnf(f.left, True), nnf(f.right))
    if isinstance(f, Iff):
        a, na = nnf(f.left), nnf(f.left, True)
        b, nb = nnf(f.right), nnf(f.right, True)
        if negate:
            return disj(conj(a, nb), conj(na, b))
        return disj(conj(a, b), conj(na, nb))
    if isinstance(f, Exists):
        body = nnf(f.body, negate)
        return Forall(f.var, body) if negate else Exists(f.var, body)
    if isinstance(f, Forall):
        body = nnf(f.body, negate)
        return Exists(f.var, body) if negate else Forall(f.var, body)
    raise TypeError(f"not a formula: {f!r}")


def is_literal(f: Formula) -> bool:
    return isinstance(f, ATOMS) or (isinstance(f, Not) and isinstance(f.arg, ATOMS))


# ---------------------------------------------------------------------------
# S-expression reader


class _Tok(str):
    """An atom token remembering its source offset."""

    pos: int

    def __new__(cls, text: str, pos: int) -> "_Tok":
        obj = super().__new__(cls, text)
        obj.pos = pos
        return obj


class _List(list):
    pos: int = 0


_TOKEN = re.compile(r"\s*(?:(;[^\n]*)|(\()|(\))|([^\s()]+))")


def read_sexprs(text: str) -> list:
    """Parse a sequence of s-expressions; ``;`` starts a line comment."""
    stack: list[_List] = [_List()]
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.end() == pos:
            break
        if m.group(1) is not None:
            pass
        elif m.group(2) is not None:
            lst = _List()
            lst.pos = m.start(2)
            stack[-1].append(lst)
            stack.append(lst)
        elif m.group(3) is not None:
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", m.start(3))
            stack.pop()
        else:
            stack[-1].append(_Tok(m.group(4), m.start(4)))
        pos = m.end()
    if len(stack) != 1:
        raise ParseError("missing ')'", stack[-1].pos)
    return stack[0]


def _pos(item: object) -> int | None:
    return getattr(item, "pos", None)


def _atom(item: object) -> str:
    if isinstance(item, list):
        raise ParseError("expected an identifier, found a list", _pos(item))
    return str(item)


def _ident(item: object) -> str:
    name = _atom(item)
    if not IDENT_RE.match(name) or name in KEYWORDS:
        raise ParseError(f"invalid identifier {name!r}", _pos(item))
    return name


# ---------------------------------------------------------------------------
# Formula parser


def parse_term(item: object, sig: Signature) -> Term:
    if isinstance(item, list):
        if not item:
            raise ParseError("empty term", _pos(item))
        fn = _ident(item[0])
        s = sig.get(fn)
        if s is None:
            raise UnknownSymbolError(f"undeclared function {fn}", _pos(item[0]))
        if s.kind != FUN:
            raise ParseError(f"relation {fn} used as a term", _pos(item[0]))
        args = tuple(parse_term(a, sig) for a in item[1:])
        if len(args) != s.arity:
            raise ArityError(
                f"{fn} expects {s.arity} arguments, got {len(args)}", _pos(item)
            )
        return App(fn, args)
    name = _ident(item)
    s = sig.get(name)
    if s is None:
        return Var(name)
    if s.kind != FUN:
        raise ParseError(f"relation {name} used as a term", _pos(item))
    if s.arity != 0:
        raise ArityError(f"{name} expects {s.arity} arguments, got 0", _pos(item))
    return App(name, ())


def _parse_formula_item(item: object, sig: Signature) -> Formula:
    if not isinstance(item, list):
        name = _atom(item)
        if name == "true":
            return TRUE
        if name == "false":
            return FALSE
        name = _ident(item)
        s = sig.get(name)
        if s is None:
            raise UnknownSymbolError(f"undeclared relation {name}", _pos(item))
        if s.kind != REL:
            raise ParseError(f"function {name} used as a formula", _pos(item))
        if s.arity != 0:
            raise ArityError(f"{name} expects {s.arity} arguments, got 0", _pos(item))
        return Rel(name, ())
    if not item:
        raise ParseError("empty formula", _pos(item))
    head = _atom(item[0])
    rest = item[1:]
    p = _pos(item)
    if head == "=":
        if len(rest) != 2:
            raise ArityError(f"= expects 2 arguments, got {len(rest)}", p)
        return Eq(parse_term(rest[0], sig), parse_term(rest[1], sig))
    if head == "not":
        if len(rest) != 1:
            raise ArityError("not expects 1 argument", p)
        return Not(_parse_formula_item(rest[0], sig))
    if head in ("and", "or"):
        parts = tuple(_parse_formula_item(a, sig) for a in rest)
        return And(parts) if head == "and" else Or(parts)
    if head in ("imp", "iff"):
        if len(rest) != 2:
            raise ArityError(f"{head} expects 2 arguments", p)
        a, b = (_parse_formula_item(x, sig) for x in rest)
        return Imp(a, b) if head == "imp" else Iff(a, b)
    if head in ("exists", "forall"):
        if len(rest) != 2:
            raise ArityError(f"{head} expects a variable and a body", p)
        binder = rest[0]
        names = [_ident(v) for v in binder] if isinstance(binder, list) else [_ident(binder)]
        for n in names:
            if n in sig:
                raise ParseError(f"bound variable {n} clashes with a symbol", _pos(binder))
        body = _parse_formula_item(rest[1], sig)
        return exists(names, body) if head == "exists" else forall(names, body)
    if head in ("true", "false"):
        raise ParseError(f"{head} takes no arguments", p)
    name = _ident(item[0])
    s = sig.get(name)
    if s is None:
        raise UnknownSymbolError(f"undeclared relation {name}", _pos(item[0]))
    if s.kind != REL:
        raise ParseError(f"function {name} used as a formula", _pos(item[0]))
    args = tuple(parse_term(a, sig) for a in rest)
    if len(args) != s.arity:
        raise ArityError(f"{name} expects {s.arity} arguments, got {len(args)}", p)
    return Rel(name, args)


def parse_formula(text: str, signature: Signature) -> Formula:
    items = read_sexprs(text)
    if len(items) != 1:
        raise ParseError(f"expected exactly one formula, found {len(items)}", 0)
    return _parse_formula_item(items[0], signature)


def parse_formulas(text: str, signature: Signature) -> list[Formula]:
    return [_parse_formula_item(i, signature) for i in read_sexprs(text)]


def parse_term_text(text: str, signature: Signature) -> Term:
    items = read_sexprs(text)
    if len(items) != 1:
        raise ParseError("expected exactly one term", 0)
    return parse_term(items[0], signature)


# ---------------------------------------------------------------------------
# Printer


def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.fn
    return "(" + " ".join([t.fn] + [print_term(a) for a in t.args]) + ")"


def print_formula(f: Formula) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Eq):
        return f"(= {print_term(f.left)} {print_term(f.right)})"
    if isinstance(f, Rel):
        if not f.args:
            return f.name
        return "(" + " ".join([f.name] + [print_term(a) for a in f.args]) + ")"
    if isinstance(f, Not):
        return f"(not {print_formula(f.arg)})"
    if isinstance(f, (And, Or)):
        head = "and" if isinstance(f, And) else "or"
        return "(" + " ".join([head] + [print_formula(c) for c in f.args]) + ")"
    if isinstance(f, (Imp, Iff)):
        head = "imp" if isinstance(f, Imp) else "iff"
        return f"({head} {print_formula(f.left)} {print_formula(f.right)})"
    if isinstance(f, Exists):
        return f"(exists {f.var} {print_formula(f.body)})"
    if isinstance(f, Forall):
        return f"(forall {f.var} {print_formula(f.body)})"
    raise TypeError(f"not a formula: {f!r}")
