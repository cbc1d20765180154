"""Finite structures: evaluation, exhaustive enumeration, diagrams, extensions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator, Mapping, Sequence

from .errors import EclError, InvariantViolation, ParseError, ResourceLimitError, SignatureError
from .syntax import (
    FUN,
    REL,
    And,
    App,
    Bot,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Imp,
    Not,
    Or,
    Rel,
    Signature,
    Symbol,
    Term,
    Top,
    Var,
    read_sexprs,
)

if TYPE_CHECKING:
    from .qe import ElementaryExistential


@dataclass
class FiniteStructure:
    """Elements are ``0..size-1``; every function table is total."""

    signature: Signature
    size: int
    functions: dict = field(default_factory=dict)  # name -> {args tuple: value}
    relations: dict = field(default_factory=dict)  # name -> frozenset of tuples

    def __post_init__(self) -> None:
        if self.size < 0:
            raise SignatureError("negative domain size")
        if self.size == 0 and self.signature.constants:
            raise SignatureError("empty domain with constants in the signature")
        funcs = {}
        rels = {}
        for s in self.signature:
            if s.kind == FUN:
                table = dict(self.functions.get(s.name, {}))
                for args in itertools.product(range(self.size), repeat=s.arity):
                    v = table.get(args)
                    if v is None:
                        raise SignatureError(f"table of {s.name} undefined at {args}")
                    if not 0 <= v < self.size:
                        raise SignatureError(f"{s.name}{args} = {v} outside the domain")
                if len(table) != self.size**s.arity:
                    raise SignatureError(f"table of {s.name} has entries outside the domain")
                funcs[s.name] = table
            else:
                tuples = frozenset(tuple(t) for t in self.relations.get(s.name, ()))
                for t in tuples:
                    if len(t) != s.arity or not all(0 <= a < self.size for a in t):
                        raise SignatureError(f"bad tuple {t} for relation {s.name}")
                rels[s.name] = tuples
        extra = (set(self.functions) - set(funcs)) | (set(self.relations) - set(rels))
        if extra:
            raise SignatureError(f"symbols not in the signature: {sorted(extra)}")
        self.functions = funcs
        self.relations = rels

    @property
    def domain(self) -> range:
        return range(self.size)

    def key(self) -> tuple:
        return (
            self.size,
            tuple((n, tuple(sorted(t.items()))) for n, t in sorted(self.functions.items())),
            tuple((n, tuple(sorted(r))) for n, r in sorted(self.relations.items())),
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteStructure)
            and self.signature == other.signature
            and self.key() == other.key()
        )

    def __hash__(self) -> int:
        return hash(self.key())

    def value(self, t: Term, env: Mapping[str, int] | None = None) -> int:
        return eval_term(self, t, env or {})

    def holds(self, f: Formula, env: Mapping[str, int] | None = None) -> bool:
        return eval_formula(self, f, env)

    def expand(self, constants: Mapping[str, int]) -> "FiniteStructure":
        """Expansion by new constants naming the given elements."""
        sig = self.signature.with_constants(constants)
        funcs = dict(self.functions)
        for name, v in constants.items():
            funcs[name] = {(): v}
        return FiniteStructure(sig, self.size, funcs, self.relations)

    def restrict_signature(self, sig: Signature) -> "FiniteStructure":
        return FiniteStructure(
            sig,
            self.size,
            {n: t for n, t in self.functions.items() if n in sig},
            {n: r for n, r in self.relations.items() if n in sig},
        )

    def is_substructure_of(self, other: "FiniteStructure") -> bool:
        """True when ``other`` extends this structure on the identity embedding."""
        if other.size < self.size or self.signature != other.signature:
            return False
        for name, table in self.functions.items():
            otab = other.functions[name]
            if any(otab[k] != v for k, v in table.items()):
                return False
        for name, tuples in self.relations.items():
            arity = self.signature[name].arity
            for args in itertools.product(range(self.size), repeat=arity):
                if (args in tuples) != (args in other.relations[name]):
                    return False
        return True

    def to_text(self) -> str:
        return print_structure(self)


# ---------------------------------------------------------------------------
# Evaluation


class UnboundVariableError(EclError, KeyError):
    pass


def eval_term(M: FiniteStructure, t: Term, env: Mapping[str, int]) -> int:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariableError(f"unbound variable {t.name}") from None
    try:
        table = M.functions[t.fn]
    except KeyError:
        raise SignatureError(f"structure does not interpret {t.fn}") from None
    return table[tuple(eval_term(M, a, env) for a in t.args)]


def eval_formula(M: FiniteStructure, f: Formula, env: Mapping[str, int] | None = None) -> bool:
    """Tarskian truth in a finite structure; over the empty domain ``exists`` is false."""
    return _eval(M, f, dict(env or {}))


def _eval(M: FiniteStructure, f: Formula, env: dict) -> bool:
    if isinstance(f, Eq):
        return eval_term(M, f.left, env) == eval_term(M, f.right, env)
    if isinstance(f, Rel):
        try:
            tuples = M.relations[f.name]
        except KeyError:
            raise SignatureError(f"structure does not interpret {f.name}") from None
        return tuple(eval_term(M, a, env) for a in f.args) in tuples
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Not):
        return not _eval(M, f.arg, env)
    if isinstance(f, And):
        return all(_eval(M, c, env) for c in f.args)
    if isinstance(f, Or):
        return any(_eval(M, c, env) for c in f.args)
    if isinstance(f, Imp):
        return (not _eval(M, f.left, env)) or _eval(M, f.right, env)
    if isinstance(f, Iff):
        return _eval(M, f.left, env) == _eval(M, f.right, env)
    if isinstance(f, (Exists, Forall)):
        want = isinstance(f, Exists)
        saved = env.get(f.var, _MISSING)
        try:
            for a in range(M.size):
                env[f.var] = a
                if _eval(M, f.body, env) == want:
                    return want
            return not want
        finally:
            if saved is _MISSING:
                env.pop(f.var, None)
            else:
                env[f.var] = saved
    raise TypeError(f"not a formula: {f!r}")


_MISSING = object()


# ---------------------------------------------------------------------------
# Enumeration


def count_structures(sig: Signature, size: int) -> int:
    """Number of structures on ``{0..size-1}``, by table arithmetic."""
    if size == 0 and sig.constants:
        return 0
    total = 1
    for s in sig:
        cells = size**s.arity
        total *= (size**cells) if s.kind == FUN else 2**cells
    return total


def enumerate_structures(
    signature: Signature,
    max_size: int,
    limit: int | None = 10**6,
    canonical: bool = False,
) -> Iterator[FiniteStructure]:
    """Every structure of size at most ``max_size`` on the fixed element names.

    ``limit`` caps the number of structures that would be generated; it is
    checked up front and raises :class:`ResourceLimitError`. With ``canonical``,
    only the lexicographically least member of each isomorphism class is yielded.
    """
    if max_size < 0:
        raise ValueError("max_size must be non-negative")
    total = sum(count_structures(signature, n) for n in range(max_size + 1))
    if limit is not None and total > limit:
        raise ResourceLimitError(
            f"{total} structures up to size {max_size} exceed the limit {limit}"
        )
    syms = list(signature)
    for n in range(max_size + 1):
        if n == 0 and signature.constants:
            continue
        cell_lists = [list(itertools.product(range(n), repeat=s.arity)) for s in syms]
        choices = []
        for s, cells in zip(syms, cell_lists):
            if s.kind == FUN:
                choices.append(itertools.product(range(n), repeat=len(cells)))
            else:
                choices.append(itertools.product((False, True), repeat=len(cells)))
        seen: set = set()
        for combo in itertools.product(*[list(c) for c in choices]):
            funcs, rels = {}, {}
            for s, cells, vals in zip(syms, cell_lists, combo):
                if s.kind == FUN:
                    funcs[s.name] = dict(zip(cells, vals))
                else:
                    rels[s.name] = frozenset(c for c, v in zip(cells, vals) if v)
            M = FiniteStructure(signature, n, funcs, rels)
            if canonical:
                ck = canonical_key(M)
                if ck in seen:
                    continue
                seen.add(ck)
            yield M


def permute(M: FiniteStructure, perm: Sequence[int]) -> FiniteStructure:
    funcs = {
        name: {tuple(perm[a] for a in k): perm[v] for k, v in table.items()}
        for name, table in M.functions.items()
    }
    rels = {name: frozenset(tuple(perm[a] for a in t) for t in r) for name, r in M.relations.items()}
    return FiniteStructure(M.signature, M.size, funcs, rels)


def canonical_key(M: FiniteStructure) -> tuple:
    return min(permute(M, p).key() for p in itertools.permutations(range(M.size)))


# ---------------------------------------------------------------------------
# Diagrams


def element_names(M: FiniteStructure, prefix: str = "e") -> list[str]:
    """Fresh constant names for the elements, avoiding the structure's symbols."""
    while any(f"{prefix}{i}" in M.signature for i in range(M.size)):
        prefix += "_"
    return [f"{prefix}{i}" for i in range(M.size)]


def diagram(M: FiniteStructure, prefix: str = "e") -> tuple[Signature, list[Formula]]:
    """Expanded signature and the literals pinning ``M`` down up to extension."""
    names = element_names(M, prefix)
    consts = [App(n, ()) for n in names]
    sig = M.signature.with_constants(names)
    lits: list[Formula] = []
    for i in range(M.size):
        for j in range(i + 1, M.size):
            lits.append(Not(Eq(consts[i], consts[j])))
    for s in M.signature:
        if s.kind == FUN:
            for args, v in sorted(M.functions[s.name].items()):
                lits.append(Eq(App(s.name, tuple(consts[a] for a in args)), consts[v]))
        else:
            for args in itertools.product(range(M.size), repeat=s.arity):
                atom = Rel(s.name, tuple(consts[a] for a in args))
                lits.append(atom if args in M.relations[s.name] else Not(atom))
    return sig, lits


def expand_with_names(M: FiniteStructure, prefix: str = "e") -> FiniteStructure:
    names = element_names(M, prefix)
    return M.expand({n: i for i, n in enumerate(names)})


# ---------------------------------------------------------------------------
# Structure files


def parse_structure(text: str, signature: Signature | None = None) -> FiniteStructure:
    """``(structure (domain N) (fun NAME ((args) val) ...) (rel NAME (tuple) ...))``."""
    items = read_sexprs(text)
    if len(items) != 1 or not isinstance(items[0], list) or not items[0]:
        raise ParseError("expected one (structure ...) form", 0)
    form = items[0]
    if str(form[0]) != "structure":
        raise ParseError("expected 'structure'", getattr(form[0], "pos", None))
    size = None
    funcs: dict = {}
    rels: dict = {}
    arities: dict = {}
    for part in form[1:]:
        if not isinstance(part, list) or not part:
            raise ParseError("expected a clause", getattr(part, "pos", None))
        head = str(part[0])
        if head == "domain":
            size = _int(part[1]) if len(part) == 2 else None
            if size is None:
                raise ParseError("(domain N) takes one integer", part.pos)
        elif head == "fun":
            name = str(part[1])
            table = funcs.setdefault(name, {})
            for entry in part[2:]:
                if not isinstance(entry, list) or len(entry) != 2 or not isinstance(entry[0], list):
                    raise ParseError(f"bad entry for {name}", getattr(entry, "pos", None))
                args = tuple(_int(a) for a in entry[0])
                table[args] = _int(entry[1])
                arities.setdefault(name, (FUN, len(args)))
        elif head == "rel":
            name = str(part[1])
            tuples = rels.setdefault(name, set())
            arities.setdefault(name, (REL, None))
            for entry in part[2:]:
                if not isinstance(entry, list):
                    raise ParseError(f"bad tuple for {name}", getattr(entry, "pos", None))
                t = tuple(_int(a) for a in entry)
                tuples.add(t)
                arities[name] = (REL, len(t))
        else:
            raise ParseError(f"unknown clause {head!r}", part.pos)
    if size is None:
        raise ParseError("missing (domain N)", form.pos)
    if signature is None:
        syms = []
        for name, (kind, ar) in arities.items():
            if ar is None:
                raise ParseError(f"cannot infer the arity of {name}; pass a signature", 0)
            syms.append(Symbol(name, kind, ar))
        signature = Signature(syms)
    return FiniteStructure(signature, size, funcs, rels)


def _int(item: object) -> int:
    try:
        return int(str(item))
    except ValueError:
        raise ParseError(f"expected an integer, found {item!s}", getattr(item, "pos", None)) from None


def print_structure(M: FiniteStructure) -> str:
    lines = [f"(structure (domain {M.size})"]
    for s in M.signature:
        if s.kind == FUN:
            entries = " ".join(
                "((" + " ".join(map(str, k)) + f") {v})" for k, v in sorted(M.functions[s.name].items())
            )
            lines.append(f"  (fun {s.name} {entries})".rstrip())
        else:
            entries = " ".join("(" + " ".join(map(str, t)) + ")" for t in sorted(M.relations[s.name]))
            lines.append(f"  (rel {s.name} {entries})".rstrip())
    return "\n".join(lines) + ")"


# ---------------------------------------------------------------------------
# Extensions realizing an elementary existential formula


@dataclass(frozen=True)
class Extension:
    structure: FiniteStructure
    witness: dict  # bound variable -> element of the extension


def extension_satisfies(
    M: FiniteStructure,
    u: Sequence[int],
    e: "ElementaryExistential",
    method: str = "constructive",
) -> Extension | None:
    """An extension of ``M`` in which ``exists y. theta(u, y)`` holds, or None.

    ``constructive`` evaluates the resultant in ``M`` and, when it holds, builds
    ``M`` plus one new element per class outside the star set. ``blind`` searches
    all extensions with at most ``|M| + |Theta|`` elements without consulting the
    resultant.
    """
    if len(u) != len(e.free_vars):
        raise ValueError(f"expected {len(e.free_vars)} parameters, got {len(u)}")
    if any(not 0 <= a < M.size for a in u):
        raise ValueError("parameters must be elements of M")
    used = e.symbols()
    missing = [n for n in used if n not in M.signature]
    if missing:
        raise SignatureError(f"structure does not interpret {missing}")
    if method == "constructive":
        return _constructive_extension(M, tuple(u), e)
    if method == "blind":
        return _blind_extension(M, tuple(u), e)
    raise ValueError(f"unknown method {method!r}")


def _constructive_extension(M, u, e):
    from .qe import compute_star

    star = compute_star(e)
    env = dict(zip(e.free_vars, u))
    if not eval_formula(M, star.star_formula, env):
        return None
    xi = set(star.xi)
    elem_of_class: dict[int, int] = {}
    next_id = M.size
    for ci, cls in enumerate(e.classes):
        if cls[0] in xi:
            elem_of_class[ci] = eval_term(M, star.star_map[cls[0]], env)
    for ci, cls in enumerate(e.classes):
        if ci not in elem_of_class:
            elem_of_class[ci] = next_id
            next_id += 1
    size = next_id
    cls_of = e.class_index

    def elem(t):
        return elem_of_class[cls_of[t]]

    outside = [t for t in e.theta if t not in xi]
    default = elem(outside[0]) if outside else 0

    funcs: dict = {}
    for s in M.signature:
        if s.kind != FUN:
            continue
        table = dict(M.functions[s.name])
        funcs[s.name] = table
    forced: dict = {}
    for t in e.theta:
        if isinstance(t, App):
            key = tuple(elem(a) for a in t.args)
            val = elem(t)
            if all(a < M.size for a in key):
                if M.functions[t.fn][key] != val:
                    raise InvariantViolation(f"constructive extension disagrees with M at {t}")
                continue
            prev = forced.setdefault((t.fn, key), val)
            if prev != val:
                raise InvariantViolation(f"conflicting values for {t.fn}{key}")
    for (fn, key), val in forced.items():
        funcs[fn][key] = val
    for s in M.signature:
        if s.kind == FUN:
            table = funcs[s.name]
            for args in itertools.product(range(size), repeat=s.arity):
                table.setdefault(args, default)
    rels: dict = {s.name: set(M.relations[s.name]) for s in M.signature if s.kind == REL}
    for (r, reps), bit in e.epsilon.items():
        key = tuple(elem(t) for t in reps)
        if all(a < M.size for a in key):
            if (key in M.relations[r]) != bit:
                raise InvariantViolation(f"constructive extension disagrees with M on {r}{key}")
        elif bit:
            rels[r].add(key)
    N = FiniteStructure(M.signature, size, funcs, rels)
    witness = {y: elem(Var(y)) for y in e.bound_vars}
    _verify(M, N, u, e, witness)
    return Extension(N, witness)


def _blind_extension(M, u, e):
    theta = list(e.theta)
    cls_of = e.class_index
    cap = M.size + len(theta)
    free_pos = {x: i for i, x in enumerate(e.free_vars)}
    val: dict = {}
    ext_f: dict = {}
    order: list = []

    def consistent(t, v) -> bool:
        c = cls_of[t]
        for s in order:
            if (cls_of[s] == c) != (val[s] == v):
                return False
        return True

    def options(k):
        return range(min(M.size + k + 1, cap))

    def rec(i, k):
        if i == len(theta):
            return k if _relations_ok(M, e, val) else None
        t = theta[i]
        if isinstance(t, Var) and t.name in free_pos:
            cands = [u[free_pos[t.name]]]
            key = None
        elif isinstance(t, Var):
            cands = list(options(k))
            key = None
        else:
            key = (t.fn, tuple(val[a] for a in t.args))
            if all(a < M.size for a in key[1]):
                cands = [M.functions[t.fn][key[1]]]
                key = None
            elif key in ext_f:
                cands = [ext_f[key]]
                key = None
            else:
                cands = list(options(k))
        for v in cands:
            if not consistent(t, v):
                continue
            nk = max(k, v - M.size + 1)
            val[t] = v
            order.append(t)
            if key is not None:
                ext_f[key] = v
            res = rec(i + 1, nk)
            if res is not None:
                return res
            order.pop()
            del val[t]
            if key is not None:
                del ext_f[key]
        return None

    k = rec(0, 0)
    if k is None:
        return None
    size = M.size + k
    funcs = {}
    for s in M.signature:
        if s.kind == FUN:
            table = dict(M.functions[s.name])
            for (fn, key), v in ext_f.items():
                if fn == s.name:
                    table[key] = v
            for args in itertools.product(range(size), repeat=s.arity):
                table.setdefault(args, 0)
            funcs[s.name] = table
    rels = {s.name: set(M.relations[s.name]) for s in M.signature if s.kind == REL}
    for (r, reps), bit in e.epsilon.items():
        key = tuple(val[t] for t in reps)
        if bit and not all(a < M.size for a in key):
            rels[r].add(key)
    N = FiniteStructure(M.signature, size, funcs, rels)
    witness = {y: val[Var(y)] for y in e.bound_vars}
    _verify(M, N, u, e, witness)
    return Extension(N, witness)


def _relations_ok(M, e, val) -> bool:
    for (r, reps), bit in e.epsilon.items():
        key = tuple(val[t] for t in reps)
        if all(a < M.size for a in key) and (key in M.relations[r]) != bit:
            return False
    return True


def _verify(M, N, u, e, witness) -> None:
    if not M.is_substructure_of(N):
        raise InvariantViolation("constructed structure does not extend M")
    env = dict(zip(e.free_vars, u))
    env.update(witness)
    if not eval_formula(N, e.matrix(), env):
        raise InvariantViolation("constructed extension does not satisfy theta")


def random_structure(sig: Signature, size: int, rng) -> FiniteStructure:
    if size == 0 and sig.constants:
        size = 1
    funcs, rels = {}, {}
    for s in sig:
        cells = itertools.product(range(size), repeat=s.arity)
        if s.kind == FUN:
            funcs[s.name] = {c: rng.randrange(size) for c in cells}
        else:
            rels[s.name] = frozenset(c for c in cells if rng.random() < 0.5)
    return FiniteStructure(sig, size, funcs, rels)


__all__ = [
    "Extension",
    "FiniteStructure",
    "UnboundVariableError",
    "count_structures",
    "diagram",
    "element_names",
    "enumerate_structures",
    "eval_formula",
    "eval_term",
    "expand_with_names",
    "extension_satisfies",
    "parse_structure",
    "print_structure",
    "random_structure",
]
