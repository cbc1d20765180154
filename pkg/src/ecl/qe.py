"""Quantifier elimination for the model completion of the empty theory.

An existential ``exists y. psi`` with ``psi`` open is split into elementary
existential formulas, one per admissible pair (partition of the subterms,
relation bits). Each elementary formula is replaced by its resultant, an open
formula in the parameters that holds exactly when some extension realizes it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from . import kernels
from ._kernels_py import relation_groups
from .errors import ResourceLimitError
from .euf import LiteralChecker, canonical_atom, ground_valid, satisfiable
from .syntax import (
    ATOMS,
    FALSE,
    TRUE,
    And,
    App,
    Bot,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    Rel,
    Signature,
    Term,
    Top,
    Var,
    atoms,
    conj,
    disj,
    free_vars,
    is_literal,
    is_quantifier_free,
    neg,
    nnf,
    subterm_closure,
    term_key,
    term_symbols,
    term_vars,
    to_core,
)


@dataclass(frozen=True)
class Caps:
    """Search ceilings. Exceeding one raises :class:`ResourceLimitError`."""

    max_theta: int = 12
    max_partitions: int = 10**6
    max_groups: int = 16


DEFAULT_CAPS = Caps()


# ---------------------------------------------------------------------------
# Elementary existential formulas


@dataclass(frozen=True, eq=False)
class ElementaryExistential:
    """``exists bound_vars. theta`` for a complete description (Theta, ~, eps).

    ``classes`` partitions ``theta``. ``epsilon`` maps ``(relation, tuple of
    class representatives)`` to a truth value; tuples absent from it are left
    unconstrained, which stands for the disjunction over both values.
    """

    theta: tuple
    free_vars: tuple
    bound_vars: tuple
    classes: tuple
    epsilon: Mapping = field(default_factory=dict)

    def __post_init__(self) -> None:
        theta = tuple(sorted(set(self.theta), key=term_key))
        if len(theta) != len(self.theta):
            raise ValueError("theta contains duplicates")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "free_vars", tuple(self.free_vars))
        object.__setattr__(self, "bound_vars", tuple(self.bound_vars))
        classes = tuple(
            sorted((tuple(sorted(c, key=term_key)) for c in self.classes), key=lambda c: term_key(c[0]))
        )
        object.__setattr__(self, "classes", classes)
        self._validate_shape()
        eps: dict = {}
        for (r, tup), bit in dict(self.epsilon).items():
            reps = tuple(self.rep(t) for t in tup)
            if eps.setdefault((r, reps), bool(bit)) != bool(bit):
                raise ValueError(f"epsilon does not respect ~ on {r}{reps}")
        object.__setattr__(self, "epsilon", MappingProxyType(dict(sorted(eps.items(), key=_eps_key))))

    def _validate_shape(self) -> None:
        tset = set(self.theta)
        for t in self.theta:
            if isinstance(t, App) and not set(t.args) <= tset:
                raise ValueError(f"theta is not closed under subterms at {t}")
        allowed = set(self.free_vars) | set(self.bound_vars)
        if len(allowed) != len(self.free_vars) + len(self.bound_vars):
            raise ValueError("free and bound variables must be distinct")
        for t in self.theta:
            if not term_vars(t) <= allowed:
                raise ValueError(f"{t} uses variables outside the declared ones")
        for v in allowed:
            if Var(v) not in tset:
                raise ValueError(f"variable {v} missing from theta")
        members = [t for c in self.classes for t in c]
        if sorted(members, key=term_key) != list(self.theta) or any(not c for c in self.classes):
            raise ValueError("classes must partition theta")
        idx = self.class_index
        seen: dict[tuple, int] = {}
        for t in self.theta:
            if isinstance(t, App):
                key = (t.fn,) + tuple(idx[a] for a in t.args)
                if seen.setdefault(key, idx[t]) != idx[t]:
                    raise ValueError(f"~ is not a congruence at {t}")

    @classmethod
    def _trusted(cls, theta, free_vars, bound_vars, classes, epsilon) -> "ElementaryExistential":
        """Build without validation; ``theta`` and ``classes`` must already be sorted.

        Used for descriptions produced by the partition kernels, which are
        congruences by construction. ``epsilon`` keys may name any class member.
        """
        self = object.__new__(cls)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "free_vars", free_vars)
        object.__setattr__(self, "bound_vars", bound_vars)
        object.__setattr__(self, "classes", classes)
        eps = {(r, tuple(self.rep(t) for t in tup)): bit for (r, tup), bit in epsilon.items()}
        object.__setattr__(self, "epsilon", MappingProxyType(dict(sorted(eps.items(), key=_eps_key))))
        return self

    @cached_property
    def class_index(self) -> dict:
        return {t: i for i, c in enumerate(self.classes) for t in c}

    def rep(self, t: Term) -> Term:
        return self.classes[self.class_index[t]][0]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ElementaryExistential) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def _key(self) -> tuple:
        return (self.theta, self.free_vars, self.bound_vars, self.classes, tuple(self.epsilon.items()))

    def symbols(self) -> set:
        out = {r for r, _ in self.epsilon}
        for t in self.theta:
            out.update(term_symbols(t))
        return out

    def matrix(self) -> Formula:
        """The open conjunction describing Theta completely."""
        parts: list[Formula] = []
        idx = self.class_index
        for t, s in itertools.combinations(self.theta, 2):
            parts.append(Eq(t, s) if idx[t] == idx[s] else Not(Eq(t, s)))
        for (r, reps), bit in self.epsilon.items():
            pools = [self.classes[idx[t]] for t in reps]
            for tup in itertools.product(*pools):
                atom = Rel(r, tup)
                parts.append(atom if bit else Not(atom))
        return conj(*parts)

    def formula(self) -> Formula:
        body = self.matrix()
        for y in reversed(self.bound_vars):
            body = Exists(y, body)
        return body


def _eps_key(item) -> tuple:
    (r, reps), _ = item
    return (r, tuple(term_key(t) for t in reps))


# ---------------------------------------------------------------------------
# Partitions


def _encode(theta: Sequence[Term]):
    index = {t: i for i, t in enumerate(theta)}
    syms: dict[str, int] = {}
    apps = []
    for i, t in enumerate(theta):
        if isinstance(t, App) and t.args:
            sid = syms.setdefault(t.fn, len(syms))
            apps.append((i, sid, tuple(index[a] for a in t.args)))
    return index, apps


def _check_theta(theta: Sequence[Term], caps: Caps) -> None:
    if len(theta) > caps.max_theta:
        raise ResourceLimitError(f"|Theta| = {len(theta)} exceeds max_theta = {caps.max_theta}")


def _classes_from_rgs(theta: Sequence[Term], rgs: Sequence[int]) -> tuple:
    blocks: dict[int, list] = {}
    for t, b in zip(theta, rgs):
        blocks.setdefault(b, []).append(t)
    return tuple(tuple(blocks[b]) for b in sorted(blocks))


def enumerate_congruences(
    theta: Iterable[Term],
    signature: Signature | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> Iterator[tuple]:
    """Partitions of a subterm-closed term set that are congruences.

    Partitions come as tuples of classes, in restricted-growth order over the
    term order of ``theta``.
    """
    theta = sorted(set(theta), key=term_key)
    if set(subterm_closure(theta)) != set(theta):
        raise ValueError("theta must be closed under subterms")
    _check_theta(theta, caps)
    _, apps = _encode(theta)
    rows = kernels.admissible_partitions(len(theta), apps, caps.max_partitions)
    if rows is None:
        raise ResourceLimitError(f"more than {caps.max_partitions} admissible partitions")
    for rgs in rows:
        yield _classes_from_rgs(theta, rgs)


def _compile(psi: Formula, eq_index: dict, rel_index: dict) -> list:
    prog: list = []

    def go(f: Formula) -> None:
        if isinstance(f, Eq):
            prog.append((kernels.OP_EQ, eq_index[f]))
        elif isinstance(f, Rel):
            prog.append((kernels.OP_REL, rel_index[f]))
        elif isinstance(f, Top):
            prog.append((kernels.OP_CONST, 1))
        elif isinstance(f, Bot):
            prog.append((kernels.OP_CONST, 0))
        elif isinstance(f, Not):
            go(f.arg)
            prog.append((kernels.OP_NOT, 0))
        elif isinstance(f, (And, Or)):
            for c in f.args:
                go(c)
            prog.append((kernels.OP_AND if isinstance(f, And) else kernels.OP_OR, len(f.args)))
        else:
            raise TypeError(f"unexpected connective {f!r}")

    go(psi)
    return prog


def elementary_decomposition(
    psi: Formula,
    free_vars: Sequence[str],
    bound_vars: Sequence[str],
    caps: Caps = DEFAULT_CAPS,
) -> list[ElementaryExistential]:
    """Elementary existential formulas whose disjunction is equivalent to ``exists bound. psi``.

    Theta is the subterm closure of psi's terms together with all listed
    variables. Relation bits are fixed only for the relation atoms of ``psi``.
    """
    if not is_quantifier_free(psi):
        raise ValueError("psi must be quantifier-free")
    free_vars, bound_vars = tuple(free_vars), tuple(bound_vars)
    if not free_vars_of(psi) <= set(free_vars) | set(bound_vars):
        raise ValueError("psi has variables outside free_vars and bound_vars")
    psi = _canon_atoms(nnf(to_core(psi)))
    terms = [t for a in atoms(psi) for t in _atom_terms(a)]
    terms += [Var(v) for v in free_vars + bound_vars]
    theta = subterm_closure(terms)
    _check_theta(theta, caps)
    index, apps = _encode(theta)

    eq_list: list = []
    rel_list: list = []
    eq_index: dict = {}
    rel_index: dict = {}
    rel_syms: dict[str, int] = {}
    for a in atoms(psi):
        if isinstance(a, Eq) and a not in eq_index:
            eq_index[a] = len(eq_list)
            eq_list.append((index[a.left], index[a.right]))
        elif isinstance(a, Rel) and a not in rel_index:
            rel_index[a] = len(rel_list)
            sid = rel_syms.setdefault(a.name, len(rel_syms))
            rel_list.append((sid, tuple(index[t] for t in a.args)))
    rel_atoms = list(rel_index)
    prog = _compile(psi, eq_index, rel_index)
    try:
        rows = kernels.filtered_partitions(
            len(theta), apps, eq_list, rel_list, prog, caps.max_partitions, caps.max_groups
        )
    except OverflowError as exc:
        raise ResourceLimitError(f"{exc.args[0]} relation groups exceed max_groups") from None
    if rows is None:
        raise ResourceLimitError(f"more than {caps.max_partitions} admissible partitions")

    out = []
    for rgs, mask in rows:
        classes = _classes_from_rgs(theta, rgs)
        group, _ = relation_groups(rgs, rel_list)
        eps = {}
        for atom, g in zip(rel_atoms, group):
            eps[(atom.name, atom.args)] = bool((mask >> g) & 1)
        out.append(ElementaryExistential._trusted(tuple(theta), free_vars, bound_vars, classes, eps))
    return out


def free_vars_of(f: Formula) -> set:
    return set(free_vars(f))


def _atom_terms(a: Formula) -> tuple:
    return (a.left, a.right) if isinstance(a, Eq) else a.args


def _canon_atoms(f: Formula) -> Formula:
    if isinstance(f, ATOMS):
        return canonical_atom(f)
    if isinstance(f, Not):
        return Not(_canon_atoms(f.arg))
    if isinstance(f, And):
        return And(tuple(_canon_atoms(c) for c in f.args))
    if isinstance(f, Or):
        return Or(tuple(_canon_atoms(c) for c in f.args))
    return f


# ---------------------------------------------------------------------------
# Resultants


@dataclass(frozen=True)
class StarResult:
    xi: tuple  # members of Theta reachable from the parameters, in term order
    star_map: Mapping  # term in xi -> term over the free variables
    star_formula: Formula


def compute_star(e: ElementaryExistential, rng=None) -> StarResult:
    """The set Xi, the map t -> t*, and the resultant formula.

    Free variables are their own stars. Without ``rng`` every other member of
    a class gets one shared term: the least free variable of the class,
    otherwise ``F(args*)`` for its least member whose arguments were reached
    in an earlier round. With ``rng`` each term picks
    uniformly among the applicable clauses instead; the resultants agree up to
    equivalence.
    """
    star = _star_random(e, rng) if rng is not None else _star_deterministic(e)
    xi = tuple(t for t in e.theta if t in star)
    return StarResult(xi, MappingProxyType(star), _star_formula(e, xi, star))


def _star_deterministic(e: ElementaryExistential) -> dict:
    idx = e.class_index
    free = set(e.free_vars)
    by_class: dict[int, Term] = {}
    for c, members in enumerate(e.classes):
        for t in members:
            if isinstance(t, Var) and t.name in free:
                by_class[c] = t
                break
    while True:
        fresh: dict[int, Term] = {}
        for t in e.theta:
            c = idx[t]
            if c in by_class or c in fresh or not isinstance(t, App):
                continue
            if all(idx[a] in by_class for a in t.args):
                fresh[c] = App(t.fn, tuple(by_class[idx[a]] for a in t.args))
        if not fresh:
            break
        by_class.update(fresh)
    star = {t: by_class[idx[t]] for t in e.theta if idx[t] in by_class}
    for v in e.free_vars:
        star[Var(v)] = Var(v)
    return star


def _star_random(e: ElementaryExistential, rng) -> dict:
    idx = e.class_index
    star: dict = {Var(v): Var(v) for v in e.free_vars}
    while True:
        cands = []
        for t in e.theta:
            if t in star:
                continue
            for s in e.classes[idx[t]]:
                if s in star:
                    cands.append((t, star[s]))
            if isinstance(t, App) and all(a in star for a in t.args):
                cands.append((t, App(t.fn, tuple(star[a] for a in t.args))))
        if not cands:
            return star
        t, s = cands[rng.randrange(len(cands))]
        star[t] = s


def _star_formula(e: ElementaryExistential, xi: tuple, star: Mapping) -> Formula:
    idx = e.class_index
    eqs: dict = {}
    diseqs: dict = {}
    lits: dict = {}
    compat: dict = {}
    for t, s in itertools.combinations(xi, 2):
        a, b = star[t], star[s]
        if idx[t] == idx[s]:
            if a != b:
                eqs.setdefault(canonical_atom(Eq(a, b)), None)
        else:
            if a == b:
                return FALSE
            diseqs.setdefault(canonical_atom(Eq(a, b)), None)
    xi_set = set(xi)
    for (r, reps), bit in e.epsilon.items():
        pools = [[t for t in e.classes[idx[rp]] if t in xi_set] for rp in reps]
        for tup in itertools.product(*pools):
            lits.setdefault((Rel(r, tuple(star[t] for t in tup)), bit), None)
    for t in xi:
        if isinstance(t, App) and all(a in xi_set for a in t.args):
            rhs = App(t.fn, tuple(star[a] for a in t.args))
            if star[t] != rhs:
                compat.setdefault(canonical_atom(Eq(star[t], rhs)), None)
    parts: list[Formula] = list(eqs)
    parts += [Not(a) for a in diseqs]
    parts += [a if bit else Not(a) for a, bit in lits]
    parts += list(compat)
    return conj(*parts)


# ---------------------------------------------------------------------------
# Elimination


@dataclass(frozen=True)
class StepInfo:
    """What one elimination step saw; passed to ``trace`` callbacks."""

    var: str
    theta_size: int
    decompositions: int
    xi_sizes: tuple


def eliminate_one(
    psi: Formula,
    free_vars: Sequence[str],
    y: str,
    caps: Caps = DEFAULT_CAPS,
    trace: Callable[[StepInfo], None] | None = None,
) -> Formula:
    """Open formula equivalent to ``exists y. psi`` over the model completion."""
    free_vars = tuple(v for v in free_vars if v != y)
    seen: dict = {}
    decomp = elementary_decomposition(psi, free_vars, (y,), caps)
    xi_sizes = []
    for e in decomp:
        st = compute_star(e)
        xi_sizes.append(len(st.xi))
        seen.setdefault(st.star_formula, None)
    if trace is not None:
        size = len(decomp[0].theta) if decomp else 0
        trace(StepInfo(y, size, len(decomp), tuple(xi_sizes)))
    return simplify_open(disj(*seen))


def eliminate(
    f: Formula,
    caps: Caps = DEFAULT_CAPS,
    trace: Callable[[StepInfo], None] | None = None,
) -> Formula:
    """Quantifier-free equivalent of ``f``, innermost quantifier first.

    Before each step the body is put in negation normal form, the quantifier
    is distributed over disjunctions and conjuncts without the variable are
    moved out.
    """
    return simplify_open(_elim(nnf(to_core(f)), caps, trace))


def _elim(f: Formula, caps: Caps, trace) -> Formula:
    if isinstance(f, ATOMS) or isinstance(f, (Top, Bot)):
        return f
    if isinstance(f, Not):
        return neg(_elim(f.arg, caps, trace))
    if isinstance(f, And):
        return conj(*(_elim(c, caps, trace) for c in f.args))
    if isinstance(f, Or):
        return disj(*(_elim(c, caps, trace) for c in f.args))
    if isinstance(f, Exists):
        return _elim_exists(f.var, _elim(f.body, caps, trace), caps, trace)
    if isinstance(f, Forall):
        body = _elim(f.body, caps, trace)
        return neg(_elim_exists(f.var, nnf(Not(body)), caps, trace))
    raise TypeError(f"unexpected connective {f!r}")


def _elim_exists(y: str, body: Formula, caps: Caps, trace) -> Formula:
    """Push ``exists y`` through disjunctions and past conjuncts without y."""
    body = nnf(body)
    if isinstance(body, Or):
        return simplify_open(disj(*(_elim_exists(y, c, caps, trace) for c in body.args)))
    if y not in free_vars(body):
        return body
    if isinstance(body, And):
        inside = [c for c in body.args if y in free_vars(c)]
        outside = [c for c in body.args if y not in free_vars(c)]
        if outside:
            return simplify_open(conj(*outside, _elim_exists(y, conj(*inside), caps, trace)))
    params = sorted(free_vars(body) - {y})
    return eliminate_one(body, params, y, caps, trace)


# ---------------------------------------------------------------------------
# Simplification


def simplify_open(f: Formula) -> Formula:
    """Equivalent open formula after folding, literal pruning and subsumption.

    Disjunctions of conjunctions (and the dual shape) are cleaned with
    congruence closure; the result is replaced by ``true``/``false`` when it is
    valid/unsatisfiable over the empty theory.
    """
    if not is_quantifier_free(f):
        raise ValueError("simplify_open needs a quantifier-free formula")
    g = _canon_atoms(nnf(to_core(f)))
    if isinstance(g, (Top, Bot)):
        return g
    # a cleaned DNF with a disjunct is satisfiable, so only validity is open (dually for a CNF)
    dnf = _as_dnf(g)
    if dnf is not None:
        g = _dnf_to_formula(_clean_dnf(dnf))
        if isinstance(g, (Top, Bot)):
            return g
        return TRUE if ground_valid(g) else g
    cnf = _as_dnf(nnf(Not(g)))
    if cnf is not None:
        g = nnf(Not(_dnf_to_formula(_clean_dnf(cnf))))
        if isinstance(g, (Top, Bot)):
            return g
        return FALSE if satisfiable(g) is None else g
    if ground_valid(g):
        return TRUE
    if ground_valid(Not(g)):
        return FALSE
    return g


def _as_dnf(f: Formula):
    """List of literal lists when ``f`` is (shallowly) a DNF, else None."""
    disjuncts = f.args if isinstance(f, Or) else (f,)
    out = []
    for d in disjuncts:
        lits = d.args if isinstance(d, And) else (d,)
        if not all(is_literal(l) for l in lits):
            return None
        out.append(list(lits))
    return out


def _lit_key(l: Formula) -> tuple:
    pos = not isinstance(l, Not)
    a = l if pos else l.arg
    if isinstance(a, Eq):
        return (0, term_key(a.left), term_key(a.right), pos)
    return (1, a.name, tuple(term_key(t) for t in a.args), pos)


def _complement(l: Formula) -> Formula:
    return l.arg if isinstance(l, Not) else Not(l)


def _clean_conjunct(lits: list) -> frozenset | None:
    """Drop trivial and entailed literals; None when the conjunction is inconsistent."""
    out: list = []
    seen = set()
    for l in lits:
        a = l.arg if isinstance(l, Not) else l
        if isinstance(a, Eq) and a.left == a.right:
            if isinstance(l, Not):
                return None
            continue
        if l in seen:
            continue
        if _complement(l) in seen:
            return None
        seen.add(l)
        out.append(l)
    checker = LiteralChecker(out)
    if not checker.consistent(out):
        return None
    out.sort(key=_lit_key)
    i = len(out) - 1
    while i >= 0:
        rest = out[:i] + out[i + 1 :]
        if not checker.consistent(rest + [_complement(out[i])]):
            out = rest
        i -= 1
    return frozenset(out)


def _clean_dnf(dnf: list) -> list:
    conjs: set = set()
    for lits in dnf:
        c = _clean_conjunct(lits)
        if c is not None:
            if not c:
                return [frozenset()]
            conjs.add(c)
    changed = True
    while changed:
        changed = False
        ordered = sorted(conjs, key=lambda c: (len(c), sorted(_lit_key(l) for l in c)))
        kept: list = []
        for c in ordered:
            if not any(k <= c for k in kept):
                kept.append(c)
        conjs = set(kept)
        # resolve pairs that differ in one complementary literal: (A and l) or (A and not l) -> A
        index: dict = {}
        for c in sorted(conjs, key=lambda c: sorted(_lit_key(l) for l in c)):
            for l in sorted(c, key=_lit_key):
                index.setdefault((c - {l}, l), c)
        done: set = set()
        for (rest, l), a in index.items():
            b = index.get((rest, _complement(l)))
            if b is None or a in done or b in done:
                continue
            done.update((a, b))
            conjs.discard(a)
            conjs.discard(b)
            merged = _clean_conjunct(list(rest))
            if merged is not None:
                if not merged:
                    return [frozenset()]
                conjs.add(merged)
            changed = True
    return sorted(conjs, key=lambda c: (len(c), sorted(_lit_key(l) for l in c)))


def _dnf_to_formula(conjs: list) -> Formula:
    return disj(*(conj(*sorted(c, key=_lit_key)) for c in conjs))


__all__ = [
    "Caps",
    "DEFAULT_CAPS",
    "ElementaryExistential",
    "StarResult",
    "StepInfo",
    "compute_star",
    "elementary_decomposition",
    "eliminate",
    "eliminate_one",
    "enumerate_congruences",
    "simplify_open",
]
