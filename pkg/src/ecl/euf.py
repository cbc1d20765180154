"""Ground reasoning with equality and uninterpreted symbols.

Free variables are treated as fresh constants, so :func:`ground_valid` decides
validity of the universal closure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import kernels
from .syntax import (
    ATOMS,
    And,
    App,
    Bot,
    Eq,
    Formula,
    Iff,
    Not,
    Or,
    Term,
    Top,
    atom_terms,
    atoms,
    is_quantifier_free,
    nnf,
    subterm_closure,
    term_key,
)


def _orient_key(t: Term) -> tuple:
    k = term_key(t)
    return (-k[0],) + k[1:]


def canonical_atom(a: Formula) -> Formula:
    """Orient equalities so that ``s = t`` and ``t = s`` become the same atom.

    The taller term goes on the left (``F(x) = y``); equal heights keep term order.
    """
    if isinstance(a, Eq) and _orient_key(a.right) < _orient_key(a.left):
        return Eq(a.right, a.left)
    return a


class TermDag:
    """Shared subterm graph with integer ids in term order."""

    def __init__(self, terms: Iterable[Term]):
        self.terms = subterm_closure(terms)
        self.index = {t: i for i, t in enumerate(self.terms)}
        syms: dict[str, int] = {}
        self.apps = []
        for i, t in enumerate(self.terms):
            if isinstance(t, App) and t.args:
                sid = syms.setdefault(t.fn, len(syms))
                self.apps.append((i, sid, tuple(self.index[a] for a in t.args)))

    def reps(self, eqs: Iterable[tuple[int, int]]) -> list[int]:
        return kernels.congruence_reps(len(self.terms), self.apps, list(eqs))


@dataclass(frozen=True)
class Closure:
    consistent: bool
    classes: frozenset | None  # frozenset of frozensets of terms, when consistent


def congruence_close(literals: Iterable[Formula]) -> Closure:
    """Close ground literals under congruence and report consistency.

    Each literal is an equality or relation atom, possibly negated.
    """
    lits = [_split_literal(l) for l in literals]
    terms = [t for a, _ in lits for t in atom_terms(a)]
    dag = TermDag(terms)
    ok, reps = _check(dag, lits)
    if not ok:
        return Closure(False, None)
    groups: dict[int, set] = {}
    for t, r in zip(dag.terms, reps):
        groups.setdefault(r, set()).add(t)
    return Closure(True, frozenset(frozenset(g) for g in groups.values()))


class LiteralChecker:
    """Consistency of subsets of a fixed literal pool, sharing one term DAG."""

    def __init__(self, literals: Iterable[Formula]):
        pool = [_split_literal(l) for l in literals]
        self.dag = TermDag(t for a, _ in pool for t in atom_terms(a))

    def consistent(self, literals: Iterable[Formula]) -> bool:
        return _check(self.dag, [_split_literal(l) for l in literals])[0]


def _split_literal(l: Formula) -> tuple[Formula, bool]:
    if isinstance(l, Not) and isinstance(l.arg, ATOMS):
        return l.arg, False
    if isinstance(l, ATOMS):
        return l, True
    raise ValueError(f"not a literal: {l}")


def _check(dag: TermDag, lits) -> tuple[bool, list[int]]:
    idx = dag.index
    eqs = [(idx[a.left], idx[a.right]) for a, pos in lits if pos and isinstance(a, Eq)]
    reps = dag.reps(eqs)
    polarity: dict[tuple, bool] = {}
    for a, pos in lits:
        if isinstance(a, Eq):
            if not pos and reps[idx[a.left]] == reps[idx[a.right]]:
                return False, reps
        else:
            key = (a.name,) + tuple(reps[idx[t]] for t in a.args)
            if polarity.setdefault(key, pos) != pos:
                return False, reps
    return True, reps


class GroundProblem:
    """A quantifier-free formula split into atoms, a propositional skeleton and a term DAG."""

    def __init__(self, f: Formula):
        if not is_quantifier_free(f):
            raise ValueError("ground reasoning needs a quantifier-free formula")
        self.matrix = _canon(nnf(f))
        seen: dict[Formula, int] = {}
        for a in atoms(self.matrix):
            seen.setdefault(a, len(seen))
        self.atoms: list[Formula] = list(seen)
        self.term_dag = TermDag(t for a in self.atoms for t in atom_terms(a))
        self.clauses = _as_clauses(self.matrix)

    def theory_check(self, assign: dict) -> tuple[bool, dict]:
        """Consistency of the assigned literals, plus atoms they force."""
        idx = self.term_dag.index
        lits = [(a, v) for a, v in assign.items()]
        ok, reps = _check(self.term_dag, lits)
        if not ok:
            return False, {}
        diseq = set()
        polarity: dict[tuple, bool] = {}
        for a, v in lits:
            if isinstance(a, Eq):
                if not v:
                    p, q = reps[idx[a.left]], reps[idx[a.right]]
                    diseq.add((p, q))
                    diseq.add((q, p))
            else:
                polarity[(a.name,) + tuple(reps[idx[t]] for t in a.args)] = v
        implied = {}
        for a in self.atoms:
            if a in assign:
                continue
            if isinstance(a, Eq):
                p, q = reps[idx[a.left]], reps[idx[a.right]]
                if p == q:
                    implied[a] = True
                elif (p, q) in diseq:
                    implied[a] = False
            else:
                key = (a.name,) + tuple(reps[idx[t]] for t in a.args)
                if key in polarity:
                    implied[a] = polarity[key]
        return True, implied

    def satisfying_assignment(self) -> dict | None:
        """A theory-consistent partial assignment making the skeleton true, or None."""
        if self.clauses is not None:
            return self._search_clauses({})
        return self._search({})

    def _search_clauses(self, assign: dict) -> dict | None:
        """DPLL over a clause list: unit propagation plus theory-implied literals."""
        assign = dict(assign)
        while True:
            ok, implied = self.theory_check(assign)
            if not ok:
                return None
            assign.update(implied)
            units: dict = {}
            open_clauses = []
            for clause in self.clauses:
                unset = None
                n_unset = 0
                for a, pol in clause:
                    v = assign.get(a)
                    if v is None:
                        n_unset += 1
                        unset = (a, pol)
                    elif v == pol:
                        break
                else:
                    if n_unset == 0:
                        return None
                    if n_unset == 1 and units.setdefault(*unset) != unset[1]:
                        return None
                    open_clauses.append(clause)
            if not open_clauses:
                return assign
            if not units and not implied:
                break
            assign.update(units)
        live = {a for clause in open_clauses for a, _ in clause}
        atom = next(a for a in self.atoms if a not in assign and a in live)
        for b in (True, False):
            assign[atom] = b
            res = self._search_clauses(assign)
            if res is not None:
                return res
        return None

    def _search(self, assign: dict) -> dict | None:
        assign = dict(assign)
        while True:
            ok, implied = self.theory_check(assign)
            if not ok:
                return None
            v = _eval3(self.matrix, assign)
            if v is False:
                return None
            if v is True:
                return assign
            units = _units(self.matrix, assign)
            if units is None:
                return None
            implied.update(units)
            if not implied:
                break
            assign.update(implied)
        live: set = set()
        _open_atoms(self.matrix, assign, live)
        atom = next(a for a in self.atoms if a not in assign and a in live)
        for b in (True, False):
            assign[atom] = b
            res = self._search(assign)
            if res is not None:
                return res
        return None


def _canon(f: Formula) -> Formula:
    if isinstance(f, ATOMS):
        return canonical_atom(f)
    if isinstance(f, Not):
        return Not(_canon(f.arg))
    if isinstance(f, And):
        return And(tuple(_canon(c) for c in f.args))
    if isinstance(f, Or):
        return Or(tuple(_canon(c) for c in f.args))
    return f


def _eval3(f: Formula, assign: dict):
    """Three-valued evaluation of an NNF skeleton under a partial assignment."""
    if isinstance(f, ATOMS):
        return assign.get(f)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Not):
        v = _eval3(f.arg, assign)
        return None if v is None else not v
    if isinstance(f, And):
        unknown = False
        for c in f.args:
            v = _eval3(c, assign)
            if v is False:
                return False
            if v is None:
                unknown = True
        return None if unknown else True
    if isinstance(f, Or):
        unknown = False
        for c in f.args:
            v = _eval3(c, assign)
            if v is True:
                return True
            if v is None:
                unknown = True
        return None if unknown else False
    raise TypeError(f"unexpected connective in skeleton: {f!r}")


def _units(f: Formula, assign: dict) -> dict | None:
    """Literals forced by top-level conjuncts; None on a direct clash."""
    out: dict = {}
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, And):
            stack.extend(g.args)
            continue
        if isinstance(g, ATOMS):
            a, v = g, True
        elif isinstance(g, Not) and isinstance(g.arg, ATOMS):
            a, v = g.arg, False
        else:
            continue
        if assign.get(a, v) != v or out.setdefault(a, v) != v:
            return None
        if a in assign:
            del out[a]
    return out


def _literal(f: Formula) -> tuple | None:
    if isinstance(f, ATOMS):
        return (f, True)
    if isinstance(f, Not) and isinstance(f.arg, ATOMS):
        return (f.arg, False)
    return None


def _as_clauses(f: Formula) -> list | None:
    """The skeleton as a list of clauses of (atom, polarity) pairs when it is a CNF."""
    out = []
    for c in f.args if isinstance(f, And) else (f,):
        lits = [_literal(l) for l in (c.args if isinstance(c, Or) else (c,))]
        if any(l is None for l in lits):
            return None
        out.append(tuple(lits))
    return out


def _open_atoms(f: Formula, assign: dict, out: set) -> None:
    """Collect the atoms reachable from ``f`` through undetermined subformulas."""
    if isinstance(f, ATOMS):
        out.add(f)
    elif isinstance(f, Not):
        _open_atoms(f.arg, assign, out)
    elif isinstance(f, (And, Or)):
        for c in f.args:
            if _eval3(c, assign) is None:
                _open_atoms(c, assign, out)


def satisfiable(f: Formula) -> dict | None:
    """A satisfying literal assignment of a quantifier-free formula, or None."""
    return GroundProblem(f).satisfying_assignment()


def ground_valid(f: Formula) -> bool:
    """True iff ``f`` holds in every structure under every assignment."""
    return satisfiable(Not(f)) is None


def euf_equivalent(f: Formula, g: Formula) -> bool:
    return ground_valid(Iff(f, g))


def literals_consistent(lits: Iterable[Formula]) -> bool:
    return congruence_close(lits).consistent


__all__ = [
    "Closure",
    "GroundProblem",
    "LiteralChecker",
    "TermDag",
    "canonical_atom",
    "congruence_close",
    "euf_equivalent",
    "ground_valid",
    "literals_consistent",
    "satisfiable",
]
