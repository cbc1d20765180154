"""Relative translations between signatures, interpretation obligations, and
the explicit reductions to a single binary function.

Member formulas of a translation of dimension ``n`` use the variables
``v0, v1, ...``: argument ``i``, component ``j`` is ``v{i*n + j}``. For a
graph-defined ``k``-ary function the output occupies ``v{k*n} .. v{k*n+n-1}``;
a term-defined function gives ``n`` terms over ``v0 .. v{k*n-1}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .decide import DecisionResult, Verdict, decide, decide_with_diagram
from .errors import EclError, ParseError, ResourceLimitError, SignatureError
from .qe import DEFAULT_CAPS, Caps
from .structures import FiniteStructure, eval_formula, eval_term
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
    _atom,
    _pos,
    _parse_formula_item,
    all_vars,
    check_formula,
    conj,
    free_vars,
    fresh_name,
    is_quantifier_free,
    parse_term,
    print_formula,
    print_term,
    read_sexprs,
    substitute,
    substitute_term,
    term_key,
    term_vars,
)


def vname(i: int) -> str:
    return f"v{i}"


def vvars(start: int, count: int) -> tuple:
    return tuple(Var(vname(i)) for i in range(start, start + count))


@dataclass(frozen=True)
class FunDef:
    """A function translation: ``n`` defining terms, or a graph formula."""

    terms: tuple | None = None
    graph: Formula | None = None

    def __post_init__(self) -> None:
        if (self.terms is None) == (self.graph is None):
            raise ValueError("a function is defined either by terms or by a graph")
        if self.terms is not None:
            object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def by_terms(self) -> bool:
        return self.terms is not None


@dataclass(frozen=True)
class Translation:
    source: Signature
    target: Signature
    dim: int = 1
    domain: Formula | None = None  # None: unrelativized
    equality: Formula | None = None  # None: absolute equality
    relations: Mapping = field(default_factory=dict)  # name -> Formula
    functions: Mapping = field(default_factory=dict)  # name -> FunDef

    def __post_init__(self) -> None:
        n = self.dim
        if n < 1:
            raise ValueError("dimension must be positive")
        object.__setattr__(self, "relations", dict(sorted(self.relations.items())))
        object.__setattr__(self, "functions", dict(sorted(self.functions.items())))
        self._check_member(self.domain, n, "domain")
        self._check_member(self.equality, 2 * n, "equality")
        for name, f in self.relations.items():
            s = self.source.get(name)
            if s is None or s.kind != REL:
                raise SignatureError(f"{name} is not a source relation")
            self._check_member(f, s.arity * n, name)
        for name, d in self.functions.items():
            s = self.source.get(name)
            if s is None or s.kind != FUN:
                raise SignatureError(f"{name} is not a source function")
            if d.by_terms:
                if len(d.terms) != n:
                    raise ValueError(f"{name} needs {n} defining terms")
                allowed = {vname(i) for i in range(s.arity * n)}
                for t in d.terms:
                    if not term_vars(t) <= allowed:
                        raise ValueError(f"{name}: term {print_term(t)} uses variables outside v0..v{s.arity * n - 1}")
                    _check_term_symbols(t, self.target)
            else:
                self._check_member(d.graph, (s.arity + 1) * n, name)

    def _check_member(self, f: Formula | None, count: int, what: str) -> None:
        if f is None:
            return
        allowed = {vname(i) for i in range(count)}
        extra = free_vars(f) - allowed
        if extra:
            raise ValueError(f"{what}: free variables {sorted(extra)} outside v0..v{count - 1}")
        check_formula(f, self.target)

    def covers(self, sig: Signature) -> list[str]:
        """Symbols of ``sig`` without a translation."""
        out = []
        for s in sig:
            table = self.relations if s.kind == REL else self.functions
            if s.name not in table:
                out.append(s.name)
        return out

    @property
    def is_quantifier_free(self) -> bool:
        members = [self.domain, self.equality, *self.relations.values()]
        return all(m is None or is_quantifier_free(m) for m in members) and all(
            d.by_terms for d in self.functions.values()
        )

    # member formulas instantiated at given target terms

    def domain_at(self, xs: Sequence[Term]) -> Formula | None:
        if self.domain is None:
            return None
        return substitute(self.domain, _binding(xs))

    def eq_at(self, xs: Sequence[Term], ys: Sequence[Term]) -> Formula:
        if self.equality is None:
            return conj(*(Eq(a, b) for a, b in zip(xs, ys)))
        return substitute(self.equality, _binding(list(xs) + list(ys)))

    def rel_at(self, name: str, args: Sequence[Term]) -> Formula:
        return substitute(self.relations[name], _binding(args))

    def graph_at(self, name: str, args: Sequence[Term], out: Sequence[Term]) -> Formula:
        d = self.functions[name]
        if d.by_terms:
            vals = self.terms_at(name, args)
            return self.eq_at(vals, out)
        return substitute(d.graph, _binding(list(args) + list(out)))

    def terms_at(self, name: str, args: Sequence[Term]) -> tuple:
        b = _binding(args)
        return tuple(substitute_term(t, b) for t in self.functions[name].terms)


def _binding(terms: Sequence[Term]) -> dict:
    return {vname(i): t for i, t in enumerate(terms)}


def _check_term_symbols(t: Term, sig: Signature) -> None:
    if isinstance(t, App):
        s = sig.get(t.fn)
        if s is None or s.kind != FUN or s.arity != len(t.args):
            raise SignatureError(f"{t.fn}/{len(t.args)} is not a target function")
        for a in t.args:
            _check_term_symbols(a, sig)


def identity_translation(sig: Signature) -> Translation:
    rels = {s.name: Rel(s.name, vvars(0, s.arity)) for s in sig if s.kind == REL}
    funs = {s.name: FunDef(terms=(App(s.name, vvars(0, s.arity)),)) for s in sig if s.kind == FUN}
    return Translation(sig, sig, 1, None, None, rels, funs)


# ---------------------------------------------------------------------------
# Translating formulas


def components(name: str, n: int) -> tuple:
    """Target variable names for the source variable ``name``."""
    return (name,) if n == 1 else tuple(f"{name}_{j}" for j in range(n))


class _Ctx:
    def __init__(self, I: Translation, f: Formula, var_map: Mapping | None):
        self.I = I
        self.var_map = dict(var_map or {})
        taken = set(I.target.names()) | set(I.source.names())
        for v in all_vars(f):
            taken.add(v)
            taken.update(components(v, I.dim))
        for comps in self.var_map.values():
            taken.update(comps)
        self.taken = taken

    def comps(self, name: str) -> tuple:
        if name in self.var_map:
            return tuple(Var(c) for c in self.var_map[name])
        return tuple(Var(c) for c in components(name, self.I.dim))

    def fresh(self, base: str) -> str:
        n = self.I.dim

        def clash(c: str) -> bool:
            return c in self.taken or any(x in self.taken for x in components(c, n))

        name = fresh_name(base, clash)
        self.taken.add(name)
        self.taken.update(components(name, n))
        return name


def translate(I: Translation, f: Formula, var_map: Mapping[str, Sequence[str]] | None = None) -> Formula:
    """The ``I``-translation of a source formula.

    Graph-defined function applications are unnested into fresh existentially
    quantified witnesses right around the atom that contains them. Free
    variables become their component variables (``x`` itself in dimension 1,
    ``x_0, x_1, ...`` otherwise, or as given by ``var_map``) and are not
    relativized.
    """
    missing = I.covers(_symbols_sig(f, I.source))
    if missing:
        raise SignatureError(f"translation does not cover {missing}")
    ctx = _Ctx(I, f, var_map)
    return _tr(f, ctx, {})


def _symbols_sig(f: Formula, sig: Signature) -> Signature:
    from .syntax import symbols_of

    names = symbols_of(f)
    unknown = [n for n in names if n not in sig]
    if unknown:
        raise SignatureError(f"symbols {sorted(unknown)} are not in the source signature")
    return sig.restrict(names)


def _tr(f: Formula, ctx: _Ctx, bound: dict) -> Formula:
    I = ctx.I
    if isinstance(f, (Top, Bot)):
        return f
    if isinstance(f, (Eq, Rel)):
        return _tr_atom(f, ctx, bound)
    if isinstance(f, Not):
        return Not(_tr(f.arg, ctx, bound))
    if isinstance(f, And):
        return And(tuple(_tr(c, ctx, bound) for c in f.args))
    if isinstance(f, Or):
        return Or(tuple(_tr(c, ctx, bound) for c in f.args))
    if isinstance(f, Imp):
        return Imp(_tr(f.left, ctx, bound), _tr(f.right, ctx, bound))
    if isinstance(f, Iff):
        return Iff(_tr(f.left, ctx, bound), _tr(f.right, ctx, bound))
    if isinstance(f, (Exists, Forall)):
        names = components(f.var, I.dim)
        inner = dict(bound)
        inner[f.var] = names
        body = _tr(f.body, ctx, inner)
        dom = I.domain_at([Var(c) for c in names])
        if dom is not None:
            body = conj(dom, body) if isinstance(f, Exists) else Imp(dom, body)
        for c in reversed(names):
            body = type(f)(c, body)
        return body
    raise TypeError(f"not a formula: {f!r}")


def _tr_atom(a: Formula, ctx: _Ctx, bound: dict) -> Formula:
    I = ctx.I
    terms = (a.left, a.right) if isinstance(a, Eq) else a.args
    graph_subterms = sorted(
        {s for t in terms for s in _subterm_iter(t) if isinstance(s, App) and not I.functions[s.fn].by_terms},
        key=term_key,
    )
    witness: dict = {}  # graph-defined subterm -> tuple of witness variables
    steps = []
    for s in graph_subterms:
        args = [_tuple(x, ctx, bound, witness) for x in s.args]
        w = ctx.fresh("y")
        ws = tuple(Var(c) for c in components(w, I.dim))
        flat_args = [c for tup in args for c in tup]
        steps.append((ws, I.graph_at(s.fn, flat_args, ws)))
        witness[s] = ws
    if isinstance(a, Eq):
        body = I.eq_at(_tuple(a.left, ctx, bound, witness), _tuple(a.right, ctx, bound, witness))
    else:
        flat = [c for t in a.args for c in _tuple(t, ctx, bound, witness)]
        body = I.rel_at(a.name, flat)
    for ws, g in reversed(steps):
        dom = I.domain_at(ws)
        body = conj(*([dom] if dom is not None else []), g, body)
        for w in reversed(ws):
            body = Exists(w.name, body)
    return body


def _subterm_iter(t: Term):
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from _subterm_iter(a)


def _tuple(t: Term, ctx: _Ctx, bound: dict, witness: dict) -> tuple:
    if t in witness:
        return witness[t]
    if isinstance(t, Var):
        if t.name in bound:
            return tuple(Var(c) for c in bound[t.name])
        return ctx.comps(t.name)
    flat = [c for a in t.args for c in _tuple(a, ctx, bound, witness)]
    return ctx.I.terms_at(t.fn, flat)


# ---------------------------------------------------------------------------
# Obligations


@dataclass(frozen=True)
class Obligation:
    label: str
    formula: Formula
    result: DecisionResult | str  # "undischarged" when not decided

    @property
    def status(self) -> str:
        return self.result.token if isinstance(self.result, DecisionResult) else str(self.result)


@dataclass(frozen=True)
class ObligationReport:
    items: tuple

    @property
    def passed(self) -> int:
        return sum(1 for o in self.items if o.status == Verdict.VALID.value)

    @property
    def all_valid(self) -> bool:
        return self.passed == len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)


def _guarded(I: Translation, blocks: Sequence[tuple], body: Formula) -> Formula:
    doms = [d for d in (I.domain_at(b) for b in blocks) if d is not None]
    f = Imp(conj(*doms), body) if doms else body
    for b in reversed(blocks):
        for v in reversed(b):
            f = Forall(v.name, f)
    return f


def obligation_formulas(I: Translation, source_axioms: Sequence[Formula] = ()) -> list[tuple[str, Formula]]:
    """Totality, equality axioms and translated axioms, in that order."""
    n = I.dim
    taken = set(I.target.names())

    def block(base: str) -> tuple:
        name = base if base not in taken else fresh_name(base, taken)
        return tuple(Var(c) for c in components(name, n))

    out: list[tuple[str, Formula]] = []
    for name, d in I.functions.items():
        k = I.source[name].arity
        xs = [block(f"x{i}") for i in range(k)]
        flat = [c for b in xs for c in b]
        if d.by_terms:
            if I.domain is None:
                continue
            out.append((f"total:{name}", _guarded(I, xs, I.domain_at(I.terms_at(name, flat)))))
        else:
            y = block("y")
            dom = I.domain_at(y)
            inner = conj(*([dom] if dom is not None else []), I.graph_at(name, flat, y))
            for v in reversed(y):
                inner = Exists(v.name, inner)
            out.append((f"total:{name}", _guarded(I, xs, inner)))

    x, y, z = block("x"), block("y"), block("z")
    out.append(("eq:refl", _guarded(I, [x], I.eq_at(x, x))))
    out.append(("eq:sym", _guarded(I, [x, y], Imp(I.eq_at(x, y), I.eq_at(y, x)))))
    out.append(("eq:trans", _guarded(I, [x, y, z], Imp(conj(I.eq_at(x, y), I.eq_at(y, z)), I.eq_at(x, z)))))
    for name in I.relations:
        k = I.source[name].arity
        xs = [block(f"x{i}") for i in range(k)]
        ys = [block(f"y{i}") for i in range(k)]
        fx = [c for b in xs for c in b]
        fy = [c for b in ys for c in b]
        hyp = conj(*(I.eq_at(a, b) for a, b in zip(xs, ys)), I.rel_at(name, fx))
        out.append((f"congr:{name}", _guarded(I, xs + ys, Imp(hyp, I.rel_at(name, fy)))))
    for name, d in I.functions.items():
        k = I.source[name].arity
        xs = [block(f"x{i}") for i in range(k)]
        ys = [block(f"y{i}") for i in range(k)]
        fx = [c for b in xs for c in b]
        fy = [c for b in ys for c in b]
        same = [I.eq_at(a, b) for a, b in zip(xs, ys)]
        if d.by_terms:
            body = Imp(conj(*same), I.eq_at(I.terms_at(name, fx), I.terms_at(name, fy)))
            out.append((f"congr:{name}", _guarded(I, xs + ys, body)))
        else:
            u, w = block("u"), block("w")
            hyp = conj(*same, I.graph_at(name, fx, u), I.graph_at(name, fy, w))
            out.append((f"congr:{name}", _guarded(I, xs + ys + [u, w], Imp(hyp, I.eq_at(u, w)))))
    for i, ax in enumerate(source_axioms):
        if free_vars(ax):
            raise ValueError(f"axiom {i} is not a sentence")
        out.append((f"axiom:{i}", translate(I, ax)))
    return out


def obligations(
    I: Translation,
    source_axioms: Sequence[Formula] = (),
    theory_axioms: Sequence[Formula] = (),
    structure: FiniteStructure | None = None,
    discharge: bool = True,
    caps: Caps = DEFAULT_CAPS,
) -> ObligationReport:
    """Obligations for ``I`` to interpret the source axioms in EC of the target.

    ``theory_axioms`` are extra target sentences assumed as hypotheses;
    ``structure`` adds its diagram instead (the obligation may then mention
    element constants). Obligations the decision procedure cannot finish
    within ``caps`` are reported as undischarged.
    """
    items = []
    hyp = conj(*theory_axioms)
    for label, f in obligation_formulas(I, source_axioms):
        res: DecisionResult | str = "undischarged"
        if discharge:
            try:
                if structure is not None:
                    res = decide_with_diagram(structure, Imp(hyp, f) if theory_axioms else f, caps=caps)
                else:
                    res = decide(Imp(hyp, f) if theory_axioms else f, caps=caps)
            except ResourceLimitError:
                res = "undischarged"
        items.append(Obligation(label, f, res))
    return ObligationReport(tuple(items))


# ---------------------------------------------------------------------------
# Composition


def compose(I1: Translation, I2: Translation) -> Translation:
    """Translation of I2's source into I1's target: first I2, then I1."""
    if I2.target != I1.source:
        raise SignatureError("the inner translation's target must be the outer translation's source")
    n1, n2 = I1.dim, I2.dim
    n = n1 * n2

    def vm(count: int) -> dict:
        return {vname(a): tuple(vname(a * n1 + l) for l in range(n1)) for a in range(count)}

    def through(f: Formula, count: int) -> Formula:
        return translate(I1, f, vm(count))

    blocks = []
    if I1.domain is not None:
        for j in range(n2):
            blocks.append(I1.domain_at(vvars(j * n1, n1)))
    if I2.domain is not None:
        blocks.append(through(I2.domain, n2))
    domain = conj(*blocks) if blocks else None

    if I1.equality is None and I2.equality is None:
        equality = None
    else:
        base = I2.equality if I2.equality is not None else conj(*(Eq(a, b) for a, b in zip(vvars(0, n2), vvars(n2, n2))))
        equality = through(base, 2 * n2)

    rels = {name: through(f, I2.source[name].arity * n2) for name, f in I2.relations.items()}
    funs = {}
    for name, d in I2.functions.items():
        k = I2.source[name].arity
        if d.by_terms:
            direct = _direct_graph(I1, d, k)
            if direct is not None:
                funs[name] = direct
            elif all(_term_defined(I1, t) for t in d.terms):
                flat = [Var(v) for a in range(k * n2) for v in vm(k * n2)[vname(a)]]
                terms = []
                for t in d.terms:
                    terms.extend(_outer_terms(I1, t, n1, flat))
                funs[name] = FunDef(terms=tuple(terms))
            else:
                g = conj(*(Eq(Var(vname(k * n2 + j)), t) for j, t in enumerate(d.terms)))
                funs[name] = FunDef(graph=through(g, (k + 1) * n2))
        else:
            funs[name] = FunDef(graph=through(d.graph, (k + 1) * n2))
    return Translation(I2.source, I1.target, n, domain, equality, rels, funs)


def _direct_graph(I1: Translation, d: FunDef, k: int) -> FunDef | None:
    """``F(v0..v{k-1})`` with F graph-defined in I1 composes to F's own graph."""
    if len(d.terms) != 1:
        return None
    t = d.terms[0]
    if isinstance(t, App) and t.args == vvars(0, k) and t.fn in I1.functions:
        inner = I1.functions[t.fn]
        if not inner.by_terms:
            return inner
    return None


def _term_defined(I: Translation, t: Term) -> bool:
    if isinstance(t, Var):
        return True
    return I.functions[t.fn].by_terms and all(_term_defined(I, a) for a in t.args)


def _outer_terms(I1: Translation, t: Term, n1: int, flat: list) -> list:
    """The ``n1`` I1-terms for an I2 defining term ``t`` over ``v0..``."""
    if isinstance(t, Var):
        a = int(t.name[1:])
        return flat[a * n1 : (a + 1) * n1]
    args = [c for x in t.args for c in _outer_terms(I1, x, n1, flat)]
    return list(I1.terms_at(t.fn, args))


# ---------------------------------------------------------------------------
# Induced structures


def induced_structure(I: Translation, N: FiniteStructure) -> tuple[FiniteStructure, list]:
    """The structure ``N^I`` and, per element, the least tuple of its class.

    Raises :class:`EclError` when ``I`` does not define a structure on ``N``
    (equality not an equivalence, graphs not total functions, ...).
    """
    n = I.dim
    if I.covers(I.source):
        raise SignatureError(f"translation does not cover {I.covers(I.source)}")
    dom_tuples = [
        a for a in itertools.product(range(N.size), repeat=n)
        if I.domain is None or eval_formula(N, I.domain, _env(a))
    ]

    def eq(a, b) -> bool:
        if I.equality is None:
            return a == b
        return eval_formula(N, I.equality, _env(a + b))

    classes: list[list] = []
    index: dict = {}
    for a in dom_tuples:
        for ci, cls in enumerate(classes):
            if eq(cls[0], a):
                cls.append(a)
                index[a] = ci
                break
        else:
            index[a] = len(classes)
            classes.append([a])
    for a in dom_tuples:
        for b in dom_tuples:
            if eq(a, b) != (index[a] == index[b]):
                raise EclError("translated equality is not an equivalence on the domain")
    reps = [c[0] for c in classes]
    size = len(reps)
    if size == 0 and I.source.constants:
        raise EclError("empty domain but the source has constants")

    funcs: dict = {}
    for name, d in I.functions.items():
        k = I.source[name].arity
        table = {}
        for args in itertools.product(range(size), repeat=k):
            flat = [c for e in args for c in reps[e]]
            if d.by_terms:
                env = _env(flat)
                out = tuple(eval_term(N, t, env) for t in d.terms)
                if out not in index:
                    raise EclError(f"{name} leaves the domain")
                table[args] = index[out]
            else:
                outs = {index[y] for y in dom_tuples if eval_formula(N, d.graph, _env(flat + list(y)))}
                if len(outs) != 1:
                    raise EclError(f"graph of {name} is not functional at {args}")
                table[args] = outs.pop()
            for alt in itertools.product(*(classes[e] for e in args)):
                alt_flat = [c for e in alt for c in e]
                if d.by_terms:
                    out = tuple(eval_term(N, t, _env(alt_flat)) for t in d.terms)
                    if index.get(out) != table[args]:
                        raise EclError(f"{name} does not respect the translated equality")
        funcs[name] = table
    rels: dict = {}
    for name, f in I.relations.items():
        k = I.source[name].arity
        rels[name] = frozenset(
            args for args in itertools.product(range(size), repeat=k)
            if eval_formula(N, f, _env([c for e in args for c in reps[e]]))
        )
    return FiniteStructure(I.source, size, funcs, rels), reps


def _env(values: Sequence[int]) -> dict:
    return {vname(i): v for i, v in enumerate(values)}


# ---------------------------------------------------------------------------
# Reductions


def pair_tuple(pair: str, xs: Sequence[Term]) -> Term:
    """Right-nested tuple ``(x0, (x1, ... (x_{n-2}, x_{n-1})))``."""
    if not xs:
        raise ValueError("empty tuple")
    t = xs[-1]
    for x in reversed(xs[:-1]):
        t = App(pair, (x, t))
    return t


@dataclass(frozen=True)
class BinaryReduction:
    translation: Translation
    target: Signature
    distinctness: tuple
    pair: str
    tags: Mapping  # source function name -> its tag constant
    relation_functions: Mapping  # source relation name -> intermediate function name


def binary_reduction(sig: Signature, relation_handling: bool = False) -> BinaryReduction:
    """Translate ``sig`` into one binary function plus constants.

    Relations need ``relation_handling``: each ``R`` first becomes a function
    ``F_R`` with ``R(x) := F_R(x) = c`` for the least constant ``c``.
    """
    rels = [s for s in sig if s.kind == REL]
    if rels and not relation_handling:
        raise SignatureError("signature has relations; enable relation handling")
    consts = sorted(sig.constants)
    if rels and not consts:
        raise SignatureError("relation handling needs a constant")
    taken = set(sig.names())
    rel_fun: dict = {}
    funs = [s for s in sig if s.kind == FUN and s.arity > 0]
    for r in rels:
        fname = f"F_{r.name}" if f"F_{r.name}" not in taken else fresh_name(f"F_{r.name}", taken)
        taken.add(fname)
        rel_fun[r.name] = fname
        funs.append(Symbol(fname, FUN, r.arity))
    pair = "pair" if "pair" not in taken else fresh_name("pair", taken)
    taken.add(pair)
    tags: dict = {}
    for s in sorted(funs, key=lambda s: s.name):
        tag = f"pair_tag_{s.name}"
        if tag in taken:
            tag = fresh_name(tag, taken)
        taken.add(tag)
        tags[s.name] = tag
    target = Signature([Symbol(pair, FUN, 2)] + [Symbol(c, FUN, 0) for c in consts] + [Symbol(t, FUN, 0) for t in tags.values()])

    def fterm(name: str, k: int) -> Term:
        xs = list(vvars(0, k))
        head = pair_tuple(pair, [App(tags[name], ())] + xs)
        return pair_tuple(pair, [head] + xs + xs)

    fdefs = {c: FunDef(terms=(App(c, ()),)) for c in consts}
    for s in funs:
        if s.name in sig:
            fdefs[s.name] = FunDef(terms=(fterm(s.name, s.arity),))
    rdefs = {}
    for r in rels:
        rdefs[r.name] = Eq(fterm(rel_fun[r.name], r.arity), App(consts[0], ()))
    I = Translation(sig, target, 1, None, None, rdefs, fdefs)
    distinct = tuple(
        Not(Eq(App(a, ()), App(b, ()))) for a, b in itertools.combinations(sorted(tags.values()), 2)
    )
    return BinaryReduction(I, target, distinct, pair, tags, rel_fun)


def pairing_terms(sig: Signature) -> tuple[Term, Term, Formula]:
    """Terms ``L(x)``, ``R(x)`` and the sentence ``forall x y exists z (L(z)=x and R(z)=y)``."""
    x = Var("x")
    unary = sorted(s.name for s in sig if s.kind == FUN and s.arity == 1)
    wide = sorted((s for s in sig if s.kind == FUN and s.arity >= 2), key=lambda s: (s.arity, s.name))
    if len(unary) >= 2:
        lt, rt = App(unary[0], (x,)), App(unary[1], (x,))
    elif wide:
        f, k = wide[0].name, wide[0].arity
        diag = App(f, (x,) * k)
        lt = App(f, (diag,) + (x,) * (k - 1))
        rt = App(f, (x,) * (k - 1) + (diag,))
    else:
        raise SignatureError("pairing needs two unary functions or a function of arity at least 2")
    z = Var("z")
    body = conj(
        Eq(substitute_term(lt, {"x": z}), Var("x")),
        Eq(substitute_term(rt, {"x": z}), Var("y")),
    )
    theorem = Forall("x", Forall("y", Exists("z", body)))
    return lt, rt, theorem


# ---------------------------------------------------------------------------
# Files


def parse_translation(text: str, source: Signature, target: Signature) -> Translation:
    """Read ``(translation (dim N) (domain F) (eq F) (rel NAME F) (fun NAME (term T..)|(graph F)) ...)``."""
    items = read_sexprs(text)
    if len(items) != 1 or not isinstance(items[0], list) or not items[0] or _atom(items[0][0]) != "translation":
        raise ParseError("expected a single (translation ...) form", _pos(items[0]) if items else 0)
    dim = 1
    domain = equality = None
    rels: dict = {}
    funs: dict = {}
    for clause in items[0][1:]:
        if not isinstance(clause, list) or not clause:
            raise ParseError("expected a clause", _pos(clause))
        head = _atom(clause[0])
        if head == "dim" and len(clause) == 2:
            tok = _atom(clause[1])
            if not tok.isdigit() or int(tok) < 1:
                raise ParseError("dimension must be a positive integer", _pos(clause[1]))
            dim = int(tok)
        elif head == "domain" and len(clause) == 2:
            domain = _parse_formula_item(clause[1], target)
        elif head == "eq" and len(clause) == 2:
            equality = _parse_formula_item(clause[1], target)
        elif head == "rel" and len(clause) == 3:
            rels[_atom(clause[1])] = _parse_formula_item(clause[2], target)
        elif head == "fun" and len(clause) == 3 and isinstance(clause[2], list) and clause[2]:
            kind = _atom(clause[2][0])
            if kind == "term":
                funs[_atom(clause[1])] = FunDef(terms=tuple(parse_term(t, target) for t in clause[2][1:]))
            elif kind == "graph" and len(clause[2]) == 2:
                funs[_atom(clause[1])] = FunDef(graph=_parse_formula_item(clause[2][1], target))
            else:
                raise ParseError("expected (term T ...) or (graph F)", _pos(clause[2]))
        else:
            raise ParseError(f"unknown translation clause {head!r}", _pos(clause))
    try:
        return Translation(source, target, dim, domain, equality, rels, funs)
    except (ValueError, SignatureError) as exc:
        raise ParseError(str(exc), _pos(items[0])) from None


def print_translation(I: Translation) -> str:
    lines = [f"(translation (dim {I.dim})"]
    if I.domain is not None:
        lines.append(f"  (domain {print_formula(I.domain)})")
    if I.equality is not None:
        lines.append(f"  (eq {print_formula(I.equality)})")
    for name, f in I.relations.items():
        lines.append(f"  (rel {name} {print_formula(f)})")
    for name, d in I.functions.items():
        if d.by_terms:
            lines.append(f"  (fun {name} (term {' '.join(print_term(t) for t in d.terms)}))")
        else:
            lines.append(f"  (fun {name} (graph {print_formula(d.graph)}))")
    return "\n".join(lines) + ")"


__all__ = [
    "BinaryReduction",
    "FunDef",
    "Obligation",
    "ObligationReport",
    "Translation",
    "binary_reduction",
    "components",
    "compose",
    "identity_translation",
    "induced_structure",
    "obligation_formulas",
    "obligations",
    "pair_tuple",
    "pairing_terms",
    "parse_translation",
    "print_translation",
    "translate",
]
