from __future__ import annotations

import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ecl.errors import ParseError, ResourceLimitError, SignatureError
from ecl.harness import resultant_suite
from ecl.qe import ElementaryExistential
from ecl.structures import (
    FiniteStructure,
    UnboundVariableError,
    count_structures,
    diagram,
    enumerate_structures,
    eval_formula,
    expand_with_names,
    extension_satisfies,
    parse_structure,
    print_structure,
    random_structure,
)
from ecl.syntax import Not, Signature, free_vars, parse_formula, parse_term_text

from .strategies import SIG, formulas, structures


def unary(table):
    return {(a,): v for a, v in enumerate(table)}


class TestEval:
    def test_fixed_point_exists(self, f_sig):
        M = FiniteStructure(f_sig, 1, {"F": unary([0])})
        assert eval_formula(M, parse_formula("(exists x (= (F x) x))", f_sig))

    def test_vacuous_universal_in_empty_model(self):
        sig = Signature.parse("(rel P 1)")
        M = FiniteStructure(sig, 0)
        assert eval_formula(M, parse_formula("(forall x (P x))", sig))
        assert not eval_formula(M, parse_formula("(exists x (= x x))", sig))

    def test_idempotent_table(self, f_sig):
        M = FiniteStructure(f_sig, 2, {"F": unary([1, 1])})
        assert eval_formula(M, parse_formula("(forall x (= (F (F x)) (F x)))", f_sig))

    def test_unbound_variable(self, f_sig):
        M = FiniteStructure(f_sig, 1, {"F": unary([0])})
        with pytest.raises(UnboundVariableError):
            eval_formula(M, parse_formula("(= (F x) x)", f_sig))

    def test_environment(self, f_sig):
        M = FiniteStructure(f_sig, 2, {"F": unary([1, 0])})
        f = parse_formula("(= (F x) y)", f_sig)
        assert eval_formula(M, f, {"x": 0, "y": 1})
        assert not eval_formula(M, f, {"x": 0, "y": 0})

    def test_table_must_be_total(self, f_sig):
        with pytest.raises(SignatureError):
            FiniteStructure(f_sig, 2, {"F": {(0,): 1}})

    def test_empty_domain_needs_no_constants(self):
        with pytest.raises(SignatureError):
            FiniteStructure(Signature.parse("(const c)"), 0, {"c": {}})

    @given(structures(), formulas())
    def test_negation_flips(self, M, f):
        assume(M.size > 0 or not free_vars(f))
        env = {v: 0 for v in free_vars(f)}
        assert eval_formula(M, Not(f), env) != eval_formula(M, f, env)


def _table_count(sig: Signature, n: int) -> int:
    # closed form: n^(n^k) per function, 2^(n^k) per relation
    total = 1
    for s in sig:
        cells = n ** s.arity
        total *= (n**cells) if s.kind == "fun" else 2**cells
    return total


class TestEnumerate:
    def test_unary_relation(self):
        sig = Signature.parse("(rel P 1)")
        out = list(enumerate_structures(sig, 1))
        assert len(out) == 3
        assert {(M.size, tuple(sorted(M.relations["P"]))) for M in out} == {(0, ()), (1, ()), (1, ((0,),))}

    def test_constant_excludes_empty(self):
        assert len(list(enumerate_structures(Signature.parse("(const c)"), 1))) == 1

    def test_unary_function(self, f_sig):
        assert len(list(enumerate_structures(f_sig, 2))) == 6

    @pytest.mark.parametrize(
        "text",
        ["(fun F 1)", "(fun G 2)", "(rel P 2) (const c)", "(fun F 1) (rel P 1)", "(rel Q 0)", ""],
    )
    def test_counts_match_table_arithmetic(self, text):
        sig = Signature.parse(text)
        for n in range(3):
            if n == 0 and sig.constants:
                expected = 0
            else:
                expected = _table_count(sig, n)
            assert count_structures(sig, n) == expected
        got = list(enumerate_structures(sig, 2))
        lo = 1 if sig.constants else 0
        assert len(got) == sum(_table_count(sig, n) for n in range(lo, 3))
        assert len({(M.size, M.key()) for M in got}) == len(got)

    def test_limit(self):
        with pytest.raises(ResourceLimitError):
            list(enumerate_structures(Signature.parse("(fun G 2)"), 3, limit=1000))


class TestDiagram:
    def test_read_off(self, f_sig):
        M = FiniteStructure(f_sig, 2, {"F": unary([1, 1])})
        sig, lits = diagram(M)
        assert sorted(sig.constants) == ["e0", "e1"]
        expected = ["(not (= e0 e1))", "(= (F e0) e1)", "(= (F e1) e1)"]
        assert sorted(lits, key=str) == sorted((parse_formula(t, sig) for t in expected), key=str)

    def test_singleton_without_symbols(self):
        sig, lits = diagram(FiniteStructure(Signature(), 1))
        assert lits == [] and sig.constants == ["e0"]

    def test_relation_literals(self):
        P = Signature.parse("(rel P 1)")
        sig, lits = diagram(FiniteStructure(P, 2, {}, {"P": {(0,)}}))
        assert set(lits) == {
            parse_formula(t, sig) for t in ["(not (= e0 e1))", "(P e0)", "(not (P e1))"]
        }

    @given(structures(max_size=3))
    def test_literals_true_under_naming(self, M):
        _, lits = diagram(M)
        N = expand_with_names(M)
        assert all(eval_formula(N, l) for l in lits)

    @pytest.mark.parametrize("seed", range(4))
    def test_models_of_diagram_embed_the_structure(self, seed):
        rng = random.Random(seed)
        sig = Signature.parse("(fun F 1) (rel P 1)")
        M = random_structure(sig, 2, rng)
        exp, lits = diagram(M)
        names = ["e0", "e1"]
        for N in enumerate_structures(exp, 3):
            if not all(eval_formula(N, l) for l in lits):
                continue
            h = [N.functions[c][()] for c in names]
            assert len(set(h)) == 2
            for a in range(2):
                assert h[M.functions["F"][(a,)]] == N.functions["F"][(h[a],)]
                assert ((a,) in M.relations["P"]) == ((h[a],) in N.relations["P"])


class TestFileFormat:
    def test_parse(self):
        sig = Signature.parse("(fun F 1) (rel P 1) (const c)")
        M = parse_structure("(structure (domain 2) (fun F ((0) 1) ((1) 0)) (fun c (() 1)) (rel P (1)))", sig)
        assert M.functions["F"] == {(0,): 1, (1,): 0}
        assert M.functions["c"] == {(): 1}
        assert M.relations["P"] == {(1,)}

    def test_bad_header(self):
        with pytest.raises(ParseError):
            parse_structure("(struct (domain 1))")

    def test_value_outside_domain(self, f_sig):
        with pytest.raises(SignatureError):
            parse_structure("(structure (domain 1) (fun F ((0) 3)))", f_sig)

    @given(structures())
    def test_round_trip(self, M):
        assert parse_structure(print_structure(M), SIG) == M


def _ee(theta_classes, free, bound, sig_text="(fun F 1)"):
    sig = Signature.parse(sig_text)
    classes = [[parse_term_text(t, sig) for t in c] for c in theta_classes]
    theta = [t for c in classes for t in c]
    return ElementaryExistential(tuple(theta), free, bound, classes)


class TestExtension:
    def test_new_preimage(self, f_sig):
        # exists y (F(y) = x and y != x and y != F(y))
        e = _ee([["x", "(F y)"], ["y"]], ("x",), ("y",))
        M = FiniteStructure(f_sig, 1, {"F": unary([0])})
        for method in ("constructive", "blind"):
            ext = extension_satisfies(M, (0,), e, method)
            assert ext is not None
            N, w = ext.structure, ext.witness
            assert N.size == 2 and M.is_substructure_of(N)
            assert w["y"] == 1 and N.functions["F"][(1,)] == 0

    def test_no_extension_needed(self, f_sig):
        e = _ee([["x"]], ("x",), ())
        M = FiniteStructure(f_sig, 2, {"F": unary([1, 0])})
        for method in ("constructive", "blind"):
            ext = extension_satisfies(M, (1,), e, method)
            assert ext is not None and ext.structure == M and ext.witness == {}

    def test_contradictory_description(self, f_sig):
        # x0 and x1 in different classes but both named by element 0
        e = _ee([["x0"], ["x1"]], ("x0", "x1"), ())
        M = FiniteStructure(f_sig, 1, {"F": unary([0])})
        assert extension_satisfies(M, (0, 0), e, "constructive") is None
        assert extension_satisfies(M, (0, 0), e, "blind") is None

    def test_parameter_count(self, f_sig):
        e = _ee([["x"]], ("x",), ())
        with pytest.raises(ValueError):
            extension_satisfies(FiniteStructure(f_sig, 1, {"F": unary([0])}), (), e)

    @settings(max_examples=25)
    @given(st.integers(0, 2**32))
    def test_resultant_agrees_with_extension_search(self, seed):
        r = resultant_suite(4, seed)
        assert r.ok, r.failures

    def test_blind_search_bound(self, f_sig):
        # a witness needs two new elements: F(y) new, y new, distinct from x
        e = _ee([["x"], ["y"], ["(F y)"], ["(F (F y))"]], ("x",), ("y",))
        M = FiniteStructure(f_sig, 1, {"F": unary([0])})
        ext = extension_satisfies(M, (0,), e, "blind")
        assert ext is not None and ext.structure.size <= M.size + len(e.theta)
        assert eval_formula(ext.structure, e.matrix(), {"x": 0, **ext.witness})
