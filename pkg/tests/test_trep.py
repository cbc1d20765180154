from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ecl.decide import Verdict, decide
from ecl.errors import ParseError, SignatureError
from ecl.structures import eval_formula
from ecl.syntax import Not, conj, is_quantifier_free, parse_formula, print_term
from ecl.trep import (
    STYLES,
    RepTables,
    cantor_pair,
    cantor_unpair,
    numeral,
    parse_tables,
    print_tables,
    r_axioms,
    r_fragment_model,
    r_signature,
    random_tables,
    table_structure,
    trep_axioms,
)

R = r_signature()


class TestCantor:
    def test_values(self):
        assert cantor_pair(0, 0) == 0
        assert cantor_pair(1, 2) == 7
        assert [cantor_pair(n, m) for n, m in [(0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]] == [1, 2, 3, 4, 5]

    def test_inverse_on_grid(self):
        for n in range(101):
            for m in range(101):
                assert cantor_unpair(cantor_pair(n, m)) == (n, m)

    def test_onto_an_initial_segment(self):
        seen = sorted(cantor_pair(n, m) for n in range(40) for m in range(40) if n + m < 40)
        assert seen == list(range(40 * 41 // 2))

    @given(st.integers(0, 10**30), st.integers(0, 10**30))
    def test_inverse_on_big_numbers(self, n, m):
        assert cantor_unpair(cantor_pair(n, m)) == (n, m)

    @given(st.integers(0, 10**30))
    def test_pair_after_unpair(self, p):
        assert cantor_pair(*cantor_unpair(p)) == p

    def test_negative(self):
        with pytest.raises(ValueError):
            cantor_pair(-1, 0)
        with pytest.raises(ValueError):
            cantor_unpair(-3)


class TestNumerals:
    def test_examples(self):
        assert print_term(numeral(0, "successor")) == "zero"
        assert print_term(numeral(3, "successor")) == "(S (S (S zero)))"
        assert print_term(numeral(2, "tprfu")) == "(U n0 (U n0 n0))"
        assert print_term(numeral(4, "constants")) == "n4"

    def test_errors(self):
        with pytest.raises(ValueError):
            numeral(-1)
        with pytest.raises(ValueError):
            numeral(1, "roman")

    @pytest.mark.parametrize("style", STYLES)
    def test_numerals_are_distinct_terms(self, style):
        assert len({numeral(k, style) for k in range(12)}) == 12


class TestTrepAxioms:
    def test_function_table(self):
        tables = RepTables(2, {"G": (1, {(0,): 1, (1,): 0})})
        sig = tables.signature()
        got = trep_axioms(tables)
        assert got == [parse_formula(t, sig) for t in ["(not (= n0 n1))", "(= (G n0) n1)", "(= (G n1) n0)"]]

    def test_predicate_table(self):
        tables = RepTables(2, {}, {"P": (1, {(0,)}, {(1,)})})
        sig = tables.signature()
        assert trep_axioms(tables)[1:] == [parse_formula("(P n0)", sig), parse_formula("(not (P n1))", sig)]

    def test_successor_style(self):
        tables = RepTables(3, {"G": (2, {(1, 2): 0})})
        sig = tables.signature("successor")
        got = trep_axioms(tables, "successor")
        assert parse_formula("(not (= zero (S (S zero))))", sig) in got
        assert got[-1] == parse_formula("(= (G (S zero) (S (S zero))) zero)", sig)

    def test_value_out_of_range(self):
        with pytest.raises(ValueError):
            RepTables(2, {"G": (1, {(0,): 2})})
        with pytest.raises(ValueError):
            RepTables(2, {"G": (2, {(0,): 1})})

    def test_overlapping_predicate_table(self):
        with pytest.raises(ValueError):
            RepTables(2, {}, {"P": (1, {(0,)}, {(0,)})})

    def test_name_clash(self):
        with pytest.raises(SignatureError):
            RepTables(2, {"S": (1, {})}).signature("successor")

    def test_unlisted_entries_default_to_zero(self):
        M = table_structure(RepTables(3, {"G": (1, {(2,): 1})}))
        assert M.functions["G"] == {(0,): 0, (1,): 0, (2,): 1}

    @pytest.mark.parametrize("style", STYLES)
    @pytest.mark.parametrize("seed", range(8))
    def test_table_structure_satisfies_axioms(self, style, seed):
        tables = random_tables(random.Random(seed))
        M = table_structure(tables, style)
        axioms = trep_axioms(tables, style)
        assert all(is_quantifier_free(a) for a in axioms)
        assert all(eval_formula(M, a) for a in axioms)

    @pytest.mark.parametrize("seed", range(6))
    def test_not_refutable(self, seed):
        tables = random_tables(random.Random(seed), max_numerals=3)
        sig = tables.signature()
        assert decide(Not(conj(*trep_axioms(tables))), sig).verdict is not Verdict.VALID


class TestTablesFile:
    def test_parse(self):
        text = "(tables (numerals 3) (fun G 1 ((0) 1) ((2) 0)) (pred P 2 (pos (0 1)) (neg (1 1) (2 0))))"
        t = parse_tables(text)
        assert t.numerals == 3
        assert t.functions == {"G": (1, {(0,): 1, (2,): 0})}
        assert t.predicates == {"P": (2, frozenset({(0, 1)}), frozenset({(1, 1), (2, 0)}))}

    @pytest.mark.parametrize("seed", range(10))
    def test_round_trip(self, seed):
        t = random_tables(random.Random(seed))
        assert parse_tables(print_tables(t)) == t

    @pytest.mark.parametrize(
        "text",
        [
            "(tables (fun G 1))",
            "(tables (numerals two))",
            "(tables (numerals 2) (fun G 1 ((0) 5)))",
            "(tables (numerals 2) (pred P 1 (maybe (0))))",
            "(tables (numerals 2) (pred P 1 (pos (0)) (neg (0))))",
            "(tables (numerals 2) (list))",
            "(table (numerals 2))",
        ],
    )
    def test_rejects(self, text):
        with pytest.raises(ParseError):
            parse_tables(text)


class TestRobinsonR:
    def test_addition_instance(self):
        assert parse_formula("(= (plus (S zero) (S zero)) (S (S zero)))", R) in r_axioms(1)

    def test_order_at_zero(self):
        assert parse_formula("(forall x (not (lt x zero)))", R) in r_axioms(0)

    def test_order_at_one(self):
        assert parse_formula("(forall x (iff (lt x (S zero)) (= x zero)))", R) in r_axioms(1)

    def test_counts(self):
        for b in range(5):
            assert len(r_axioms(b)) == 2 * (b + 1) ** 2 + (b + 1)

    def test_inclusion_grows(self):
        for b in range(4):
            assert set(r_axioms(b)) <= set(r_axioms(b + 1))

    def test_negative_bound(self):
        with pytest.raises(ValueError):
            r_axioms(-1)
        with pytest.raises(ValueError):
            r_fragment_model(-1)

    def test_small_model(self):
        M = r_fragment_model(0)
        assert M.size == 3
        assert eval_formula(M, parse_formula("(forall x (not (lt x zero)))", R))

    @pytest.mark.parametrize("b", range(6))
    def test_model_satisfies_fragment(self, b):
        M = r_fragment_model(b)
        assert all(eval_formula(M, a) for a in r_axioms(b))

    @pytest.mark.parametrize("b", range(5))
    def test_fragment_is_tight(self, b):
        # the order scheme fails one step past the bound: the collapsed top is below itself
        M = r_fragment_model(b)
        n = b + 2
        top = numeral(n, "successor")
        eqs = " ".join(f"(= x {print_term(numeral(k, 'successor'))})" for k in range(n))
        f = parse_formula(f"(forall x (iff (lt x {print_term(top)}) (or {eqs})))", R)
        assert not eval_formula(M, f)
        assert eval_formula(M, parse_formula(f"(lt {print_term(top)} {print_term(top)})", R))
