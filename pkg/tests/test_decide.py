from __future__ import annotations

import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ecl.decide import (
    Verdict,
    decide,
    decide_with_diagram,
    model_bound,
    naive_universal_check,
)
from ecl.errors import ArityError, InvariantViolation, ResourceLimitError
from ecl.euf import literals_consistent
from ecl.qe import Caps, elementary_decomposition
from ecl.random_corpus import random_sentence, random_signature, random_structure, random_universal
from ecl.structures import FiniteStructure, count_structures, diagram, element_names, eval_formula, extension_satisfies
from ecl.syntax import (
    Forall,
    Not,
    Signature,
    is_universal,
    parse_formula,
)

F1 = Signature.parse("(fun F 1)")
SMALL = Caps(max_theta=9, max_partitions=30000)
LR = Signature.parse("(fun L 1) (fun R 1)")


def _strip_universals(f):
    prefix = []
    while isinstance(f, Forall):
        prefix.append(f.var)
        f = f.body
    return prefix, f


def verdict(text, sig):
    return decide(parse_formula(text, sig), sig).verdict


class TestDecide:
    def test_pairing(self):
        text = "(forall x (forall y (exists z (and (= (L z) x) (= (R z) y)))))"
        assert verdict(text, LR) is Verdict.VALID

    def test_no_finite_model(self):
        text = "(forall x (forall y (exists z (and (not (= z x)) (= (F z) y)))))"
        assert verdict(text, F1) is Verdict.VALID

    def test_two_constants(self):
        assert verdict("(= c d)", Signature.parse("(const c) (const d)")) is Verdict.CONTINGENT

    def test_empty_exists(self):
        assert verdict("(exists x (not (= x x)))", F1) is Verdict.UNSAT

    def test_tokens_and_exit_codes(self):
        assert [(v.value, v.exit_code) for v in Verdict] == [("VALID", 0), ("UNSAT", 1), ("CONTINGENT", 2)]
        assert str(Verdict.UNSAT) == "UNSAT"

    def test_contingent_evidence(self):
        sig = Signature.parse("(const c) (const d)")
        res = decide(parse_formula("(= c d)", sig), sig)
        assert res.satisfying is not None and res.falsifying is not None
        for model in (res.satisfying, res.falsifying):
            assert literals_consistent([a if v else Not(a) for a, v in model.items()])

    def test_free_variables_rejected(self):
        with pytest.raises(ValueError):
            decide(parse_formula("(= x x)", F1))

    def test_signature_checked(self):
        with pytest.raises(ArityError):
            decide(parse_formula("(forall x (= (F x) x))", F1), Signature.parse("(fun F 2)"))

    def test_nonempty_models(self):
        # the empty structure is not existentially closed: its one-element
        # extension realizes x = x, so the model completion proves existence
        assert verdict("(exists x (= x x))", Signature()) is Verdict.VALID
        assert verdict("(exists x (= x c))", Signature.parse("(const c)")) is Verdict.VALID
        # while the empty structure itself is a model of every universal sentence
        assert naive_universal_check(parse_formula("(forall x (not (= x x)))", Signature())) is False
        assert eval_formula(FiniteStructure(Signature(), 0), parse_formula("(forall x (not (= x x)))", Signature()))

    @settings(max_examples=40)
    @given(st.integers(0, 10**6))
    def test_symmetry(self, seed):
        rng = random.Random(seed)
        sig = random_signature(rng, max_symbols=2, max_arity=2, constants=True)
        f = random_sentence(rng, sig, quantifiers=2, size=2)
        try:
            a, b = decide(f, sig, SMALL).verdict, decide(Not(f), sig, SMALL).verdict
        except ResourceLimitError:
            assume(False)
        assert (a is Verdict.VALID) == (b is Verdict.UNSAT)
        assert (a is Verdict.UNSAT) == (b is Verdict.VALID)
        assert (a is Verdict.CONTINGENT) == (b is Verdict.CONTINGENT)

    @settings(max_examples=25)
    @given(st.integers(0, 10**6))
    def test_spot_check_in_random_structures(self, seed):
        rng = random.Random(seed)
        sig = random_signature(rng, max_symbols=2, max_arity=2, constants=True)
        f = random_universal(rng, sig, max_subterms=5, quantifiers=2)
        v = decide(f, sig).verdict
        if v is Verdict.CONTINGENT:
            return
        prefix, matrix = _strip_universals(f)
        witnesses = elementary_decomposition(Not(matrix), (), prefix)
        for _ in range(100):
            M = random_structure(sig, rng.randint(1, 4), rng)
            if v is Verdict.VALID:
                # universal consequences of EC_L hold in every structure
                assert eval_formula(M, f)
            else:
                # the refuting existential need not hold in M, but some extension of M satisfies it
                assert any(extension_satisfies(M, (), e, "blind") is not None for e in witnesses)

    def test_refuted_universal_can_hold_in_small_structures(self):
        sig = Signature.parse("(fun F 1)")
        f = parse_formula("(forall x (= (F x) x))", sig)
        assert decide(f, sig).verdict is Verdict.UNSAT
        assert eval_formula(FiniteStructure(sig, 1, {"F": {(0,): 0}}), f)

    def test_one_constant_is_complete(self):
        sig = Signature.parse("(const c)")
        rng = random.Random(11)
        for _ in range(30):
            f = random_sentence(rng, sig, quantifiers=2, size=3)
            assert decide(f, sig).verdict is not Verdict.CONTINGENT


class TestDiagram:
    def test_forced_fixed_point(self):
        M = FiniteStructure(F1, 2, {"F": {(0,): 1, (1,): 1}})
        f = parse_formula("(exists x (= (F x) x))", F1)
        assert decide_with_diagram(M, f).verdict is Verdict.VALID

    def test_names_differ(self):
        M = FiniteStructure(F1, 2, {"F": {(0,): 1, (1,): 1}})
        sig = F1.with_constants(["e0", "e1"])
        assert decide_with_diagram(M, parse_formula("(= e0 e1)", sig)).verdict is Verdict.UNSAT

    def test_empty_structure(self):
        P = Signature.parse("(rel P 1)")
        M = FiniteStructure(P, 0)
        assert decide_with_diagram(M, parse_formula("(exists x (P x))", P)).verdict is Verdict.VALID

    def test_names_in_sentence(self):
        M = FiniteStructure(F1, 2, {"F": {(0,): 1, (1,): 0}})
        sig = F1.with_constants(["e0", "e1"])
        f = parse_formula("(exists y (and (= (F y) e0) (not (= y e1))))", sig)
        # EC_L adds a new preimage of e0 outside M
        assert decide_with_diagram(M, f).verdict is Verdict.VALID
        g = parse_formula("(forall y (imp (= (F y) e0) (= y e1)))", sig)
        assert decide_with_diagram(M, g).verdict is Verdict.UNSAT

    @settings(max_examples=25)
    @given(st.integers(0, 10**6))
    def test_never_contingent(self, seed):
        rng = random.Random(seed)
        sig = random_signature(rng, max_symbols=2, max_arity=2)
        M = random_structure(sig, rng.randint(0, 2), rng)
        exp, _ = diagram(M)
        # with no elements and no constants only quantified variables can be leaves
        f = random_sentence(rng, exp, quantifiers=rng.randint(0 if exp.constants else 1, 2), size=2)
        try:
            v = decide_with_diagram(M, f, caps=SMALL).verdict
        except ResourceLimitError:
            assume(False)
        assert v in (Verdict.VALID, Verdict.UNSAT)
        assert len(element_names(M)) == M.size


class TestNaive:
    def test_involution_fails(self):
        f = parse_formula("(forall x (= (F (F x)) x))", F1)
        assert model_bound(f, F1) == 3
        assert naive_universal_check(f, F1) is False

    def test_reflexivity(self):
        assert naive_universal_check(parse_formula("(forall x (= x x))", Signature()))

    def test_one_element(self):
        f = parse_formula("(forall x (forall y (= x y)))", Signature())
        assert naive_universal_check(f, Signature()) is False

    def test_requires_universal(self):
        with pytest.raises(ValueError):
            naive_universal_check(parse_formula("(exists x (= x x))", Signature()))

    def test_model_cap(self):
        f = parse_formula("(forall x (= (F (F (F x))) x))", F1)
        with pytest.raises(ResourceLimitError):
            naive_universal_check(f, F1, max_model=2)

    def test_bound_counts_unused_variables(self):
        f = parse_formula("(forall x (forall y (forall z (= x x))))", Signature())
        assert model_bound(f) == 3

    def test_bound_with_constants(self):
        assert model_bound(parse_formula("true", Signature.parse("(const c)")), Signature.parse("(const c)")) == 1

    @settings(max_examples=40)
    @given(st.integers(0, 10**6))
    def test_methods_agree(self, seed):
        rng = random.Random(seed)
        sig = random_signature(rng, max_symbols=2, max_arity=1, constants=True)
        f = random_universal(rng, sig, max_subterms=4, quantifiers=rng.randint(1, 2))
        assert is_universal(f)
        # the exhaustive oracle is only feasible for small structure counts
        assume(sum(count_structures(sig, n) for n in range(model_bound(f, sig) + 1)) <= 10**6)
        a = naive_universal_check(f, sig, method="exhaustive", limit=10**6)
        b = naive_universal_check(f, sig, method="lazy")
        assert a == b

    def test_agrees_with_decide_on_universal_sentences(self):
        rng = random.Random(5)
        for _ in range(30):
            sig = random_signature(rng, max_symbols=2, max_arity=2, constants=True)
            f = random_universal(rng, sig, max_subterms=5, quantifiers=2)
            assert isinstance(f, Forall) or is_universal(f)
            assert naive_universal_check(f, sig) == (decide(f, sig).verdict is Verdict.VALID)


def test_diagram_rejects_contingent(monkeypatch):
    import importlib

    d = importlib.import_module("ecl.decide")

    M = FiniteStructure(F1, 1, {"F": {(0,): 0}})
    monkeypatch.setattr(d, "_three_way", lambda g, hyp=None: d.DecisionResult(Verdict.CONTINGENT, g))
    with pytest.raises(InvariantViolation):
        decide_with_diagram(M, parse_formula("(exists x (= x x))", F1))
