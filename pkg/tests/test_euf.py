from __future__ import annotations

import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from ecl.decide import naive_universal_check
from ecl.euf import (
    GroundProblem,
    canonical_atom,
    congruence_close,
    euf_equivalent,
    ground_valid,
    literals_consistent,
    satisfiable,
)
from ecl.structures import enumerate_structures, eval_formula
from ecl.syntax import (
    FALSE,
    TRUE,
    Forall,
    Not,
    Signature,
    atoms,
    free_vars,
    neg,
    parse_formula,
)

from .strategies import FC, qf_formulas

SIG = Signature.parse("(fun F 1) (const c) (const d) (const e) (rel P 1)")


def lits(*texts):
    return [parse_formula(t, SIG) for t in texts]


class TestClosure:
    def test_one_congruence_step(self):
        assert not congruence_close(lits("(= c d)", "(= (F c) e)", "(not (= (F d) e))")).consistent

    def test_two_steps(self):
        assert not congruence_close(lits("(= (F c) c)", "(not (= (F (F c)) c))")).consistent

    def test_disequality_only(self):
        cl = congruence_close(lits("(not (= c d))"))
        assert cl.consistent
        c, d = parse_formula("(= c d)", SIG).left, parse_formula("(= c d)", SIG).right
        assert cl.classes == {frozenset([c]), frozenset([d])}

    def test_relation_polarity_across_congruent_tuples(self):
        assert not congruence_close(lits("(= c d)", "(P c)", "(not (P d))")).consistent
        assert congruence_close(lits("(P c)", "(not (P d))")).consistent

    def test_literals_consistent(self):
        assert literals_consistent(lits("(= c d)", "(P c)"))
        assert not literals_consistent(lits("(= c d)", "(not (= d c))"))

    @given(st.data())
    def test_order_insensitive(self, data):
        pool = lits(
            "(= c d)",
            "(= (F c) e)",
            "(not (= (F d) e))",
            "(= (F e) c)",
            "(not (= c e))",
            "(P (F c))",
            "(not (P e))",
            "(= (F (F c)) d)",
        )
        chosen = data.draw(st.lists(st.sampled_from(pool), min_size=1, max_size=6, unique=True))
        perm = data.draw(st.permutations(chosen))
        a, b = congruence_close(chosen), congruence_close(perm)
        assert a == b


class TestGroundValid:
    def test_congruence_instance(self):
        assert ground_valid(parse_formula("(imp (and (= c d) (= (F c) e)) (= (F d) e))", SIG))

    def test_not_valid(self):
        assert not ground_valid(parse_formula("(= c d)", SIG))

    def test_free_variables_as_constants(self):
        assert ground_valid(parse_formula("(imp (= x y) (= (F x) (F y)))", SIG))

    def test_propositional_constants(self):
        assert ground_valid(TRUE) and not ground_valid(FALSE)
        assert ground_valid(parse_formula("(= x x)", SIG))

    def test_satisfying_assignment_is_consistent(self):
        f = parse_formula("(and (= (F c) d) (or (= c d) (P c)))", SIG)
        model = satisfiable(f)
        assert model is not None
        chosen = [a if v else Not(a) for a, v in model.items()]
        assert literals_consistent(chosen)

    def test_equivalence(self):
        f = parse_formula("(or (= x y) (not (= x y)))", SIG)
        assert euf_equivalent(f, TRUE)
        assert euf_equivalent(parse_formula("(= x y)", SIG), parse_formula("(= y x)", SIG))

    def test_canonical_orientation(self):
        a, b = parse_formula("(= (F c) c)", SIG), parse_formula("(= c (F c))", SIG)
        assert canonical_atom(a) == canonical_atom(b)

    def test_problem_shape(self):
        gp = GroundProblem(parse_formula("(and (= (F c) c) (not (= c (F c))))", SIG))
        assert len(gp.atoms) == 1
        assert set(gp.term_dag.terms) >= {t for a in gp.atoms for t in (a.left, a.right)}

    @given(qf_formulas(FC, ("x",), depth=2, leaves=4))
    def test_never_both_valid(self, f):
        a, b = ground_valid(f), ground_valid(neg(f))
        assert not (a and b)
        if next(atoms(f), None) is None:
            assert a or b

    @settings(max_examples=40)
    @given(qf_formulas(FC, ("x", "y"), depth=2, leaves=4))
    def test_matches_finite_models(self, f):
        closed = f
        for v in sorted(free_vars(f), reverse=True):
            closed = Forall(v, closed)
        assert ground_valid(f) == naive_universal_check(closed, FC)


def _brute_valid(f, sig, size):
    """Validity of the universal closure in all structures up to ``size`` (a second oracle)."""
    vs = sorted(free_vars(f))
    for M in enumerate_structures(sig, size):
        for vals in itertools.product(range(M.size), repeat=len(vs)):
            if not eval_formula(M, f, dict(zip(vs, vals))):
                return False
    return True


def test_small_corpus_against_second_oracle():
    sig = Signature.parse("(fun F 1) (const c)")
    corpus = [
        "(imp (= (F x) x) (= (F (F x)) x))",
        "(imp (= (F c) x) (= (F (F c)) (F x)))",
        "(or (= (F x) x) (not (= (F (F x)) (F x))))",
        "(imp (and (= (F x) c) (= (F c) x)) (= (F (F x)) x))",
        "(= (F x) c)",
    ]
    for text in corpus:
        f = parse_formula(text, sig)
        assert ground_valid(f) == _brute_valid(f, sig, 3), text
