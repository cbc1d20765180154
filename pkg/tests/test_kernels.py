from __future__ import annotations

import itertools
import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ecl import kernels
from ecl._kernels_py import OP_AND, OP_CONST, OP_EQ, OP_NOT, OP_OR, OP_REL

BACKENDS = kernels.backends()
needs_cython = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernels not built")


@st.composite
def term_dags(draw, max_n: int = 7):
    """Encoded subterm-closed sets: applications only point at smaller indices."""
    n = draw(st.integers(0, max_n))
    apps = []
    for i in range(n):
        if i == 0 or draw(st.booleans()):
            continue  # a leaf
        sym = draw(st.integers(0, 1))
        arity = 1 if sym == 0 else 2
        args = tuple(draw(st.integers(0, i - 1)) for _ in range(arity))
        apps.append((i, sym, args))
    return n, apps


def _rgs(n):
    """All restricted growth strings of length n (an independent enumeration)."""
    if n == 0:
        yield ()
        return
    for head in _rgs(n - 1):
        for b in range(max(head, default=-1) + 2):
            yield head + (b,)


def _is_congruence(block, apps):
    return all(
        block[i] == block[j]
        for (i, s, a), (j, t, b) in itertools.combinations(apps, 2)
        if s == t and all(block[x] == block[y] for x, y in zip(a, b))
    )


@st.composite
def programs(draw, n_eq: int, n_rel: int, depth: int = 3):
    def node(d):
        choices = ["const"]
        if n_eq:
            choices.append("eq")
        if n_rel:
            choices.append("rel")
        if d > 0:
            choices += ["not", "and", "or"]
        kind = draw(st.sampled_from(choices))
        if kind == "const":
            return [(OP_CONST, draw(st.integers(0, 1)))]
        if kind == "eq":
            return [(OP_EQ, draw(st.integers(0, n_eq - 1)))]
        if kind == "rel":
            return [(OP_REL, draw(st.integers(0, n_rel - 1)))]
        if kind == "not":
            return node(d - 1) + [(OP_NOT, 0)]
        k = draw(st.integers(0, 3))
        out = []
        for _ in range(k):
            out += node(d - 1)
        return out + [(OP_AND if kind == "and" else OP_OR, k)]

    return node(depth)


@st.composite
def filter_inputs(draw):
    n, apps = draw(term_dags(6))
    if n == 0:
        eqs, rels = [], []
    else:
        idx = st.integers(0, n - 1)
        eqs = draw(st.lists(st.tuples(idx, idx), max_size=4))
        rels = draw(st.lists(st.tuples(st.integers(0, 1), st.tuples(idx)), max_size=3))
    prog = draw(programs(len(eqs), len(rels)))
    return n, apps, eqs, rels, prog


def _eval_prog(prog, block, eqs, rels, bits):
    stack = []
    for op, arg in prog:
        if op == OP_EQ:
            a, b = eqs[arg]
            stack.append(block[a] == block[b])
        elif op == OP_REL:
            sym, args = rels[arg]
            stack.append(bits[(sym,) + tuple(block[a] for a in args)])
        elif op == OP_NOT:
            stack.append(not stack.pop())
        elif op in (OP_AND, OP_OR):
            vals = [stack.pop() for _ in range(arg)]
            stack.append(all(vals) if op == OP_AND else any(vals))
        else:
            stack.append(bool(arg))
    return stack[-1]


class TestAdmissiblePartitions:
    @given(term_dags())
    def test_matches_brute_force(self, dag):
        n, apps = dag
        expected = [b for b in _rgs(n) if _is_congruence(b, apps)]
        for impl in BACKENDS.values():
            assert sorted(impl.admissible_partitions(n, apps, 10**6)) == sorted(expected)

    @given(term_dags())
    def test_backends_agree_in_order(self, dag):
        n, apps = dag
        outs = [impl.admissible_partitions(n, apps, 10**6) for impl in BACKENDS.values()]
        assert all(o == outs[0] for o in outs)

    def test_bell_numbers_without_applications(self):
        for impl in BACKENDS.values():
            assert [len(impl.admissible_partitions(n, [], 10**6)) for n in range(8)] == [1, 1, 2, 5, 15, 52, 203, 877]

    def test_limit(self):
        for impl in BACKENDS.values():
            assert impl.admissible_partitions(5, [], 51) is None
            assert len(impl.admissible_partitions(5, [], 52)) == 52

    def test_forced_merge(self):
        # x, y, F(x), F(y): x ~ y forces F(x) ~ F(y)
        apps = [(2, 0, (0,)), (3, 0, (1,))]
        for impl in BACKENDS.values():
            rows = impl.admissible_partitions(4, apps, 100)
            assert all(r[2] == r[3] for r in rows if r[0] == r[1])
            assert len(rows) == 12


class TestFilteredPartitions:
    @given(filter_inputs())
    def test_matches_direct_evaluation(self, inp):
        n, apps, eqs, rels, prog = inp
        expected = set()
        for block in _rgs(n):
            if not _is_congruence(block, apps):
                continue
            keys = []
            for sym, args in rels:
                k = (sym,) + tuple(block[a] for a in args)
                if k not in keys:
                    keys.append(k)
            for mask in range(1 << len(keys)):
                bits = {k: bool((mask >> i) & 1) for i, k in enumerate(keys)}
                if _eval_prog(prog, block, eqs, rels, bits):
                    expected.add((block, mask))
        for impl in BACKENDS.values():
            assert set(impl.filtered_partitions(n, apps, eqs, rels, prog, 10**6, 16)) == expected

    @given(filter_inputs())
    def test_backends_agree_in_order(self, inp):
        outs = [impl.filtered_partitions(*inp, 10**6, 16) for impl in BACKENDS.values()]
        assert all(o == outs[0] for o in outs)

    def test_group_overflow(self):
        rels = [(0, (i,)) for i in range(3)]
        prog = [(OP_CONST, 1)]
        for impl in BACKENDS.values():
            with pytest.raises(OverflowError):
                impl.filtered_partitions(3, [], [], rels, prog, 100, 2)
            assert len(impl.filtered_partitions(3, [], [], rels, prog, 100, 3)) == 1 * 2 + 3 * 4 + 8

    def test_limit(self):
        for impl in BACKENDS.values():
            assert impl.filtered_partitions(4, [], [], [], [(OP_CONST, 0)], 14, 16) is None


class TestCongruenceReps:
    @given(term_dags(), st.data())
    def test_backends_agree(self, dag, data):
        n, apps = dag
        if n == 0:
            return
        idx = st.integers(0, n - 1)
        eqs = data.draw(st.lists(st.tuples(idx, idx), max_size=4))
        outs = [impl.congruence_reps(n, apps, eqs) for impl in BACKENDS.values()]
        assert all(o == outs[0] for o in outs)
        reps = outs[0]
        # the result is a congruence containing the equations, with least representatives
        assert _is_congruence(reps, apps)
        assert all(reps[a] == reps[b] for a, b in eqs)
        assert all(reps[i] <= i and reps[reps[i]] == reps[i] for i in range(n))

    def test_chain(self):
        # c, F(c), F(F(c)) with F(c) = c collapses everything
        apps = [(1, 0, (0,)), (2, 0, (1,))]
        for impl in BACKENDS.values():
            assert impl.congruence_reps(3, apps, [(1, 0)]) == [0, 0, 0]


@needs_cython
def test_compiled_backend_is_default():
    if os.environ.get("ECL_PURE_PYTHON"):
        pytest.skip("fallback forced in this run")
    assert kernels.BACKEND == "cython"


def test_environment_forces_fallback():
    env = dict(os.environ, ECL_PURE_PYTHON="1")
    code = "import ecl; print(ecl.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
