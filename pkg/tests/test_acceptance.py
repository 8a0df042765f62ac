"""
Acceptance gate. Each test checks one criterion at its stated tolerance and time
limit, prints a pass/fail line and records it for the terminal summary.
"""

import contextlib
import random
import subprocess
import sys
import time
from collections import Counter

import pytest

from conftest import ACCEPTANCE, random_word
from vpbraid.combing import comb
from vpbraid.diagram import layout, stack, to_svg
from vpbraid.homotopy import (
    HomotopyGeneratorSpec,
    classical_generator,
    enumerate_generators,
    is_homotopic_to_identity,
    make_generator,
    reduced_classical_words,
)
from vpbraid.invariants import exponent_vector, linking_matrix
from vpbraid.presentation import (
    RelationVariant,
    SearchBudget,
    applicable_moves,
    apply_move,
    equivalent_bounded,
    validate_relation_set,
)
from vpbraid.word import (
    BraidWord,
    Letter,
    conjugate,
    expand_sigma,
    format_word,
    free_reduce,
    multiply,
    word,
)

pytestmark = pytest.mark.acceptance


@contextlib.contextmanager
def criterion(number: int, limit: float, note: str = ""):
    start = time.perf_counter()
    passed = False
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit, f"criterion {number} took {elapsed:.2f}s (limit {limit}s)"
        passed = True
    finally:
        elapsed = time.perf_counter() - start
        ACCEPTANCE.append((number, passed, elapsed, note))
        print(f"criterion {number}: {'PASS' if passed else 'FAIL'} {elapsed:.2f}s {note}")


def _oracle_exponents(w: BraidWord) -> dict:
    counts = Counter()
    for x in w.letters:
        counts[(x.over, x.under)] += x.exponent
    return {k: v for k, v in counts.items() if v}


def test_relation_soundness():
    with criterion(1, 1.0, "relation audit n<=6"):
        corrected = validate_relation_set(RelationVariant.CORRECTED, 6)
        assert corrected.ok
        assert corrected.checked["commute"] > 0 and corrected.checked["mixed"] > 0
        printed = validate_relation_set(RelationVariant.PRINTED, 6)
        assert not printed.ok
        flagged = {tuple(v["indices"]) for v in printed.violations}
        assert (1, 2, 3) in flagged


def test_invariant_preservation():
    rng = random.Random(1)
    with criterion(2, 10.0, "10^4 words, one random move each plus free reduction"):
        for _ in range(10_000):
            n = rng.randint(2, 5)
            w = random_word(rng, n, 30)
            exp, link = exponent_vector(w), linking_matrix(w)
            moves = applicable_moves(w, max_word_length=32)
            if moves:
                moved = apply_move(w, rng.choice(moves))
                assert exponent_vector(moved) == exp
                assert linking_matrix(moved) == link
                assert _oracle_exponents(moved) == _oracle_exponents(w)
            reduced = free_reduce(w)
            assert exponent_vector(reduced) == exp
            assert linking_matrix(reduced) == link


def test_combing_exactness():
    rng = random.Random(2)
    with criterion(3, 10.0, "10^3 words"):
        for _ in range(1000):
            n = rng.randint(2, 5)
            b = random_word(rng, n, 20)
            parts = comb(b).parts
            product = BraidWord(n, tuple(x for p in parts for x in p.letters))
            assert free_reduce(product) == free_reduce(b)
            for j, part in enumerate(parts, start=2):
                assert all(x.over <= j and x.under <= j for x in part.letters)


def test_sigma_expansion():
    with criterion(4, float("inf"), "exact"):
        assert expand_sigma(1, 2, 2).letters == (Letter(1, 2, 1), Letter(2, 1, -1))
        for n in range(2, 6):
            for i in range(1, n + 1):
                for j in range(i + 1, n + 1):
                    assert _oracle_exponents(expand_sigma(i, j, n)) == {(i, j): 1, (j, i): -1}
                    assert dict(exponent_vector(expand_sigma(i, j, n)).items()) == {(i, j): 1, (j, i): -1}


def test_relation_reachability():
    with criterion(5, 60.0, "depth-1 mixed instance and far sigma commutation"):
        # one mixed relation instance with (i,j,k) = (1,2,3)
        lhs = word(3, (3, 1, -1), (3, 2, -1), (1, 2))
        rhs = word(3, (1, 2), (3, 2, -1), (3, 1, -1))
        v = equivalent_bounded(lhs, rhs, SearchBudget(max_depth=1, max_states=1000))
        assert v.status == "equivalent"
        assert v.certificate.verify()
        assert [m.kind for m in v.certificate.steps] == ["mixed"]

        a, b = expand_sigma(1, 2, 4), expand_sigma(3, 4, 4)
        left, right = multiply(a, b), multiply(b, a)
        v = equivalent_bounded(left, right, SearchBudget(max_depth=8, max_states=100_000))
        assert v.status != "distinct"
        if v.status == "unknown":
            v = equivalent_bounded(left, right, SearchBudget(max_depth=10, max_states=100_000))
        assert v.status == "equivalent"
        assert v.certificate.verify()


def test_identity_subgroup_generators():
    with criterion(6, 10.0, "all generators n<=4, factor length <=2"):
        total = 0
        for n in range(2, 5):
            for spec, w in enumerate_generators(n, 2):
                assert linking_matrix(w).is_zero()
                assert not _oracle_exponents(w)
                total += 1
        assert total > 0
        n = 4
        for i in range(1, n + 1):
            f_i = [(i, k) for k in range(i + 1, n + 1)]
            for j in range(i + 1, n + 1):
                for g in reduced_classical_words(f_i, 2):
                    spec = HomotopyGeneratorSpec(n, i, j, g_a=g)
                    assert classical_generator(i, j, g, n).letters == make_generator(spec).letters


def test_membership_soundness():
    rng = random.Random(3)
    with criterion(7, 120.0, "n=3 generators with factor length <=2, 100 conjugates, products"):
        v = is_homotopic_to_identity(word(2, (1, 2)))
        assert v.status == "non_member"
        assert dict(v.witness.items()) == {(1, 2): -1}

        gens = [w for _, w in enumerate_generators(3, 2)]
        for w in gens:
            v = is_homotopic_to_identity(w)
            assert v.status == "member"
            assert v.verify()

        for _ in range(100):
            g = random_word(rng, 3, 3)
            v = is_homotopic_to_identity(conjugate(g, rng.choice(gens)))
            assert v.status == "member"
            assert v.verify()

        small = [w for _, w in enumerate_generators(3, 0)]
        pairs = [(a, b) for a in small for b in small]
        pairs += [(rng.choice(gens), rng.choice(gens)) for _ in range(200)]
        for a, b in pairs:
            v = is_homotopic_to_identity(multiply(a, b), SearchBudget(max_depth=2, max_states=2000))
            assert v.status != "non_member"
            assert v.verify()


def test_rendering():
    rng = random.Random(4)
    with criterion(8, 5.0, "stacking, sign sums on 100 words, byte-stable SVG"):
        for _ in range(100):
            n = rng.randint(2, 5)
            a, b = random_word(rng, n, 10), random_word(rng, n, 10)
            assert layout(multiply(a, b)) == stack(layout(a), layout(b))
            assert layout(a).sign_sums() == linking_matrix(a)
            assert to_svg(layout(a)) == to_svg(layout(a))
        # a fresh interpreter must produce the same bytes
        w = random_word(rng, 4, 12)
        code = (
            "import sys; from vpbraid.word import parse_word; from vpbraid.diagram import layout, to_svg;"
            f"sys.stdout.buffer.write(to_svg(layout(parse_word({format_word(w)!r}))))"
        )
        fresh = subprocess.run([sys.executable, "-c", code], capture_output=True, check=True).stdout
        assert fresh == to_svg(layout(w))
