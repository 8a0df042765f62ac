import pytest
from hypothesis import given

from conftest import random_word, words
from vpbraid.combing import (
    KernelPreconditionError,
    comb,
    heuristic_length_reduction,
    kernel_conjugate_form,
    kernel_length,
)
from vpbraid.invariants import exponent_vector
from vpbraid.presentation import SearchBudget
from vpbraid.word import (
    BraidWord,
    StrandIndexError,
    delete_strand,
    free_reduce,
    identity,
    multiply,
    word,
)


def _oracle_product(parts):
    out = identity(parts[0].strand_count)
    for p in parts:
        out = multiply(out, p)
    return free_reduce(out)


def test_comb_example():
    b = word(3, (1, 3), (1, 2))
    d = comb(b)
    assert d.part(2) == word(3, (1, 2))
    assert d.part(3) == word(3, (1, 2, -1), (1, 3), (1, 2))
    assert _oracle_product(d.parts) == free_reduce(b)
    assert delete_strand(d.part(3), 3) == word(2, (1, 2, -1), (1, 2))
    assert free_reduce(delete_strand(d.part(3), 3)).is_identity()


def test_comb_identity_and_base_case():
    for n in range(2, 6):
        assert all(p.is_identity() for p in comb(identity(n)).parts)
    assert comb(word(2, (1, 2))).parts == (word(2, (1, 2)),)
    with pytest.raises(StrandIndexError):
        comb(identity(1))


def test_comb_telescoping_and_projection(rng):
    for _ in range(300):
        n = rng.randint(2, 5)
        b = random_word(rng, n, 20)
        d = comb(b)
        assert _oracle_product(d.parts) == free_reduce(b)
        assert free_reduce(d.product()) == free_reduce(b)
        for j, w in enumerate(d.parts, start=2):
            assert all(max(x.over, x.under) <= j for x in w)
            short = BraidWord(j, w.letters)
            assert exponent_vector(delete_strand(short, j)).is_zero()
            assert free_reduce(delete_strand(short, j)).is_identity()
            for k in range(j + 1, n + 1):
                assert all(not x.touches(k) for x in w)


def test_kernel_conjugate_form_single_factor():
    w = word(3, (1, 2, -1), (1, 3), (1, 2))
    form = kernel_conjugate_form(w, 3)
    assert form.factors == ((word(3, (1, 2, -1)), (1, 3, 1)),)
    assert form.residual == word(3, (1, 2, -1), (1, 2))
    assert form.length == 1
    assert form.verified
    assert free_reduce(form.residual).is_identity()


def test_kernel_conjugate_form_no_top_letters():
    w = word(3, (1, 2), (1, 2, -1))
    form = kernel_conjugate_form(w, 3)
    assert form.factors == ()
    assert form.residual == w
    assert form.length == 0


def test_kernel_conjugate_form_two_factors():
    form = kernel_conjugate_form(word(3, (1, 3), (2, 3, -1)), 3)
    assert form.factors == ((identity(3), (1, 3, 1)), (identity(3), (2, 3, -1)))
    assert form.residual == identity(3)
    assert form.length == 2


def test_kernel_precondition():
    with pytest.raises(KernelPreconditionError):
        kernel_conjugate_form(word(3, (1, 2), (1, 3)), 3)


@given(words(n=4))
def test_conjugate_form_reassembles(w):
    # make a kernel word: strip the projection
    d = comb(w)
    for j, part in enumerate(d.parts, start=2):
        form = kernel_conjugate_form(BraidWord(j, part.letters), j)
        assert free_reduce(form.expand()) == free_reduce(BraidWord(j, part.letters))
        assert form.length == sum(1 for x in part if x.touches(j))


def test_kernel_length():
    assert kernel_length(identity(3), 3) == 0
    assert kernel_length(word(3, (1, 2, -1), (1, 3), (1, 2)), 3) == 1
    # l13 l31 l23^-1: projection to two strands is empty
    assert kernel_length(word(3, (1, 3), (3, 1), (2, 3, -1)), 3) == 3


def test_kernel_length_invariant_under_far_commutation():
    from vpbraid.presentation import COMMUTE, applicable_moves, apply_move

    w = word(4, (1, 4), (2, 3), (2, 3, -1))
    for m in applicable_moves(w):
        if m.kind == COMMUTE:
            assert kernel_length(apply_move(w, m), 4) == kernel_length(w, 4)


def test_heuristic_reduction_examples():
    assert heuristic_length_reduction(word(3, (1, 3), (1, 3, -1)), 3).is_identity()
    nested = word(3, (1, 3), (2, 3), (2, 3, -1), (1, 3, -1))
    assert heuristic_length_reduction(nested, 3).is_identity()
    single = word(3, (1, 2, -1), (1, 3), (1, 2))
    assert heuristic_length_reduction(single, 3) == single


def test_heuristic_reduction_uses_relations():
    # l13 l12 l13^-1 l12^-1 stays: no cancelling pair is provably removable
    w = word(3, (1, 3), (1, 2), (1, 3, -1), (1, 2, -1))
    out = heuristic_length_reduction(w, 3, SearchBudget(max_depth=2, max_states=2000, max_word_length=6))
    assert kernel_length(out, 3) <= kernel_length(w, 3)
    # l14 l23 l14^-1 l23^-1: the letters commute, so the pair is removable
    far = word(4, (1, 4), (2, 3), (1, 4, -1), (2, 3, -1))
    assert heuristic_length_reduction(far, 4).is_identity()


def test_report_format():
    text = comb(word(3, (1, 3), (1, 2))).report().splitlines()
    assert text[:2] == ["part 2", "word n=3; l(1,2)"]
    assert "factor n=3; l(1,2)^-1 | l(1,3)" in text
