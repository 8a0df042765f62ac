import random

import pytest
from hypothesis import strategies as st

from vpbraid.word import BraidWord, Letter


@st.composite
def letters(draw, n):
    a = draw(st.integers(1, n))
    b = draw(st.integers(1, n).filter(lambda x: x != a))
    return Letter(a, b, draw(st.sampled_from((1, -1))))


@st.composite
def words(draw, min_n=2, max_n=5, max_len=30, n=None):
    n = n or draw(st.integers(min_n, max_n))
    return BraidWord(n, tuple(draw(st.lists(letters(n), max_size=max_len))))


def random_word(rng: random.Random, n: int, max_len: int) -> BraidWord:
    out = []
    for _ in range(rng.randint(0, max_len)):
        a, b = rng.sample(range(1, n + 1), 2)
        out.append(Letter(a, b, rng.choice((1, -1))))
    return BraidWord(n, tuple(out))


@pytest.fixture
def rng():
    return random.Random(20081)


# one (criterion, passed, seconds, note) tuple per acceptance criterion, filled by test_acceptance
ACCEPTANCE: list[tuple[int, bool, float, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, seconds, note in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'} {seconds:.2f}s {note}")
