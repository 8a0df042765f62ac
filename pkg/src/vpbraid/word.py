"""
Braid words over the lambda generators of the pure virtual braid group VP_n.

A letter ``Letter(i, j, e)`` stands for lambda_ij ** e: a single classical
crossing in which strand ``i`` passes over strand ``j``, with ``e`` in {+1, -1}.
A ``BraidWord`` is a strand count together with a tuple of letters; the empty
tuple is the identity braid. Words are never reduced implicitly.

Text format::

    n=3; l(1,3) l(2,3)^-1   # comment
    n=3; s(1,3)             # sugar for the expanded classical generator sigma_13
"""

from __future__ import annotations

import dataclasses
import re
from typing import Iterable, NamedTuple


class BraidError(ValueError):
    """Base class for domain errors raised on malformed words or arguments."""


class WordSyntaxError(BraidError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class StrandIndexError(BraidError):
    pass


class StrandCountMismatch(BraidError):
    pass


class Letter(NamedTuple):
    over: int
    under: int
    exponent: int = 1

    def inverse(self) -> Letter:
        return Letter(self.over, self.under, -self.exponent)

    def touches(self, strand: int) -> bool:
        return self.over == strand or self.under == strand

    def __str__(self) -> str:
        suffix = "^-1" if self.exponent < 0 else ""
        return f"l({self.over},{self.under}){suffix}"


@dataclasses.dataclass(frozen=True)
class BraidWord:
    strand_count: int
    letters: tuple[Letter, ...] = ()
    # set when the text contained s(i,j) sugar; format_word(strict=True) refuses these
    sugared: bool = dataclasses.field(default=False, compare=False)

    def __post_init__(self):
        if self.strand_count < 1:
            raise StrandIndexError(f"strand count must be positive, got {self.strand_count}")
        letters = self.letters
        if type(letters) is not tuple or any(type(x) is not Letter for x in letters):
            letters = tuple(Letter(*x) for x in letters)
            object.__setattr__(self, "letters", letters)
        n = self.strand_count
        for x in letters:
            if not (0 < x.over <= n and 0 < x.under <= n and x.over != x.under and x.exponent in (1, -1)):
                _check_letter(x, n)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, index):
        return self.letters[index]

    def __mul__(self, other: BraidWord) -> BraidWord:
        return multiply(self, other)

    def __str__(self) -> str:
        return format_word(self)

    def is_identity(self) -> bool:
        return not self.letters

    def with_letters(self, letters: Iterable[Letter]) -> BraidWord:
        return BraidWord(self.strand_count, tuple(letters))

    def sort_key(self) -> tuple:
        """Shortlex key used wherever a deterministic order on words is needed."""
        return (len(self.letters), self.letters)


def _check_letter(x: Letter, n: int) -> None:
    if x.exponent not in (1, -1):
        raise BraidError(f"exponent must be +1 or -1, got {x.exponent}")
    if x.over == x.under:
        raise StrandIndexError(f"generator l({x.over},{x.under}) needs two distinct strands")
    for k in (x.over, x.under):
        if not 1 <= k <= n:
            raise StrandIndexError(f"strand {k} out of range 1..{n}")


def identity(n: int) -> BraidWord:
    return BraidWord(n)


def word(n: int, *letters) -> BraidWord:
    """Build a word from ``(over, under)`` or ``(over, under, exponent)`` tuples."""
    return BraidWord(n, tuple(Letter(*x) for x in letters))


_HEADER = re.compile(r"\s*n\s*=\s*(\d+)\s*;")
_TOKEN = re.compile(r"([ls])\(\s*(\d+)\s*,\s*(\d+)\s*\)(\^-1)?")
_SPACE = re.compile(r"\s+")


def _strip_comments(text: str) -> str:
    # keep offsets stable so error positions point into the original text
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group(0)), text)


def parse_word(text: str) -> BraidWord:
    body = _strip_comments(text)
    m = _HEADER.match(body)
    if m is None:
        raise WordSyntaxError("expected header 'n=<int>;'", len(body) - len(body.lstrip()))
    n = int(m.group(1))
    if n < 1:
        raise StrandIndexError("strand count must be positive")
    pos = m.end()
    letters: list[Letter] = []
    sugared = False
    while True:
        ws = _SPACE.match(body, pos)
        if ws:
            pos = ws.end()
        if pos >= len(body):
            break
        if ws is None and letters and body[pos - 1] not in ";":
            raise WordSyntaxError("tokens must be separated by whitespace", pos)
        tok = _TOKEN.match(body, pos)
        if tok is None:
            raise WordSyntaxError(f"unexpected input {body[pos:pos + 12]!r}", pos)
        kind, i, j, inv = tok.group(1), int(tok.group(2)), int(tok.group(3)), tok.group(4)
        if i == j:
            raise StrandIndexError(f"generator {kind}({i},{j}) needs two distinct strands (position {pos})")
        for k in (i, j):
            if not 1 <= k <= n:
                raise StrandIndexError(f"strand {k} out of range 1..{n} (position {pos})")
        if kind == "l":
            letters.append(Letter(i, j, -1 if inv else 1))
        else:
            sig = expand_sigma(i, j, n)
            letters.extend(invert(sig).letters if inv else sig.letters)
            sugared = True
        pos = tok.end()
    return BraidWord(n, tuple(letters), sugared=sugared)


def format_word(w: BraidWord, strict: bool = False) -> str:
    """Render ``w`` in the text format. With ``strict``, refuse words parsed from sigma sugar."""
    if strict and w.sugared:
        raise BraidError("word was parsed from s(i,j) sugar; formatting would not reproduce the input text")
    head = f"n={w.strand_count};"
    if not w.letters:
        return head
    return head + " " + " ".join(str(x) for x in w.letters)


def _same_n(a: BraidWord, b: BraidWord) -> int:
    if a.strand_count != b.strand_count:
        raise StrandCountMismatch(f"strand counts differ: {a.strand_count} vs {b.strand_count}")
    return a.strand_count


def multiply(a: BraidWord, b: BraidWord, *rest: BraidWord) -> BraidWord:
    n = _same_n(a, b)
    letters = a.letters + b.letters
    for c in rest:
        _same_n(a, c)
        letters += c.letters
    return BraidWord(n, letters)


def invert(w: BraidWord) -> BraidWord:
    return BraidWord(w.strand_count, tuple(x.inverse() for x in reversed(w.letters)))


def reduce_letters(letters: Iterable[Letter]) -> list[Letter]:
    out: list[Letter] = []
    for x in letters:
        if out and out[-1].over == x.over and out[-1].under == x.under and out[-1].exponent == -x.exponent:
            out.pop()
        else:
            out.append(x)
    return out


def free_reduce(w: BraidWord) -> BraidWord:
    return BraidWord(w.strand_count, tuple(reduce_letters(w.letters)))


def conjugate(g: BraidWord, w: BraidWord) -> BraidWord:
    """Return g w g^-1, unreduced."""
    return multiply(g, w, invert(g))


def commutator(x: BraidWord, y: BraidWord) -> BraidWord:
    """Return x y x^-1 y^-1, unreduced."""
    return multiply(x, y, invert(x), invert(y))


def delete_strand(w: BraidWord, i: int) -> BraidWord:
    """Forget strand ``i``: drop letters touching it and relabel the strands above it."""
    n = w.strand_count
    if n < 2:
        raise StrandIndexError("cannot delete a strand from a 1-strand braid")
    if not 1 <= i <= n:
        raise StrandIndexError(f"strand {i} out of range 1..{n}")

    def relabel(k: int) -> int:
        return k - 1 if k > i else k

    letters = tuple(
        Letter(relabel(x.over), relabel(x.under), x.exponent) for x in w.letters if not x.touches(i)
    )
    return BraidWord(n - 1, letters)


def embed(w: BraidWord, n: int) -> BraidWord:
    """Index-preserving inclusion of a word on fewer strands into VP_n."""
    if n < w.strand_count:
        raise StrandIndexError(f"cannot embed a {w.strand_count}-strand word into {n} strands")
    return BraidWord(n, w.letters)


def expand_sigma(i: int, j: int, n: int) -> BraidWord:
    """
    The classical pure braid generator sigma_ij as a lambda word:
    g (l_ij l_ji^-1) g^-1 with g = l_{i,i+1} l_{i,i+2} ... l_{i,j-1}.
    """
    if not 1 <= i < j <= n:
        raise StrandIndexError(f"expand_sigma needs 1 <= i < j <= n, got i={i}, j={j}, n={n}")
    prefix = [Letter(i, k, 1) for k in range(i + 1, j)]
    core = [Letter(i, j, 1), Letter(j, i, -1)]
    suffix = [x.inverse() for x in reversed(prefix)]
    return BraidWord(n, tuple(prefix + core + suffix))


def all_letters(n: int) -> list[Letter]:
    """Every signed generator of VP_n in (over, under, exponent) order."""
    return sorted(Letter(a, b, e) for a in range(1, n + 1) for b in range(1, n + 1) if a != b for e in (1, -1))
