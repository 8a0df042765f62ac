"""Abelianization and linking numbers of pure virtual braid words."""

from __future__ import annotations

import dataclasses
from collections import Counter
from typing import Iterable, Iterator, Mapping

from .word import BraidWord, Letter


@dataclasses.dataclass(frozen=True)
class _SparsePairMap:
    """Integer-valued map on ordered strand pairs; absent pairs read as zero."""

    strand_count: int
    entries: Mapping[tuple[int, int], int]

    def __post_init__(self):
        clean = {k: v for k, v in sorted(self.entries.items()) if v}
        object.__setattr__(self, "entries", clean)

    def __getitem__(self, pair: tuple[int, int]) -> int:
        return self.entries.get(pair, 0)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, type(self)):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(tuple(self.entries.items()))

    def is_zero(self) -> bool:
        return not self.entries

    def items(self):
        return self.entries.items()

    def differences(self, other: _SparsePairMap) -> list[tuple[tuple[int, int], int, int]]:
        keys = sorted(set(self.entries) | set(other.entries))
        return [(k, self[k], other[k]) for k in keys if self[k] != other[k]]


class ExponentVector(_SparsePairMap):
    """Signed count of each generator l_ij in a word."""

    tag = "exp"

    def __add__(self, other: ExponentVector) -> ExponentVector:
        total = Counter(self.entries)
        total.update(other.entries)
        return ExponentVector(max(self.strand_count, other.strand_count), dict(total))

    def records(self) -> list[str]:
        return [f"exp {i} {j} {v}" for (i, j), v in self.entries.items()]


class LinkingMatrix(_SparsePairMap):
    """Link(a, b): signed count of crossings where strand a passes over strand b."""

    tag = "link"

    def records(self) -> list[str]:
        return [f"link {a} {b} {v}" for (a, b), v in self.entries.items()]


def crossing_sign(letter: Letter) -> int:
    """
    Sign of the single classical crossing carried by a generator letter.

    A positive lambda letter carries a negative crossing (Link(i, j) = -1 for
    l_ij); its inverse carries the mirrored, positive crossing.
    """
    return -letter.exponent


def exponent_sums(letters: Iterable[Letter]) -> dict[tuple[int, int], int]:
    sums: dict[tuple[int, int], int] = {}
    for x in letters:
        key = (x.over, x.under)
        sums[key] = sums.get(key, 0) + x.exponent
    return sums


def exponent_vector(w: BraidWord) -> ExponentVector:
    return ExponentVector(w.strand_count, exponent_sums(w.letters))


def linking_matrix(w: BraidWord) -> LinkingMatrix:
    link: dict[tuple[int, int], int] = {}
    for x in w.letters:
        key = (x.over, x.under)
        link[key] = link.get(key, 0) + crossing_sign(x)
    return LinkingMatrix(w.strand_count, link)


def is_possibly_identity_homotopic(w: BraidWord) -> bool:
    """Necessary condition for being homotopic to the identity: every linking number vanishes."""
    return linking_matrix(w).is_zero()


def export_invariants(w: BraidWord) -> str:
    lines = linking_matrix(w).records() + exponent_vector(w).records()
    return "\n".join(lines)
