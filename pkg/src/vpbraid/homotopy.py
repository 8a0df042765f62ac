"""
Generators of I(VP_n), the pure virtual braids homotopic to the identity braid,
and a three-valued membership test.

I(VP_n) is the normal closure of the commutators

    [sigma_ij, g_a x g_b sigma_ij g_b^-1 x^-1 g_a^-1]

where g_a, g_b are words in the classical generators sigma_1i, ..., sigma_(i-1)i,
sigma_i(i+1), ..., sigma_in, and x is either the identity or the braid

    x = (l_(i-1)i ... l_1i)(l_ni^-1 l_(n-1)i^-1 ... l_(i+1)i^-1).

Membership is only ever established constructively: a verdict of ``member``
carries a factorization into conjugates of generators. Nonzero linking numbers
prove non-membership; anything else within budget is ``unknown``.
"""

from __future__ import annotations

import dataclasses
import functools
import re
from typing import Iterator, NamedTuple, Sequence

from .invariants import LinkingMatrix, linking_matrix
from .presentation import MoveCertificate, SearchBudget, move_closure
from .word import (
    BraidError,
    BraidWord,
    Letter,
    StrandIndexError,
    commutator,
    conjugate,
    expand_sigma,
    identity,
    invert,
    multiply,
    reduce_letters,
)


class SigmaLetter(NamedTuple):
    """sigma_ij ** exponent, a classical pure braid generator with i < j."""

    i: int
    j: int
    exponent: int = 1

    def inverse(self) -> SigmaLetter:
        return SigmaLetter(self.i, self.j, -self.exponent)

    def __str__(self) -> str:
        return f"s({self.i},{self.j})" + ("^-1" if self.exponent < 0 else "")


ClassicalWord = tuple  # tuple[SigmaLetter, ...]


def classical_generator_set(i: int, n: int) -> list[tuple[int, int]]:
    """Index pairs of sigma_1i, ..., sigma_(i-1)i, sigma_i(i+1), ..., sigma_in."""
    if not 1 <= i <= n:
        raise StrandIndexError(f"center strand {i} out of range 1..{n}")
    return [(a, i) for a in range(1, i)] + [(i, b) for b in range(i + 1, n + 1)]


def expand_classical(g: Sequence[SigmaLetter], n: int) -> BraidWord:
    out: list[Letter] = []
    for s in g:
        sig = expand_sigma(s.i, s.j, n)
        out.extend(sig.letters if s.exponent > 0 else invert(sig).letters)
    return BraidWord(n, tuple(out))


def format_classical(g: Sequence[SigmaLetter]) -> str:
    return ".".join(str(s) for s in g) if g else "-"


_SIGMA = re.compile(r"s\((\d+),(\d+)\)(\^-1)?")


def parse_classical(text: str) -> ClassicalWord:
    """Parse sigma letters separated by '.', whitespace or nothing; '-' or '' is the empty word."""
    text = text.strip()
    if text in ("", "-"):
        return ()
    out = []
    pos = 0
    while pos < len(text):
        if text[pos] in ". \t":
            pos += 1
            continue
        m = _SIGMA.match(text, pos)
        if m is None:
            raise BraidError(f"bad classical letter at position {pos} in {text!r}")
        out.append(SigmaLetter(int(m.group(1)), int(m.group(2)), -1 if m.group(3) else 1))
        pos = m.end()
    return tuple(out)


@dataclasses.dataclass(frozen=True)
class HomotopyGeneratorSpec:
    strand_count: int
    i: int
    j: int
    g_a: ClassicalWord = ()
    g_b: ClassicalWord = ()
    use_x: bool = False

    def __post_init__(self):
        n = self.strand_count
        if not 1 <= self.i < self.j <= n:
            raise StrandIndexError(f"generator needs 1 <= i < j <= n, got i={self.i}, j={self.j}, n={n}")
        allowed = set(classical_generator_set(self.i, n))
        object.__setattr__(self, "g_a", tuple(SigmaLetter(*s) for s in self.g_a))
        object.__setattr__(self, "g_b", tuple(SigmaLetter(*s) for s in self.g_b))
        for s in self.g_a + self.g_b:
            if (s.i, s.j) not in allowed or s.exponent not in (1, -1):
                raise BraidError(f"{s} is not a classical generator around strand {self.i}")

    def format(self) -> str:
        return (
            f"n={self.strand_count} i={self.i} j={self.j} x={int(self.use_x)} "
            f"ga={format_classical(self.g_a)} gb={format_classical(self.g_b)}"
        )

    def to_dict(self) -> dict:
        return {
            "n": self.strand_count,
            "i": self.i,
            "j": self.j,
            "use_x": self.use_x,
            "g_a": format_classical(self.g_a),
            "g_b": format_classical(self.g_b),
        }


def parse_spec(text: str) -> HomotopyGeneratorSpec:
    fields = dict(tok.split("=", 1) for tok in text.split())
    return HomotopyGeneratorSpec(
        int(fields["n"]),
        int(fields["i"]),
        int(fields["j"]),
        parse_classical(fields.get("ga", "-")),
        parse_classical(fields.get("gb", "-")),
        fields.get("x", "0") == "1",
    )


def x_braid(i: int, n: int) -> BraidWord:
    if not 1 <= i <= n:
        raise StrandIndexError(f"strand {i} out of range 1..{n}")
    first = [Letter(a, i, 1) for a in range(i - 1, 0, -1)]
    second = [Letter(a, i, -1) for a in range(n, i, -1)]
    return BraidWord(n, tuple(first + second))


def make_generator(spec: HomotopyGeneratorSpec) -> BraidWord:
    n = spec.strand_count
    sigma = expand_sigma(spec.i, spec.j, n)
    x = x_braid(spec.i, n) if spec.use_x else identity(n)
    g_a = expand_classical(spec.g_a, n)
    g_b = expand_classical(spec.g_b, n)
    inner = multiply(g_a, x, g_b, sigma, invert(g_b), invert(x), invert(g_a))
    return commutator(sigma, inner)


def classical_generator(i: int, j: int, g: Sequence[SigmaLetter], n: int) -> BraidWord:
    """[sigma_ij, g sigma_ij g^-1] for g a word in sigma_i(i+1), ..., sigma_in."""
    if not 1 <= i < j <= n:
        raise StrandIndexError(f"need 1 <= i < j <= n, got i={i}, j={j}, n={n}")
    g = tuple(SigmaLetter(*s) for s in g)
    for s in g:
        if s.i != i or not i < s.j <= n:
            raise BraidError(f"{s} is not in the subgroup generated by s({i},{i + 1}) ... s({i},{n})")
    sigma = expand_sigma(i, j, n)
    return commutator(sigma, conjugate(expand_classical(g, n), sigma))


def reduced_classical_words(pairs: Sequence[tuple[int, int]], max_len: int) -> list[ClassicalWord]:
    """Freely reduced words of length <= max_len over the given sigma pairs, in shortlex order."""
    alphabet = sorted(SigmaLetter(a, b, e) for a, b in pairs for e in (1, -1))
    words: list[ClassicalWord] = [()]
    layer: list[ClassicalWord] = [()]
    for _ in range(max_len):
        layer = [w + (s,) for w in layer for s in alphabet if not w or w[-1] != s.inverse()]
        words.extend(layer)
    return words


def enumerate_generators(n: int, max_factor_len: int) -> Iterator[tuple[HomotopyGeneratorSpec, BraidWord]]:
    """All generator specs with factors of length <= max_factor_len, ordered by (i, j, use_x, g_a, g_b)."""
    if n < 2:
        raise StrandIndexError("generators need at least two strands")
    if max_factor_len < 0:
        raise BraidError("max_factor_len must be non-negative")
    for i in range(1, n + 1):
        factors = reduced_classical_words(classical_generator_set(i, n), max_factor_len)
        for j in range(i + 1, n + 1):
            for use_x in (False, True):
                for g_a in factors:
                    for g_b in factors:
                        spec = HomotopyGeneratorSpec(n, i, j, g_a, g_b, use_x)
                        yield spec, make_generator(spec)


# --------------------------------------------------------------------------- membership


def cyclic_reduce(letters: Sequence[Letter]) -> tuple[tuple[Letter, ...], tuple[Letter, ...]]:
    """Split a freely reduced word as t * core * t^-1 with ``core`` cyclically reduced; returns (t, core)."""
    lo, hi = 0, len(letters)
    while hi - lo >= 2 and letters[lo] == letters[hi - 1].inverse():
        lo += 1
        hi -= 1
    return tuple(letters[:lo]), tuple(letters[lo:hi])


def _least_rotation(core: tuple[Letter, ...]) -> tuple[int, tuple[Letter, ...]]:
    if not core:
        return 0, ()
    return min(((k, core[k:] + core[:k]) for k in range(len(core))), key=lambda kv: kv[1])


def _inverse_letters(xs: Sequence[Letter]) -> tuple[Letter, ...]:
    return tuple(x.inverse() for x in reversed(xs))


@dataclasses.dataclass(frozen=True)
class _TableEntry:
    spec: HomotopyGeneratorSpec
    exponent: int
    letters: tuple[Letter, ...]  # freely reduced generator word, raised to ``exponent``
    outer: tuple[Letter, ...]
    core: tuple[Letter, ...]
    rotation: int


@functools.lru_cache(maxsize=8)
def _generator_table(n: int, max_factor_len: int):
    """Index of generator words (and inverses) by least rotation of their cyclic core."""
    by_core: dict[tuple[Letter, ...], _TableEntry] = {}
    by_first: dict[Letter, list[_TableEntry]] = {}
    for spec, w in enumerate_generators(n, max_factor_len):
        reduced = tuple(reduce_letters(w.letters))
        if not reduced:
            continue
        for exponent, letters in ((1, reduced), (-1, _inverse_letters(reduced))):
            outer, core = cyclic_reduce(letters)
            rotation, key = _least_rotation(core)
            entry = _TableEntry(spec, exponent, letters, outer, core, rotation)
            by_core.setdefault(key, entry)
            by_first.setdefault(letters[0], []).append(entry)
    return by_core, by_first


@dataclasses.dataclass(frozen=True)
class Factor:
    conjugator: BraidWord
    spec: HomotopyGeneratorSpec
    exponent: int = 1

    def word(self) -> BraidWord:
        g = make_generator(self.spec)
        return conjugate(self.conjugator, g if self.exponent > 0 else invert(g))

    def format(self) -> str:
        return f"conj {self.conjugator} gen {self.spec.format()} exp={self.exponent}"


@dataclasses.dataclass(frozen=True)
class MembershipVerdict:
    status: str  # "member" | "non_member" | "unknown"
    query: BraidWord
    factors: tuple[Factor, ...] = ()
    moves: MoveCertificate | None = None
    witness: LinkingMatrix | None = None
    states: int = 0

    def product(self) -> BraidWord:
        out = identity(self.query.strand_count)
        for f in self.factors:
            out = multiply(out, f.word())
        return out

    def verify(self) -> bool:
        """Replay the certificate: moves take the query to a word equal to the factor product."""
        if self.status == "non_member":
            return self.witness is not None and not self.witness.is_zero()
        if self.status != "member":
            return True
        if self.moves is None or not self.moves.verify() or self.moves.start != self.query:
            return False
        return reduce_letters(self.product().letters) == reduce_letters(self.moves.end.letters)

    def lines(self) -> list[str]:
        if self.status == "non_member":
            (a, b), value = next(iter(self.witness.items()))
            return [f"non_member link {a} {b} {value}"]
        if self.status == "unknown":
            return [f"unknown states={self.states}"]
        return ["member", f"query {self.query}"] + [f.format() for f in self.factors] + self.moves.serialize().splitlines()

    def to_dict(self) -> dict:
        out: dict = {"status": self.status, "query": str(self.query), "states": self.states}
        if self.witness is not None:
            out["witness"] = [{"pair": list(k), "link": v} for k, v in self.witness.items()]
        if self.status == "member":
            out["factors"] = [
                {"conjugator": str(f.conjugator), "generator": f.spec.to_dict(), "exponent": f.exponent}
                for f in self.factors
            ]
            out["moves"] = self.moves.to_dict()
        return out


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self) -> bool:
        self.used += 1
        return self.used <= self.limit


def _match_single(r: tuple[Letter, ...], by_core, n: int) -> Factor | None:
    """Find g and a generator G with r = g G g^-1 after free reduction."""
    t, core = cyclic_reduce(r)
    rotation, key = _least_rotation(core)
    entry = by_core.get(key)
    if entry is None:
        return None
    d = entry.core
    k = (entry.rotation - rotation) % len(d)
    # core = d[k:] + d[:k] = d[:k]^-1 d d[:k], and G = outer d outer^-1
    g = tuple(reduce_letters(t + _inverse_letters(d[:k]) + _inverse_letters(entry.outer)))
    check = reduce_letters(g + entry.letters + _inverse_letters(g))
    if tuple(check) != r:
        return None
    return Factor(BraidWord(n, g), entry.spec, entry.exponent)


def _factor(r, by_core, by_first, n: int, depth: int, budget: _Budget, prefix_len: int):
    if not r:
        return []
    if not budget.spend():
        return None
    single = _match_single(r, by_core, n)
    if single is not None:
        return [single]
    if depth <= 1:
        return None
    for m in range(min(prefix_len, len(r) - 1) + 1):
        p = r[:m]
        for entry in by_first.get(r[m], ()):
            if not budget.spend():
                return None
            rest = tuple(reduce_letters(p + _inverse_letters(entry.letters) + r[m:]))
            if len(rest) >= len(r):
                continue
            # r = (p G p^-1) * rest
            tail = _factor(rest, by_core, by_first, n, depth - 1, budget, prefix_len)
            if tail is not None:
                return [Factor(BraidWord(n, p), entry.spec, entry.exponent)] + tail
            if budget.used > budget.limit:
                return None
    return None


def is_homotopic_to_identity(
    w: BraidWord,
    budget: SearchBudget | None = None,
    max_factor_len: int = 2,
    prefix_len: int = 3,
) -> MembershipVerdict:
    """
    Three-valued test for w in I(VP_n).

    Nonzero linking numbers give ``non_member``. Otherwise words reachable from
    w by relation moves (within ``budget``) are split greedily into conjugates of
    enumerated generators, at most ``budget.max_depth`` factors each; conjugators
    are matched exactly through cyclic reduction, or taken from prefixes of length
    at most ``prefix_len`` when peeling off a factor.
    """
    budget = budget or SearchBudget()
    n = w.strand_count
    link = linking_matrix(w)
    if not link.is_zero():
        return MembershipVerdict("non_member", w, witness=link)
    if n < 2:
        return MembershipVerdict("member", w, moves=MoveCertificate(w, (), w))
    by_core, by_first = _generator_table(n, max_factor_len)
    spent = _Budget(budget.max_states)
    for variant, cert in move_closure(w, budget):
        found = _factor(variant.letters, by_core, by_first, n, budget.max_depth, spent, prefix_len)
        if found is not None:
            return MembershipVerdict("member", w, tuple(found), cert, witness=link, states=spent.used)
        if spent.used > spent.limit:
            break
    return MembershipVerdict("unknown", w, witness=link, states=spent.used)
