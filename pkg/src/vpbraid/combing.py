"""
Combing a pure virtual braid into b = w_2 w_3 ... w_n, where w_j lies in the
kernel of forgetting strand j, and writing each kernel word as a product of
conjugates of letters touching its top strand.
"""

from __future__ import annotations

import dataclasses

from .invariants import exponent_vector
from .presentation import SearchBudget, equivalent_bounded
from .word import (
    BraidError,
    BraidWord,
    Letter,
    StrandIndexError,
    delete_strand,
    embed,
    free_reduce,
    identity,
    invert,
    multiply,
)


class KernelPreconditionError(BraidError):
    pass


@dataclasses.dataclass(frozen=True)
class ConjugateProduct:
    """w = prod(v a v^-1 for v, a in factors) * residual, exactly after free reduction."""

    top: int
    factors: tuple[tuple[BraidWord, Letter], ...]
    residual: BraidWord
    verified: bool  # residual freely reduces to the identity

    @property
    def length(self) -> int:
        return len(self.factors)

    def expand(self) -> BraidWord:
        n = self.residual.strand_count
        out = identity(n)
        for v, a in self.factors:
            out = multiply(out, v, BraidWord(n, (a,)), invert(v))
        return multiply(out, self.residual)


@dataclasses.dataclass(frozen=True)
class KernelDecomposition:
    strand_count: int
    parts: tuple[BraidWord, ...]  # w_2 .. w_n, each on strand_count strands
    conjugate_forms: tuple[ConjugateProduct, ...]

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(c.length for c in self.conjugate_forms)

    def part(self, j: int) -> BraidWord:
        return self.parts[j - 2]

    def product(self) -> BraidWord:
        out = identity(self.strand_count)
        for w in self.parts:
            out = multiply(out, w)
        return out

    def report(self) -> str:
        lines = []
        for j, (w, form) in enumerate(zip(self.parts, self.conjugate_forms), start=2):
            lines.append(f"part {j}")
            lines.append(f"word {w}")
            lines.append(f"length {form.length}")
            for v, a in form.factors:
                lines.append(f"factor {v} | {a}")
            lines.append(f"residual {form.residual}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "strand_count": self.strand_count,
            "parts": [
                {
                    "index": j,
                    "word": str(w),
                    "length": form.length,
                    "factors": [{"conjugator": str(v), "letter": str(a)} for v, a in form.factors],
                    "residual": str(form.residual),
                    "verified": form.verified,
                }
                for j, (w, form) in enumerate(zip(self.parts, self.conjugate_forms), start=2)
            ],
        }


def _comb_parts(b: BraidWord) -> list[BraidWord]:
    n = b.strand_count
    if n == 1:
        return []
    lower = delete_strand(b, n)
    lower_parts = _comb_parts(lower)
    # b = c * w_n with c the top strand forgotten and pushed back in
    w_n = free_reduce(multiply(invert(embed(lower, n)), b))
    return [embed(w, n) for w in lower_parts] + [w_n]


def comb(b: BraidWord) -> KernelDecomposition:
    n = b.strand_count
    if n < 2:
        raise StrandIndexError("combing needs at least two strands")
    parts = tuple(_comb_parts(b))
    forms = tuple(
        kernel_conjugate_form(BraidWord(j, w.letters), j) for j, w in enumerate(parts, start=2)
    )
    return KernelDecomposition(n, parts, forms)


def _check_kernel(w: BraidWord, n: int) -> bool:
    if not 2 <= n <= w.strand_count:
        raise StrandIndexError(f"top strand {n} out of range 2..{w.strand_count}")
    if any(max(x.over, x.under) > n for x in w.letters):
        raise KernelPreconditionError(f"word uses strands above {n}")
    projected = delete_strand(BraidWord(n, w.letters), n)
    if not exponent_vector(projected).is_zero():
        raise KernelPreconditionError(f"forgetting strand {n} leaves a nonzero exponent vector")
    return free_reduce(projected).is_identity()


def kernel_conjugate_form(w: BraidWord, n: int) -> ConjugateProduct:
    """
    Scan w = u_1 a_1 u_2 a_2 ... a_k u_(k+1), with a's the letters touching strand
    ``n``, and emit factors (u_1...u_j, a_j) plus the residual u_1...u_(k+1).
    """
    verified = _check_kernel(w, n)
    size = w.strand_count
    factors = []
    prefix: list[Letter] = []
    for x in w.letters:
        if x.touches(n):
            factors.append((BraidWord(size, tuple(prefix)), x))
        else:
            prefix.append(x)
    return ConjugateProduct(n, tuple(factors), BraidWord(size, tuple(prefix)), verified)


def kernel_length(w: BraidWord, n: int) -> int:
    return kernel_conjugate_form(w, n).length


def heuristic_length_reduction(w: BraidWord, n: int, budget: SearchBudget | None = None) -> BraidWord:
    """
    Shrink the number of top-strand letters greedily.

    After free reduction, repeatedly try deleting a pair of mutually inverse
    top-strand letters; a deletion is kept only when the bounded search proves
    the shorter word equal to the current one. Returns a word that is never
    longer in top-strand letters; no minimality is claimed.
    """
    budget = budget or SearchBudget(max_depth=4, max_states=5_000, max_word_length=len(w) + 4)
    _check_kernel(w, n)
    current = free_reduce(w)
    improved = True
    while improved:
        improved = False
        slots = [p for p, x in enumerate(current.letters) if x.touches(n)]
        for a_pos, p in enumerate(slots):
            for q in slots[a_pos + 1:]:
                if current.letters[q] != current.letters[p].inverse():
                    continue
                shorter = free_reduce(
                    current.with_letters(x for t, x in enumerate(current.letters) if t not in (p, q))
                )
                if equivalent_bounded(shorter, current, budget).status == "equivalent":
                    current = shorter
                    improved = True
                    break
            if improved:
                break
    return current
