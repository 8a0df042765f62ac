"""
Defining relations of VP_n as position-indexed rewriting moves, and a bounded
bidirectional search for word equivalence that emits replayable certificates.

Relations (for distinct strand indices, s(a, b) = +1 if a < b else -1):

    commute:  l_jk l_in = l_in l_jk
    mixed:    l_ki^s(ki) l_kj^s(kj) l_ij^s(ij) = l_ij^s(ij) l_kj^s(kj) l_ki^s(ki)

The mixed relation as originally printed carries s(ij) on the middle letter of
the right-hand side. That form does not balance exponent sums; it is kept as
``RelationVariant.PRINTED`` for auditing only.
"""

from __future__ import annotations

import dataclasses
import enum
import functools
import itertools
import re
from collections import deque
from typing import Iterable, Sequence

from .invariants import exponent_sums, exponent_vector
from .word import BraidError, BraidWord, Letter, StrandCountMismatch, all_letters, parse_word

COMMUTE = "commute"
MIXED = "mixed"
FREE_INSERT = "free_insert"
FREE_DELETE = "free_delete"


class RelationVariant(str, enum.Enum):
    CORRECTED = "corrected"
    PRINTED = "printed"


class IllegalMove(BraidError):
    pass


def sign_s(i: int, j: int) -> int:
    if i == j:
        raise BraidError(f"s(i,j) needs distinct indices, got {i} twice")
    return 1 if i < j else -1


@dataclasses.dataclass(frozen=True, order=True)
class RelationMove:
    """
    One rewriting step at ``position``.

    params by kind:
      commute      (left letter, right letter) as found in the word
      mixed        (i, j, k, direction, inverted) with direction "ltr" or "rtl"
      free_insert  the first inserted letter x (x x^-1 is inserted)
      free_delete  the first deleted letter x (x x^-1 is removed)
    """

    kind: str
    position: int
    params: tuple

    def inverse(self) -> RelationMove:
        if self.kind == COMMUTE:
            left, right = self.params
            return RelationMove(COMMUTE, self.position, (right, left))
        if self.kind == MIXED:
            i, j, k, direction, inverted = self.params
            return RelationMove(MIXED, self.position, (i, j, k, "rtl" if direction == "ltr" else "ltr", inverted))
        if self.kind == FREE_INSERT:
            return RelationMove(FREE_DELETE, self.position, self.params)
        return RelationMove(FREE_INSERT, self.position, self.params)

    def format(self) -> str:
        if self.kind == COMMUTE:
            left, right = self.params
            args = f"{Letter(*left)} {Letter(*right)}"
        elif self.kind == MIXED:
            i, j, k, direction, inverted = self.params
            args = f"i={i} j={j} k={k} {direction}" + (" inv" if inverted else "")
        else:
            args = str(Letter(*self.params))
        return f"{self.kind} @{self.position} {args}"


def mixed_sides(i: int, j: int, k: int, variant: RelationVariant = RelationVariant.CORRECTED):
    """Left and right sides of the mixed relation for the distinct triple (i, j, k)."""
    lhs = (Letter(k, i, sign_s(k, i)), Letter(k, j, sign_s(k, j)), Letter(i, j, sign_s(i, j)))
    middle = sign_s(k, j) if variant == RelationVariant.CORRECTED else sign_s(i, j)
    rhs = (Letter(i, j, sign_s(i, j)), Letter(k, j, middle), Letter(k, i, sign_s(k, i)))
    return lhs, rhs


def _invert_letters(xs: Sequence[Letter]) -> tuple[Letter, ...]:
    return tuple(x.inverse() for x in reversed(xs))


@functools.lru_cache(maxsize=None)
def _mixed_table(n: int, variant: RelationVariant) -> dict[tuple[Letter, ...], list[tuple[tuple, tuple]]]:
    """Map each three-letter window to the (params, replacement) pairs that rewrite it."""
    table: dict[tuple[Letter, ...], list[tuple[tuple, tuple]]] = {}
    for i, j, k in itertools.permutations(range(1, n + 1), 3):
        lhs, rhs = mixed_sides(i, j, k, variant)
        for inverted in (False, True):
            a, b = (_invert_letters(lhs), _invert_letters(rhs)) if inverted else (lhs, rhs)
            table.setdefault(a, []).append(((i, j, k, "ltr", inverted), b))
            table.setdefault(b, []).append(((i, j, k, "rtl", inverted), a))
    return table


def _commutes(x: Letter, y: Letter) -> bool:
    return len({x.over, x.under, y.over, y.under}) == 4


def _relation_moves(letters: Sequence[Letter], n: int, variant: RelationVariant, window=None) -> list[RelationMove]:
    """Commute and mixed moves; ``window`` restricts to moves overlapping positions [lo, hi]."""
    moves = []
    size = len(letters)
    table = _mixed_table(n, variant)
    lo, hi = (0, size) if window is None else window
    for p in range(max(0, lo - 1), min(size - 1, hi + 1)):
        x, y = letters[p], letters[p + 1]
        if _commutes(x, y):
            moves.append(RelationMove(COMMUTE, p, (tuple(x), tuple(y))))
    for p in range(max(0, lo - 2), min(size - 2, hi + 1)):
        for params, _ in table.get(tuple(letters[p:p + 3]), ()):
            moves.append(RelationMove(MIXED, p, params))
    return moves


def _free_deletes(letters: Sequence[Letter]) -> list[RelationMove]:
    return [
        RelationMove(FREE_DELETE, p, tuple(letters[p]))
        for p in range(len(letters) - 1)
        if letters[p + 1] == letters[p].inverse()
    ]


def applicable_moves(
    w: BraidWord,
    variant: RelationVariant = RelationVariant.CORRECTED,
    max_word_length: int | None = None,
) -> list[RelationMove]:
    """
    All legal moves on ``w`` sorted by (kind, position, params). Free insertions
    are included only when ``max_word_length`` leaves room for two more letters.
    """
    letters = w.letters
    moves = sorted(_relation_moves(letters, w.strand_count, variant) + _free_deletes(letters))
    if max_word_length is None or len(letters) + 2 > max_word_length:
        return moves
    # insertions come out already ordered; splice them in ahead of the mixed moves
    alphabet = [tuple(x) for x in all_letters(w.strand_count)]
    inserts = [RelationMove(FREE_INSERT, p, x) for p in range(len(letters) + 1) for x in alphabet]
    cut = next((k for k, m in enumerate(moves) if m.kind > FREE_INSERT), len(moves))
    return moves[:cut] + inserts + moves[cut:]


def _apply(letters: tuple[Letter, ...], move: RelationMove, n: int, variant: RelationVariant) -> tuple[Letter, ...]:
    p = move.position
    if move.kind == COMMUTE:
        left, right = (Letter(*x) for x in move.params)
        if p < 0 or p + 2 > len(letters) or letters[p] != left or letters[p + 1] != right or not _commutes(left, right):
            raise IllegalMove(f"commute not applicable at {p}")
        return letters[:p] + (right, left) + letters[p + 2:]
    if move.kind == MIXED:
        window = tuple(letters[p:p + 3]) if p >= 0 else ()
        for params, replacement in _mixed_table(n, variant).get(window, ()):
            if params == tuple(move.params):
                return letters[:p] + replacement + letters[p + 3:]
        raise IllegalMove(f"mixed move {move.params} not applicable at {p}")
    x = Letter(*move.params)
    if move.kind == FREE_INSERT:
        if not 0 <= p <= len(letters):
            raise IllegalMove(f"insert position {p} out of range")
        if max(x.over, x.under) > n or x.over == x.under or x.exponent not in (1, -1):
            raise IllegalMove(f"cannot insert {x} into a {n}-strand word")
        return letters[:p] + (x, x.inverse()) + letters[p:]
    if move.kind == FREE_DELETE:
        if p < 0 or p + 2 > len(letters) or letters[p] != x or letters[p + 1] != x.inverse():
            raise IllegalMove(f"no cancelling pair {x} at {p}")
        return letters[:p] + letters[p + 2:]
    raise IllegalMove(f"unknown move kind {move.kind!r}")


def apply_move(w: BraidWord, move: RelationMove, variant: RelationVariant = RelationVariant.CORRECTED) -> BraidWord:
    return BraidWord(w.strand_count, _apply(w.letters, move, w.strand_count, variant))


def reduce_with_steps(letters: Iterable[Letter]) -> tuple[tuple[Letter, ...], list[RelationMove]]:
    """Free reduction that records each cancellation as a free_delete move."""
    out: list[Letter] = []
    steps = []
    for x in letters:
        if out and out[-1] == x.inverse():
            steps.append(RelationMove(FREE_DELETE, len(out) - 1, tuple(out[-1])))
            out.pop()
        else:
            out.append(x)
    return tuple(out), steps


# --------------------------------------------------------------------------- certificates


@dataclasses.dataclass(frozen=True)
class MoveCertificate:
    start: BraidWord
    steps: tuple[RelationMove, ...]
    end: BraidWord
    variant: RelationVariant = RelationVariant.CORRECTED

    def replay(self) -> BraidWord:
        """Apply every step from ``start``; raises IllegalMove if any step is not legal."""
        letters = self.start.letters
        for m in self.steps:
            letters = _apply(letters, m, self.start.strand_count, self.variant)
        return BraidWord(self.start.strand_count, letters)

    def verify(self) -> bool:
        try:
            return self.replay() == self.end
        except IllegalMove:
            return False

    def inverse(self) -> MoveCertificate:
        return MoveCertificate(self.end, tuple(m.inverse() for m in reversed(self.steps)), self.start, self.variant)

    def then(self, other: MoveCertificate) -> MoveCertificate:
        if self.end != other.start:
            raise BraidError("certificates do not chain")
        return MoveCertificate(self.start, self.steps + other.steps, other.end, self.variant)

    def serialize(self) -> str:
        lines = [f"start {self.start}"]
        if self.variant != RelationVariant.CORRECTED:
            lines.append(f"relations {self.variant.value}")
        lines.extend(m.format() for m in self.steps)
        lines.append(f"end {self.end}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "start": str(self.start),
            "end": str(self.end),
            "relations": self.variant.value,
            "steps": [m.format() for m in self.steps],
        }


_LETTER = re.compile(r"l\((\d+),(\d+)\)(\^-1)?")


def _parse_letter(text: str) -> tuple:
    m = _LETTER.fullmatch(text)
    if m is None:
        raise BraidError(f"bad letter {text!r}")
    return (int(m.group(1)), int(m.group(2)), -1 if m.group(3) else 1)


def parse_move(line: str) -> RelationMove:
    kind, at, *args = line.split()
    if not at.startswith("@"):
        raise BraidError(f"bad move line {line!r}")
    position = int(at[1:])
    if kind == COMMUTE:
        params = (_parse_letter(args[0]), _parse_letter(args[1]))
    elif kind == MIXED:
        values = dict(a.split("=") for a in args if "=" in a)
        direction = "rtl" if "rtl" in args else "ltr"
        params = (int(values["i"]), int(values["j"]), int(values["k"]), direction, "inv" in args)
    elif kind in (FREE_INSERT, FREE_DELETE):
        params = _parse_letter(args[0])
    else:
        raise BraidError(f"unknown move kind {kind!r}")
    return RelationMove(kind, position, params)


def parse_certificate(text: str) -> MoveCertificate:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("start ") or not lines[-1].startswith("end "):
        raise BraidError("certificate must begin with 'start' and end with 'end'")
    start = parse_word(lines[0][len("start "):])
    end = parse_word(lines[-1][len("end "):])
    variant = RelationVariant.CORRECTED
    steps = []
    for ln in lines[1:-1]:
        if ln.startswith("relations "):
            variant = RelationVariant(ln.split()[1])
        else:
            steps.append(parse_move(ln))
    return MoveCertificate(start, tuple(steps), end, variant)


# --------------------------------------------------------------------------- relation audit


@dataclasses.dataclass
class RelationReport:
    variant: RelationVariant
    max_n: int
    checked: dict[str, int]
    violations: list[dict]

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        out = [
            f"relations {self.variant.value} n<={self.max_n} "
            + " ".join(f"{family}={count}" for family, count in self.checked.items())
            + f" violations={len(self.violations)}"
        ]
        for v in self.violations:
            diffs = " ".join(f"l({a},{b}):{lhs}/{rhs}" for (a, b), lhs, rhs in v["differences"])
            out.append(f"violation {v['family']} indices={','.join(map(str, v['indices']))} {diffs}")
        return out

    def to_dict(self) -> dict:
        return {
            "variant": self.variant.value,
            "max_n": self.max_n,
            "checked": self.checked,
            "violations": [
                {**v, "indices": list(v["indices"]), "differences": [[list(k), a, b] for k, a, b in v["differences"]]}
                for v in self.violations
            ],
        }


def _balance(lhs: Sequence[Letter], rhs: Sequence[Letter]) -> list:
    left, right = exponent_sums(lhs), exponent_sums(rhs)
    keys = sorted(set(left) | set(right))
    return [(k, left.get(k, 0), right.get(k, 0)) for k in keys if left.get(k, 0) != right.get(k, 0)]


def validate_relation_set(variant: RelationVariant = RelationVariant.CORRECTED, max_n: int = 6) -> RelationReport:
    """
    Check that both sides of every relation instance on at most ``max_n`` strands
    have equal exponent sums. Index choices do not depend on n beyond their range,
    so checking on ``max_n`` strands covers every smaller n.
    """
    checked = {"commute": 0, "mixed": 0}
    violations = []
    for j, k, i, m in itertools.permutations(range(1, max_n + 1), 4):
        lhs = (Letter(j, k), Letter(i, m))
        diffs = _balance(lhs, lhs[::-1])
        checked["commute"] += 1
        if diffs:
            violations.append({"family": "commute", "indices": (i, j, k, m), "differences": diffs})
    for i, j, k in itertools.permutations(range(1, max_n + 1), 3):
        lhs, rhs = mixed_sides(i, j, k, variant)
        checked["mixed"] += 1
        diffs = _balance(lhs, rhs)
        if diffs:
            violations.append({"family": "mixed", "indices": (i, j, k), "differences": diffs})
    return RelationReport(variant, max_n, checked, violations)


# --------------------------------------------------------------------------- bounded search


@dataclasses.dataclass(frozen=True)
class SearchBudget:
    max_depth: int = 6
    max_states: int = 100_000
    max_word_length: int = 40

    def __post_init__(self):
        if min(self.max_depth, self.max_states, self.max_word_length) <= 0:
            raise BraidError("search budget entries must be positive")


@dataclasses.dataclass(frozen=True)
class EquivalenceVerdict:
    status: str  # "equivalent" | "distinct" | "unknown"
    certificate: MoveCertificate | None = None
    witness: tuple = ()
    states: int = 0

    def lines(self) -> list[str]:
        if self.status == "equivalent":
            return ["equivalent"] + self.certificate.serialize().splitlines()
        if self.status == "distinct":
            return ["distinct"] + [f"exp {a} {b} {x} {y}" for (a, b), x, y in self.witness]
        return [f"unknown states={self.states}"]

    def to_dict(self) -> dict:
        out: dict = {"status": self.status, "states": self.states}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        if self.witness:
            out["witness"] = [{"pair": list(k), "left": x, "right": y} for k, x, y in self.witness]
        return out


def _neighbours(state: tuple[Letter, ...], n: int, variant: RelationVariant, max_len: int, inserts: bool):
    """
    Macro edges out of a freely reduced word: a relation move, optionally preceded
    by one free insertion that the move consumes, followed by free reduction.
    """
    for m in _relation_moves(state, n, variant):
        reduced, tail = reduce_with_steps(_apply(state, m, n, variant))
        yield reduced, (m, *tail)
    if not inserts or len(state) + 2 > max_len:
        return
    for p in range(len(state) + 1):
        for x in all_letters(n):
            ins = RelationMove(FREE_INSERT, p, tuple(x))
            grown = state[:p] + (x, x.inverse()) + state[p:]
            for m in _relation_moves(grown, n, variant, window=(p, p + 1)):
                reduced, tail = reduce_with_steps(_apply(grown, m, n, variant))
                yield reduced, (ins, m, *tail)


def _bidirectional(a, b, n, variant, budget: SearchBudget, inserts: bool, states_used: int):
    parents = ({a: None}, {b: None})  # state -> (previous state, steps from previous)
    frontiers = ([a], [b])
    depths = [0, 0]
    states = states_used + 2
    # macro edges reduce freely, so the graph is not symmetric: an exhausted side
    # proves nothing and the other side keeps going
    while (frontiers[0] or frontiers[1]) and depths[0] + depths[1] < budget.max_depth:
        sizes = [len(f) if f else float("inf") for f in frontiers]
        side = 0 if sizes[0] <= sizes[1] else 1
        mine, other = parents[side], parents[1 - side]
        nxt = []
        for state in frontiers[side]:
            for reduced, steps in _neighbours(state, n, variant, budget.max_word_length, inserts):
                if reduced in mine:
                    continue
                mine[reduced] = (state, steps)
                states += 1
                if reduced in other:
                    return reduced, parents, states
                if states >= budget.max_states:
                    return None, parents, states
                nxt.append(reduced)
        frontiers[side][:] = []
        frontiers = (nxt, frontiers[1]) if side == 0 else (frontiers[0], nxt)
        depths[side] += 1
    return None, parents, states


def _path_steps(parents: dict, state) -> list[RelationMove]:
    chunks = []
    while parents[state] is not None:
        prev, steps = parents[state]
        chunks.append(steps)
        state = prev
    return [m for chunk in reversed(chunks) for m in chunk]


def equivalent_bounded(
    a: BraidWord,
    b: BraidWord,
    budget: SearchBudget | None = None,
    variant: RelationVariant = RelationVariant.CORRECTED,
) -> EquivalenceVerdict:
    """
    Decide a = b in VP_n within ``budget``.

    Both words are freely reduced, then a bidirectional breadth-first search runs
    over relation moves, first without free insertions and then with them (capped
    by ``max_word_length``). Distinct exponent vectors settle the question at once.
    """
    if a.strand_count != b.strand_count:
        raise StrandCountMismatch(f"strand counts differ: {a.strand_count} vs {b.strand_count}")
    budget = budget or SearchBudget()
    n = a.strand_count
    ea, eb = exponent_vector(a), exponent_vector(b)
    if ea != eb:
        return EquivalenceVerdict("distinct", witness=tuple(ea.differences(eb)))

    ra, steps_a = reduce_with_steps(a.letters)
    rb, steps_b = reduce_with_steps(b.letters)
    head = MoveCertificate(a, tuple(steps_a), BraidWord(n, ra), variant)
    tail = MoveCertificate(b, tuple(steps_b), BraidWord(n, rb), variant).inverse()
    if ra == rb:
        return EquivalenceVerdict("equivalent", head.then(tail), states=1)

    states = 0
    for inserts in (False, True):
        meet, parents, states = _bidirectional(ra, rb, n, variant, budget, inserts, states)
        if meet is not None:
            forward = _path_steps(parents[0], meet)
            backward = [m.inverse() for m in reversed(_path_steps(parents[1], meet))]
            middle = MoveCertificate(head.end, tuple(forward + backward), tail.start, variant)
            return EquivalenceVerdict("equivalent", head.then(middle).then(tail), states=states)
        if states >= budget.max_states:
            break
    return EquivalenceVerdict("unknown", states=states)


def move_closure(
    w: BraidWord,
    budget: SearchBudget,
    variant: RelationVariant = RelationVariant.CORRECTED,
):
    """
    Breadth-first stream of (word, certificate from w) over insertion-free moves,
    starting with the free reduction of ``w``; bounded by depth and state count.
    """
    n = w.strand_count
    start, steps = reduce_with_steps(w.letters)
    parents = {start: None}
    queue = deque([(start, 0)])
    head = MoveCertificate(w, tuple(steps), BraidWord(n, start), variant)
    while queue:
        state, depth = queue.popleft()
        cert = MoveCertificate(head.end, tuple(_path_steps(parents, state)), BraidWord(n, state), variant)
        yield BraidWord(n, state), head.then(cert)
        if depth >= budget.max_depth:
            continue
        for reduced, moves in _neighbours(state, n, variant, budget.max_word_length, inserts=False):
            if reduced in parents or len(parents) >= budget.max_states:
                continue
            parents[reduced] = (state, moves)
            queue.append((reduced, depth + 1))
