"""
Planar diagrams of lambda words.

Each letter becomes a position-preserving tile built from adjacent swaps. For
l_ab with p = min(a, b), q = max(a, b): strand q is routed down to column p + 1
through virtual crossings, strands a and b meet in one classical crossing and
one virtual crossing, and strand q is routed back. The classical crossing of a
positive letter always has the over strand entering from the right; the inverse
letter is the tile read bottom to top, so its over strand enters from the left.
Rows run from the upper endpoints (row 0) to the lower endpoints.
"""

from __future__ import annotations

import dataclasses
from typing import NamedTuple

from .invariants import LinkingMatrix
from .word import BraidWord, Letter

CLASSICAL_OVER_LEFT = "classical-over-left"
CLASSICAL_OVER_RIGHT = "classical-over-right"
VIRTUAL = "virtual"


class Crossing(NamedTuple):
    row: int
    kind: str
    column: int  # the crossing swaps columns (column, column + 1)
    strands: tuple[int, int]  # (over, under) when classical, (left, right) when virtual
    sign: int  # 0 for virtual crossings


@dataclasses.dataclass(frozen=True)
class DiagramModel:
    strand_count: int
    strand_paths: tuple[tuple[int, ...], ...]  # strand k-1 -> column at each row boundary
    crossings: tuple[Crossing, ...]

    @property
    def rows(self) -> int:
        return len(self.strand_paths[0]) - 1

    def classical(self) -> list[Crossing]:
        return [c for c in self.crossings if c.kind != VIRTUAL]

    def sign_sums(self) -> LinkingMatrix:
        sums: dict[tuple[int, int], int] = {}
        for c in self.classical():
            sums[c.strands] = sums.get(c.strands, 0) + c.sign
        return LinkingMatrix(self.strand_count, sums)


def tile_swaps(x: Letter) -> list[tuple[int, bool]]:
    """(column, is_classical) adjacent swaps for one letter, top to bottom."""
    p, q = sorted((x.over, x.under))
    route = [(c, False) for c in range(q - 1, p, -1)]
    core = [(p, True), (p, False)] if x.over == q else [(p, False), (p, True)]
    if x.exponent < 0:
        core.reverse()
    return route + core + route[::-1]


def _layout_rows(n: int, letters, row0: int = 0):
    columns = list(range(1, n + 1))  # columns[c - 1] = strand currently in column c
    paths = [[k] for k in range(1, n + 1)]
    crossings = []
    row = row0
    for x in letters:
        for c, classical in tile_swaps(x):
            left, right = columns[c - 1], columns[c]
            if classical:
                over = x.over
                kind = CLASSICAL_OVER_LEFT if left == over else CLASSICAL_OVER_RIGHT
                under = right if left == over else left
                # over strand entering from the right is the sign carried by a positive letter
                sign = -1 if kind == CLASSICAL_OVER_RIGHT else 1
                crossings.append(Crossing(row, kind, c, (over, under), sign))
            else:
                crossings.append(Crossing(row, VIRTUAL, c, (left, right), 0))
            columns[c - 1], columns[c] = right, left
            for col, strand in enumerate(columns, start=1):
                paths[strand - 1].append(col)
            row += 1
        if columns != list(range(1, n + 1)):
            raise AssertionError(f"tile for {x} does not return strands to their positions")
    return tuple(tuple(p) for p in paths), tuple(crossings)


def layout(w: BraidWord) -> DiagramModel:
    paths, crossings = _layout_rows(w.strand_count, w.letters)
    return DiagramModel(w.strand_count, paths, crossings)


def stack(top: DiagramModel, bottom: DiagramModel) -> DiagramModel:
    """Place ``bottom`` under ``top``; both must return strands to their starting columns."""
    if top.strand_count != bottom.strand_count:
        raise ValueError("cannot stack diagrams with different strand counts")
    shift = top.rows
    paths = tuple(a + b[1:] for a, b in zip(top.strand_paths, bottom.strand_paths))
    crossings = top.crossings + tuple(c._replace(row=c.row + shift) for c in bottom.crossings)
    return DiagramModel(top.strand_count, paths, crossings)


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2")


def _f(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def to_svg(d: DiagramModel, scale_x: float = 40.0, scale_y: float = 40.0) -> bytes:
    """Deterministic SVG: broken under-strands at classical crossings, circles at virtual ones."""
    margin = 20.0
    n = d.strand_count
    rows = max(d.rows, 1)
    width = 2 * margin + (n - 1) * scale_x
    height = 2 * margin + rows * scale_y + 14
    top = margin + 14

    def x_of(col: int) -> float:
        return margin + (col - 1) * scale_x

    def y_of(row: int) -> float:
        return top + row * scale_y

    def line(x1, y1, x2, y2, strand):
        color = _PALETTE[(strand - 1) % len(_PALETTE)]
        return (
            f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
            f'stroke="{color}" stroke-width="2" stroke-linecap="round"/>'
        )

    body = []
    for k in range(1, n + 1):
        body.append(f'<text x="{_f(x_of(k))}" y="{_f(margin + 4)}" text-anchor="middle" font-size="12">{k}</text>')
    by_row = {c.row: c for c in d.crossings}
    gap = 0.18
    for row in range(rows):
        c = by_row.get(row)
        y1, y2 = y_of(row), y_of(row + 1)
        for k in range(1, n + 1):
            col = d.strand_paths[k - 1][row] if d.rows else k
            if c is None or k not in c.strands:
                body.append(line(x_of(col), y1, x_of(col), y2, k))
        if c is None:
            continue
        xl, xr = x_of(c.column), x_of(c.column + 1)
        left, right = c.strands[::-1] if c.kind == CLASSICAL_OVER_RIGHT else c.strands
        down = (left, xl, xr)  # strand moving left to right
        up = (right, xr, xl)
        if c.kind == VIRTUAL:
            for strand, xa, xb in (down, up):
                body.append(line(xa, y1, xb, y2, strand))
            cx, cy = (xl + xr) / 2, (y1 + y2) / 2
            r = 0.22 * min(scale_x, scale_y)
            body.append(f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" fill="none" stroke="#000" stroke-width="1"/>')
            continue
        over, under = c.strands
        for strand, xa, xb in (down, up):
            if strand == over:
                body.append(line(xa, y1, xb, y2, strand))
            else:
                mx1, my1 = xa + (0.5 - gap) * (xb - xa), y1 + (0.5 - gap) * (y2 - y1)
                mx2, my2 = xa + (0.5 + gap) * (xb - xa), y1 + (0.5 + gap) * (y2 - y1)
                body.append(line(xa, y1, mx1, my1, strand))
                body.append(line(mx2, my2, xb, y2, strand))
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">'
    )
    return ("\n".join([head, *body, "</svg>"]) + "\n").encode("utf-8")
