"""Fraction-free Gaussian elimination over Z for exact rational systems."""
from __future__ import annotations

from math import lcm
from typing import Sequence

from ._coeff import Q


def _integer_rows(rows: Sequence[Sequence], rhs: Sequence) -> list[list[int]]:
    out = []
    for row, b in zip(rows, rhs):
        entries = [Q(v) for v in row] + [Q(b)]
        scale = lcm(*(int(v.denominator) for v in entries))
        out.append([int(v.numerator) * (scale // int(v.denominator)) for v in entries])
    return out


def echelon(m: list[list[int]], ncols: int) -> list[tuple[int, int]]:
    """Bareiss elimination in place on an integer matrix.

    Pivot columns are scanned left to right and the pivot row is the first
    remaining row with a nonzero entry.  Returns ``(row, col)`` of each pivot;
    only the first ``ncols`` columns are eligible as pivots.
    """
    nrows = len(m)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        top = m[r]
        a = top[c]
        width = len(top)
        for i in range(r + 1, nrows):
            row = m[i]
            b = row[c]
            if b:
                for j in range(c + 1, width):
                    row[j] = (a * row[j] - b * top[j]) // prev
            else:
                for j in range(c + 1, width):
                    row[j] = (a * row[j]) // prev
            row[c] = 0
        prev = a
        pivots.append((r, c))
        r += 1
    return pivots


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list | None:
    """Solve ``rows @ x = rhs`` exactly; free variables are pinned to 0.

    Returns ``None`` when the system is inconsistent.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    m = _integer_rows(rows, rhs)
    pivots = echelon(m, ncols)
    rank = len(pivots)
    if any(m[i][ncols] for i in range(rank, len(m))):
        return None
    x = [Q(0)] * ncols
    for r, c in reversed(pivots):
        row = m[r]
        s = Q(row[ncols])
        for j in range(c + 1, ncols):
            if row[j] and x[j]:
                s -= row[j] * x[j]
        x[c] = s / row[c]
    return x
