"""Exact Gaussian elimination over Q."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = tuple[Fraction, ...]


def rref(rows: Sequence[Sequence]) -> tuple[Row, ...]:
    """Reduced row echelon form with zero rows dropped.

    The result is canonical for the row space, so it doubles as a hashable
    key for a linear subspace.
    """
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat:
        return ()
    ncols = len(mat[0])
    pivot_row = 0
    for col in range(ncols):
        pr = next((i for i in range(pivot_row, len(mat)) if mat[i][col] != 0), None)
        if pr is None:
            continue
        mat[pivot_row], mat[pr] = mat[pr], mat[pivot_row]
        piv = mat[pivot_row][col]
        if piv != 1:
            mat[pivot_row] = [x / piv for x in mat[pivot_row]]
        prow = mat[pivot_row]
        for i in range(len(mat)):
            if i != pivot_row and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], prow)]
        pivot_row += 1
        if pivot_row == len(mat):
            break
    return tuple(tuple(r) for r in mat[:pivot_row])


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows))


def reduce_vector(basis: Sequence[Row], vec: Sequence) -> list[Fraction]:
    """Residual of ``vec`` after elimination against an RREF basis."""
    out = [Fraction(x) for x in vec]
    for row in basis:
        col = next(i for i, x in enumerate(row) if x != 0)
        f = out[col]
        if f:
            out = [a - f * b for a, b in zip(out, row)]
    return out


def in_span(basis: Sequence[Row], vec: Sequence) -> bool:
    return not any(reduce_vector(basis, vec))


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : rows @ x = 0}``."""
    basis = rref(rows) if rows else ()
    pivots = [next(i for i, x in enumerate(r) if x != 0) for r in basis]
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in zip(basis, pivots):
            v[pc] = -r[f]
        out.append(v)
    return out
