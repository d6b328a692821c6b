"""Dense linear algebra over GF(2) with bit-packed rows.

A matrix is a list of ints; bit j of row i is the entry in column j.
Everything here is plain Gaussian elimination, kept separate so both the
relation-guessing solver and the determinant checks share one implementation.
"""

from __future__ import annotations


def rref(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = list(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        bit = 1 << c
        pivot = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace(rows: list[int], ncols: int) -> list[int]:
    """Basis of {x : M x = 0}, each vector bit-packed over the ncols columns."""
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis: list[int] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = 1 << free
        for row, c in zip(reduced, pivots):
            if row & (1 << free):
                v |= 1 << c
        basis.append(v)
    return basis


def rank(rows: list[int], ncols: int) -> int:
    return len(rref(rows, ncols)[0])


def det_gf2(rows: list[int], n: int) -> int:
    """Determinant of an n x n bit matrix (0 or 1)."""
    return 1 if rank(rows, n) == n else 0
