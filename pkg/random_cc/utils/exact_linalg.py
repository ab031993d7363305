"""
Exact integer linear algebra

Fraction-free (Bareiss) elimination on Python integers, used for matrix-tree
counts and for boundary-matrix ranks over the rationals.
"""

import math
from functools import reduce
from typing import Dict, Iterable, List, Sequence

IntMatrix = Sequence[Sequence[int]]


def bareiss_determinant(matrix: IntMatrix) -> int:
    """Determinant of a square integer matrix using Bareiss' algorithm"""
    m = [[int(x) for x in row] for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    if any(len(row) != n for row in m):
        raise ValueError("bareiss_determinant needs a square matrix")

    sign = 1
    previous = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            # look for a pivot in the current column, det == 0 if none is found
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            factor = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // previous
            row_i[k] = 0
        previous = pivot
    return sign * m[n - 1][n - 1]


def bareiss_rank(matrix: IntMatrix) -> int:
    """Rank over the rationals of a dense integer matrix (fraction-free echelon form)"""
    m: List[List[int]] = [[int(x) for x in row] for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0

    rank = 0
    previous = 1
    for col in range(cols):
        pivot_row = next((r for r in range(rank, rows) if m[r][col] != 0), None)
        if pivot_row is None:
            continue
        m[rank], m[pivot_row] = m[pivot_row], m[rank]
        pivot = m[rank][col]
        top = m[rank]
        for r in range(rank + 1, rows):
            row = m[r]
            factor = row[col]
            for c in range(col, cols):
                row[c] = (pivot * row[c] - factor * top[c]) // previous
        previous = pivot
        rank += 1
        if rank == rows:
            break
    return rank


def _normalize(column: Dict[int, int]) -> Dict[int, int]:
    divisor = reduce(math.gcd, column.values(), 0)
    if divisor > 1:
        return {r: v // divisor for r, v in column.items()}
    return column


def sparse_column_rank(columns: Iterable[Dict[int, int]]) -> int:
    """
    Rank over the rationals of a sparse integer matrix given column by column.

    Each column is reduced against stored pivot columns keyed by their largest row
    index; integer combinations keep the arithmetic exact and a gcd division keeps
    entries small.
    """
    pivots: Dict[int, Dict[int, int]] = {}
    for raw in columns:
        column = {r: int(v) for r, v in raw.items() if v}
        while column:
            row = max(column)
            pivot_column = pivots.get(row)
            if pivot_column is None:
                pivots[row] = _normalize(column)
                break
            a = pivot_column[row]
            b = column[row]
            reduced: Dict[int, int] = {}
            for r in column.keys() | pivot_column.keys():
                value = a * column.get(r, 0) - b * pivot_column.get(r, 0)
                if value:
                    reduced[r] = value
            column = _normalize(reduced)
    return len(pivots)
