"""Exact determinants and ranks by fraction-free (Bareiss) elimination."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


def integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    """Scale each rational row by the lcm of its denominators; rank is unchanged."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        g = gcd(g, x)
        if g == 1:
            return row
    return row if g in (0, 1) else [x // g for x in row]


def rank(rows: Sequence[Sequence]) -> int:
    """Exact rank of a rational matrix."""
    m = [_primitive(r) for r in integer_rows(rows)]
    m = [r for r in m if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rk = 0
    prev = 1
    for col in range(ncols):
        pivot = next((i for i in range(rk, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[rk], m[pivot] = m[pivot], m[rk]
        p = m[rk][col]
        for i in range(rk + 1, len(m)):
            a = m[i][col]
            m[i] = [(p * x - a * y) // prev for x, y in zip(m[i], m[rk])]
        prev = p
        rk += 1
        if rk == len(m):
            break
    return rk


def det(matrix: Sequence[Sequence]) -> Fraction | int:
    """Exact determinant; integer input gives an int."""
    n = len(matrix)
    if n == 0:
        return 1
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant of a non-square matrix")
    scale = 1
    rows = []
    for row in matrix:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        scale *= den
        rows.append([int(x * den) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if rows[i][k]), None)
            if swap is None:
                return 0
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        pk = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * pk - rows[i][k] * rows[k][j]) // prev
        prev = pk
    value = sign * rows[n - 1][n - 1]
    if scale == 1:
        return value
    return Fraction(value, scale)
