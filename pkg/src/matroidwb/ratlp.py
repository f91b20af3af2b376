"""Exact rational linear feasibility: find x >= 0 with Ax = b.

Phase-1 simplex with Bland's rule over Fractions; small dense systems only.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional


def solve_eq_nonneg(
    A: list[list[Fraction]], b: list[Fraction]
) -> Optional[list[Fraction]]:
    """One nonnegative solution of Ax = b, or None when infeasible."""
    m = len(A)
    if m == 0:
        return []
    n = len(A[0])
    rows = []
    rhs = []
    for i in range(m):
        if b[i] < 0:
            rows.append([Fraction(-x) for x in A[i]])
            rhs.append(Fraction(-b[i]))
        else:
            rows.append([Fraction(x) for x in A[i]])
            rhs.append(Fraction(b[i]))

    # tableau with artificial variables n..n+m-1, minimizing their sum
    width = n + m
    T = [
        rows[i] + [Fraction(int(i == j)) for j in range(m)] + [rhs[i]]
        for i in range(m)
    ]
    basis = [n + i for i in range(m)]
    # reduced-cost row z - c; artificials are basic, so their entries are 0
    obj = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(n):
            obj[j] += T[i][j]
    obj[width] = sum(rhs, Fraction(0))

    while True:
        enter = next((j for j in range(n) if obj[j] > 0), -1)
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][width] / T[i][enter]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            break  # cannot happen in phase 1, defensive
        _pivot(T, obj, basis, leave, enter, width)

    if obj[width] != 0:
        return None
    # pivot surviving zero-valued artificials out where possible
    for i in range(m):
        if basis[i] >= n and T[i][width] == 0:
            enter = next((j for j in range(n) if T[i][j] != 0), -1)
            if enter >= 0:
                _pivot(T, obj, basis, i, enter, width)
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][width]
    return x


def _pivot(T, obj, basis, leave, enter, width):
    piv = T[leave][enter]
    row = T[leave]
    for j in range(width + 1):
        row[j] /= piv
    for i in range(len(T)):
        if i == leave or T[i][enter] == 0:
            continue
        f = T[i][enter]
        ri = T[i]
        for j in range(width + 1):
            ri[j] -= f * row[j]
    if obj[enter] != 0:
        f = obj[enter]
        for j in range(width + 1):
            obj[j] -= f * row[j]
    basis[leave] = enter
