"""Smith normal form of small integer matrices by Euclidean pivoting."""

from __future__ import annotations

from typing import Sequence


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors ``d_1 | d_2 | ... | d_r`` (all positive).

    The number of returned entries is the rank of the matrix over Q.
    """
    a = [list(map(int, row)) for row in matrix]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    diag: list[int] = []
    t = 0
    while t < min(nrows, ncols):
        pivot = _min_nonzero(a, t, nrows, ncols)
        if pivot is None:
            break
        i, j = pivot
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, nrows):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for k in range(t, ncols):
                            ri[k] -= q * rt[k]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        done = False
            if not done:
                i, j = _min_nonzero_cross(a, t, nrows, ncols)
                a[t], a[i] = a[i], a[t]
                for row in a:
                    row[t], row[j] = row[j], row[t]
                continue
            bad = _indivisible(a, t, nrows, ncols, p)
            if bad is None:
                break
            # fold the offending row into row t and repeat
            rt, rb = a[t], a[bad]
            for k in range(t, ncols):
                rt[k] += rb[k]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def _min_nonzero(a, t, nrows, ncols):
    best = None
    for i in range(t, nrows):
        row = a[i]
        for j in range(t, ncols):
            v = row[j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
                if best[0] == 1:
                    return i, j
    return None if best is None else (best[1], best[2])


def _min_nonzero_cross(a, t, nrows, ncols):
    best = (abs(a[t][t]), t, t)
    for i in range(t + 1, nrows):
        v = a[i][t]
        if v and abs(v) < best[0]:
            best = (abs(v), i, t)
    for j in range(t + 1, ncols):
        v = a[t][j]
        if v and abs(v) < best[0]:
            best = (abs(v), t, j)
    return best[1], best[2]


def _indivisible(a, t, nrows, ncols, p):
    for i in range(t + 1, nrows):
        row = a[i]
        for j in range(t + 1, ncols):
            if row[j] % p:
                return i
    return None


def abelian_invariants(matrix: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[int, list[int]]:
    """Free rank and torsion divisors of ``Z^ncols / rowspace(matrix)``."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    diag = smith_diagonal(matrix) if matrix and ncols else []
    return ncols - len(diag), [d for d in diag if d > 1]
