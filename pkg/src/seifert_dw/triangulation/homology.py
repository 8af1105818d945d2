"""Integral first homology of a pseudo-triangulation, straight from its cells."""

from __future__ import annotations

from ..snf import abelian_invariants
from .core import EDGE_INDEX, PseudoTriangulation, _UnionFind


def integral_h1(tri: PseudoTriangulation) -> tuple[int, tuple[int, ...]]:
    """(free rank, torsion divisors) of H_1 with integer coefficients.

    A spanning tree of the 1-skeleton is contracted, so the generators are
    the remaining edge classes and the relations are the triangle boundaries.
    """
    cells = tri.cells
    nv = len(cells.vertex_rep)
    forest = _UnionFind(max(nv, 1))
    column: dict[int, int] = {}
    for cls, (a, b) in enumerate(cells.edge_ends):
        if forest.find(a) != forest.find(b):
            forest.union(a, b)
        else:
            column[cls] = len(column)
    rows = []
    for t, f in cells.face_rep:
        a, b, c = [v for v in range(4) if v != f]
        row = [0] * len(column)
        for (x, y), sign in (((b, c), 1), ((a, c), -1), ((a, b), 1)):
            cls, flip = cells.edge_of[t][EDGE_INDEX[(x, y)]]
            if cls in column:
                row[column[cls]] += -sign if flip else sign
        rows.append(row)
    free, torsion = abelian_invariants(rows, ncols=len(column))
    return free, tuple(torsion)
