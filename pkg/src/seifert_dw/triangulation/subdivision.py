"""Ordered Delta-complexes and barycentric subdivision."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import TriangulationError
from .core import EDGE_INDEX, PseudoTriangulation


@dataclass(frozen=True)
class DeltaComplex:
    """Simplices by dimension with ordered face maps.

    ``faces[k][i, j]`` is the index of ``d_j`` of the ``i``-th ``k``-simplex
    (the face omitting vertex ``j``); ``vertices[k][i]`` lists its vertices in
    order. Vertex-only complexes have ``faces[0]`` empty.
    """

    nverts: int
    faces: tuple[np.ndarray, ...]
    vertices: tuple[np.ndarray, ...]

    def count(self, k: int) -> int:
        return self.nverts if k == 0 else len(self.faces[k])

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(self.count(k) for k in range(4))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.counts))

    def audit_order(self) -> bool:
        """Every face map is an order-preserving inclusion of vertex lists."""
        for k in range(1, 4):
            f = self.faces[k]
            v = self.vertices[k]
            lower = self.vertices[k - 1] if k > 1 else np.arange(self.nverts).reshape(-1, 1)
            for j in range(k + 1):
                expect = np.delete(v, j, axis=1)
                if not np.array_equal(lower[f[:, j]], expect):
                    return False
        return True

    def top_edges(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Edge indices ``[v0 v1], [v1 v2], [v2 v3]`` of every 3-simplex."""
        f3, f2 = self.faces[3], self.faces[2]
        back = f3[:, 3]   # [v0 v1 v2]
        front = f3[:, 0]  # [v1 v2 v3]
        return f2[back, 2], f2[back, 0], f2[front, 0]


@lru_cache(maxsize=None)
def _tet_chains() -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    """All flags of faces of a tetrahedron, as bitmask chains, shortest first.

    Also returns, for each chain, the indices of the chains obtained by
    dropping one element (``d_0, d_1, ...``).
    """
    masks = [m for m in range(1, 16)]
    chains: list[tuple[int, ...]] = []

    def extend(chain):
        chains.append(chain)
        last = chain[-1]
        for m in masks:
            if m != last and m & last == last:
                extend(chain + (m,))

    for m in masks:
        extend((m,))
    chains.sort(key=lambda c: (len(c), c))
    where = {c: i for i, c in enumerate(chains)}
    faces = []
    for c in chains:
        if len(c) == 1:
            faces.append(())
        else:
            faces.append(tuple(where[c[:j] + c[j + 1:]] for j in range(len(c))))
    return tuple(chains), tuple(faces)


def _remap_table(vmap: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * 16
    for m in range(16):
        r = 0
        for v in range(4):
            if m >> v & 1:
                r |= 1 << vmap[v]
        out[m] = r
    return tuple(out)


def _cell_info(tri: PseudoTriangulation):
    """For every tetrahedron and sub-simplex mask: (dim, class, remap table).

    The remap table sends submasks of the local sub-simplex to the matching
    submasks of the class representative.
    """
    cells = tri.cells
    glu = tri.gluings
    ident = _remap_table((0, 1, 2, 3))
    info = []
    for t in range(tri.tet_count):
        row = [None] * 16
        for v in range(4):
            cls = cells.vertex_of[t][v]
            rv = cells.vertex_rep[cls][1]
            vmap = [0, 0, 0, 0]
            vmap[v] = rv
            row[1 << v] = (0, cls, _remap_table(tuple(vmap)))
        for (a, b), k in EDGE_INDEX.items():
            cls, flip = cells.edge_of[t][k]
            rt, rk = cells.edge_rep[cls]
            ra, rb = [key for key, idx in EDGE_INDEX.items() if idx == rk][0]
            vmap = [0, 0, 0, 0]
            if flip:
                vmap[a], vmap[b] = rb, ra
            else:
                vmap[a], vmap[b] = ra, rb
            row[(1 << a) | (1 << b)] = (1, cls, _remap_table(tuple(vmap)))
        for f in range(4):
            cls = cells.face_of[t][f]
            rep = cells.face_rep[cls]
            if rep == (t, f):
                table = ident
            else:
                u, perm = glu[t][f]
                if (u, perm[f]) != rep:
                    raise TriangulationError(f"face class of ({t},{f}) has an unexpected representative")
                table = _remap_table(perm)
            row[15 ^ (1 << f)] = (2, cls, table)
        row[15] = (3, t, ident)
        info.append(row)
    return info


def barycentric(tri: PseudoTriangulation) -> DeltaComplex:
    """First barycentric subdivision as an ordered Delta-complex.

    Vertices of the output are the cells of the quotient of ``tri``; a
    ``k``-simplex is a flag ``c_0 < c_1 < ... < c_k`` of incident cells,
    ordered by cell dimension, and is identified across gluings through the
    representative of its top cell. Each tetrahedron contributes 24 top
    simplices.
    """
    if tri.boundary_faces():
        raise TriangulationError("barycentric subdivision needs a closed triangulation")
    chains, chain_faces = _tet_chains()
    info = _cell_info(tri)
    index = [dict() for _ in range(4)]
    faces = [[] for _ in range(4)]
    verts = [[] for _ in range(4)]
    ids = [0] * len(chains)
    for t in range(tri.tet_count):
        row = info[t]
        for ci, chain in enumerate(chains):
            k = len(chain) - 1
            dim, cls, table = row[chain[-1]]
            key = (dim, cls, tuple(table[m] for m in chain[:-1]))
            tbl = index[k]
            i = tbl.get(key)
            if i is None:
                i = len(tbl)
                tbl[key] = i
                if k:
                    fs = tuple(ids[fi] for fi in chain_faces[ci])
                    faces[k].append(fs)
                    # vertex list: the last vertex of d_0 chains... rebuild from faces
                    if k == 1:
                        verts[k].append((fs[1], fs[0]))
                    else:
                        verts[k].append(verts[k - 1][fs[k]] + (verts[k - 1][fs[0]][-1],))
            ids[ci] = i
    nverts = len(index[0])
    face_arr = (np.zeros((0, 0), dtype=np.int64),) + tuple(
        np.array(faces[k], dtype=np.int64).reshape(-1, k + 1) for k in range(1, 4)
    )
    vert_arr = (np.arange(nverts, dtype=np.int64).reshape(-1, 1),) + tuple(
        np.array(verts[k], dtype=np.int64).reshape(-1, k + 1) for k in range(1, 4)
    )
    return DeltaComplex(nverts, face_arr, vert_arr)
