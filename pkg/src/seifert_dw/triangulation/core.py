"""Generalized triangulations: tetrahedra with face gluings.

A gluing of face ``f`` of tetrahedron ``t`` is a pair ``(u, perm)`` where
``perm`` is a permutation of ``(0, 1, 2, 3)`` sending the vertices of ``t``
to the vertices of ``u``; ``perm[f]`` is the face of ``u`` receiving ``f``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from ..errors import TriangulationError

Perm = tuple[int, int, int, int]
Gluing = Optional[tuple[int, Perm]]

EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {e: k for k, e in enumerate(EDGES)}


def perm_inverse(p: Perm) -> Perm:
    inv = [0] * 4
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def perm_sign(p: Sequence[int]) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def perm_compose(p: Perm, q: Perm) -> Perm:
    """``p after q``."""
    return tuple(p[q[i]] for i in range(4))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


@dataclass
class CellStructure:
    """Quotient cells of a pseudo-triangulation.

    ``vertex_of[t][v]`` is the vertex class of corner ``v`` of tetrahedron
    ``t``. ``edge_of[t][k]`` is ``(class, flipped)`` for local edge
    ``EDGES[k]``: ``flipped`` says whether the local low-to-high direction
    disagrees with the class representative. ``face_of[t][f]`` is the face
    class of face ``f``. ``*_rep`` hold one ``(tet, local data)`` member of
    each class.
    """

    vertex_of: list[list[int]]
    vertex_rep: list[tuple[int, int]]
    edge_of: list[list[tuple[int, int]]]
    edge_rep: list[tuple[int, int]]
    edge_self_reversed: list[int]
    face_of: list[list[int]]
    face_rep: list[tuple[int, int]]
    edge_ends: list[tuple[int, int]]

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return (len(self.vertex_rep), len(self.edge_rep), len(self.face_rep), len(self.vertex_of))


class PseudoTriangulation:
    def __init__(self, gluings: Sequence[Sequence[Gluing]]):
        self._gluings: tuple[tuple[Gluing, ...], ...] = tuple(
            tuple(None if g is None else (int(g[0]), tuple(int(x) for x in g[1])) for g in row)
            for row in gluings
        )
        self._check_structure()

    @property
    def tet_count(self) -> int:
        return len(self._gluings)

    @property
    def gluings(self) -> tuple[tuple[Gluing, ...], ...]:
        return self._gluings

    def gluing(self, t: int, f: int) -> Gluing:
        return self._gluings[t][f]

    def __eq__(self, other) -> bool:
        return isinstance(other, PseudoTriangulation) and self._gluings == other._gluings

    def __hash__(self) -> int:
        return hash(self._gluings)

    def __repr__(self) -> str:
        return f"PseudoTriangulation({self.tet_count} tetrahedra)"

    def boundary_faces(self) -> list[tuple[int, int]]:
        return [(t, f) for t, row in enumerate(self._gluings) for f, g in enumerate(row) if g is None]

    def _check_structure(self):
        n = len(self._gluings)
        for t, row in enumerate(self._gluings):
            if len(row) != 4:
                raise TriangulationError(f"tetrahedron {t} has {len(row)} face entries, expected 4")
            for f, g in enumerate(row):
                if g is None:
                    continue
                u, perm = g
                if not 0 <= u < n:
                    raise TriangulationError(f"face ({t},{f}) glued to missing tetrahedron {u}")
                if sorted(perm) != [0, 1, 2, 3]:
                    raise TriangulationError(f"face ({t},{f}) has non-bijective vertex map {perm}")
                uf = perm[f]
                if u == t and uf == f:
                    raise TriangulationError(f"face ({t},{f}) is glued to itself")
                back = self._gluings[u][uf]
                if back is None or back[0] != t or back[1] != perm_inverse(perm):
                    raise TriangulationError(
                        f"gluing of face ({t},{f}) -> ({u},{uf}) is not matched by the inverse gluing"
                    )

    @cached_property
    def cells(self) -> CellStructure:
        return _compute_cells(self)

    def euler_characteristic(self) -> int:
        v, e, f, t = self.cells.counts
        return v - e + f - t


def _compute_cells(tri: PseudoTriangulation) -> CellStructure:
    n = tri.tet_count
    glu = tri.gluings

    uf = _UnionFind(4 * n)
    for t in range(n):
        for f in range(4):
            g = glu[t][f]
            if g is None:
                continue
            u, perm = g
            for v in range(4):
                if v != f:
                    uf.union(4 * t + v, 4 * u + perm[v])
    vid: dict[int, int] = {}
    vertex_of = [[0] * 4 for _ in range(n)]
    vertex_rep: list[tuple[int, int]] = []
    for t in range(n):
        for v in range(4):
            r = uf.find(4 * t + v)
            if r not in vid:
                vid[r] = len(vertex_rep)
                vertex_rep.append((t, v))
            vertex_of[t][v] = vid[r]

    # edges: breadth-first search over local edges carrying an orientation flag
    edge_of: list[list[tuple[int, int] | None]] = [[None] * 6 for _ in range(n)]
    edge_rep: list[tuple[int, int]] = []
    reversed_classes: list[int] = []
    for t0 in range(n):
        for k0 in range(6):
            if edge_of[t0][k0] is not None:
                continue
            cls = len(edge_rep)
            edge_rep.append((t0, k0))
            edge_of[t0][k0] = (cls, 0)
            queue = deque([(t0, k0, 0)])
            bad = False
            while queue:
                t, k, flip = queue.popleft()
                a, b = EDGES[k]
                for f in range(4):
                    if f == a or f == b:
                        continue
                    g = glu[t][f]
                    if g is None:
                        continue
                    u, perm = g
                    pa, pb = perm[a], perm[b]
                    k2 = EDGE_INDEX[(min(pa, pb), max(pa, pb))]
                    flip2 = flip ^ (pa > pb)
                    cur = edge_of[u][k2]
                    if cur is None:
                        edge_of[u][k2] = (cls, flip2)
                        queue.append((u, k2, flip2))
                    elif cur[1] != flip2:
                        bad = True
            if bad:
                reversed_classes.append(cls)

    face_of = [[-1] * 4 for _ in range(n)]
    face_rep: list[tuple[int, int]] = []
    for t in range(n):
        for f in range(4):
            if face_of[t][f] >= 0:
                continue
            cls = len(face_rep)
            face_rep.append((t, f))
            face_of[t][f] = cls
            g = glu[t][f]
            if g is not None:
                u, perm = g
                face_of[u][perm[f]] = cls

    edge_ends = []
    for t, k in edge_rep:
        a, b = EDGES[k]
        edge_ends.append((vertex_of[t][a], vertex_of[t][b]))

    return CellStructure(
        vertex_of=vertex_of,
        vertex_rep=vertex_rep,
        edge_of=edge_of,
        edge_rep=edge_rep,
        edge_self_reversed=reversed_classes,
        face_of=face_of,
        face_rep=face_rep,
        edge_ends=edge_ends,
    )


@dataclass(frozen=True)
class ValidationReport:
    closed: bool
    connected: bool
    orientable: bool
    valid_edges: bool
    vertex_link_checks: tuple[int, ...]
    euler_characteristic: int
    counts: tuple[int, int, int, int]

    @property
    def is_manifold(self) -> bool:
        """Closed-manifold certificate: closed, spherical vertex links, chi = 0."""
        return (
            self.closed
            and self.valid_edges
            and all(chi == 2 for chi in self.vertex_link_checks)
            and self.euler_characteristic == 0
        )

    def to_dict(self) -> dict:
        return {
            "closed": self.closed,
            "connected": self.connected,
            "orientable": self.orientable,
            "valid_edges": self.valid_edges,
            "vertex_link_chi": list(self.vertex_link_checks),
            "euler_characteristic": self.euler_characteristic,
            "counts": {"vertices": self.counts[0], "edges": self.counts[1],
                       "triangles": self.counts[2], "tetrahedra": self.counts[3]},
        }


def validate(tri: PseudoTriangulation) -> ValidationReport:
    n = tri.tet_count
    glu = tri.gluings
    cells = tri.cells
    closed = all(g is not None for row in glu for g in row)

    comp = _UnionFind(max(n, 1))
    for t in range(n):
        for g in glu[t]:
            if g is not None:
                comp.union(t, g[0])
    connected = n > 0 and len({comp.find(t) for t in range(n)}) == 1

    orient = [0] * n
    orientable = True
    for start in range(n):
        if orient[start]:
            continue
        orient[start] = 1
        queue = deque([start])
        while queue:
            t = queue.popleft()
            for f in range(4):
                g = glu[t][f]
                if g is None:
                    continue
                u, perm = g
                want = -orient[t] * perm_sign(perm)
                if orient[u] == 0:
                    orient[u] = want
                    queue.append(u)
                elif orient[u] != want:
                    orientable = False

    nv = len(cells.vertex_rep)
    corners = [0] * nv
    for t in range(n):
        for v in range(4):
            corners[cells.vertex_of[t][v]] += 1
    ends = [0] * nv
    for a, b in cells.edge_ends:
        ends[a] += 1
        ends[b] += 1
    boundary_link_edges = [0] * nv
    for t, f in tri.boundary_faces():
        for v in range(4):
            if v != f:
                boundary_link_edges[cells.vertex_of[t][v]] += 1
    links = []
    for v in range(nv):
        link_edges = (3 * corners[v] - boundary_link_edges[v]) // 2 + boundary_link_edges[v]
        links.append(ends[v] - link_edges + corners[v])

    return ValidationReport(
        closed=closed,
        connected=connected,
        orientable=orientable,
        valid_edges=not cells.edge_self_reversed,
        vertex_link_checks=tuple(links),
        euler_characteristic=tri.euler_characteristic(),
        counts=cells.counts,
    )


class TriangulationBuilder:
    """Mutable scratch space used by the builders; ``build()`` freezes it."""

    def __init__(self):
        self._rows: list[list[Gluing]] = []

    @property
    def size(self) -> int:
        return len(self._rows)

    def new_tet(self) -> int:
        self._rows.append([None, None, None, None])
        return len(self._rows) - 1

    def is_free(self, t: int, f: int) -> bool:
        return self._rows[t][f] is None

    def join(self, t: int, f: int, u: int, perm: Sequence[int]):
        perm = tuple(perm)
        uf = perm[f]
        if self._rows[t][f] is not None or self._rows[u][uf] is not None:
            raise TriangulationError(f"face ({t},{f}) or ({u},{uf}) is already glued")
        if t == u and f == uf:
            raise TriangulationError(f"cannot glue face ({t},{f}) to itself")
        self._rows[t][f] = (u, perm)
        self._rows[u][uf] = (t, perm_inverse(perm))

    def glue_triangles(self, t: int, tv: Sequence[int], u: int, uv: Sequence[int]):
        """Glue the face of ``t`` spanned by ``tv`` to that of ``u`` spanned by ``uv``,
        matching ``tv[i] -> uv[i]``.
        """
        f = ({0, 1, 2, 3} - set(tv)).pop()
        g = ({0, 1, 2, 3} - set(uv)).pop()
        perm = [0] * 4
        for a, b in zip(tv, uv):
            perm[a] = b
        perm[f] = g
        self.join(t, f, u, perm)

    def build(self) -> PseudoTriangulation:
        return PseudoTriangulation(self._rows)


def from_simplicial(tets: Sequence[Sequence[object]]) -> PseudoTriangulation:
    """Gluing table of a simplicial 3-complex given by vertex labels.

    Labels are sorted within each tetrahedron; faces sharing a label set are
    glued. Every triangle must occur in at most two tetrahedra.
    """
    ordered = [tuple(sorted(t)) for t in tets]
    faces: dict[tuple, list[tuple[int, int]]] = {}
    for i, tet in enumerate(ordered):
        if len(set(tet)) != 4:
            raise TriangulationError(f"tetrahedron {i} has repeated vertices {tet}")
        for f in range(4):
            key = tet[:f] + tet[f + 1:]
            faces.setdefault(key, []).append((i, f))
    b = TriangulationBuilder()
    for _ in ordered:
        b.new_tet()
    for key, members in faces.items():
        if len(members) > 2:
            raise TriangulationError(f"triangle {key} lies in {len(members)} tetrahedra")
        if len(members) == 2:
            (t, f), (u, g) = members
            perm = [0] * 4
            for a, lab in enumerate(ordered[t]):
                perm[a] = g if a == f else ordered[u].index(lab)
            b.join(t, f, u, perm)
    return b.build()
