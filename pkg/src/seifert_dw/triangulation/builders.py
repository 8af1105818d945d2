"""Triangulations of lens spaces, surface bundles over the circle and
genus-0 Seifert fibered spaces.

Solid tori are attached by layering on a two-triangle boundary torus. Each
corner of the torus carries a position in the universal cover, so every
torus edge has a slope in Z^2 and the meridian of a closing fold can be
read off directly. Layering walks the Farey graph toward the requested
meridian; the walk is the continued-fraction expansion of the slope.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd

from ..errors import BudgetExceeded, SelfCheckError, SeifertValidationError, TriangulationError
from ..seifert import SeifertData, h1 as seifert_h1, validate_data
from .core import PseudoTriangulation, TriangulationBuilder, from_simplicial, validate
from .homology import integral_h1

MAX_TETS = 20000
MAX_GENUS = 4
MAX_FIBERS = 6

Vec = tuple[int, int]


def _sub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def _add(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1])


def _neg(a: Vec) -> Vec:
    return (-a[0], -a[1])


def _det(a: Vec, b: Vec) -> int:
    return a[0] * b[1] - a[1] * b[0]


def _same_slope(a: Vec, b: Vec) -> bool:
    return a == b or a == _neg(b)


@dataclass(frozen=True)
class Corner:
    tet: int
    vertex: int
    pos: Vec


@dataclass(frozen=True)
class BoundaryTorus:
    """A one-vertex torus made of two free triangles ``x`` and ``y``.

    Positions of ``y`` are a lift in the same plane as ``x`` up to a lattice
    translation; the two triangles are point reflections of each other.
    """

    x: tuple[Corner, Corner, Corner]
    y: tuple[Corner, Corner, Corner]

    def slopes(self) -> list[Vec]:
        a, b, c = self.x
        return [_sub(b.pos, a.pos), _sub(c.pos, a.pos), _sub(c.pos, b.pos)]

    def _locate(self, tri, v: Vec) -> tuple[int, int, int]:
        for i, j in ((0, 1), (0, 2), (1, 2)):
            d = _sub(tri[j].pos, tri[i].pos)
            k = 3 - i - j
            if d == v:
                return i, j, k
            if d == _neg(v):
                return j, i, k
        raise TriangulationError(f"slope {v} is not an edge of the boundary torus")

    def align(self, v: Vec):
        """Corners of ``x`` and ``y`` around edge ``v`` and the shift taking ``y`` onto ``x``'s side."""
        i, j, k = self._locate(self.x, v)
        i2, j2, k2 = self._locate(self.y, v)
        shift = _sub(self.x[i].pos, self.y[i2].pos)
        return (i, j, k), (i2, j2, k2), shift

    def flip_partner(self, v: Vec) -> Vec:
        (i, j, k), (i2, j2, k2), shift = self.align(v)
        return _sub(_add(self.y[k2].pos, shift), self.x[k].pos)


def _layer(b: TriangulationBuilder, torus: BoundaryTorus, v: Vec) -> BoundaryTorus:
    """Attach one tetrahedron across edge ``v``, replacing it by its flip partner."""
    (i, j, k), (i2, j2, k2), shift = torus.align(v)
    X, Y = torus.x, torus.y
    n = b.new_tet()
    b.glue_triangles(n, (0, 1, 2), X[0].tet, (X[i].vertex, X[j].vertex, X[k].vertex))
    b.glue_triangles(n, (0, 1, 3), Y[0].tet, (Y[i2].vertex, Y[j2].vertex, Y[k2].vertex))
    far = _add(Y[k2].pos, shift)
    p0, p1, p2 = X[i].pos, X[j].pos, X[k].pos
    return BoundaryTorus(
        (Corner(n, 0, p0), Corner(n, 2, p2), Corner(n, 3, far)),
        (Corner(n, 1, p1), Corner(n, 2, p2), Corner(n, 3, far)),
    )


def _fold(b: TriangulationBuilder, torus: BoundaryTorus, v: Vec):
    """Close the torus by folding its two triangles together across edge ``v``."""
    (i, j, k), (i2, j2, k2), _ = torus.align(v)
    X, Y = torus.x, torus.y
    b.glue_triangles(X[0].tet, (X[i].vertex, X[j].vertex, X[k].vertex),
                     Y[0].tet, (Y[i2].vertex, Y[j2].vertex, Y[k2].vertex))


def fill(b: TriangulationBuilder, torus: BoundaryTorus, meridian: Vec, max_tets: int = MAX_TETS) -> int:
    """Cap ``torus`` with a layered solid torus whose meridian has slope ``meridian``.

    Returns the number of tetrahedra added.
    """
    if gcd(*meridian) != 1:
        raise TriangulationError(f"meridian {meridian} is not a primitive slope")
    start = b.size
    while True:
        slopes = torus.slopes()
        for v in slopes:
            if _same_slope(torus.flip_partner(v), meridian):
                _fold(b, torus, v)
                return b.size - start
        current = [v for v in slopes if _same_slope(v, meridian)]
        if current:
            choice = current[0]
        else:
            # greedy Farey step: the flip that brings the triangle closest to the meridian
            def after(v):
                rest = [w for w in slopes if w is not v]
                return sum(abs(_det(meridian, w)) for w in rest + [torus.flip_partner(v)])

            choice = min(slopes, key=after)
        torus = _layer(b, torus, choice)
        if b.size > max_tets:
            raise BudgetExceeded(f"layered solid torus for slope {meridian} exceeds {max_tets} tetrahedra")


def _one_tet_solid_torus(b: TriangulationBuilder) -> tuple[BoundaryTorus, Vec]:
    """The one-tetrahedron solid torus: faces 012 and 123 glued by 0->1->2->3."""
    t = b.new_tet()
    b.join(t, 3, t, (1, 2, 3, 0))
    torus = BoundaryTorus(
        (Corner(t, 0, (0, 0)), Corner(t, 1, (1, 0)), Corner(t, 3, (1, 1))),
        (Corner(t, 0, (0, 0)), Corner(t, 2, (0, 1)), Corner(t, 3, (1, 1))),
    )
    return torus, (2, -1)


def _certify(tri: PseudoTriangulation, what: str) -> PseudoTriangulation:
    report = validate(tri)
    if not (report.is_manifold and report.connected and report.orientable):
        raise SelfCheckError(f"{what} failed validation: {report.to_dict()}")
    return tri


def build_lens(p: int, q: int, max_tets: int = MAX_TETS) -> PseudoTriangulation:
    """Layered triangulation of the lens space L(p, q); L(1, q) is the 3-sphere."""
    if p < 1:
        raise SeifertValidationError(f"lens space needs p >= 1, got {p}")
    if gcd(p, q) != 1:
        raise SeifertValidationError(f"gcd({p}, {q}) != 1")
    q %= p
    b = TriangulationBuilder()
    torus, mu = _one_tet_solid_torus(b)
    longitude = (1, 0)  # det(mu, longitude) = 1
    target = (p * longitude[0] + q * mu[0], p * longitude[1] + q * mu[1])
    fill(b, torus, target, max_tets)
    tri = _certify(b.build(), f"L({p},{q})")
    free, torsion = integral_h1(tri)
    expected = (0, (p,) if p > 1 else ())
    if (free, tuple(torsion)) != expected:
        raise SelfCheckError(f"L({p},{q}) triangulation has H1 = {free}, {torsion}; expected Z/{p}")
    return tri


# -- closed surfaces and products ---------------------------------------------

def _torus7(offset: int = 0) -> list[tuple[int, int, int]]:
    """The seven-vertex torus, labels shifted by ``offset``."""
    tris = []
    for i in range(7):
        tris.append(tuple(sorted(offset + (i + d) % 7 for d in (0, 1, 3))))
        tris.append(tuple(sorted(offset + (i + d) % 7 for d in (0, 2, 3))))
    return tris


def surface_triangles(genus: int) -> list[tuple[int, int, int]]:
    """A simplicial closed orientable surface of the given genus.

    Genus 0 is the boundary of a tetrahedron, genus 1 the seven-vertex torus,
    higher genus a chain of seven-vertex tori joined by connected sums.
    """
    if genus < 0:
        raise SeifertValidationError(f"genus must be non-negative, got {genus}")
    if genus == 0:
        return [tuple(c) for c in combinations(range(4), 3)]
    # two vertex-disjoint triangles of the seven-vertex torus
    left, right = (0, 1, 3), (2, 4, 5)
    pieces = [_torus7(7 * k) for k in range(genus)]
    label = {}
    for k in range(genus - 1):
        a = tuple(7 * k + v for v in right)
        c = tuple(7 * (k + 1) + v for v in left)
        pieces[k].remove(a)
        pieces[k + 1].remove(c)
        for u, w in zip(c, a):
            label[u] = w
    out = []
    for piece in pieces:
        for tri in piece:
            out.append(tuple(sorted(_resolve(label, v) for v in tri)))
    return out


def _resolve(label: dict[int, int], v: int) -> int:
    while v in label:
        v = label[v]
    return v


def product_with_circle(triangles, length: int = 3) -> list[tuple]:
    """Staircase triangulation of (surface) x (circle of ``length`` edges)."""
    tets = []
    for tri in triangles:
        a, b, c = sorted(tri)
        for i in range(length):
            j = (i + 1) % length
            tets.append(((a, i), (b, i), (c, i), (c, j)))
            tets.append(((a, i), (b, i), (b, j), (c, j)))
            tets.append(((a, i), (a, j), (b, j), (c, j)))
    return tets


def build_surface_times_circle(genus: int, max_tets: int = MAX_TETS) -> PseudoTriangulation:
    if genus > MAX_GENUS:
        raise BudgetExceeded(f"genus {genus} exceeds the builder limit of {MAX_GENUS}")
    tris = surface_triangles(genus)
    tets = product_with_circle(tris)
    if len(tets) > max_tets:
        raise BudgetExceeded(f"{len(tets)} tetrahedra exceed the limit of {max_tets}")
    tri = _certify(from_simplicial(tets), f"genus-{genus} surface x S^1")
    free, torsion = integral_h1(tri)
    if (free, tuple(torsion)) != (2 * genus + 1, ()):
        raise SelfCheckError(f"surface x S^1 (genus {genus}) has H1 = {free}, {torsion}")
    return tri


# -- genus-0 Seifert fibered spaces -------------------------------------------

@dataclass(frozen=True)
class _PlanarTriangle:
    vertices: tuple[str, str, str]
    edges: tuple[str, str, str]  # d0, d1, d2


def planar_surface(n: int) -> list[_PlanarTriangle]:
    """An ordered Delta-complex structure on the sphere with ``n >= 3`` holes.

    Vertices are a centre ``c`` and one vertex ``v_i`` per hole; the hole
    boundary is the loop edge ``b_i`` and ``s_i`` joins ``c`` to ``v_i``.
    Cutting along the ``s_i`` leaves a ``3n``-gon, triangulated by an ear
    ``A_i, B_i`` per hole and a fan over the central ``n``-gon with sides
    ``g_i`` (loops at ``c``).
    """
    if n < 3:
        raise TriangulationError("the planar block needs at least three holes")
    tris = []
    for i in range(1, n + 1):
        v = f"v{i}"
        tris.append(_PlanarTriangle(("c", v, v), (f"b{i}", f"k{i}", f"s{i}")))
        if i < n:
            tris.append(_PlanarTriangle(("c", "c", v), (f"s{i}", f"k{i}", f"g{i}")))
        else:
            tris.append(_PlanarTriangle(("c", "c", v), (f"k{i}", f"s{i}", f"g{i}")))
    for j in range(1, n - 1):
        d2 = "g1" if j == 1 else f"h{j}"
        d1 = f"g{n}" if j == n - 2 else f"h{j + 1}"
        tris.append(_PlanarTriangle(("c", "c", "c"), (f"g{j + 1}", d1, d2)))
    _check_planar(tris, n)
    return tris


def _check_planar(tris: list[_PlanarTriangle], n: int):
    ends: dict[str, tuple[str, str]] = {}
    uses: dict[str, int] = {}
    for t in tris:
        x = t.vertices
        for k, e in enumerate(t.edges):
            a, b = [x[i] for i in range(3) if i != k]
            if ends.setdefault(e, (a, b)) != (a, b):
                raise SelfCheckError(f"planar block edge {e} has inconsistent ends")
            uses[e] = uses.get(e, 0) + 1
    boundary = sorted(e for e, c in uses.items() if c == 1)
    if boundary != sorted(f"b{i}" for i in range(1, n + 1)) or any(c > 2 for c in uses.values()):
        raise SelfCheckError("planar block does not have exactly the hole loops as boundary")
    chi = len({v for t in tris for v in t.vertices}) - len(uses) + len(tris)
    if chi != 2 - n:
        raise SelfCheckError(f"planar block has Euler characteristic {chi}, expected {2 - n}")


def _orient_planar(tris: list[_PlanarTriangle]) -> list[int]:
    """Coherent orientation signs relative to each triangle's vertex order."""
    by_edge: dict[str, list[tuple[int, int]]] = {}
    for t, tri in enumerate(tris):
        for k, e in enumerate(tri.edges):
            by_edge.setdefault(e, []).append((t, k))
    sign = [0] * len(tris)
    sign[0] = 1
    stack = [0]
    while stack:
        t = stack.pop()
        for k, e in enumerate(tris[t].edges):
            for u, k2 in by_edge[e]:
                if (u, k2) == (t, k):
                    continue
                # induced boundary orientations must cancel
                want = -sign[t] * (-1) ** (k + k2)
                if sign[u] == 0:
                    sign[u] = want
                    stack.append(u)
                elif sign[u] != want:
                    raise SelfCheckError("planar block is not orientable")
    return sign


# prism over an ordered triangle x0 x1 x2: three tetrahedra, local labels
#   T1 = (x0', x1', x2', x2''), T2 = (x0', x1', x1'', x2''), T3 = (x0', x0'', x1'', x2'')
# (' bottom, '' top).  Side faces over edge d_k, as (prism tet, local corners)
# listed as lower (a', b', b'') and upper (a', a'', b'') for the edge a -> b.
_SIDE = {
    2: ((1, (0, 1, 2)), (2, (0, 1, 2))),
    0: ((0, (1, 2, 3)), (1, (1, 2, 3))),
    1: ((0, (0, 2, 3)), (2, (0, 1, 3))),
}


def _planar_block(tris: list[_PlanarTriangle]):
    """(planar surface) x S^1 with one circle vertex. Returns the builder and,
    per hole loop, its boundary torus in (section, fiber) coordinates."""
    b = TriangulationBuilder()
    prisms = []
    for _ in tris:
        t1, t2, t3 = b.new_tet(), b.new_tet(), b.new_tet()
        b.join(t1, 2, t2, (0, 1, 2, 3))
        b.join(t2, 1, t3, (0, 1, 2, 3))
        b.join(t3, 0, t1, (3, 0, 1, 2))
        prisms.append((t1, t2, t3))
    seen: dict[str, tuple[int, int]] = {}
    tori: dict[str, BoundaryTorus] = {}
    for t, tri in enumerate(tris):
        for k, e in enumerate(tri.edges):
            if e not in seen:
                seen[e] = (t, k)
                continue
            u, k2 = seen.pop(e)
            for (p, cv), (p2, cv2) in zip(_SIDE[k], _SIDE[k2]):
                b.glue_triangles(prisms[t][p], cv, prisms[u][p2], cv2)
    for e, (t, k) in seen.items():
        (lp, lv), (up, uv) = _SIDE[k]
        lo, hi = prisms[t][lp], prisms[t][up]
        tori[e] = BoundaryTorus(
            (Corner(lo, lv[0], (0, 0)), Corner(lo, lv[1], (1, 0)), Corner(lo, lv[2], (1, 1))),
            (Corner(hi, uv[0], (0, 0)), Corner(hi, uv[1], (0, 1)), Corner(hi, uv[2], (1, 1))),
        )
    return b, tori


def seifert_block_fibers(d: SeifertData) -> tuple[tuple[int, int], ...]:
    """Fiber list actually realized by ``build_seifert``: sorted, padded to three."""
    fibers = sorted(d.fibers)
    while len(fibers) < 3:
        fibers.append((1, 0))
    return tuple(fibers)


def build_seifert(d: SeifertData, max_tets: int = MAX_TETS) -> PseudoTriangulation:
    """Triangulation of the genus-0 Seifert fibered space with the given fibers.

    Each hole of the planar block is filled so that the meridian is
    ``p`` times the hole loop (oriented as boundary of the base) plus ``q``
    times the fiber. The result is checked against the Seifert
    presentation's integral homology.
    """
    validate_data(d)
    if d.genus != 0:
        raise SeifertValidationError("build_seifert handles genus 0 only")
    if d.n > MAX_FIBERS:
        raise BudgetExceeded(f"{d.n} fibers exceed the builder limit of {MAX_FIBERS}")
    fibers = seifert_block_fibers(d)
    n = len(fibers)
    tris = planar_surface(n)
    sign = _orient_planar(tris)
    b, tori = _planar_block(tris)
    if b.size > max_tets:
        raise BudgetExceeded(f"{b.size} tetrahedra exceed the limit of {max_tets}")
    hole_triangle = {tri.edges[0]: t for t, tri in enumerate(tris) if tri.edges[0].startswith("b")}
    for i, (p, q) in enumerate(fibers, start=1):
        loop = f"b{i}"
        # the loop is d_0 of its triangle, so its induced orientation is the triangle's sign
        eps = sign[hole_triangle[loop]]
        fill(b, tori[loop], (eps * p, q), max_tets)
    tri = _certify(b.build(), f"Seifert space {d}")
    free, torsion = integral_h1(tri)
    expect = seifert_h1(d)
    if (free, tuple(torsion)) != (expect.free_rank, tuple(expect.torsion_divisors)):
        raise SelfCheckError(
            f"triangulation of {d} has H1 = Z^{free} + {torsion}, presentation gives "
            f"Z^{expect.free_rank} + {expect.torsion_divisors}"
        )
    return tri
