"""Mod-2 cohomology ring of an ordered Delta-complex and the invariant Z(M, alpha^3).

The cube ``x^3`` of a degree-one class is evaluated on the sum of all
3-simplices with the front/middle/back edge rule. From the resulting
function ``Q`` the invariant is computed twice: once as the normalized sum
of ``(-1)^Q(x)`` over all classes, and once from the annihilator and Arf
invariant of ``Q``. Disagreement is a hard error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .classifier import DWValue
from .errors import BudgetExceeded, SelfCheckError, TriangulationError
from .gf2 import BitMatrix, QuadraticForm, _echelon, arf, gauss_sum, nullspace_basis, parity, radical
from .triangulation.core import PseudoTriangulation, _UnionFind, validate
from .triangulation.subdivision import DeltaComplex, barycentric

MAX_M = 14
POLARIZATION_CHECK_M = 12

__all__ = [
    "CochainComplex",
    "FundamentalCycle",
    "CohomologyProfile",
    "cochain_complex",
    "fundamental_cycle",
    "h1_classes",
    "triple_product",
    "profile",
    "dw_from_triangulation",
    "MAX_M",
]


def _pack(cols: np.ndarray) -> tuple[int, ...]:
    """Rows with a 1 in each listed column (repeats cancel)."""
    rows = []
    for r in cols.tolist():
        acc = 0
        for c in r:
            acc ^= 1 << c
        rows.append(acc)
    return tuple(rows)


@dataclass(frozen=True)
class CochainComplex:
    """Coboundaries ``delta[k]: C^k -> C^(k+1)`` as BitMatrix values.

    ``delta[k]`` has one row per ``(k+1)``-simplex and one column per
    ``k``-simplex.
    """

    counts: tuple[int, int, int, int]
    delta: tuple[BitMatrix, BitMatrix, BitMatrix]
    complex: DeltaComplex | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for k in range(3):
            if self.delta[k].shape != (self.counts[k + 1], self.counts[k]):
                raise TriangulationError(f"delta^{k} has shape {self.delta[k].shape}")
        for k in range(2):
            if not (self.delta[k + 1] @ self.delta[k]).is_zero():
                raise SelfCheckError(f"delta^{k + 1} o delta^{k} != 0")

    def is_cocycle(self, a: int) -> bool:
        return not self.delta[1].apply(a).bits

    def coboundary(self, g: int) -> int:
        """``delta^0 g`` for a 0-cochain ``g``."""
        return self.delta[0].apply(g).bits


def cochain_complex(c: DeltaComplex) -> CochainComplex:
    v, e, f, t = c.counts
    d0 = BitMatrix(_pack(c.vertices[1]) if e else (), v)
    d1 = BitMatrix(_pack(c.faces[2]) if f else (), e)
    d2 = BitMatrix(_pack(c.faces[3]) if t else (), f)
    return CochainComplex((v, e, f, t), (d0, d1, d2), c)


@dataclass(frozen=True)
class FundamentalCycle:
    """Coefficient 1 on every 3-simplex, with each simplex's front, middle
    and back edges (``[v0 v1]``, ``[v1 v2]``, ``[v2 v3]``)."""

    cochains: CochainComplex
    front: np.ndarray
    middle: np.ndarray
    back: np.ndarray

    def __post_init__(self):
        # boundary mod 2: every triangle must be hit an even number of times
        t = self.cochains.counts[3]
        col_parity = self.cochains.delta[2].transpose().apply((1 << t) - 1).bits
        if col_parity:
            raise SelfCheckError("the sum of all 3-simplices is not a mod-2 cycle")


def fundamental_cycle(cc: CochainComplex) -> FundamentalCycle:
    if cc.complex is None:
        raise TriangulationError("the fundamental cycle needs the underlying Delta-complex")
    front, middle, back = cc.complex.top_edges()
    return FundamentalCycle(cc, front, middle, back)


def _bits(x: int, n: int) -> np.ndarray:
    raw = np.frombuffer(x.to_bytes((n + 7) // 8 or 1, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def triple_product(a: int, b: int, c: int, f: FundamentalCycle) -> int:
    """``<a u b u c, [M]>`` for 1-cocycles given as bit-packed edge cochains."""
    cc = f.cochains
    for name, x in (("a", a), ("b", b), ("c", c)):
        if not cc.is_cocycle(x):
            raise ValueError(f"argument {name} is not a 1-cocycle")
    e = cc.counts[1]
    av, bv, cv = _bits(a, e), _bits(b, e), _bits(c, e)
    return int(np.count_nonzero(av[f.front] & bv[f.middle] & cv[f.back]) & 1)


# -- H^1 ----------------------------------------------------------------------

def _supports(rows: tuple[int, ...]) -> list[list[int]]:
    out = []
    for r in rows:
        s = []
        while r:
            low = r & -r
            s.append(low.bit_length() - 1)
            r ^= low
        out.append(s)
    return out


def _spanning_forest(d0: BitMatrix) -> tuple[list[bool], int]:
    """Tree flags per edge and the rank of ``delta^0``."""
    uf = _UnionFind(max(d0.ncols, 1))
    tree = [False] * d0.nrows
    rank = 0
    for i, s in enumerate(_supports(d0.rows)):
        if len(s) == 0:
            continue
        if len(s) != 2:
            raise TriangulationError(f"edge {i} has {len(s)} endpoints in delta^0")
        a, b = s
        if uf.find(a) != uf.find(b):
            uf.union(a, b)
            tree[i] = True
            rank += 1
    return tree, rank


def _tree_normalized_cocycles(cc: CochainComplex, tree: list[bool]) -> list[int]:
    """Basis of the 1-cocycles that vanish on the spanning forest.

    These meet every cohomology class exactly once. Edge values are
    propagated through triangles with a single undetermined edge; a fresh
    parameter is introduced only when propagation stalls, and the
    triangles closed along the way become linear constraints on the
    parameters.
    """
    d1 = cc.delta[1]
    ne = d1.ncols
    faces = _supports(d1.rows)
    faces_of: list[list[int]] = [[] for _ in range(ne)]
    for fi, s in enumerate(faces):
        for e in s:
            faces_of[e].append(fi)
    value: list[int | None] = [0 if t else None for t in tree]
    open_count = [sum(value[e] is None for e in s) for s in faces]
    constraints: list[int] = []
    checked = [False] * len(faces)
    ready = [fi for fi, n in enumerate(open_count) if n <= 1]
    nparams = 0
    next_free = 0

    def settle(e: int, val: int, via: int):
        value[e] = val
        for fi in faces_of[e]:
            open_count[fi] -= 1
            if open_count[fi] <= 1:
                ready.append(fi)
        if via >= 0:
            checked[via] = True

    while True:
        while ready:
            fi = ready.pop()
            if checked[fi]:
                continue
            s = faces[fi]
            if open_count[fi] == 0:
                acc = 0
                for e in s:
                    acc ^= value[e]
                if acc:
                    constraints.append(acc)
                checked[fi] = True
            elif open_count[fi] == 1:
                acc = 0
                target = -1
                for e in s:
                    if value[e] is None:
                        target = e
                    else:
                        acc ^= value[e]
                settle(target, acc, fi)
        while next_free < ne and value[next_free] is not None:
            next_free += 1
        if next_free == ne:
            break
        settle(next_free, 1 << nparams, -1)
        nparams += 1

    solutions = nullspace_basis(BitMatrix(tuple(constraints), nparams))
    basis = []
    for w in solutions:
        rep = 0
        for e, val in enumerate(value):
            if parity(val & w.bits):
                rep |= 1 << e
        basis.append(rep)
    return _canonical_basis(basis)


def _canonical_basis(vectors: list[int]) -> list[int]:
    """Reduced echelon form, ordered by pivot (lowest set edge)."""
    piv = _echelon(vectors)
    return [piv[c] for c in sorted(piv)]


@dataclass(frozen=True)
class H1Classes:
    m: int
    basis: tuple[int, ...]
    reps: tuple[int, ...]
    rank_d0: int

    def __iter__(self):
        # unpacks as (m, class_reps)
        return iter((self.m, self.reps))


def h1_classes(cc: CochainComplex, max_m: int = MAX_M) -> H1Classes:
    """All classes of ``H^1``, each as its unique representative vanishing on a spanning forest.

    Class index ``x`` (a bitmask over the basis) maps to ``reps[x]``.
    """
    tree, rank_d0 = _spanning_forest(cc.delta[0])
    basis = _tree_normalized_cocycles(cc, tree)
    for b in basis:
        if not cc.is_cocycle(b):
            raise SelfCheckError("propagated H^1 basis vector is not a cocycle")
    m = len(basis)
    if m > max_m:
        raise BudgetExceeded(f"dim H^1 = {m} exceeds the enumeration budget of {max_m}")
    reps = [0] * (1 << m)
    for x in range(1, 1 << m):
        i = (x & -x).bit_length() - 1
        reps[x] = reps[x ^ (1 << i)] ^ basis[i]
    return H1Classes(m, tuple(basis), tuple(reps), rank_d0)


def _graph_rank(rows: tuple[int, ...], n: int) -> int:
    """Rank of a matrix whose rows each have at most two nonzero entries."""
    uf = _UnionFind(max(n, 1))
    rank = 0
    for s in _supports(rows):
        if len(s) == 1:
            raise TriangulationError("expected rows with zero or two entries")
        if len(s) == 2 and uf.find(s[0]) != uf.find(s[1]):
            uf.union(s[0], s[1])
            rank += 1
    return rank


def betti_numbers(cc: CochainComplex, h1: H1Classes) -> tuple[int, int, int, int]:
    """Mod-2 Betti numbers; ranks of ``delta^0`` and ``delta^2`` come from
    spanning forests, the rank of ``delta^1`` from rank-nullity with ``m``."""
    v, e, f, t = cc.counts
    r0 = h1.rank_d0
    r1 = e - (r0 + h1.m)
    d2t = cc.delta[2].transpose()
    r2 = _graph_rank(d2t.rows, t)
    return (v - r0, h1.m, f - r2 - r1, t - r2)


# -- Q, ell and the invariant -------------------------------------------------

def _q_table(basis: tuple[int, ...], fc: FundamentalCycle) -> np.ndarray:
    m = len(basis)
    e = fc.cochains.counts[1]
    if m == 0:
        return np.zeros(1, dtype=np.uint8)
    cols = np.stack([_bits(b, e) for b in basis])  # m x E
    weights = (1 << np.arange(m, dtype=np.int64))[:, None]
    coded = (cols.astype(np.int64) * weights).sum(axis=0)  # class mask of each edge value
    triples = np.stack([coded[fc.front], coded[fc.middle], coded[fc.back]], axis=1)
    # simplices with the same triple of masks contribute identically; keep odd multiplicities
    keys, counts = np.unique(triples, axis=0, return_counts=True)
    keys = keys[counts % 2 == 1]
    classes = np.arange(1 << m, dtype=np.int64)
    out = np.zeros(1 << m, dtype=np.uint8)
    for a, b, c in keys.tolist():
        out ^= (_parity_vec(classes & a) & _parity_vec(classes & b) & _parity_vec(classes & c)).astype(np.uint8)
    return out


def _parity_vec(x: np.ndarray) -> np.ndarray:
    x = x ^ (x >> 16)
    x = x ^ (x >> 8)
    x = x ^ (x >> 4)
    x = x ^ (x >> 2)
    x = x ^ (x >> 1)
    return x & 1


def _check_polarization(q: np.ndarray, ell: BitMatrix):
    m = ell.ncols
    n = 1 << m
    ys = np.arange(n, dtype=np.int64)
    ly = np.zeros(n, dtype=np.int64)  # ell applied to y, as a bitmask
    for i, row in enumerate(ell.rows):
        ly |= _parity_vec(ys & row) << i
    for x in range(n):
        lhs = q[x ^ ys] ^ q[x] ^ q[ys]
        rhs = _parity_vec(ly & x)
        if not np.array_equal(lhs, rhs.astype(np.uint8)):
            raise SelfCheckError(f"Q(x+y)+Q(x)+Q(y) is not bilinear at x = {x}")


@dataclass(frozen=True)
class CohomologyProfile:
    m: int
    class_reps: tuple[int, ...] = field(repr=False)
    q_table: tuple[int, ...]
    ell: BitMatrix
    annihilator_basis: tuple[int, ...]
    k: int
    arf: int | None
    z_definition: DWValue
    z_theorem1: DWValue
    essential_witness: int | None
    betti: tuple[int, int, int, int]
    gauss_sum: int
    orientable: bool | None = None

    @property
    def dim_annihilator(self) -> int:
        return len(self.annihilator_basis)

    @property
    def essential(self) -> bool:
        """Some class has nonzero cube."""
        return any(self.q_table)

    @property
    def z(self) -> DWValue:
        return self.z_definition

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "q_table": list(self.q_table),
            "ell": [[(r >> j) & 1 for j in range(self.m)] for r in self.ell.rows],
            "dim_a": self.dim_annihilator,
            "annihilator_basis": list(self.annihilator_basis),
            "k": self.k,
            "arf": self.arf,
            "essential": self.essential,
            "essential_witness": self.essential_witness,
            "z_definition": self.z_definition.to_dict(),
            "z_theorem1": self.z_theorem1.to_dict(),
            "betti": list(self.betti),
            "orientable": self.orientable,
        }


def _complement(vectors: list[int], dim: int) -> list[int]:
    """Standard basis vectors completing ``vectors`` to a basis."""
    pivots: dict[int, int] = {}

    def insert(r):
        while r:
            c = (r & -r).bit_length() - 1
            if c in pivots:
                r ^= pivots[c]
            else:
                pivots[c] = r
                return True
        return False

    for v in vectors:
        insert(v)
    return [1 << i for i in range(dim) if insert(1 << i)]


def _span(vectors: list[int]) -> list[int]:
    out = [0]
    for v in vectors:
        out += [x ^ v for x in out]
    return out


def _theorem1(q: np.ndarray, m: int, ell: BitMatrix):
    """(annihilator basis, k, arf, z, witness) from the structure of Q."""
    ann = [v.bits for v in radical(ell)]
    witness = None
    for x in sorted(_span(ann)):
        if q[x]:
            witness = x
            break
    quotient = _complement(ann, m)
    if len(quotient) % 2:
        raise SelfCheckError(f"H^1 / A has odd dimension {len(quotient)}")
    k = len(quotient) // 2
    if witness is not None:
        return ann, k, None, DWValue(0), witness
    # Q vanishes on A, so it descends to H^1 / A, modelled on the complement
    qa = QuadraticForm(m, table=q).restrict(quotient)
    a = arf(qa)
    if gauss_sum(qa) != (-1) ** a * 2 ** k:
        raise SelfCheckError(f"Gauss sum {gauss_sum(qa)} contradicts Arf invariant {a} on dimension {2 * k}")
    exponent = k + len(ann) - 1
    sign = -1 if a else 1
    z = DWValue(sign, 2) if exponent < 0 else DWValue(sign * 2 ** exponent)
    return ann, k, a, z, None


def profile(c: DeltaComplex | CochainComplex, orientable: bool | None = None, max_m: int = MAX_M) -> CohomologyProfile:
    cc = c if isinstance(c, CochainComplex) else cochain_complex(c)
    fc = fundamental_cycle(cc)
    classes = h1_classes(cc, max_m=max_m)
    m = classes.m
    betti = betti_numbers(cc, classes)
    if betti[0] == 1 and betti[1] != betti[2]:
        raise SelfCheckError(f"mod-2 Poincare duality fails: b1 = {betti[1]}, b2 = {betti[2]}")
    q = _q_table(classes.basis, fc)
    if q[0]:
        raise SelfCheckError("Q(0) != 0")
    ell_rows = []
    for i in range(m):
        r = 0
        for j in range(m):
            if i != j and q[(1 << i) | (1 << j)] ^ q[1 << i] ^ q[1 << j]:
                r |= 1 << j
        ell_rows.append(r)
    ell = BitMatrix(tuple(ell_rows), m)
    if m <= POLARIZATION_CHECK_M:
        _check_polarization(q, ell)
    if orientable and not ell.is_zero():
        raise SelfCheckError("orientable input but the annihilator of ell is not all of H^1")

    ann, k, a, z1, witness = _theorem1(q, m, ell)
    if len(ann) + 2 * k != m:
        raise SelfCheckError("dim A + 2k != m")
    total = (1 << m) - 2 * int(q.sum())
    z_def = DWValue.from_fraction(Fraction(total, 2))
    if z_def != z1:
        raise SelfCheckError(f"definition gives Z = {z_def}, structure formula gives {z1}")
    return CohomologyProfile(
        m=m,
        class_reps=classes.reps,
        q_table=tuple(int(v) for v in q),
        ell=ell,
        annihilator_basis=tuple(ann),
        k=k,
        arf=a,
        z_definition=z_def,
        z_theorem1=z1,
        essential_witness=witness,
        betti=betti,
        gauss_sum=total,
        orientable=orientable,
    )


@lru_cache(maxsize=8192)
def _dw_cached(tri: PseudoTriangulation, max_m: int) -> CohomologyProfile:
    report = validate(tri)
    if not report.closed:
        raise TriangulationError("the oracle needs a closed triangulation")
    if not report.is_manifold:
        raise TriangulationError(f"triangulation is not a closed 3-manifold: {report.to_dict()}")
    return profile(barycentric(tri), orientable=report.orientable, max_m=max_m)


def dw_from_triangulation(tri: PseudoTriangulation, max_m: int = MAX_M) -> CohomologyProfile:
    """validate, subdivide, build cochains and profile; memoized on the gluing table."""
    return _dw_cached(tri, max_m)
