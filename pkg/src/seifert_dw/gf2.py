"""Dense linear algebra over GF(2) and the Arf invariant.

Vectors and matrix rows are packed into Python integers: bit ``j`` of a row
is the entry in column ``j``. Elimination is therefore a sequence of
word-level XORs on arbitrary-length integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "BitVector",
    "BitMatrix",
    "QuadraticForm",
    "DegenerateFormError",
    "rank",
    "nullspace_basis",
    "solve",
    "radical",
    "arf",
    "symplectic_basis",
    "gauss_sum",
    "parity",
]

TABLE_DIM_LIMIT = 20


def parity(x: int) -> int:
    return x.bit_count() & 1


class DegenerateFormError(ValueError):
    """Raised when an Arf invariant is requested for an illegal form."""


@dataclass(frozen=True)
class BitVector:
    bits: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("length must be non-negative")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError(f"bits {self.bits:#x} do not fit in length {self.length}")

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> "BitVector":
        bits = 0
        for j, e in enumerate(entries):
            if e & 1:
                bits |= 1 << j
        return cls(bits, len(entries))

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(0, length)

    def to_list(self) -> list[int]:
        return [(self.bits >> j) & 1 for j in range(self.length)]

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError(j)
        return (self.bits >> j) & 1

    def __add__(self, other: "BitVector") -> "BitVector":
        self._check(other)
        return BitVector(self.bits ^ other.bits, self.length)

    __xor__ = __add__

    def dot(self, other: "BitVector") -> int:
        self._check(other)
        return parity(self.bits & other.bits)

    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def _check(self, other: "BitVector"):
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")

    def __str__(self) -> str:
        return "".join(str(b) for b in self.to_list())


@dataclass(frozen=True)
class BitMatrix:
    """Immutable ``nrows x ncols`` matrix over GF(2) with int-packed rows."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError(f"row {r:#x} does not fit in {self.ncols} columns")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], ncols: int | None = None) -> "BitMatrix":
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        rows = []
        for row in entries:
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            rows.append(BitVector.from_list(row).bits)
        return cls(tuple(rows), ncols)

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "BitMatrix":
        return cls.from_lists([[int(c) for c in r] for r in rows])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls((0,) * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def from_array(cls, arr) -> "BitMatrix":
        arr = np.asarray(arr) % 2
        return cls.from_lists(arr.astype(int).tolist(), ncols=arr.shape[1])

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def to_array(self) -> np.ndarray:
        return np.array(self.to_lists(), dtype=np.uint8).reshape(self.nrows, self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        return (self.rows[i] >> j) & 1

    def row(self, i: int) -> BitVector:
        return BitVector(self.rows[i], self.ncols)

    def transpose(self) -> "BitMatrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return BitMatrix(tuple(cols), self.nrows)

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    def apply(self, v: BitVector | int) -> BitVector:
        """Matrix-vector product ``self @ v``."""
        bits = v.bits if isinstance(v, BitVector) else v
        if isinstance(v, BitVector) and v.length != self.ncols:
            raise ValueError(f"vector length {v.length} != ncols {self.ncols}")
        out = 0
        for i, r in enumerate(self.rows):
            if parity(r & bits):
                out |= 1 << i
        return BitVector(out, self.nrows)

    def __matmul__(self, other):
        if isinstance(other, BitVector):
            return self.apply(other)
        if other.nrows != self.ncols:
            raise ValueError("inner dimension mismatch")
        out = []
        for r in self.rows:
            acc = 0
            while r:
                low = r & -r
                acc ^= other.rows[low.bit_length() - 1]
                r ^= low
            out.append(acc)
        return BitMatrix(tuple(out), other.ncols)

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and self.transpose().rows == self.rows

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __str__(self) -> str:
        return "\n".join("".join(str(b) for b in row) for row in self.to_lists())


def _lowbit(x: int) -> int:
    return (x & -x).bit_length() - 1


def _forward(rows: Iterable[int]) -> dict[int, int]:
    """Echelon form keyed by pivot column; each pivot is its row's lowest bit."""
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            c = _lowbit(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = r
                break
            r ^= p
    return pivots


def _echelon(rows: Iterable[int]) -> dict[int, int]:
    """Reduced row echelon form keyed by pivot column."""
    pivots = _forward(rows)
    mask = 0
    for c in sorted(pivots, reverse=True):
        r = pivots[c]
        t = r & mask
        while t:
            low = t & -t
            r ^= pivots[low.bit_length() - 1]
            t ^= low
        pivots[c] = r
        mask |= 1 << c
    return pivots


def rank(m: BitMatrix) -> int:
    return len(_forward(m.rows))


def nullspace_basis(m: BitMatrix) -> list[BitVector]:
    piv = _echelon(m.rows)
    free = [j for j in range(m.ncols) if j not in piv]
    basis = []
    for f in free:
        bits = 1 << f
        fb = 1 << f
        for c, r in piv.items():
            if r & fb:
                bits |= 1 << c
        basis.append(BitVector(bits, m.ncols))
    return basis


def solve(m: BitMatrix, b: BitVector) -> BitVector | None:
    """Some ``v`` with ``m @ v == b``, or ``None`` when the system is inconsistent."""
    if b.length != m.nrows:
        raise ValueError(f"right-hand side has length {b.length}, matrix has {m.nrows} rows")
    aug = 1 << m.ncols
    rows = [r | (aug if (b.bits >> i) & 1 else 0) for i, r in enumerate(m.rows)]
    piv = _echelon(rows)
    if m.ncols in piv:
        return None
    bits = 0
    for c, r in piv.items():
        if r & aug:
            bits |= 1 << c
    return BitVector(bits, m.ncols)


def radical(ell: BitMatrix) -> list[BitVector]:
    if ell.nrows != ell.ncols:
        raise ValueError(f"bilinear form must be square, got {ell.shape}")
    if not ell.is_symmetric():
        raise ValueError("bilinear form must be symmetric")
    return nullspace_basis(ell)


def _bform(rows: Sequence[int], x: int, y: int) -> int:
    acc = 0
    i = 0
    while x:
        if x & 1:
            acc ^= parity(rows[i] & y)
        x >>= 1
        i += 1
    return acc


class QuadraticForm:
    """A function ``GF(2)^dim -> GF(2)`` of algebraic degree at most two.

    Small forms keep their whole value table (index = coordinate bitmask);
    large forms are stored as values on the standard basis plus the
    polarization matrix.
    """

    def __init__(self, dim: int, table=None, basis_values=None, bilinear: BitMatrix | None = None):
        self.dim = dim
        if table is not None:
            table = np.asarray(table, dtype=np.uint8) & 1
            if table.shape != (1 << dim,):
                raise ValueError(f"value table must have length 2**{dim}")
            if table[0]:
                raise ValueError("a quadratic form must vanish at 0")
            self._table = table
            self._basis = None
            self._bil = None
        else:
            if basis_values is None or bilinear is None:
                raise ValueError("need either a table or basis values plus a bilinear form")
            if len(basis_values) != dim or bilinear.shape != (dim, dim):
                raise ValueError("basis data does not match dim")
            if not bilinear.is_symmetric() or any((bilinear.rows[i] >> i) & 1 for i in range(dim)):
                raise ValueError("polarization must be symmetric with zero diagonal")
            self._table = None
            self._basis = tuple(int(v) & 1 for v in basis_values)
            self._bil = bilinear
            if dim <= TABLE_DIM_LIMIT:
                self._table = self._materialize()

    @classmethod
    def from_function(cls, dim: int, fn: Callable[[int], int]) -> "QuadraticForm":
        return cls(dim, table=[fn(x) & 1 for x in range(1 << dim)])

    @classmethod
    def from_basis(cls, basis_values: Sequence[int], bilinear: BitMatrix) -> "QuadraticForm":
        return cls(len(basis_values), basis_values=basis_values, bilinear=bilinear)

    @property
    def has_table(self) -> bool:
        return self._table is not None

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            raise ValueError(f"no value table stored for dim {self.dim}")
        return self._table

    def _materialize(self) -> np.ndarray:
        out = np.zeros(1 << self.dim, dtype=np.uint8)
        # Q(x + e_i) = Q(x) + Q(e_i) + B(x, e_i), filled in gray-code order
        rows = self._bil.rows
        for x in range(1, 1 << self.dim):
            i = _lowbit(x)
            prev = x ^ (1 << i)
            out[x] = out[prev] ^ self._basis[i] ^ parity(rows[i] & prev)
        return out

    def __call__(self, x: BitVector | int) -> int:
        bits = x.bits if isinstance(x, BitVector) else int(x)
        if self._table is not None:
            return int(self._table[bits])
        acc = 0
        seen = 0
        rows = self._bil.rows
        while bits:
            i = _lowbit(bits)
            acc ^= self._basis[i] ^ parity(rows[i] & seen)
            seen |= 1 << i
            bits ^= 1 << i
        return acc

    def polarization(self) -> BitMatrix:
        if self._bil is not None:
            return self._bil
        q = self._table
        rows = []
        for i in range(self.dim):
            r = 0
            for j in range(self.dim):
                if i != j and q[(1 << i) ^ (1 << j)] ^ q[1 << i] ^ q[1 << j]:
                    r |= 1 << j
            rows.append(r)
        return BitMatrix(tuple(rows), self.dim)

    def is_quadratic(self) -> bool:
        """Exact check that the polarization is bilinear (degree <= 2).

        The algebraic normal form is obtained with a Moebius transform; its
        support lies on monomials of degree <= 2 exactly when
        ``Q(x+y) + Q(x) + Q(y)`` is bilinear in ``(x, y)``.
        """
        if self._table is None:
            return True
        anf = self._table.copy()
        n = 1 << self.dim
        step = 1
        while step < n:
            view = anf.reshape(-1, 2 * step)
            view[:, step:] ^= view[:, :step]
            step *= 2
        support = np.nonzero(anf)[0]
        return all(bin(int(s)).count("1") <= 2 for s in support)

    def restrict(self, vectors: Sequence[int]) -> "QuadraticForm":
        """The form pulled back along the linear map ``e_i -> vectors[i]``."""
        k = len(vectors)
        if k <= TABLE_DIM_LIMIT:
            table = np.zeros(1 << k, dtype=np.uint8)
            images = [0] * (1 << k)
            for x in range(1, 1 << k):
                i = _lowbit(x)
                images[x] = images[x ^ (1 << i)] ^ vectors[i]
                table[x] = self(images[x])
            return QuadraticForm(k, table=table)
        bil = self.polarization().rows
        basis = [self(v) for v in vectors]
        rows = []
        for i in range(k):
            r = 0
            for j in range(k):
                if _bform(bil, vectors[i], vectors[j]):
                    r |= 1 << j
            rows.append(r)
        return QuadraticForm.from_basis(basis, BitMatrix(tuple(rows), k))


def symplectic_basis(ell: BitMatrix) -> list[tuple[int, int]]:
    """Greedy symplectic pairs ``(a_i, b_i)`` for a nondegenerate alternating form."""
    rows = ell.rows
    pool = [1 << i for i in range(ell.ncols)]
    pairs = []
    while pool:
        a = pool.pop(0)
        for idx, cand in enumerate(pool):
            if _bform(rows, a, cand):
                b = pool.pop(idx)
                break
        else:
            raise DegenerateFormError("bilinear form is degenerate: a vector pairs trivially with the rest")
        new_pool = []
        for w in pool:
            w2 = w
            if _bform(rows, w, b):
                w2 ^= a
            if _bform(rows, w, a):
                w2 ^= b
            new_pool.append(w2)
        pool = new_pool
        pairs.append((a, b))
    return pairs


def arf(q: QuadraticForm) -> int:
    if q.dim % 2:
        raise DegenerateFormError(f"Arf invariant needs even dimension, got {q.dim}")
    ell = q.polarization()
    if rank(ell) != q.dim:
        raise DegenerateFormError("Arf invariant needs a nondegenerate polarization (radical is nonzero)")
    total = 0
    for a, b in symplectic_basis(ell):
        total ^= q(a) & q(b)
    return total


def gauss_sum(q: QuadraticForm) -> int:
    """``sum_x (-1)^q(x)`` over all of ``GF(2)^dim``."""
    t = q.table
    ones = int(t.sum())
    return len(t) - 2 * ones
