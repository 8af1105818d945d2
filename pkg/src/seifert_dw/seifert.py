"""Seifert invariants of orientable Seifert fibered spaces with orientable base.

A manifold is described by the genus ``g`` of its base surface and an
ordered list of fiber pairs ``(p, q)``. The integer ``b`` of the usual
normalized presentation is never stored separately; it is carried as an
ordinary ``(1, b)`` fiber.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, SeifertValidationError, SelfCheckError
from .gf2 import BitMatrix, rank as rank2
from .snf import abelian_invariants

__all__ = [
    "SeifertData",
    "H1Summary",
    "canonicalize",
    "validate_data",
    "presentation_matrix",
    "h1",
    "count_hom_z2",
    "trade",
    "insert_trivial",
    "remove_trivial",
    "reverse_orientation",
    "permute",
    "parse_fibers",
    "format_fibers",
]

INT_CAP = 2 ** 31
HOM_BUDGET = 24


@dataclass(frozen=True)
class SeifertData:
    genus: int = 0
    fibers: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "fibers", tuple((int(p), int(q)) for p, q in self.fibers))

    @property
    def n(self) -> int:
        return len(self.fibers)

    @property
    def ps(self) -> list[int]:
        return [p for p, _ in self.fibers]

    @property
    def qs(self) -> list[int]:
        return [q for _, q in self.fibers]

    def with_fibers(self, fibers: Iterable[tuple[int, int]]) -> "SeifertData":
        return SeifertData(self.genus, tuple(fibers))

    def to_dict(self) -> dict:
        return {"genus": self.genus, "fibers": [[p, q] for p, q in self.fibers]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, doc: dict) -> "SeifertData":
        try:
            genus = doc.get("genus", 0)
            fibers = doc["fibers"]
        except (AttributeError, KeyError) as exc:
            raise SeifertValidationError(f"Seifert document needs a 'fibers' field: {exc}") from None
        if not isinstance(genus, int) or isinstance(genus, bool):
            raise SeifertValidationError(f"genus must be an integer, got {genus!r}")
        pairs = []
        for k, pair in enumerate(fibers):
            if (
                not isinstance(pair, (list, tuple))
                or len(pair) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in pair)
            ):
                raise SeifertValidationError(f"fiber {k} must be a pair of integers, got {pair!r}")
            pairs.append((pair[0], pair[1]))
        return cls(genus, tuple(pairs))

    @classmethod
    def from_json(cls, text: str) -> "SeifertData":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SeifertValidationError(f"malformed Seifert document: {exc}") from None
        return cls.from_dict(doc)

    def __str__(self) -> str:
        return f"(g={self.genus}; {format_fibers(self.fibers)})"


@dataclass(frozen=True)
class H1Summary:
    free_rank: int
    torsion_divisors: tuple[int, ...] = field(default_factory=tuple)
    mod2_dim: int = 0

    def to_dict(self) -> dict:
        return {
            "free_rank": self.free_rank,
            "torsion_divisors": list(self.torsion_divisors),
            "mod2_dim": self.mod2_dim,
        }


_PAIR = r"\(\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*\)"
_PAIR_RE = re.compile(_PAIR)
_LIST_RE = re.compile(rf"\s*{_PAIR}(?:\s*,\s*{_PAIR})*\s*")


def parse_fibers(text: str) -> tuple[tuple[int, int], ...]:
    """Parse the inline syntax ``"(p,q),(p,q),..."``; an empty string is no fibers."""
    if not text.strip():
        return ()
    if not _LIST_RE.fullmatch(text):
        raise SeifertValidationError(f"cannot parse fiber list {text!r}; expected \"(p,q),(p,q),...\"")
    return tuple((int(a), int(b)) for a, b in _PAIR_RE.findall(text))


def format_fibers(fibers: Sequence[tuple[int, int]]) -> str:
    return ",".join(f"({p},{q})" for p, q in fibers)


def _check_fiber(i: int, p: int, q: int):
    if p <= 0:
        raise SeifertValidationError(f"fiber {i} ({p},{q}): p must be positive")
    if p >= INT_CAP or abs(q) >= INT_CAP:
        raise SeifertValidationError(f"fiber {i} ({p},{q}): entries must be below 2^31 in size")
    if gcd(p, abs(q)) != 1:
        raise SeifertValidationError(f"fiber {i} ({p},{q}): gcd(p, q) = {gcd(p, abs(q))} != 1")


def validate_data(d: SeifertData) -> None:
    if d.genus < 0:
        raise SeifertValidationError(f"genus must be non-negative, got {d.genus}")
    for i, (p, q) in enumerate(d.fibers):
        _check_fiber(i, p, q)


def canonicalize(d: SeifertData) -> SeifertData:
    validate_data(d)
    if not d.fibers:
        return d.with_fibers([(1, 0)])
    return d


def presentation_matrix(d: SeifertData) -> tuple[list[list[int]], BitMatrix]:
    """Relation matrix of the abelianized fundamental group.

    Columns are ``x_1..x_n, h``; rows are ``p_i x_i + q_i h`` followed by the
    relation ``sum x_i``. The ``2g`` base generators appear in no relation and
    are not represented here.
    """
    n = d.n
    rows = []
    for i, (p, q) in enumerate(d.fibers):
        row = [0] * (n + 1)
        row[i] = p
        row[n] = q
        rows.append(row)
    rows.append([1] * n + [0])
    mod2 = BitMatrix.from_lists([[v % 2 for v in row] for row in rows], ncols=n + 1)
    return rows, mod2


def h1(d: SeifertData) -> H1Summary:
    d = canonicalize(d)
    ints, mod2 = presentation_matrix(d)
    free, torsion = abelian_invariants(ints, ncols=d.n + 1)
    free += 2 * d.genus
    mod2_dim = free + sum(1 for t in torsion if t % 2 == 0)
    corank = (d.n + 1 + 2 * d.genus) - rank2(mod2)
    if corank != mod2_dim:
        raise SelfCheckError(
            f"H1 mod 2 mismatch for {d}: Smith form gives {mod2_dim}, GF(2) corank gives {corank}"
        )
    return H1Summary(free, tuple(torsion), mod2_dim)


def count_hom_z2(d: SeifertData, budget: int = HOM_BUDGET) -> int:
    """Number of homomorphisms from the fundamental group to Z/2, by enumeration.

    Every assignment of 0/1 to the generators ``x_1..x_n, h`` and to the
    ``2g`` base generators is tested against every relation mod 2.
    """
    d = canonicalize(d)
    nvars = d.n + 1 + 2 * d.genus
    if nvars > budget:
        raise BudgetExceeded(f"{nvars} generators exceed the enumeration budget of {budget}")
    _, mod2 = presentation_matrix(d)
    # base generators occupy the high bits and have no relations
    relations = np.array(mod2.rows, dtype=np.uint64)
    total = 0
    chunk = 1 << 20
    size = 1 << nvars
    for start in range(0, size, chunk):
        a = np.arange(start, min(size, start + chunk), dtype=np.uint64)
        ok = np.ones(a.shape, dtype=bool)
        for rel in relations:
            ok &= _parity64(a & rel) == 0
        total += int(ok.sum())
    return total


def _parity64(x: np.ndarray) -> np.ndarray:
    x = x ^ (x >> np.uint64(32))
    x = x ^ (x >> np.uint64(16))
    x = x ^ (x >> np.uint64(8))
    x = x ^ (x >> np.uint64(4))
    x = x ^ (x >> np.uint64(2))
    x = x ^ (x >> np.uint64(1))
    return x & np.uint64(1)


def _check_index(d: SeifertData, i: int, what: str = "index"):
    if not 0 <= i < d.n:
        raise SeifertValidationError(f"{what} {i} out of range for {d.n} fibers")


def trade(d: SeifertData, i: int, j: int) -> SeifertData:
    """Parameter trading: ``(p_i, q_i + p_i)`` and ``(p_j, q_j - p_j)``."""
    _check_index(d, i)
    _check_index(d, j)
    if i == j:
        raise SeifertValidationError("trade needs two distinct fibers")
    fibers = list(d.fibers)
    pi, qi = fibers[i]
    pj, qj = fibers[j]
    fibers[i] = (pi, qi + pi)
    fibers[j] = (pj, qj - pj)
    # gcd(p, q + p) = gcd(p, q), so only the size cap can break
    _check_fiber(i, *fibers[i])
    _check_fiber(j, *fibers[j])
    return d.with_fibers(fibers)


def insert_trivial(d: SeifertData) -> SeifertData:
    return d.with_fibers(list(d.fibers) + [(1, 0)])


def remove_trivial(d: SeifertData, i: int) -> SeifertData:
    _check_index(d, i)
    if d.fibers[i] != (1, 0):
        raise SeifertValidationError(f"fiber {i} is {d.fibers[i]}, only (1,0) can be removed")
    if d.n < 2:
        raise SeifertValidationError("cannot remove the only fiber")
    return d.with_fibers(d.fibers[:i] + d.fibers[i + 1:])


def reverse_orientation(d: SeifertData) -> SeifertData:
    return d.with_fibers((p, -q) for p, q in d.fibers)


def permute(d: SeifertData, order: Sequence[int]) -> SeifertData:
    if sorted(order) != list(range(d.n)):
        raise SeifertValidationError(f"{list(order)} is not a permutation of {d.n} fibers")
    return d.with_fibers(d.fibers[k] for k in order)
