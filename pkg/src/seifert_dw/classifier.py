"""Essential elements and the Z/2 Dijkgraaf-Witten value from Seifert data alone.

A class ``x`` in ``H^1(M; Z/2)`` is essential when ``x^3 != 0``. Two
arithmetic families of presentations carry an essential class:

* class A: one fiber with ``p = 0 mod 4`` and another with ``p = 2 mod 4``;
* class B: all ``p`` odd, an even number of odd ``q``, and
  ``xi = (Q* + P*)/2`` odd, where ``Q*`` sums all ``q`` and ``P*`` is a
  balanced alternating sum of the ``p`` whose ``q`` is odd.

Nothing else does. With no essential class the invariant equals
``2^(m-1)``, ``m = dim H^1(M; Z/2)``; otherwise it vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import SeifertValidationError, SelfCheckError
from .seifert import SeifertData, canonicalize, h1, insert_trivial, trade

__all__ = [
    "DWValue",
    "Verdict",
    "in_class_a",
    "b_eligible",
    "xi_parity_direct",
    "xi_parity_normalized",
    "normalization_trace",
    "balanced_xi_parities",
    "classify",
    "dw_value_from_m",
]


@dataclass(frozen=True, order=True)
class DWValue:
    """An exact value ``num/den`` with ``den`` in {1, 2}."""

    num: int
    den: int = 1

    def __post_init__(self):
        if self.den not in (1, 2):
            raise ValueError(f"denominator must be 1 or 2, got {self.den}")
        if self.den == 2 and self.num % 2 == 0:
            object.__setattr__(self, "num", self.num // 2)
            object.__setattr__(self, "den", 1)
        if self.den == 2 and abs(self.num) != 1:
            raise ValueError(f"{self.num}/2 is not a possible invariant value")

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> "DWValue":
        value = Fraction(value)
        return cls(value.numerator, value.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def to_dict(self) -> dict:
        return {"num": self.num, "den": self.den}

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


@dataclass(frozen=True)
class Verdict:
    in_class_a: bool
    b_eligible: bool
    xi_parity: int | None
    in_class_b: bool
    essential: bool
    m: int
    z: DWValue

    def key(self) -> tuple:
        """The manifold-level part of the verdict: (essential, m, z)."""
        return (self.essential, self.m, self.z)

    def to_dict(self) -> dict:
        return {
            "in_class_a": self.in_class_a,
            "b_eligible": self.b_eligible,
            "xi_parity": self.xi_parity,
            "in_class_b": self.in_class_b,
            "essential": self.essential,
            "m": self.m,
            "z": self.z.to_dict(),
        }


def dw_value_from_m(essential: bool, m: int) -> DWValue:
    if essential:
        return DWValue(0)
    if m == 0:
        return DWValue(1, 2)
    return DWValue(2 ** (m - 1))


def in_class_a(d: SeifertData) -> bool:
    residues = {p % 4 for p in d.ps}
    return 0 in residues and 2 in residues


def b_eligible(d: SeifertData) -> bool:
    if any(p % 2 == 0 for p in d.ps):
        return False
    return sum(q % 2 for q in d.qs) % 2 == 0


def _require_eligible(d: SeifertData):
    if not b_eligible(d):
        raise SeifertValidationError(f"{d} is not b-eligible (needs all p odd and an even number of odd q)")


def xi_parity_direct(d: SeifertData) -> int:
    _require_eligible(d)
    total = sum(d.qs)
    sign = 1
    for p, q in d.fibers:
        if q % 2:
            total += sign * p
            sign = -sign
    if total % 2:
        raise SelfCheckError(f"Q* + P* = {total} is odd for b-eligible {d}")
    return (total // 2) % 2


def balanced_xi_parities(d: SeifertData) -> set[int]:
    """Parities of ``(Q* + P*)/2`` over every balanced choice of signs in ``P*``."""
    _require_eligible(d)
    q_sum = sum(d.qs)
    odd_ps = [p for p, q in d.fibers if q % 2]
    t = len(odd_ps) // 2
    out = set()
    for plus in combinations(range(len(odd_ps)), t):
        chosen = set(plus)
        p_star = sum(p if k in chosen else -p for k, p in enumerate(odd_ps))
        out.add(((q_sum + p_star) // 2) % 2)
    return out


def normalization_trace(d: SeifertData) -> list[SeifertData]:
    """Trades driving ``q_1..q_{n-1}`` to multiples of 4, using the last fiber as sink.

    Returns every intermediate presentation, starting with the input (plus a
    trivial sink fiber when the input has a single fiber).
    """
    _require_eligible(d)
    cur = d if d.n >= 2 else insert_trivial(canonicalize(d))
    trace = [cur]
    n = cur.n
    bound = 16 * n * max(1, max(abs(q) for q in cur.qs))
    steps = 0
    for i in range(n - 1):
        if cur.fibers[i][1] % 2:
            cur = trade(cur, i, n - 1)
            trace.append(cur)
            steps += 1
        while cur.fibers[i][1] % 4 == 2:
            cur = trade(trade(cur, i, n - 1), i, n - 1)
            trace.append(cur)
            steps += 2
            if steps > bound:
                raise SelfCheckError(f"normalization of {d} did not terminate within {bound} trades")
    if cur.fibers[-1][1] % 2:
        raise SelfCheckError(f"last q of normalized {cur} is odd")
    return trace


def xi_parity_normalized(d: SeifertData) -> int:
    last = normalization_trace(d)[-1]
    return (last.fibers[-1][1] // 2) % 2


def classify(d: SeifertData) -> Verdict:
    d = canonicalize(d)
    a = in_class_a(d)
    elig = b_eligible(d)
    xi = xi_parity_direct(d) if elig else None
    b = elig and xi == 1
    essential = a or b
    m = h1(d).mod2_dim
    return Verdict(a, elig, xi, b, essential, m, dw_value_from_m(essential, m))
