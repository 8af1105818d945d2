import itertools
import random
from fractions import Fraction
from math import gcd

import pytest

from conftest import sd
from test_seifert import random_data, random_move
from seifert_dw.classifier import (
    DWValue,
    b_eligible,
    balanced_xi_parities,
    classify,
    in_class_a,
    normalization_trace,
    xi_parity_direct,
    xi_parity_normalized,
)
from seifert_dw.errors import SeifertValidationError
from seifert_dw.seifert import SeifertData, h1


def test_dw_value():
    assert DWValue(1, 2).fraction == Fraction(1, 2)
    assert DWValue(4, 2) == DWValue(2)
    assert DWValue.from_fraction(Fraction(8, 2)) == DWValue(4)
    assert str(DWValue(1, 2)) == "1/2"
    assert DWValue(3).to_dict() == {"num": 3, "den": 1}
    for bad in [(1, 3), (3, 2)]:
        with pytest.raises(ValueError):
            DWValue(*bad)


def test_in_class_a_examples():
    assert in_class_a(sd((4, 1), (2, 1)))
    assert not in_class_a(sd((2, 1), (2, 1)))
    assert not in_class_a(sd((4, 1), (4, 3)))


def test_b_eligible_examples():
    assert b_eligible(sd((3, 1), (3, 1), (1, 4)))
    assert not b_eligible(sd((3, 1), (1, 4)))
    assert not b_eligible(sd((2, 1), (2, 1)))


def test_xi_direct_examples():
    assert xi_parity_direct(sd((3, 1), (3, 1), (1, 4))) == 1
    assert xi_parity_direct(sd((3, 1), (3, 1), (1, 2))) == 0
    assert xi_parity_direct(sd((1, 0))) == 0
    with pytest.raises(SeifertValidationError):
        xi_parity_direct(sd((3, 1), (1, 4)))


def test_xi_normalized_examples():
    trace = normalization_trace(sd((3, 1), (3, 1), (1, 4)))
    last = trace[-1]
    assert all(q % 4 == 0 for q in last.qs[:-1])
    assert last.qs[-1] % 2 == 0
    assert xi_parity_normalized(sd((3, 1), (3, 1), (1, 4))) == 1
    assert xi_parity_normalized(sd((3, 1), (3, 1), (1, 2))) == 0
    assert xi_parity_normalized(sd((1, 0))) == 0
    with pytest.raises(SeifertValidationError):
        xi_parity_normalized(sd((2, 1)))


def test_normalization_trace_uses_trades_only():
    trace = normalization_trace(sd((3, 2)))
    assert trace[0] == sd((3, 2), (1, 0))
    assert len(trace) > 1
    for a, b in zip(trace, trace[1:]):
        assert h1(a) == h1(b)
        assert [p for p, _ in a.fibers] == [p for p, _ in b.fibers]


PAPER_VERDICTS = [
    # m = 1: the mod-2 presentation matrix has rank 2 of 3
    (sd((4, 1), (2, 1)), True, 1, DWValue(0)),
    (sd((1, 1)), False, 0, DWValue(1, 2)),
]
DERIVED_VERDICTS = [
    (sd((1, 2)), True, 1, DWValue(0)),
    (sd((1, 0)), False, 1, DWValue(1)),
    (sd((1, 0), genus=1), False, 3, DWValue(4)),
    (sd((2, 1), (2, 1)), False, 1, DWValue(1)),
    (sd((3, 1), (3, 1), (1, 4)), True, 1, DWValue(0)),
]


@pytest.mark.parametrize("d, essential, m, z", PAPER_VERDICTS + DERIVED_VERDICTS)
def test_classify_examples(d, essential, m, z):
    v = classify(d)
    assert (v.essential, v.m, v.z) == (essential, m, z)


def test_classify_class_membership():
    assert classify(sd((4, 1), (2, 1))).in_class_a
    v = classify(sd((1, 2)))
    assert v.in_class_b and not v.in_class_a and v.xi_parity == 1
    v = classify(sd((1, 0)))
    assert not v.in_class_a and not v.in_class_b
    assert classify(sd()).m == 1  # empty list means one (1,0) fiber


def test_classify_genus_enters_only_through_m():
    for d in [sd((3, 1), (3, 1), (1, 4)), sd((4, 1), (2, 1)), sd((1, 0)), sd((5, 2), (3, 1))]:
        base = classify(d)
        for g in range(1, 4):
            v = classify(SeifertData(g, d.fibers))
            assert v.essential == base.essential
            assert v.m == base.m + 2 * g


def test_verdict_to_dict():
    doc = classify(sd((1, 2))).to_dict()
    assert doc["z"] == {"num": 0, "den": 1}
    assert {"in_class_a", "b_eligible", "xi_parity", "in_class_b", "essential", "m", "z"} <= set(doc)


# -- properties -----------------------------------------------------------------------

def _pairs(ps, max_q):
    return [(p, q) for p in ps for q in range(-max_q, max_q + 1) if gcd(p, abs(q)) == 1]


def test_xi_direct_equals_normalized_exhaustive():
    pairs = _pairs((1, 3, 5, 7), 8)
    checked = 0
    # every ordered list up to three fibers, and every multiset of four
    lists = itertools.chain(
        (c for n in range(1, 4) for c in itertools.product(pairs, repeat=n)),
        itertools.combinations_with_replacement(pairs, 4),
    )
    for fibers in lists:
        d = SeifertData(0, fibers)
        if b_eligible(d):
            assert xi_parity_direct(d) == xi_parity_normalized(d), d
            checked += 1
    assert checked > 100_000


def test_xi_direct_equals_normalized_random():
    rng = random.Random(21)
    seen = 0
    while seen < 500:
        d = random_data(rng, max_n=6, max_p=15, max_q=40)
        d = d.with_fibers((p | 1, q) for p, q in d.fibers)
        if any(gcd(p, abs(q)) != 1 for p, q in d.fibers) or not b_eligible(d):
            continue
        seen += 1
        assert xi_parity_direct(d) == xi_parity_normalized(d), d


def test_balanced_signs_never_matter():
    rng = random.Random(22)
    seen = 0
    while seen < 500:
        d = random_data(rng, max_n=9, max_p=11, max_q=9)
        d = d.with_fibers((p | 1, q) for p, q in d.fibers)
        if any(gcd(p, abs(q)) != 1 for p, q in d.fibers) or not b_eligible(d):
            continue
        if sum(q % 2 for q in d.qs) > 8:
            continue
        seen += 1
        assert balanced_xi_parities(d) == {xi_parity_direct(d)}


def test_unbalanced_signs_can_matter():
    # the reason for the balanced reading: one flipped sign changes the parity
    d = sd((3, 1), (3, 1), (1, 4))
    q_star = sum(d.qs)
    assert ((q_star + 3 + 3) // 2) % 2 != ((q_star + 3 - 3) // 2) % 2


def test_verdict_invariant_under_moves():
    rng = random.Random(23)
    for _ in range(200):
        d = random_data(rng)
        key = classify(d).key()
        cur = d
        for _ in range(10):
            cur = random_move(rng, cur)
            assert classify(cur).key() == key, (d, cur)


def test_value_rule_consistency():
    rng = random.Random(24)
    for _ in range(500):
        d = random_data(rng)
        v = classify(d)
        assert v.essential == (v.in_class_a or v.in_class_b)
        if v.in_class_b:
            assert v.b_eligible and v.xi_parity == 1
        if v.z.num == 0:
            assert v.essential
        assert (v.z == DWValue(1, 2)) == (v.m == 0)
        if not v.essential and v.m:
            assert v.z == DWValue(2 ** (v.m - 1))
