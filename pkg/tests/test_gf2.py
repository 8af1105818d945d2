import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from seifert_dw.gf2 import (
    BitMatrix,
    BitVector,
    DegenerateFormError,
    QuadraticForm,
    arf,
    gauss_sum,
    nullspace_basis,
    radical,
    rank,
    solve,
    symplectic_basis,
)


def span_size(rows: list[int]) -> int:
    """Brute-force size of the row span: an oracle for the rank."""
    seen = {0}
    for r in rows:
        seen |= {x ^ r for x in seen}
    return len(seen)


def brute_kernel(m: BitMatrix) -> set[int]:
    return {v for v in range(1 << m.ncols) if m.apply(v).is_zero()}


matrices = st.integers(0, 7).flatmap(
    lambda r: st.integers(0, 7).flatmap(
        lambda c: st.lists(st.integers(0, (1 << c) - 1), min_size=r, max_size=r).map(
            lambda rows: BitMatrix(tuple(rows), c)
        )
    )
)


# -- rank / nullspace / solve --------------------------------------------------

def test_rank_examples():
    assert rank(BitMatrix.identity(3)) == 3
    assert rank(BitMatrix.zeros(4, 5)) == 0
    assert rank(BitMatrix.from_strings(["110", "011", "101"])) == 2


@given(matrices)
def test_rank_matches_span_size(m):
    r = rank(m)
    assert 2 ** r == span_size(list(m.rows))
    assert r <= min(m.shape)
    assert rank(m) == r


def test_rank_of_transpose_on_random_8x8():
    rng = random.Random(7)
    for _ in range(200):
        m = BitMatrix(tuple(rng.getrandbits(8) for _ in range(8)), 8)
        assert rank(m) == rank(m.transpose())


def test_to_array_round_trip():
    arr = np.array([[1, 0, 1], [0, 1, 1]], dtype=np.uint8)
    m = BitMatrix.from_array(arr)
    assert (m.to_array() == arr).all()
    assert m.to_lists() == arr.tolist()


def test_nullspace_examples():
    assert nullspace_basis(BitMatrix.identity(3)) == []
    basis = nullspace_basis(BitMatrix.zeros(2, 4))
    assert len(basis) == 4 and span_size([v.bits for v in basis]) == 16
    basis = nullspace_basis(BitMatrix.from_strings(["110"]))
    assert len(basis) == 2
    spanned = {0}
    for v in basis:
        spanned |= {x ^ v.bits for x in spanned}
    expected = {BitVector.from_list(b).bits for b in ([0, 0, 0], [1, 1, 0], [0, 0, 1], [1, 1, 1])}
    assert spanned == expected


@given(matrices)
def test_nullspace_is_the_kernel(m):
    basis = nullspace_basis(m)
    assert len(basis) == m.ncols - rank(m)
    for v in basis:
        assert m.apply(v).is_zero()
    assert span_size([v.bits for v in basis]) == len(brute_kernel(m))


def test_solve_examples():
    b = BitVector.from_list([1, 0, 1])
    assert solve(BitMatrix.identity(3), b) == b
    assert solve(BitMatrix.zeros(1, 1), BitVector.from_list([1])) is None
    v = solve(BitMatrix.from_strings(["11"]), BitVector.from_list([1]))
    assert v is not None and v.weight() % 2 == 1


def test_solve_rejects_mismatched_rhs():
    with pytest.raises(ValueError):
        solve(BitMatrix.identity(3), BitVector.from_list([1, 0]))


@given(matrices, st.data())
def test_solve_agrees_with_brute_force(m, data):
    b = BitVector(data.draw(st.integers(0, (1 << m.nrows) - 1)), m.nrows)
    v = solve(m, b)
    images = {m.apply(x).bits for x in range(1 << m.ncols)}
    if v is None:
        assert b.bits not in images
    else:
        assert m.apply(v) == b


# -- radical -------------------------------------------------------------------

def test_radical_examples():
    assert len(radical(BitMatrix.zeros(3, 3))) == 3
    assert radical(BitMatrix.from_strings(["01", "10"])) == []
    block = BitMatrix.from_strings(["010", "100", "000"])
    (v,) = radical(block)
    assert v.to_list() == [0, 0, 1]


def test_radical_rejects_non_square():
    with pytest.raises(ValueError):
        radical(BitMatrix.zeros(2, 3))


# -- quadratic forms and Arf ---------------------------------------------------

H0 = QuadraticForm(2, table=[0, 0, 0, 1])  # xy
H1 = QuadraticForm(2, table=[0, 1, 1, 1])  # x^2 + xy + y^2


def orthogonal_sum(a: QuadraticForm, b: QuadraticForm) -> QuadraticForm:
    lo = (1 << a.dim) - 1
    return QuadraticForm.from_function(a.dim + b.dim, lambda x: a(x & lo) ^ b(x >> a.dim))


def test_arf_examples():
    assert arf(H0) == 0
    assert arf(H1) == 1
    q = orthogonal_sum(H0, H1)
    assert gauss_sum(q) == -4  # brute force over the 16 vectors
    assert arf(q) == 1


def test_arf_preconditions():
    with pytest.raises(DegenerateFormError, match="even"):
        arf(QuadraticForm(1, table=[0, 1]))
    with pytest.raises(DegenerateFormError, match="nondegenerate"):
        arf(QuadraticForm(2, table=[0, 1, 0, 1]))


def random_form(rng: random.Random, dim: int) -> QuadraticForm:
    # x^T U x with U upper triangular: every form of degree <= 2 arises this way
    u = [[rng.getrandbits(1) if j >= i else 0 for j in range(dim)] for i in range(dim)]

    def q(x):
        bits = [(x >> i) & 1 for i in range(dim)]
        return sum(u[i][j] * bits[i] * bits[j] for i in range(dim) for j in range(dim)) & 1

    return QuadraticForm.from_function(dim, q)


def nondegenerate_forms(max_dim: int, per_dim: int, seed: int):
    rng = random.Random(seed)
    for dim in range(2, max_dim + 1, 2):
        found = 0
        while found < per_dim:
            q = random_form(rng, dim)
            if rank(q.polarization()) == dim:
                found += 1
                yield q


def test_gauss_sum_identity_exhaustively_small():
    # every form on GF(2)^2 and GF(2)^4 with nondegenerate polarization
    for dim in (2, 4):
        for table in itertools.product([0, 1], repeat=(1 << dim) - 1):
            q = QuadraticForm(dim, table=(0,) + table)
            if not q.is_quadratic() or rank(q.polarization()) != dim:
                continue
            assert gauss_sum(q) == (-1) ** arf(q) * 2 ** (dim // 2)


def test_gauss_sum_identity_random_up_to_12():
    for q in nondegenerate_forms(12, 6, seed=11):
        assert abs(gauss_sum(q)) == 2 ** (q.dim // 2)
        assert gauss_sum(q) == (-1) ** arf(q) * 2 ** (q.dim // 2)


def random_invertible(rng: random.Random, dim: int) -> list[int]:
    while True:
        cols = [rng.getrandbits(dim) for _ in range(dim)]
        if span_size(cols) == 1 << dim:
            return cols


def test_arf_invariant_under_change_of_basis():
    rng = random.Random(5)
    for q in nondegenerate_forms(6, 4, seed=3):
        for _ in range(20):
            g = random_invertible(rng, q.dim)
            assert arf(q.restrict(g)) == arf(q)


def test_symplectic_basis_is_symplectic():
    for q in nondegenerate_forms(8, 3, seed=1):
        ell = q.polarization()
        pairs = symplectic_basis(ell)
        vecs = [v for pair in pairs for v in pair]
        assert span_size(vecs) == 1 << q.dim

        def b(x, y):
            return ell.apply(y).dot(BitVector(x, q.dim))

        for i, (a1, b1) in enumerate(pairs):
            assert b(a1, b1) == 1
            for j, (a2, b2) in enumerate(pairs):
                if i != j:
                    assert b(a1, a2) == b(a1, b2) == b(b1, a2) == b(b1, b2) == 0


def test_polarization_is_bilinear():
    rng = random.Random(2)
    for dim in range(1, 9):
        q = random_form(rng, dim)
        assert q.is_quadratic()
        ell = q.polarization()
        size = 1 << dim
        for x in range(size):
            for y in range(size):
                lhs = q(x ^ y) ^ q(x) ^ q(y)
                assert lhs == ell.apply(y).dot(BitVector(x, dim))


def test_not_quadratic_detected():
    cubic = QuadraticForm.from_function(3, lambda x: int(x == 7))
    assert not cubic.is_quadratic()


def test_basis_representation_matches_table():
    rng = random.Random(9)
    for dim in (3, 6):
        q = random_form(rng, dim)
        alt = QuadraticForm.from_basis([q(1 << i) for i in range(dim)], q.polarization())
        assert all(alt(x) == q(x) for x in range(1 << dim))


@settings(max_examples=50)
@given(st.integers(1, 8), st.data())
def test_restrict_to_standard_basis_is_identity(dim, data):
    table = [0] + data.draw(st.lists(st.integers(0, 1), min_size=(1 << dim) - 1, max_size=(1 << dim) - 1))
    q = QuadraticForm(dim, table=table)
    r = q.restrict([1 << i for i in range(dim)])
    assert list(r.table) == list(q.table)
