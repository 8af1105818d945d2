import itertools
from math import gcd, prod

from hypothesis import given, strategies as st

from seifert_dw.snf import abelian_invariants, smith_diagonal


def det(m):
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        total += (-1) ** inversions * prod(m[i][perm[i]] for i in range(n))
    return total


def determinantal_divisors(m):
    """Invariant factors from gcds of k x k minors, independent of any pivoting."""
    rows, cols = len(m), len(m[0])
    ds = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for r in itertools.combinations(range(rows), k):
            for c in itertools.combinations(range(cols), k):
                g = gcd(g, det([[m[i][j] for j in c] for i in r]))
        if g == 0:
            break
        ds.append(g)
    return [ds[k] // ds[k - 1] for k in range(1, len(ds))]


small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@given(small_matrices)
def test_smith_matches_determinantal_divisors(m):
    assert smith_diagonal(m) == determinantal_divisors(m)


@given(small_matrices)
def test_divisibility_chain(m):
    d = smith_diagonal(m)
    assert all(x > 0 for x in d)
    assert all(b % a == 0 for a, b in zip(d, d[1:]))


def test_abelian_invariants_examples():
    assert abelian_invariants([[2, 0, 1], [0, 2, 1], [1, 1, 0]]) == (0, [4])
    assert abelian_invariants([[4]]) == (0, [4])
    assert abelian_invariants([[0, 0]], ncols=2) == (2, [])
    assert abelian_invariants([], ncols=3) == (3, [])
    assert abelian_invariants([[2, 0], [0, 6]]) == (0, [2, 6])
