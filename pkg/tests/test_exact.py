import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftinv.exact import (
    FormalSum,
    ValidationError,
    ZPoly,
    in_integer_span,
    mat_mul,
    rank_mod_p,
    signature_nullity,
    smith_normal_form,
)

E8 = [
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, 0],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, -1],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, 0, 0, -1, 0, 0, 2],
]


# --- oracles -----------------------------------------------------------


def charpoly(m):
    """Characteristic polynomial det(xI - m) by Faddeev-LeVerrier, exact."""
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    coeffs = [Fraction(1)]  # x^n coefficient first
    mk = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        mk = mat_mul(a, mk)
        ck = -sum(mk[i][i] for i in range(n)) / k
        coeffs.append(ck)
        for i in range(n):
            mk[i][i] += ck
    return coeffs


def eigen_sign_counts(m):
    """(l+, l-, l0) from the characteristic polynomial of a symmetric matrix.

    All roots are real, so Descartes' rule is exact: the number of positive
    roots equals the sign changes of the coefficient sequence.
    """
    cs = charpoly(m)
    n = len(m)
    zero = 0
    while zero < n and cs[n - zero] == 0:
        zero += 1
    nz = [c for c in cs[: n - zero + 1] if c != 0]
    pos = sum(1 for a, b in zip(nz, nz[1:]) if (a > 0) != (b > 0))
    return pos, n - zero - pos, zero


def snf_reconstruct_check(m):
    factors, rank, u, v = smith_normal_form(m, with_transforms=True)
    d = mat_mul(mat_mul(u, m), v)
    rows, cols = len(m), len(m[0]) if m else 0
    for i in range(rows):
        for j in range(cols):
            want = factors[i] if i == j and i < len(factors) else 0
            assert d[i][j] == want
    for i in range(len(factors) - 1):
        if factors[i]:
            assert factors[i + 1] % factors[i] == 0
        else:
            assert factors[i + 1] == 0
    return factors, rank


# --- smith normal form -------------------------------------------------


def test_snf_identity():
    factors, rank = smith_normal_form([[1, 0], [0, 1]])
    assert factors == [1, 1] and rank == 2


def test_snf_zero_1x1():
    factors, rank = smith_normal_form([[0]])
    assert factors == [0] and rank == 0


def test_snf_2_4_4_2():
    # oracle: exhaustive row/column reduction, verified via U*m*V below
    m = [[2, 4], [4, 2]]
    factors, rank = snf_reconstruct_check(m)
    assert factors == [2, 6] and rank == 2


def test_snf_empty():
    factors, rank = smith_normal_form([])
    assert factors == [] and rank == 0


def test_snf_reconstruction_random():
    rng = random.Random(20240811)
    for _ in range(60):
        rows = rng.randint(1, 8)
        cols = rng.randint(1, 8)
        m = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
        snf_reconstruct_check(m)


# --- signature ---------------------------------------------------------


def test_signature_diagonal():
    assert signature_nullity([[1, 0, 0], [0, -1, 0], [0, 0, 0]]) == (1, 1, 1)


def test_signature_e8():
    # oracle: characteristic-polynomial sign-change count
    assert eigen_sign_counts(E8) == (8, 0, 0)
    assert signature_nullity(E8) == (8, 0, 0)


def test_signature_empty():
    assert signature_nullity([]) == (0, 0, 0)


def test_signature_rejects_nonsymmetric():
    with pytest.raises(ValidationError):
        signature_nullity([[0, 1], [0, 0]])


def test_signature_matches_charpoly_oracle():
    rng = random.Random(1729)
    for _ in range(200):
        n = rng.randint(1, 6)
        m = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                m[i][j] = m[j][i] = rng.randint(-5, 5)
        assert signature_nullity(m) == eigen_sign_counts(m)


# --- rank mod p --------------------------------------------------------


def test_rank_mod_p_cases():
    assert rank_mod_p([[0] * 3 for _ in range(3)], 5) == 0
    assert rank_mod_p([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 5) == 3
    assert rank_mod_p([[5, 0], [0, 1]], 5) == 1


def test_rank_mod_p_rejects_composite():
    with pytest.raises(ValidationError):
        rank_mod_p([[1]], 6)


def test_integer_span():
    assert in_integer_span([[2, 0], [0, 3]], [4, 3])
    assert not in_integer_span([[2, 0], [0, 3]], [1, 0])
    assert in_integer_span([], [0, 0])
    assert not in_integer_span([], [1, 0])


# --- ZPoly -------------------------------------------------------------


def test_zpoly_basic():
    p = ZPoly({0: 1, 2: 1})
    q = p * p
    assert q == ZPoly({0: 1, 2: 2, 4: 1})
    assert str(p) == "1+z^2"
    assert (p - p) == ZPoly()
    assert q.coefficient(2) == 2
    assert q.divisible_by_z_power(0) and not q.divisible_by_z_power(1)
    assert ZPoly({2: 1, 4: -3}).divisible_by_z_power(2)


def test_zpoly_str():
    assert str(ZPoly()) == "0"
    assert str(ZPoly({1: -1, 3: Fraction(1, 2)})) == "-z+1/2*z^3"


# --- FormalSum ---------------------------------------------------------


small_sums = st.dictionaries(st.integers(0, 6), st.integers(-4, 4), max_size=5).map(FormalSum)


@given(small_sums, small_sums, small_sums)
@settings(max_examples=200, deadline=None)
def test_formal_sum_abelian_group(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert x + (-x) == FormalSum.zero()
    assert x - y == x + (-y)
    assert 2 * x == x + x


def test_formal_sum_no_zero_terms():
    s = FormalSum([(1, 2), (1, -2), (3, 1)])
    assert s.terms == {3: 1}
