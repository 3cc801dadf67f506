import random
from fractions import Fraction
from math import comb

import pytest

from ftinv.conway import (
    SeifertPresentation,
    c2k_on_bracket,
    c2n,
    c2n_diagram,
    conway_alternating,
    conway_link,
    lescop_b1_1,
    partial_alternating,
    product_on_bracket,
    seifert_conway,
)
from ftinv.exact import TheoremViolation, ValidationError, ZPoly
from ftinv.links import Component, FramedLink, SliceBuilder, braid_closure, unknot


def trefoil(right=True):
    return braid_closure([1, 1, 1] if right else [-1, -1, -1], 2)


def fig8():
    return braid_closure([1, -2, 1, -2], 3)


def borromean():
    return braid_closure([1, -2, 1, -2, 1, -2], 3)


def hopf_positive():
    return braid_closure([1, 1], 2, [Component(framing=1), Component(framing=1)])


def trefoil_sum(j):
    b = SliceBuilder()
    b.cup(0)
    for _ in range(j):
        b.cup(1)
        b.braid([1, 1, 1])
        b.cap(1)
    b.cap(0)
    return FramedLink(b.events, [Component(framing=0)])


def lambda_presentation(n):
    """n Borromean genus-1 blocks on an unknot, all +1 framed curves."""
    g2 = 2 * n
    v = [[0] * g2 for _ in range(g2)]
    for i in range(n):
        v[2 * i][2 * i + 1] = 1
    surg = []
    for i in range(g2):
        lam = [0] * g2
        lam[i] = 1
        surg.append((1, lam))
    return SeifertPresentation(v, surg)


def circular_presentation():
    """The 4-component circular link: band sums chaining the 4 blocks."""
    g2 = 8
    v = [[0] * g2 for _ in range(g2)]
    for i in range(4):
        v[2 * i][2 * i + 1] = 1
    surg = []
    for i in range(4):
        lam = [0] * g2
        lam[2 * i + 1] = 1
        lam[(2 * i + 2) % 8] = 1
        surg.append((1, lam))
    return SeifertPresentation(v, surg)


EX33 = SeifertPresentation([[0, 1], [0, 0]], [(1, [1, 0]), (1, [0, 1])])


# --- skein engine ---------------------------------------------------------


def test_conway_unknot():
    assert conway_link(unknot(0)) == ZPoly.const(1)


def test_conway_trefoils():
    expected = ZPoly({0: 1, 2: 1})
    assert conway_link(trefoil(True)) == expected
    assert conway_link(trefoil(False)) == expected


def test_conway_hopf():
    # oracle: one skein resolution to two unknots / unknot smoothing
    assert conway_link(hopf_positive()) == ZPoly.z()
    neg = braid_closure([-1, -1], 2, [Component(framing=-1), Component(framing=-1)])
    assert conway_link(neg) == -ZPoly.z()


def test_conway_fig8():
    assert conway_link(fig8()) == ZPoly({0: 1, 2: -1})


def test_conway_trefoil_sums():
    one_plus_z2 = ZPoly({0: 1, 2: 1})
    for j in range(1, 5):
        assert conway_link(trefoil_sum(j)) == one_plus_z2**j


def test_conway_knot_shape():
    # knots: only even powers, constant term 1
    for k in (trefoil(), fig8(), trefoil_sum(3)):
        poly = conway_link(k)
        assert poly.coefficient(0) == 1
        assert all(e % 2 == 0 for e in poly.coeffs)


def test_conway_link_divisibility():
    # k-component links are divisible by z^(k-1)
    assert conway_link(hopf_positive()).divisible_by_z_power(1)
    b = conway_link(borromean())
    assert b.divisible_by_z_power(2)
    assert b == ZPoly({4: 1})  # Borromean rings; coefficient of z^4 is odd


def test_conway_split_links_vanish():
    from ftinv.links import disjoint_union

    assert conway_link(disjoint_union(unknot(0), unknot(0))) == ZPoly()
    assert conway_link(disjoint_union(trefoil(), unknot(0))) == ZPoly()


# --- Seifert engine --------------------------------------------------------


def test_seifert_unknot():
    assert seifert_conway(SeifertPresentation([[0, 1], [0, 0]]), ()) == ZPoly.const(1)


def test_seifert_cross_engine():
    assert seifert_conway([[-1, 1], [0, -1]]) == conway_link(trefoil())
    assert seifert_conway([[1, 1], [0, -1]]) == conway_link(fig8())


def test_example_3_3():
    # both surgeries: the right-handed trefoil; alternating sum z^2
    assert seifert_conway(EX33, [0, 1]) == ZPoly({0: 1, 2: 1})
    assert seifert_conway(EX33, [0]) == ZPoly.const(1)
    assert seifert_conway(EX33, [1]) == ZPoly.const(1)
    assert conway_alternating(EX33) == ZPoly({2: 1})


def test_lambda_2n_realization():
    for n in (1, 2, 3):
        assert conway_alternating(lambda_presentation(n)) == ZPoly({2 * n: 1})


def test_c2k_kronecker():
    for n in (1, 2, 3):
        pres = lambda_presentation(n)
        for k in (1, 2, 3):
            expected = 1 if k == n else 0
            assert c2k_on_bracket(pres, k) == expected


def test_c2_powers_formula():
    # C_2^n(lambda_2n) = sum_j (-1)^(n-j) C(n,j) j^n
    assert product_on_bracket(lambda_presentation(2), 1, 1) == 2
    expected3 = sum((-1) ** (3 - j) * comb(3, j) * j**3 for j in range(1, 4))
    assert expected3 == 6


def test_remark_3_7_pair_values():
    p4 = lambda_presentation(2)
    assert (c2k_on_bracket(p4, 2), product_on_bracket(p4, 1, 1)) == (1, 2)
    phat = circular_presentation()
    assert (c2k_on_bracket(phat, 2), product_on_bracket(phat, 1, 1)) == (0, 4)


def test_c2k_binomial_on_trefoil_sums():
    for j in range(5):
        v = [[0, 0], [0, 0]]
        # Seifert matrix for the j-fold trefoil connected sum
        big = _block_diag([[[-1, 1], [0, -1]]] * j) if j else [[0, 1], [0, 0]]
        pres = SeifertPresentation(big)
        for k in range(4):
            assert c2n(pres, k) == comb(j, k)


def _block_diag(blocks):
    size = sum(len(b) for b in blocks)
    out = [[0] * size for _ in range(size)]
    at = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[at + i][at + j] = x
        at += len(b)
    return out


def random_presentation(rng, gmax=3, lmax=4):
    g = rng.randint(1, gmax)
    g2 = 2 * g
    v = [[0] * g2 for _ in range(g2)]
    for i in range(g):
        v[2 * i][2 * i + 1] = 1
    for i in range(g2):
        for j in range(i, g2):
            s = rng.randint(-2, 2)
            v[i][j] += s
            v[j][i] += s
    ell = rng.randint(0, lmax)
    surg = []
    for _ in range(ell):
        surg.append((rng.choice([1, -1]), [rng.randint(-2, 2) for _ in range(g2)]))
    return SeifertPresentation(v, surg)


def test_divisibility_theorem_randomized():
    rng = random.Random(33)
    for _ in range(100):
        pres = random_presentation(rng)
        conway_alternating(pres)  # raises TheoremViolation on failure


def test_single_surgery_difference_divisible_by_z():
    # nabla_K(S) - nabla_K(S + J) = z * (sum of smoothed Conways)
    rng = random.Random(77)
    for _ in range(30):
        pres = random_presentation(rng, gmax=2, lmax=3)
        if pres.ell == 0:
            continue
        j = rng.randrange(pres.ell)
        rest = [i for i in range(pres.ell) if i != j]
        mask = rng.randint(0, (1 << len(rest)) - 1)
        s = [rest[i] for i in range(len(rest)) if mask >> i & 1]
        diff = seifert_conway(pres, s) - seifert_conway(pres, s + [j])
        assert diff.divisible_by_z_power(1)


def test_congruence_invariance():
    rng = random.Random(4)
    for _ in range(25):
        pres = random_presentation(rng, gmax=2, lmax=2)
        g2 = len(pres.v)
        u = _random_unimodular(rng, g2)
        other = pres.congruent(u)
        for mask in range(1 << pres.ell):
            s = [j for j in range(pres.ell) if mask >> j & 1]
            assert seifert_conway(pres, s) == seifert_conway(other, s)


def _random_unimodular(rng, n):
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice([-1, 1])
        for k in range(n):
            u[i][k] += c * u[j][k]
    return u


def test_rejects_bad_seifert_matrix():
    with pytest.raises(ValidationError):
        SeifertPresentation([[0, 0], [0, 0]])
    with pytest.raises(ValidationError):
        SeifertPresentation([[1]])


# --- C_2n / Lescop -----------------------------------------------------------


def test_c2n_diagram_matches_seifert():
    assert c2n_diagram(trefoil_sum(2), 1) == 2
    assert c2n_diagram(trefoil_sum(2), 2) == 1
    with pytest.raises(ValidationError):
        c2n_diagram(unknot(1), 1)


def test_lescop_values():
    # S^1 x S^2: C_2 = 0, |Tor| = 1
    assert lescop_b1_1(unknot(0)) == Fraction(-1, 12)
    # 0-surgery on the right trefoil
    assert lescop_b1_1(trefoil_sum(1)) == Fraction(11, 12)
    assert lescop_b1_1(SeifertPresentation([[-1, 1], [0, -1]])) == Fraction(11, 12)
    with pytest.raises(ValidationError):
        lescop_b1_1(unknot(1))


def test_partial_alternating_matches_definition():
    pres = lambda_presentation(2)
    full = conway_alternating(pres)
    assert partial_alternating(pres, range(pres.ell)) == full


def test_json_roundtrip():
    pres = lambda_presentation(2)
    again = SeifertPresentation.from_json(pres.to_json())
    assert again.v == pres.v and again.surgeries == pres.surgeries
