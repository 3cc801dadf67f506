import random
from fractions import Fraction

import pytest

from ftinv.exact import FormalSum, ValidationError
from ftinv.links import (
    Component,
    FramedLink,
    braid_closure,
    cable,
    disjoint_union,
    empty_link,
    special_link,
    unknot,
)


def borromean(framings=(0, 0, 0), roles=("base",) * 3):
    comps = [Component(framing=f, role=r) for f, r in zip(framings, roles)]
    return braid_closure([1, -2, 1, -2, 1, -2], 3, comps)


def hopf(framings=(1, 1)):
    return braid_closure([1, 1], 2, [Component(framing=f) for f in framings])


def trefoil(right=True, framing=0):
    w = [1, 1, 1] if right else [-1, -1, -1]
    return braid_closure(w, 2, [Component(framing=framing)])


def intmat(link):
    return [[int(x) for x in row] for row in link.linking_matrix()]


# --- linking matrices ---------------------------------------------------


def test_linking_borromean_zero():
    assert intmat(borromean()) == [[0] * 3 for _ in range(3)]


def test_linking_hopf():
    # oracle: two positive crossings between the components, half-sum = 1
    assert intmat(hopf((1, 1))) == [[1, 1], [1, 1]]


def test_linking_trefoil_diag_is_framing():
    assert intmat(trefoil(framing=1)) == [[1]]


def test_linking_symmetric_and_r_moves():
    # R2 insertion: two canceling crossings between strands, and an R3 slide
    # (braid relation), must leave the linking matrix unchanged.
    base = braid_closure([1, -2, 1, -2, 1, -2], 3)
    with_r2 = braid_closure([1, -1, 1, -2, 1, -2, 1, -2], 3)
    assert intmat(base) == intmat(with_r2)
    a = braid_closure([1, 2, 1, 1, -2, 1], 3)
    b = braid_closure([2, 1, 2, 1, -2, 1], 3)  # sigma1 sigma2 sigma1 = sigma2 sigma1 sigma2
    assert intmat(a) == intmat(b)
    m = a.linking_matrix()
    assert all(m[i][j] == m[j][i] for i in range(3) for j in range(3))


def test_orientation_flip_changes_linking_sign():
    h = braid_closure(
        [1, 1], 2, [Component(framing=1), Component(framing=1, orientation=-1)]
    )
    assert intmat(h)[0][1] == -1


# --- delta --------------------------------------------------------------


def test_delta_one_component():
    k = trefoil()
    d = k.delta()
    assert d == FormalSum([(empty_link(), 1), (k, -1)])


def test_delta_two_components():
    h = hopf((1, -1))
    d = h.delta()
    terms = dict(d)
    assert len(terms) == 4
    assert terms[empty_link()] == 1
    assert terms[h] == 1
    singles = [t for t in terms if t.n == 1]
    assert len(singles) == 2 and all(terms[t] == -1 for t in singles)


def test_delta_merges_equal_sublinks():
    # both single-component sublinks of the (+1,+1) Hopf link are the same
    # +1-framed unknot, so their delta terms combine
    d = hopf((1, 1)).delta()
    singles = {t: c for t, c in d if t.n == 1}
    assert list(singles.values()) == [-2]


def test_delta_is_involution():
    for link in (unknot(0), hopf(), borromean(), trefoil()):
        d = link.delta()
        dd = d.map_basis(lambda s: s.delta())
        assert dd == FormalSum.single(link)


# --- admissibility -------------------------------------------------------


def test_admissible_fig_3_4_configuration():
    sl = special_link(1, 2, [(1, 2, 3, +1)])
    assert sl.is_admissible([0, 1])


def test_meridian_not_admissible():
    # +1-framed meridian of a base component: linking number 1 with the base
    h = braid_closure(
        [1, 1], 2, [Component(framing=1, role="surgery"), Component(framing=0, role="base")]
    )
    assert not h.is_admissible([0])


def test_zero_framed_unknot_not_admissible():
    u = unknot(0)
    assert not u.is_admissible([0])


def test_sub_selector_of_admissible_is_admissible():
    links = [
        borromean((1, 1, 1)),
        special_link(1, 2, [(1, 2, 3, +1)]),
        special_link(1, 4, [(1, 2, 5, +1), (3, 4, 5, +1)]),
    ]
    for link in links:
        full = [i for i in range(link.n) if link.components[i].role != "base"]
        if not full:
            full = list(range(link.n))
        assert link.is_admissible(full)
        for mask in range(1 << len(full)):
            sub = [full[i] for i in range(len(full)) if mask >> i & 1]
            assert link.is_admissible(sub)


# --- cable ----------------------------------------------------------------


def test_cable_empty():
    assert cable(borromean(), (0, 0, 0)).n == 0


def test_cable_identity():
    u = unknot(0)
    assert cable(u, (1,)) == u


def test_cable_two_copies_of_unit_unknot():
    # oracle: linking_matrix of the constructed diagram
    c = cable(unknot(1), (2,))
    assert intmat(c) == [[1, 1], [1, 1]]


def test_cable_preserves_colors_roles():
    u = unknot(1, role="surgery", color=3)
    c = cable(u, (2,))
    assert all(comp.role == "surgery" and comp.color == 3 for comp in c.components)


def test_cable_rejects_negative():
    with pytest.raises(ValidationError):
        cable(unknot(0), (-1,))


def test_cable_component_count_and_framing_pushoffs():
    c = cable(trefoil(framing=2), (3,))
    assert c.n == 3
    m = intmat(c)
    assert all(m[i][j] == 2 for i in range(3) for j in range(3))


# --- special links ---------------------------------------------------------


def test_special_link_trivial():
    sl = special_link(1, 1, [])
    assert sl.n == 2
    assert intmat(sl) == [[1, 0], [0, 0]]
    assert sl.components[0].role == "surgery"
    assert sl.components[1].role == "base"


def test_special_link_borromean_pattern():
    sl = special_link(1, 2, [(1, 2, 3, +1)])
    assert sl.n == 3
    assert [c.framing for c in sl.components] == [1, 1, 0]
    assert intmat(sl) == [[1, 0, 0], [0, 1, 0], [0, 0, 0]]


def test_special_link_always_admissible():
    rng = random.Random(5)
    for _ in range(10):
        ell = rng.randint(1, 4)
        m = rng.randint(1, 2)
        total = ell + m
        reps = []
        used = {}
        for _ in range(rng.randint(0, 3)):
            tri = sorted(rng.sample(range(1, total + 1), 3))
            if tri[0] > ell:
                continue
            if any(used.get(t, 0) >= 2 for t in tri if t <= ell):
                continue
            for t in tri:
                if t <= ell:
                    used[t] = used.get(t, 0) + 1
            reps.append((*tri, rng.choice([1, -1])))
        sl = special_link(m, ell, reps)
        assert sl.is_admissible(range(ell))
        # pairwise linking numbers all vanish
        lk = sl.linking_matrix()
        assert all(lk[i][j] == 0 for i in range(sl.n) for j in range(sl.n) if i != j)


def test_special_link_validation():
    with pytest.raises(ValidationError):
        special_link(1, 1, [(1, 2, 3, 1), (1, 2, 3, 1), (1, 2, 3, 1)])
    with pytest.raises(ValidationError):
        special_link(2, 1, [(2, 3, 4, 1)])  # i > ell


# --- disjoint union ---------------------------------------------------------


def test_disjoint_union_identity():
    a = trefoil()
    assert disjoint_union(a, empty_link()) == a


def test_disjoint_union_linking():
    d = disjoint_union(unknot(1), unknot(-1))
    assert intmat(d) == [[1, 0], [0, -1]]


def test_disjoint_union_counts_add():
    a, b = borromean(), hopf()
    assert disjoint_union(a, b).n == 5


# --- serialization and encoding ----------------------------------------------


def test_json_roundtrip():
    for link in (unknot(Fraction(3, 2)), trefoil(), borromean((1, 1, 0))):
        again = FramedLink.from_json(link.to_json())
        assert again == link
        assert again.to_json() == link.to_json()


def test_json_has_spec_fields():
    d = trefoil(framing=1).to_json_dict()
    assert set(d) == {"components", "crossings", "slices"}
    comp = d["components"][0]
    assert set(comp) == {"arcs", "framing", "color", "orientation", "role"}
    assert comp["framing"] == "1"
    assert all(len(c) == 5 and c[4] in "+-" for c in d["crossings"])
    # arcs referenced by crossings exist
    arcs = set(comp["arcs"])
    for c in d["crossings"]:
        assert set(c[:4]) <= arcs


def test_canonical_encoding_reindexing():
    # same diagram built with components introduced in a different order
    a = disjoint_union(unknot(1), trefoil())
    b = disjoint_union(trefoil(), unknot(1))
    assert a == b
    assert hash(a) == hash(b)


def test_distinct_links_distinct():
    assert trefoil(right=True) != trefoil(right=False)
    assert unknot(0) != unknot(1)
    assert hopf((1, 1)) != disjoint_union(unknot(1), unknot(1))


def test_malformed_rejected():
    with pytest.raises(ValidationError):
        FramedLink([("cup", 0)], [Component()])
    with pytest.raises(ValidationError):
        FramedLink([("cap", 0)], [Component()])
