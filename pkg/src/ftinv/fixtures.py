"""The fixture corpus: named links, Seifert presentations and spin data.

Fixtures are constructed programmatically and shipped as JSON files inside
the package; the FTINV_FIXTURES environment variable points the loaders at
an alternative directory.
"""

from __future__ import annotations

import json
import os
from importlib import resources

from .conway import SeifertPresentation
from .exact import ValidationError
from .links import (
    Component,
    FramedLink,
    SliceBuilder,
    braid_closure,
    cable,
    disjoint_union,
    special_link,
    unknot,
)

BORROMEAN_BRAID = [1, -2, 1, -2, 1, -2]


def trefoil(right=True, framing=0, role="base"):
    word = [1, 1, 1] if right else [-1, -1, -1]
    return braid_closure(word, 2, [Component(framing=framing, role=role)])


def figure_eight(framing=0):
    return braid_closure([1, -2, 1, -2], 3, [Component(framing=framing)])


def hopf_link(framings=(1, 1)):
    return braid_closure([1, 1], 2, [Component(framing=f) for f in framings])


def borromean_rings(framings=(0, 0, 0), roles=("base",) * 3):
    comps = [Component(framing=f, role=r) for f, r in zip(framings, roles)]
    return braid_closure(BORROMEAN_BRAID, 3, comps)


def trefoil_connected_sum(j, framing=0):
    """Connected sum of j right trefoils as a single-strand tangle stack."""
    b = SliceBuilder()
    b.cup(0)
    for _ in range(j):
        b.cup(1)
        b.braid([1, 1, 1])
        b.cap(1)
    b.cap(0)
    return FramedLink(b.events, [Component(framing=framing)])


def fig_3_4():
    """The lambda_2 configuration: Borromean pattern, (+1,+1) on L, 0 on K."""
    return special_link(1, 2, [(1, 2, 3, +1)])


def fig_3_5(n):
    """lambda_2n: n Borromean insertions of pairs onto the 0-framed K."""
    return special_link(1, 2 * n, [(2 * i - 1, 2 * i, 2 * n + 1, +1) for i in range(1, n + 1)])


def fig_3_8():
    """The 4-component circular link: banded pairs chaining 4 blocks."""
    b = SliceBuilder()
    total = 9  # pseudo-components 0..7 plus K = 8
    for c in range(total):
        b.cup(2 * c, c)
    for i in range(4):
        lo = 2 * i  # pseudo components (lo, lo+1) interact with K
        p1, p2, pk = 2 * lo, 2 * (lo + 1), 2 * 8
        b.move(p2, p1 + 1, over=True)
        b.move(pk, p1 + 2, over=True)
        word = [1, 1, 2, 2, -1, -1, -2, -2]
        b.braid(word, offset=p1)
        b.move(p1 + 2, pk, over=True)
        b.move(p1 + 1, p2, over=True)
    # close K
    b.cap(16)
    # band pseudo pairs (1,2), (3,4), (5,6): each band is a double cap at
    # (3, 2); bands shift the later strands left so the positions repeat
    for _ in range(3):
        b.cap(3)
        b.cap(2)
    # remaining: pseudo 0 at (0,1), pseudo 7 at (2,3): the wrap-around band
    b.cap(1)
    b.cap(0)
    comps = [Component(framing=1, role="surgery") for _ in range(4)]
    comps.append(Component(framing=0, role="base"))
    return FramedLink(b.events, comps)


def chain_link(edges, n, framing=2):
    """Plumbing chain: n unknots clasped along the given tree edges."""
    b = SliceBuilder()
    for c in range(n):
        b.cup(2 * c, c)
    for i, j in edges:
        pi, pj = 2 * i, 2 * j
        b.move(pj, pi + 1, over=True)
        b.cross(pi + 1, "l")
        b.cross(pi + 1, "l")
        b.move(pi + 1, pj, over=True)
    for c in range(n - 1, -1, -1):
        b.cap(2 * c)
    link = FramedLink(b.events, [Component(framing=framing) for _ in range(n)])
    return _orient_tree_positive(link, edges)


def _orient_tree_positive(link, edges):
    """Flip component orientations so every tree-edge linking number is +1."""
    lk = link.linking_matrix()
    flips = [0] * link.n
    flips[0] = 1
    adj = {}
    for i, j in edges:
        adj.setdefault(i, []).append(j)
        adj.setdefault(j, []).append(i)
    stack = [0]
    seen = {0}
    while stack:
        i = stack.pop()
        for j in adj.get(i, []):
            if j in seen:
                continue
            seen.add(j)
            sign = 1 if lk[i][j] > 0 else -1
            flips[j] = flips[i] * sign
            stack.append(j)
    comps = [
        c.copy(orientation=c.orientation * f) for c, f in zip(link.components, flips)
    ]
    return FramedLink(link.slices, comps)


E8_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)]


def e8_chain():
    return chain_link(E8_EDGES, 8, framing=2)


def fig_5_20_l1():
    """Split +1-framed unknot next to the (0,1,1)-framed Borromean rings."""
    return disjoint_union(unknot(1), borromean_rings((0, 1, 1)))


def fig_5_20_l2():
    """The handle-slide partner: the 0-framed Borromean component doubled."""
    bor = borromean_rings((0, 1, 1))
    doubled = cable(bor, (2, 1, 1))
    return doubled.reframed([0, 1, 1, 1])


def lens_space(q):
    """L(q, 1): the q-framed unknot."""
    return unknot(q)


def poincare_sphere():
    """+1-surgery on all three Borromean components."""
    return borromean_rings((1, 1, 1))


def three_torus():
    return borromean_rings((0, 0, 0))


# --- Seifert presentations ---------------------------------------------------


def seifert_trefoil(right=True):
    return SeifertPresentation([[-1, 1], [0, -1]] if right else [[1, 1], [0, 1]])


def seifert_figure_eight():
    return SeifertPresentation([[1, 1], [0, -1]])


def seifert_example_3_3():
    return SeifertPresentation([[0, 1], [0, 0]], [(1, [1, 0]), (1, [0, 1])])


def seifert_lambda(n):
    """n genus-one blocks; surgery curve j encircles band j (all +1-framed)."""
    g2 = 2 * n
    v = [[0] * g2 for _ in range(g2)]
    for i in range(n):
        v[2 * i][2 * i + 1] = 1
    surgeries = []
    for i in range(g2):
        lam = [0] * g2
        lam[i] = 1
        surgeries.append((1, lam))
    return SeifertPresentation(v, surgeries)


def seifert_circular_4():
    """Fig 3.8 read as Seifert data: curves are band sums K_2i # K_2i+1."""
    g2 = 8
    v = [[0] * g2 for _ in range(g2)]
    for i in range(4):
        v[2 * i][2 * i + 1] = 1
    surgeries = []
    for i in range(4):
        lam = [0] * g2
        lam[2 * i + 1] = 1
        lam[(2 * i + 2) % 8] = 1
        surgeries.append((1, lam))
    return SeifertPresentation(v, surgeries)


def seifert_trefoil_sum(j):
    if j == 0:
        return SeifertPresentation([[0, 1], [0, 0]])
    block = [[-1, 1], [0, -1]]
    size = 2 * j
    v = [[0] * size for _ in range(size)]
    for b in range(j):
        for i in range(2):
            for k in range(2):
                v[2 * b + i][2 * b + k] = block[i][k]
    return SeifertPresentation(v)


# --- corpus ------------------------------------------------------------------

LINK_BUILDERS = {
    "unknot": lambda: unknot(0),
    "unknot_plus1": lambda: unknot(1),
    "unknot_minus1": lambda: unknot(-1),
    "trefoil_r": lambda: trefoil(True),
    "trefoil_l": lambda: trefoil(False),
    "trefoil_r_0": lambda: trefoil(True, framing=0),
    "trefoil_l_0": lambda: trefoil(False, framing=0),
    "trefoil_r_plus1": lambda: trefoil(True, framing=1),
    "figure8": figure_eight,
    "hopf": lambda: hopf_link((1, 1)),
    "borromean": lambda: borromean_rings(),
    "fig_3_4": fig_3_4,
    "fig_3_5_n2": lambda: fig_3_5(2),
    "fig_3_8": fig_3_8,
    "fig_5_20_l1": fig_5_20_l1,
    "fig_5_20_l2": fig_5_20_l2,
    "e8_chain": e8_chain,
    "s3": lambda: FramedLink([], []),
    "s1xs2": lambda: unknot(0),
    "lens_2_1": lambda: lens_space(2),
    "lens_3_1": lambda: lens_space(3),
    "lens_5_1": lambda: lens_space(5),
    "t3": three_torus,
    "poincare": poincare_sphere,
}

SEIFERT_BUILDERS = {
    "seifert_trefoil_r": lambda: seifert_trefoil(True),
    "seifert_figure8": seifert_figure_eight,
    "seifert_ex_3_3": seifert_example_3_3,
    "seifert_lambda_2": lambda: seifert_lambda(1),
    "seifert_lambda_4": lambda: seifert_lambda(2),
    "seifert_lambda_6": lambda: seifert_lambda(3),
    "seifert_circular_4": seifert_circular_4,
    "seifert_trefoil_sum_2": lambda: seifert_trefoil_sum(2),
}

SPIN_BUILDERS = {
    # link fixture name -> (link builder, characteristic sublink indices)
    "e8_spin": (e8_chain, ()),
    "trefoil_plus1_spin": (lambda: trefoil(True, framing=1), (0,)),
}


def fixture_dir():
    override = os.environ.get("FTINV_FIXTURES")
    if override:
        return override
    return None


def fixture_names():
    return sorted(LINK_BUILDERS) + sorted(SEIFERT_BUILDERS) + sorted(SPIN_BUILDERS)


def load_fixture_json(name):
    """Raw JSON dict of a fixture, from FTINV_FIXTURES or the package data."""
    override = fixture_dir()
    if override:
        path = os.path.join(override, f"{name}.json")
        if os.path.exists(path):
            with open(path, "r", encoding="utf-8") as fh:
                return json.load(fh)
    try:
        ref = resources.files("ftinv") / "fixtures" / f"{name}.json"
        return json.loads(ref.read_text())
    except FileNotFoundError:
        pass
    return build_fixture_json(name)


def build_fixture_json(name):
    if name in LINK_BUILDERS:
        return LINK_BUILDERS[name]().to_json_dict()
    if name in SEIFERT_BUILDERS:
        return SEIFERT_BUILDERS[name]().to_json_dict()
    if name in SPIN_BUILDERS:
        builder, char = SPIN_BUILDERS[name]
        d = builder().to_json_dict()
        d["char"] = list(char)
        return d
    raise ValidationError(f"unknown fixture {name!r}")


def link_fixture(name):
    return FramedLink.from_json_dict(load_fixture_json(name))


def seifert_fixture(name):
    return SeifertPresentation.from_json_dict(load_fixture_json(name))


def spin_fixture(name):
    d = load_fixture_json(name)
    link = FramedLink.from_json_dict(d)
    return link, tuple(d.get("char", ()))


def write_corpus(directory):
    """Write every fixture as JSON into a directory (corpus generation)."""
    os.makedirs(directory, exist_ok=True)
    for name in fixture_names():
        payload = build_fixture_json(name)
        path = os.path.join(directory, f"{name}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1)
            fh.write("\n")
