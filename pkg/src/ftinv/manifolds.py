"""Surgery presentations, homology invariants, the surgery bracket [M, L],
and the invariant evaluation / degree-testing framework.

A presentation's manifold is surgery on its base-role components; surgery-
role components are candidate admissible links carried along for brackets.
Presentation equality is canonical-encoding equality of the base sublink;
the artifact never decides homeomorphism.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import FormalSum, ValidationError, rank_mod_p, smith_normal_form
from .links import FramedLink, disjoint_union, empty_link


class SurgeryPresentation:
    """A 3-manifold presented as surgery on the base part of a framed link."""

    def __init__(self, link):
        if not isinstance(link, FramedLink):
            raise ValidationError("SurgeryPresentation wraps a FramedLink")
        self.link = link
        self._manifold = None

    @classmethod
    def s3(cls):
        return cls(empty_link())

    def base_indices(self):
        return [i for i, c in enumerate(self.link.components) if c.role == "base"]

    def surgery_indices(self):
        return [i for i, c in enumerate(self.link.components) if c.role == "surgery"]

    def manifold_link(self):
        """The base sublink: the actual surgery instructions."""
        if self._manifold is None:
            base = self.base_indices()
            if len(base) == self.link.n:
                self._manifold = self.link
            else:
                self._manifold = self.link.sublink(base)
        return self._manifold

    def __eq__(self, other):
        if not isinstance(other, SurgeryPresentation):
            return NotImplemented
        return self.manifold_link() == other.manifold_link()

    def __hash__(self):
        return hash(("pres", self.manifold_link().canonical_code()))

    def __repr__(self):
        return f"<SurgeryPresentation on {self.manifold_link().n} components>"


def h1_invariants(pres):
    """(b_1, torsion factors, |Tor H_1|) from the Smith form of the linking matrix."""
    link = pres.manifold_link() if isinstance(pres, SurgeryPresentation) else pres
    m = link.integer_linking_matrix()
    factors, rank = smith_normal_form(m)
    b1 = link.n - rank
    torsion = [d for d in factors if d > 1]
    order = 1
    for d in torsion:
        order *= d
    return b1, torsion, order


def bp(x, p):
    """Mod-p first betti number; min over terms on a formal sum."""
    if isinstance(x, FormalSum):
        if not x:
            raise ValidationError("b_p of the zero element is undefined")
        return min(bp(t, p) for t, _ in x)
    link = x.manifold_link() if isinstance(x, SurgeryPresentation) else x
    m = link.integer_linking_matrix()
    return link.n - rank_mod_p(m, p)


def bracket(pres, selector):
    """[M, L] = sum over S < L of (-1)^|S| M_S as a formal sum.

    selector indexes surgery-role components of the presentation's link; each
    term keeps base components plus S (promoted to base), dropping the rest.
    """
    selector = sorted(set(selector))
    surg = set(pres.surgery_indices())
    if not set(selector) <= surg:
        raise ValidationError("bracket selector must pick surgery-role components")
    if not pres.link.is_admissible(selector):
        raise ValidationError("selected sublink is not admissible")
    base = pres.base_indices()
    terms = []
    n = len(selector)
    for mask in range(1 << n):
        s = [selector[i] for i in range(n) if mask >> i & 1]
        keep = sorted(base + s)
        sub = pres.link.sublink(keep)
        sub = sub.with_roles(["base"] * sub.n)
        sign = -1 if len(s) % 2 else 1
        terms.append((SurgeryPresentation(sub), sign))
    return FormalSum(terms)


def surgered(pres, selector):
    """The presentation with the selected surgery components performed.

    Other surgery components stay available for further brackets.
    """
    selector = set(selector)
    if not selector <= set(pres.surgery_indices()):
        raise ValidationError("can only surger surgery-role components")
    roles = [
        "base" if (i in selector or c.role == "base") else c.role
        for i, c in enumerate(pres.link.components)
    ]
    return SurgeryPresentation(pres.link.with_roles(roles))


def connected_sum(a, b):
    """Connected sum of presented manifolds (split union of surgery links).

    Bilinear on formal sums.
    """
    if isinstance(a, FormalSum) or isinstance(b, FormalSum):
        aa = a if isinstance(a, FormalSum) else FormalSum.single(a)
        bb = b if isinstance(b, FormalSum) else FormalSum.single(b)
        out = FormalSum()
        for x, cx in aa:
            for y, cy in bb:
                out = out + FormalSum.single(connected_sum(x, y), cx * cy)
        return out
    return SurgeryPresentation(disjoint_union(a.manifold_link(), b.manifold_link()))


class Invariant:
    """A named manifold invariant with a value ring and an optional degree."""

    def __init__(self, name, ring, fn, claimed_degree=None):
        self.name = name
        self.ring = ring  # "Q" | ("Lp", p) | ("Zpk", p, k) | "Z16"
        self.fn = fn
        self.claimed_degree = claimed_degree

    def __call__(self, pres):
        return self.fn(pres)

    def normalize(self, value):
        ring = self.ring
        if ring == "Q":
            return Fraction(value)
        if ring == "Z16":
            return value % 16
        if isinstance(ring, tuple) and ring[0] == "Zpk":
            return value % ring[1] ** ring[2]
        return value  # Lambda_p values are already canonical

    def zero(self):
        ring = self.ring
        if ring == "Q":
            return Fraction(0)
        if ring == "Z16" or (isinstance(ring, tuple) and ring[0] == "Zpk"):
            return 0
        if isinstance(ring, tuple) and ring[0] == "Lp":
            from .cyclotomic import CyclotomicInt

            return CyclotomicInt.zero(ring[1])
        raise ValidationError(f"unknown ring {ring!r}")


class EvaluationError(RuntimeError):
    def __init__(self, invariant, term, cause):
        super().__init__(f"{invariant.name} failed on term {term!r}: {cause}")
        self.term = term
        self.cause = cause


def evaluate(inv, x):
    """Linear extension: sum of coefficient * inv(term) over a formal sum."""
    if isinstance(x, SurgeryPresentation):
        x = FormalSum.single(x)
    total = inv.zero()
    for term, coeff in x:
        try:
            val = inv(term)
        except Exception as exc:  # noqa: BLE001 - reported with the term attached
            raise EvaluationError(inv, term, exc) from exc
        total = total + coeff * val
    return inv.normalize(total)


def product_invariant(a, b):
    """Pointwise product of two rational-valued invariants.

    Degree at most the sum of the factors' degrees.
    """
    if a.ring != "Q" or b.ring != "Q":
        raise ValidationError("product_invariant needs rational-valued invariants")
    deg = None
    if a.claimed_degree is not None and b.claimed_degree is not None:
        deg = a.claimed_degree + b.claimed_degree
    return Invariant(f"{a.name}*{b.name}", "Q", lambda m: a(m) * b(m), deg)


def product_formula_sides(a, b, pres, selector):
    """Both sides of the product expansion over a bracket.

    Left: (a*b)([M, L]).  Right: sum over S < L of a([M,S]) * b([M_S, L-S]).
    """
    selector = sorted(set(selector))
    left = evaluate(product_invariant(a, b), bracket(pres, selector))
    right = Fraction(0)
    n = len(selector)
    for mask in range(1 << n):
        s = [selector[i] for i in range(n) if mask >> i & 1]
        rest = [i for i in selector if i not in s]
        val_a = evaluate(a, bracket(pres, s))
        val_b = evaluate(b, bracket(surgered(pres, s), rest))
        right += val_a * val_b
    return left, right


def degree_vanishing_test(inv, cases):
    """Evaluate inv on brackets that exceed its claimed degree.

    cases: list of (presentation, selector).  Every selector must be larger
    than the claimed degree and admissible.  Returns a report (list of dicts)
    with a 'passed' flag per case; pass means the value vanished.
    """
    if inv.claimed_degree is None:
        raise ValidationError("invariant has no claimed degree")
    report = []
    for pres, selector in cases:
        selector = sorted(set(selector))
        if len(selector) <= inv.claimed_degree:
            raise ValidationError(
                f"case has {len(selector)} components, needs > degree {inv.claimed_degree}"
            )
        value = evaluate(inv, bracket(pres, selector))
        report.append(
            {
                "invariant": inv.name,
                "components": len(selector),
                "value": value,
                "passed": value == inv.zero() or not value,
            }
        )
    return report


def lemma_10_3_sides(link, j_sel, l_sel):
    """Both sides of [S^3_J, L] = sum over S < J of (-1)^|S| [S^3, L u S].

    The link must have J u L algebraically split with J unit-framed, and L
    admissible.  Returns (lhs, rhs) as formal sums of presentations.
    """
    j_sel = sorted(set(j_sel))
    l_sel = sorted(set(l_sel))
    if set(j_sel) & set(l_sel):
        raise ValidationError("J and L selectors must be disjoint")
    lk = link.linking_matrix()
    allsel = j_sel + l_sel
    for a in allsel:
        for b in allsel:
            if a != b and lk[a][b] != 0:
                raise ValidationError("J u L must be algebraically split")
    for i in j_sel:
        if abs(link.components[i].framing) != 1:
            raise ValidationError("J components must be unit-framed for the expansion")

    def as_pres(base, surgery):
        keep = sorted(base + surgery)
        sub = link.sublink(keep)
        pos = {orig: idx for idx, orig in enumerate(keep)}
        roles = ["base" if orig in base else "surgery" for orig in keep]
        return SurgeryPresentation(sub.with_roles(roles)), [pos[i] for i in surgery]

    lhs_pres, lhs_selector = as_pres(j_sel, l_sel)
    if not lhs_pres.link.is_admissible(lhs_selector):
        raise ValidationError("L is not admissible")
    lhs = bracket(lhs_pres, lhs_selector)

    rhs = FormalSum()
    nj = len(j_sel)
    for mask in range(1 << nj):
        s = [j_sel[i] for i in range(nj) if mask >> i & 1]
        pres, sel = as_pres([], l_sel + s)
        sign = -1 if len(s) % 2 else 1
        rhs = rhs + sign * bracket(pres, sel)
    return lhs, rhs


def invariant_from_table(name, ring, table, claimed_degree=None):
    """Invariant backed by a lookup table keyed on presentations.

    Useful for invariants whose general evaluation is out of scope (e.g. the
    Conway coefficients of bracket terms are supplied from Seifert data).
    """

    def fn(pres):
        try:
            return table[pres]
        except KeyError:
            raise ValidationError(f"{name} has no value for this presentation") from None

    return Invariant(name, ring, fn, claimed_degree)


def torsion_order_invariant():
    """|H_1| when finite, 0 otherwise: a degree-0 invariant."""

    def fn(pres):
        b1, _torsion, order = h1_invariants(pres)
        return Fraction(order if b1 == 0 else 0)

    return Invariant("tor_order", "Q", fn, 0)
