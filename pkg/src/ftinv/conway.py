"""Conway polynomials: skein recursion on diagrams, and Seifert-matrix
computations for knots in S^3 carrying +-1 surgery data.

Sign convention: the skein relation used is nabla(+) - nabla(-) = z nabla(0),
pinned by the anchors nabla(right trefoil) = 1 + z^2 and nabla(positive Hopf
link) = z.  Knot values are identical under either classical sign choice.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .exact import FormalSum, TheoremViolation, ValidationError, ZPoly
from .links import CAP, CUP, X, FramedLink

# ---------------------------------------------------------------------------
# skein-recursion engine
#
# The recursion works on lists of events (eid, kind, pos, over) with stable
# event ids, plus a direction table mapping ports (eid, "i"/"o", k) to the
# actual orientation (+1 up / -1 down) of the strand segment at that port.


def conway_link(link):
    """Conway polynomial of an oriented link diagram (framings ignored)."""
    if not isinstance(link, FramedLink):
        raise ValidationError("conway_link expects a FramedLink")
    t = link.trace()
    events = []
    for idx, ev in enumerate(link.slices):
        over = ev[2] if ev[0] == X else None
        events.append((idx, ev[0], ev[1], over))
    dirs = {}
    flags = [c.orientation for c in link.components]
    for port, d in t.port_dir.items():
        dirs[(port[0], port[1], port[2])] = d * flags[t.comp_of_port[port]]
    memo = {}
    return _conway(tuple(events), dirs, memo, [0])


_MAX_NODES = 4_000_000


def _conway(events, dirs, memo, budget):
    budget[0] += 1
    if budget[0] > _MAX_NODES:
        raise ValidationError("skein recursion exceeded the node budget")
    events, dirs = _simplify(list(events), dict(dirs))
    key = tuple(events)
    if key in memo:
        return memo[key]
    walk = _walk(events)
    result = None
    resolved = False
    visited = set()
    for loop in walk.loops:
        if resolved:
            break
        for (eid, side, under) in loop.passages:
            if eid in visited:
                continue
            visited.add(eid)
            if not under:
                continue
            # first arrival on the under strand: resolve here
            pos, over = walk.crossing_info[eid]
            d0 = dirs[(eid, "i", 0)]
            d1 = dirs[(eid, "i", 1)]
            sign = (1 if over == "l" else -1) * d0 * d1
            switched = [
                (e, k, p, ("l" if o == "r" else "r") if e == eid else o)
                for (e, k, p, o) in events
            ]
            sw = _conway(tuple(switched), dirs, memo, budget)
            smoothed_events, smoothed_dirs = _smooth(events, dirs, eid, pos, d0, d1, walk)
            sm = _conway(tuple(smoothed_events), smoothed_dirs, memo, budget)
            result = sw + sign * ZPoly.z() * sm
            resolved = True
            break
    if not resolved:
        # descending diagram: an unlink
        n = len(walk.loops)
        result = ZPoly.const(1) if n <= 1 else ZPoly()
    memo[key] = result
    return result


def _smooth(events, dirs, eid, pos, d0, d1, walk):
    new_dirs = dict(dirs)
    for io in ("i", "o"):
        for k in (0, 1):
            new_dirs.pop((eid, io, k), None)
    out = []
    if d0 * d1 > 0:
        # parallel strands: oriented smoothing is the identity pattern
        for e in events:
            if e[0] != eid:
                out.append(e)
        return out, new_dirs
    # anti-parallel: cap then cup
    cap_id = walk.next_id
    cup_id = walk.next_id + 1
    for e in events:
        if e[0] == eid:
            out.append((cap_id, CAP, pos, None))
            out.append((cup_id, CUP, pos, None))
        else:
            out.append(e)
    new_dirs[(cap_id, "i", 0)] = d0
    new_dirs[(cap_id, "i", 1)] = d1
    new_dirs[(cup_id, "o", 0)] = d1  # the strand exiting left continues in1's flow
    new_dirs[(cup_id, "o", 1)] = d0
    return out, new_dirs


def _simplify(events, dirs):
    """Remove R1 curls at births/deaths and adjacent R2 pairs."""
    changed = True
    while changed:
        changed = False
        for j in range(len(events) - 1):
            a, b = events[j], events[j + 1]
            if a[1] == X and b[1] == X and a[2] == b[2] and a[3] != b[3]:
                # R2: opposite crossings on the same strand pair
                for e in (a, b):
                    for io in ("i", "o"):
                        for k in (0, 1):
                            dirs.pop((e[0], io, k), None)
                del events[j : j + 2]
                changed = True
                break
            if a[1] == CUP and b[1] == X and a[2] == b[2]:
                # R1 curl right after a birth: keep the cup, re-aim its ports
                dirs[(a[0], "o", 0)] = dirs.pop((b[0], "o", 0))
                dirs[(a[0], "o", 1)] = dirs.pop((b[0], "o", 1))
                dirs.pop((b[0], "i", 0), None)
                dirs.pop((b[0], "i", 1), None)
                del events[j + 1]
                changed = True
                break
            if a[1] == X and b[1] == CAP and a[2] == b[2]:
                dirs[(b[0], "i", 0)] = dirs.pop((a[0], "i", 0))
                dirs[(b[0], "i", 1)] = dirs.pop((a[0], "i", 1))
                dirs.pop((a[0], "o", 0), None)
                dirs.pop((a[0], "o", 1), None)
                del events[j]
                changed = True
                break
    return events, dirs


class _Loop:
    __slots__ = ("passages", "min_eid")

    def __init__(self):
        self.passages = []  # (crossing eid, side, under?)
        self.min_eid = None


class _Walk:
    __slots__ = ("loops", "crossing_info", "next_id")

    def __init__(self):
        self.loops = []
        self.crossing_info = {}
        self.next_id = 0


def _walk(events):
    """Trace loops of an event list; passages ordered along each loop."""
    w = _Walk()
    w.next_id = 1 + max((e[0] for e in events), default=-1)
    pending = []
    conns = []
    kind_of = {}
    for e in events:
        eid, kind, pos, over = e
        kind_of[eid] = kind
        if kind == X:
            w.crossing_info[eid] = (pos, over)
        if kind == CUP:
            pending[pos:pos] = [(eid, "o", 0), (eid, "o", 1)]
        elif kind == CAP:
            conns.append((pending[pos], (eid, "i", 0)))
            conns.append((pending[pos + 1], (eid, "i", 1)))
            del pending[pos : pos + 2]
        else:
            conns.append((pending[pos], (eid, "i", 0)))
            conns.append((pending[pos + 1], (eid, "i", 1)))
            pending[pos] = (eid, "o", 0)
            pending[pos + 1] = (eid, "o", 1)
    if pending:
        raise ValidationError("event list does not close up")
    conn_of = {}
    for a, b in conns:
        conn_of[a] = b
        conn_of[b] = a

    def internal_partner(port):
        eid, io, k = port
        kind = kind_of[eid]
        if kind in (CUP, CAP):
            return (eid, io, 1 - k)
        return (eid, "o", 1 - k) if io == "i" else (eid, "i", 1 - k)

    visited = set()
    for a, _ in conns:
        if a in visited:
            continue
        loop = _Loop()
        port = a
        min_eid = None
        while port not in visited:
            other = conn_of[port]
            visited.add(port)
            visited.add(other)
            for end in (port, other):
                if min_eid is None or end[0] < min_eid:
                    min_eid = end[0]
            eid, io, k = other
            if kind_of[eid] == X:
                side = k if io == "i" else 1 - k
                over = w.crossing_info[eid][1]
                under = (over == "l" and side == 1) or (over == "r" and side == 0)
                loop.passages.append((eid, side, under))
            port = internal_partner(other)
        loop.min_eid = min_eid
        w.loops.append(loop)
    w.loops.sort(key=lambda l: (l.min_eid is None, l.min_eid))
    return w


# ---------------------------------------------------------------------------
# Seifert presentations


class SeifertPresentation:
    """A 0-framed knot in S^3 via a Seifert matrix, plus +-1 surgery curves.

    Each surgery curve is recorded by its framing eps and the vector of
    linking numbers with the chosen basis of the Seifert surface; a +-1
    surgery updates the Seifert form by V -> V - eps * lambda lambda^T.
    """

    def __init__(self, v, surgeries=()):
        self.v = [list(map(int, row)) for row in v]
        g2 = len(self.v)
        if any(len(row) != g2 for row in self.v) or g2 % 2:
            raise ValidationError("Seifert matrix must be square of even size")
        d = _det_int([[self.v[i][j] - self.v[j][i] for j in range(g2)] for i in range(g2)])
        if d != 1:
            raise ValidationError("V - V^T must be unimodular (det 1) for a knot")
        self.surgeries = []
        for eps, lam in surgeries:
            if eps not in (1, -1):
                raise ValidationError("surgery framings must be +-1")
            lam = list(map(int, lam))
            if len(lam) != g2:
                raise ValidationError("linking vector has wrong length")
            self.surgeries.append((eps, lam))

    @property
    def ell(self):
        return len(self.surgeries)

    def matrix_after(self, subset):
        subset = set(subset)
        g2 = len(self.v)
        out = [row[:] for row in self.v]
        for j in subset:
            eps, lam = self.surgeries[j]
            for a in range(g2):
                if lam[a]:
                    for b in range(g2):
                        out[a][b] -= eps * lam[a] * lam[b]
        return out

    def congruent(self, u):
        """Basis change: V -> U V U^T, lambda -> U lambda (U unimodular)."""
        g2 = len(self.v)
        ut = [[u[j][i] for j in range(g2)] for i in range(g2)]
        uv = _mat_mul_int(u, self.v)
        v2 = _mat_mul_int(uv, ut)
        surg = [
            (eps, [sum(u[a][b] * lam[b] for b in range(g2)) for a in range(g2)])
            for eps, lam in self.surgeries
        ]
        return SeifertPresentation(v2, surg)

    def to_json_dict(self):
        return {
            "V": [row[:] for row in self.v],
            "surgeries": [{"eps": e, "lambda": lam[:]} for e, lam in self.surgeries],
        }

    @classmethod
    def from_json_dict(cls, d):
        return cls(d["V"], [(s["eps"], s["lambda"]) for s in d.get("surgeries", [])])

    def to_json(self):
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls.from_json_dict(json.loads(text))


def _mat_mul_int(a, b):
    n = len(a)
    m = len(b[0]) if b else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        for k in range(len(b)):
            if a[i][k]:
                for j in range(m):
                    out[i][j] += a[i][k] * b[k][j]
    return out


def _det_int(m):
    """Exact integer determinant (fraction Gaussian elimination)."""
    n = len(m)
    if n == 0:
        return 1
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = a[col][col]
        for i in range(col + 1, n):
            if a[i][col]:
                f = a[i][col] / inv
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    assert det.denominator == 1
    return int(det)


def seifert_conway(pres, subset=()):
    """Conway polynomial of the knot after the selected +-1 surgeries.

    Computes det(t^(1/2) V_S - t^(-1/2) V_S^T) and rewrites it in
    z = t^(1/2) - t^(-1/2); the result lies in Z[z^2] with constant term 1.
    """
    v = pres.matrix_after(subset) if isinstance(pres, SeifertPresentation) else pres
    return conway_from_seifert_matrix(v)


def conway_from_seifert_matrix(v):
    g2 = len(v)
    if g2 == 0:
        return ZPoly.const(1)
    g = g2 // 2
    # det(sV - s^-1 V^T) = s^(-2g) det(u V - V^T) with u = s^2;
    # the u-polynomial has degree <= 2g: recover it by interpolation
    pts = range(-g, g + 1) if g else [0]
    xs = list(range(0, 2 * g + 1))
    ys = []
    for u in xs:
        m = [[u * v[i][j] - v[j][i] for j in range(g2)] for i in range(g2)]
        ys.append(_det_int(m))
    dcoef = _interpolate_int(xs, ys)  # d_0 ... d_{2g}
    # Delta(s) = sum d_k s^(2(k-g)): symmetric, so d_{g+j} == d_{g-j}
    for j in range(1, g + 1):
        if dcoef[g + j] != dcoef[g - j]:
            raise TheoremViolation("Alexander polynomial not symmetric; bad Seifert data")
    # rewrite with s^(2j) + s^(-2j) = Q_j(z^2): Q_0 = 2, Q_1 = z^2 + 2,
    # Q_{j+1} = (z^2+2) Q_j - Q_{j-1}
    z2p2 = ZPoly({0: 2, 2: 1})
    q_prev, q_cur = ZPoly.const(2), z2p2
    out = ZPoly.const(dcoef[g])
    for j in range(1, g + 1):
        out = out + dcoef[g + j] * q_cur
        q_prev, q_cur = q_cur, z2p2 * q_cur - q_prev
    return out


def _interpolate_int(xs, ys):
    """Exact Lagrange interpolation; returns integer coefficients."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            denom *= xi - xj
            basis = _poly_mul_linear(basis, -xj)
        for k in range(len(basis)):
            coeffs[k] += yi * basis[k] / denom
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise TheoremViolation("non-integer Alexander coefficients")
        out.append(int(c))
    return out


def _poly_mul_linear(poly, c0):
    # multiply by (x + c0)
    out = [Fraction(0)] * (len(poly) + 1)
    for k, a in enumerate(poly):
        out[k] += a * c0
        out[k + 1] += a
    return out


def conway_alternating(pres, check_divisibility=True):
    """Alternating sum of seifert_conway over all surgery subsets.

    Divisibility by z^ell is a theorem; failing it raises TheoremViolation.
    """
    ell = pres.ell
    total = ZPoly()
    for mask in range(1 << ell):
        subset = [j for j in range(ell) if mask >> j & 1]
        term = seifert_conway(pres, subset)
        if len(subset) % 2:
            total = total - term
        else:
            total = total + term
    if check_divisibility and not total.divisible_by_z_power(ell):
        raise TheoremViolation(f"alternating Conway sum not divisible by z^{ell}: {total}")
    return total


def partial_alternating(pres, subset):
    """Alternating Conway sum over subsets of the given surgery index set."""
    subset = list(subset)
    total = ZPoly()
    for mask in range(1 << len(subset)):
        chosen = [subset[j] for j in range(len(subset)) if mask >> j & 1]
        term = seifert_conway(pres, chosen)
        if len(chosen) % 2:
            total = total - term
        else:
            total = total + term
    return total


# ---------------------------------------------------------------------------
# the invariants C_2n and the Lescop invariant (first betti number one)


def c2n(pres, n):
    """Coefficient of z^(2n) in the Conway polynomial of the presented manifold.

    The manifold is 0-surgery on the presented knot (no +-1 surgeries done);
    it has first betti number one by construction.
    """
    poly = seifert_conway(pres, ())
    return poly.coefficient(2 * n)


def c2n_diagram(link, n):
    """C_2n of 0-surgery on a knot given by a diagram."""
    if link.n != 1:
        raise ValidationError("C_2n needs a knot (one component, b_1 = 1)")
    if link.components[0].framing != 0:
        raise ValidationError("C_2n via a diagram requires the 0-framed knot")
    return conway_link(link).coefficient(2 * n)


def lescop_b1_1(pres, subset=()):
    """Lescop's invariant C_2(M) - |Tor H_1(M)|/12 for b_1(M) = 1.

    Presentations here are a 0-framed knot in S^3 with +-1 surgeries, so the
    torsion subgroup is trivial and |Tor H_1(M)| = 1.
    """
    if isinstance(pres, FramedLink):
        if pres.n != 1 or pres.components[0].framing != 0:
            raise ValidationError("lescop_b1_1 needs a 0-framed knot presentation")
        c2 = conway_link(pres).coefficient(2)
    else:
        c2 = seifert_conway(pres, subset).coefficient(2)
    return c2 - Fraction(1, 12)


# ---------------------------------------------------------------------------
# bracket evaluations in Seifert terms (the lambda fixtures)


def seifert_bracket_value(pres, func, subset=None):
    """Evaluate a function of subsets over the alternating bracket sum.

    func maps a surgery subset (tuple) to a rational; returns
    sum over S of (-1)^|S| func(S), with S ranging over subsets of `subset`
    (all surgeries when None).  This is evaluate(phi, [M, L]) when func(S)
    is phi of the surgered presentation.
    """
    indices = list(range(pres.ell)) if subset is None else list(subset)
    total = Fraction(0)
    for mask in range(1 << len(indices)):
        chosen = tuple(indices[j] for j in range(len(indices)) if mask >> j & 1)
        val = Fraction(func(chosen))
        total += -val if len(chosen) % 2 else val
    return total


def c2k_on_bracket(pres, k, subset=None):
    """C_2k evaluated on the bracket [M, L] of a Seifert presentation."""
    return seifert_bracket_value(
        pres, lambda s: seifert_conway(pres, s).coefficient(2 * k), subset
    )


def product_on_bracket(pres, k1, k2):
    """(C_2k1 * C_2k2)([M, L]) via the product expansion

    sum over S < L of C_2k1([M, S]) * C_2k2([M_S, L - S]).
    """
    ell = pres.ell
    total = Fraction(0)
    for mask in range(1 << ell):
        s = [j for j in range(ell) if mask >> j & 1]
        rest = [j for j in range(ell) if not mask >> j & 1]
        lhs = seifert_bracket_value(pres, lambda t: seifert_conway(pres, t).coefficient(2 * k1), s)
        rhs = seifert_bracket_value(
            pres,
            lambda t: seifert_conway(pres, tuple(set(t) | set(s))).coefficient(2 * k2),
            rest,
        )
        total += lhs * rhs
    return total
