"""Framed, oriented, colored link diagrams in S^3.

Diagrams are authored as Morse "slice" words: a sequence of events read
bottom to top, each acting on the current horizontal cross-section.

    ("cup", i)       two new adjacent strand endpoints at positions i, i+1
    ("cap", i)       join the strands at positions i, i+1
    ("x", i, over)   the strands at i, i+1 cross; over == "l" means the
                     strand entering from the left passes over

A PD-style description (arcs per component, crossings with signs) is derived
from the slice word and is what the JSON interchange format carries; the
slice word itself is kept alongside because the skein and Temperley-Lieb
engines need a sweep decomposition.

Components are numbered by first appearance: the component whose first cup
occurs earliest in the slice word is component 0, and so on.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction

from .exact import FormalSum, ValidationError

CUP, CAP, X = "cup", "cap", "x"


def _check_event(ev):
    if ev[0] == X:
        if len(ev) != 3 or ev[2] not in ("l", "r") or ev[1] < 0:
            raise ValidationError(f"bad crossing event {ev!r}")
    elif ev[0] in (CUP, CAP):
        if len(ev) != 2 or ev[1] < 0:
            raise ValidationError(f"bad event {ev!r}")
    else:
        raise ValidationError(f"unknown event {ev!r}")


class Crossing:
    """One crossing of a traced diagram."""

    __slots__ = ("index", "over", "comps", "dirs", "arcs", "sign_ref")

    def __init__(self, index, over):
        self.index = index  # position in the slice word
        self.over = over  # "l": the left input strand passes over
        self.comps = [None, None]  # component of the (left, right) input strand
        self.dirs = [0, 0]  # reference direction (left, right): +1 up / -1 down
        self.arcs = [None, None, None, None]  # arc ids at ports SW, SE, NE, NW
        self.sign_ref = 0  # sign w.r.t. reference orientations

    def sign(self, orientations):
        return self.sign_ref * orientations[self.comps[0]] * orientations[self.comps[1]]


class Trace:
    """Connectivity data extracted from a slice word."""

    __slots__ = (
        "n_components",
        "crossings",
        "passages",
        "arcs_of_component",
        "port_dir",
        "comp_of_port",
    )

    def __init__(self, n_components, crossings, passages, arcs_of_component):
        self.n_components = n_components
        self.crossings = crossings
        self.passages = passages  # per component: [(Crossing, side), ...] in order
        self.arcs_of_component = arcs_of_component
        self.port_dir = {}  # port -> +1/-1: reference direction of its segment
        self.comp_of_port = {}


def trace_slices(slices):
    """Walk a slice word and extract loops, crossings, arcs and directions."""
    pending = []  # half-edges ("o" ports) at current positions
    conns = []  # (producer port, consumer port); producer is below
    events = []

    for idx, ev in enumerate(slices):
        _check_event(ev)
        kind, i = ev[0], ev[1]
        events.append(ev)
        if kind == CUP:
            if i > len(pending):
                raise ValidationError(f"cup at {i} beyond width {len(pending)}")
            pending[i:i] = [(idx, "o", 0), (idx, "o", 1)]
        elif kind == CAP:
            if i + 1 >= len(pending):
                raise ValidationError(f"cap at {i} beyond width {len(pending)}")
            conns.append((pending[i], (idx, "i", 0)))
            conns.append((pending[i + 1], (idx, "i", 1)))
            del pending[i : i + 2]
        else:
            if i + 1 >= len(pending):
                raise ValidationError(f"crossing at {i} beyond width {len(pending)}")
            conns.append((pending[i], (idx, "i", 0)))
            conns.append((pending[i + 1], (idx, "i", 1)))
            pending[i] = (idx, "o", 0)
            pending[i + 1] = (idx, "o", 1)
    if pending:
        raise ValidationError("slice word does not close up")

    conn_of = {}
    for a, b in conns:
        conn_of[a] = b
        conn_of[b] = a

    def internal_partner(port):
        idx, io, k = port
        kind = events[idx][0]
        if kind in (CUP, CAP):
            return (idx, io, 1 - k)
        return (idx, "o", 1 - k) if io == "i" else (idx, "i", 1 - k)

    crossings = {idx: Crossing(idx, ev[2]) for idx, ev in enumerate(events) if ev[0] == X}

    # walk the loops once, collecting for each component the ordered list of
    # traversed connections (with direction) in a fixed reference orientation
    visited = set()
    loops = []  # list of [ (entry_port, other_port) ... ]
    for a, _b in conns:
        if a in visited:
            continue
        port = a
        loop = []
        while port not in visited:
            other = conn_of[port]
            visited.add(port)
            visited.add(other)
            loop.append((port, other))
            port = internal_partner(other)
        loops.append(loop)

    n_comp = len(loops)
    anchors = []
    for loop in loops:
        anchors.append(min(min(p[0], q[0]) for p, q in loop))
    order = sorted(range(n_comp), key=lambda c: anchors[c])
    rank = {c: r for r, c in enumerate(order)}

    passages = [[] for _ in range(n_comp)]
    arc_counter = 0
    arcs_of_component = [[] for _ in range(n_comp)]
    port_dir = {}
    comp_of_port = {}

    for li, loop in enumerate(loops):
        comp = rank[li]
        # fill crossing strand data
        for entry, other in loop:
            up = entry[1] == "o"  # entered at the producer end: moving up
            d = +1 if up else -1
            port_dir[entry] = d
            port_dir[other] = d
            comp_of_port[entry] = comp
            comp_of_port[other] = comp
            for end in (entry, other):
                idx, io, k = end
                if idx in crossings and io == "i":
                    c = crossings[idx]
                    c.comps[k] = comp
                    c.dirs[k] = +1 if up else -1
        # passages: each time the walk steps through a crossing
        for entry, other in loop:
            idx, io, k = other
            if idx in crossings:
                side = k if io == "i" else 1 - k
                passages[comp].append((crossings[idx], side))
        # arcs: maximal crossing-free runs of connections
        m = len(loop)
        offset = 0
        if any(p[0] in crossings or q[0] in crossings for p, q in loop):
            for j, (p, q) in enumerate(loop):
                if p[0] in crossings:
                    offset = j
                    break
        current = None
        for jj in range(m):
            p, q = loop[(offset + jj) % m]
            if current is None:
                current = arc_counter
                arc_counter += 1
                arcs_of_component[comp].append(current)
            for end in (p, q):
                idx, io, k = end
                if idx in crossings:
                    pos = k if io == "i" else (2 if k == 1 else 3)
                    crossings[idx].arcs[pos] = current
            if q[0] in crossings or p[0] in crossings:
                current = None

    for c in crossings.values():
        if None in c.comps or 0 in c.dirs:
            raise ValidationError("internal trace error: dangling crossing")
        # with both strands upward, a left-over crossing is positive
        base = 1 if c.over == "l" else -1
        c.sign_ref = base * c.dirs[0] * c.dirs[1]

    crossing_list = [crossings[i] for i in sorted(crossings)]
    out = Trace(n_comp, crossing_list, passages, arcs_of_component)
    out.port_dir = port_dir
    out.comp_of_port = comp_of_port
    return out


class Component:
    """Per-component decoration of a framed link."""

    __slots__ = ("framing", "orientation", "color", "role")

    def __init__(self, framing=0, orientation=1, color=None, role="base"):
        self.framing = Fraction(framing)
        if orientation not in (1, -1):
            raise ValidationError("orientation must be +1 or -1")
        if role not in ("base", "surgery"):
            raise ValidationError("role must be 'base' or 'surgery'")
        self.orientation = orientation
        self.color = color
        self.role = role

    def copy(self, **kw):
        out = Component(self.framing, self.orientation, self.color, self.role)
        for k, v in kw.items():
            setattr(out, k, v)
        return out

    def meta(self):
        return (self.framing, self.orientation, self.color, self.role)


class FramedLink:
    """A framed oriented colored link diagram backed by a slice word.

    Equality and hashing go through a canonical encoding that is invariant
    under component re-indexing.
    """

    def __init__(self, slices, components):
        self.slices = tuple(tuple(ev) for ev in slices)
        self.components = list(components)
        self._trace = None
        self._code = None
        t = self.trace()
        if t.n_components != len(self.components):
            raise ValidationError(
                f"slice word has {t.n_components} components, "
                f"{len(self.components)} decorations given"
            )

    # -- derived structure --------------------------------------------------

    def trace(self):
        if self._trace is None:
            self._trace = trace_slices(self.slices)
        return self._trace

    @property
    def n(self):
        return len(self.components)

    def crossing_sign(self, c):
        return c.sign([comp.orientation for comp in self.components])

    def linking_matrix(self):
        """Framings on the diagonal, linking numbers off it (Fractions)."""
        n = self.n
        lk = [[Fraction(0)] * n for _ in range(n)]
        for c in self.trace().crossings:
            a, b = c.comps
            if a != b:
                s = self.crossing_sign(c)
                lk[a][b] += Fraction(s, 2)
                lk[b][a] += Fraction(s, 2)
        for i, comp in enumerate(self.components):
            lk[i][i] = comp.framing
        return lk

    def integer_linking_matrix(self):
        out = []
        for row in self.linking_matrix():
            r = []
            for x in row:
                if x.denominator != 1:
                    raise ValidationError("linking matrix is not integral")
                r.append(int(x))
            out.append(r)
        return out

    def writhes(self):
        """Self-writhe of each component (sum of self-crossing signs)."""
        w = [0] * self.n
        for c in self.trace().crossings:
            if c.comps[0] == c.comps[1]:
                w[c.comps[0]] += self.crossing_sign(c)
        return w

    def component_of_positions(self):
        """Per event: component ids of the strands it acts on."""
        t = self.trace()
        cross_by_idx = {c.index: c for c in t.crossings}
        # seed cup ownership from crossing/cap data via simulation
        out = []
        pending = []
        cup_owner = _cup_owners(self.slices, t)
        for idx, ev in enumerate(self.slices):
            kind, i = ev[0], ev[1]
            if kind == CUP:
                comp = cup_owner[idx]
                pending[i:i] = [comp, comp]
                out.append((comp,))
            elif kind == CAP:
                out.append((pending[i],))
                del pending[i : i + 2]
            else:
                out.append((pending[i], pending[i + 1]))
                pending[i], pending[i + 1] = pending[i + 1], pending[i]
        return out

    # -- operators ------------------------------------------------------------

    def sublink(self, keep):
        """The sublink on the given component indices."""
        keep = sorted(set(keep))
        if any(i < 0 or i >= self.n for i in keep):
            raise ValidationError("component index out of range")
        drop = set(range(self.n)) - set(keep)
        if not drop:
            return self
        new_slices = _delete_components(self.slices, self.component_of_positions(), drop)
        comps = [self.components[i] for i in keep]
        return FramedLink(new_slices, comps)

    def delta(self):
        """Alternating sum of all sublinks: sum over S of (-1)^|S| S."""
        n = self.n
        out = []
        for mask in range(1 << n):
            keep = [i for i in range(n) if mask >> i & 1]
            sign = -1 if len(keep) % 2 else 1
            out.append((self.sublink(keep), sign))
        return FormalSum(out)

    def mirror(self):
        """Mirror image: over-strands flipped, framings negated."""
        new = [
            (X, ev[1], "l" if ev[2] == "r" else "r") if ev[0] == X else ev
            for ev in self.slices
        ]
        return FramedLink(new, [c.copy(framing=-c.framing) for c in self.components])

    def reframed(self, framings):
        if len(framings) != self.n:
            raise ValidationError("framing list has wrong length")
        return FramedLink(
            self.slices,
            [c.copy(framing=Fraction(f)) for c, f in zip(self.components, framings)],
        )

    def with_roles(self, roles):
        if len(roles) != self.n:
            raise ValidationError("role list has wrong length")
        return FramedLink(self.slices, [c.copy(role=r) for c, r in zip(self.components, roles)])

    def is_admissible(self, selected):
        """Unit framings and zero linking for the selected sublink.

        True iff every selected component has framing +-1, pairwise linking
        numbers among selected components vanish, and each selected component
        links every other component zero times.
        """
        selected = set(selected)
        lk = self.linking_matrix()
        for i in selected:
            if abs(self.components[i].framing) != 1:
                return False
            for j in range(self.n):
                if j != i and lk[i][j] != 0:
                    return False
        return True

    # -- serialization ----------------------------------------------------------

    def to_json_dict(self):
        t = self.trace()
        crossings = []
        for c in t.crossings:
            s = "+" if self.crossing_sign(c) > 0 else "-"
            crossings.append(list(_pd_tuple(c)) + [s])
        comps = []
        for i, comp in enumerate(self.components):
            comps.append(
                {
                    "arcs": list(t.arcs_of_component[i]),
                    "framing": str(comp.framing),
                    "color": comp.color,
                    "orientation": comp.orientation,
                    "role": comp.role,
                }
            )
        return {
            "components": comps,
            "crossings": crossings,
            "slices": [list(ev) for ev in self.slices],
        }

    @classmethod
    def from_json_dict(cls, d):
        if "slices" not in d:
            raise ValidationError("link file lacks the 'slices' sweep data this engine requires")
        comps = [
            Component(
                Fraction(c["framing"]),
                c.get("orientation", 1),
                c.get("color"),
                c.get("role", "base"),
            )
            for c in d["components"]
        ]
        return cls([tuple(ev) for ev in d["slices"]], comps)

    def to_json(self):
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls.from_json_dict(json.loads(text))

    # -- canonical encoding -------------------------------------------------------

    def canonical_code(self):
        if self._code is None:
            self._code = _canonical_code(self)
        return self._code

    def __eq__(self, other):
        if not isinstance(other, FramedLink):
            return NotImplemented
        return self.canonical_code() == other.canonical_code()

    def __hash__(self):
        return hash(self.canonical_code())

    def __repr__(self):
        return f"<FramedLink {self.n} comps, {len(self.trace().crossings)} crossings>"


def _cup_owners(slices, t):
    """Map cup event index -> component id, via loop membership."""
    # recompute which loop each cup belongs to by simulating and using the
    # crossing/cap components is circular; instead, cheapest is to re-walk:
    # every port of a loop shares its component, and every cup has ports.
    pending = []
    conns = []
    for idx, ev in enumerate(slices):
        kind, i = ev[0], ev[1]
        if kind == CUP:
            pending[i:i] = [(idx, "o", 0), (idx, "o", 1)]
        elif kind == CAP:
            conns.append((pending[i], (idx, "i", 0)))
            conns.append((pending[i + 1], (idx, "i", 1)))
            del pending[i : i + 2]
        else:
            conns.append((pending[i], (idx, "i", 0)))
            conns.append((pending[i + 1], (idx, "i", 1)))
            pending[i] = (idx, "o", 0)
            pending[i + 1] = (idx, "o", 1)
    conn_of = {}
    for a, b in conns:
        conn_of[a] = b
        conn_of[b] = a

    def internal_partner(port):
        idx, io, k = port
        kind = slices[idx][0]
        if kind in (CUP, CAP):
            return (idx, io, 1 - k)
        return (idx, "o", 1 - k) if io == "i" else (idx, "i", 1 - k)

    visited = set()
    loops = []
    for a, _b in conns:
        if a in visited:
            continue
        port = a
        loop_ports = set()
        while port not in visited:
            other = conn_of[port]
            visited.add(port)
            visited.add(other)
            loop_ports.add(port)
            loop_ports.add(other)
            port = internal_partner(other)
        loops.append(loop_ports)
    anchors = [min(p[0] for p in ports) for ports in loops]
    order = sorted(range(len(loops)), key=lambda c: anchors[c])
    rank = {c: r for r, c in enumerate(order)}
    owner = {}
    for li, ports in enumerate(loops):
        for idx, _io, _k in ports:
            if slices[idx][0] == CUP:
                owner[idx] = rank[li]
    return owner


def _pd_tuple(c):
    """PD tuple: arcs counter-clockwise from the incoming under arc."""
    if c.over == "l":
        under_in = 1 if c.dirs[1] > 0 else 3  # right strand is under
    else:
        under_in = 0 if c.dirs[0] > 0 else 2
    return tuple(c.arcs[(under_in + k) % 4] for k in range(4))


def _delete_components(slices, comp_of_pos, drop):
    """Remove all strands of the given components from a slice word."""
    out = []
    pending = []
    for ev, comps in zip(slices, comp_of_pos):
        kind, i = ev[0], ev[1]
        if kind == CUP:
            comp = comps[0]
            surv = sum(1 for c in pending[:i] if c not in drop)
            pending[i:i] = [comp, comp]
            if comp not in drop:
                out.append((CUP, surv))
        elif kind == CAP:
            comp = comps[0]
            surv = sum(1 for c in pending[:i] if c not in drop)
            del pending[i : i + 2]
            if comp not in drop:
                out.append((CAP, surv))
        else:
            ca, cb = pending[i], pending[i + 1]
            surv = sum(1 for c in pending[:i] if c not in drop)
            pending[i], pending[i + 1] = pending[i + 1], pending[i]
            if ca in drop or cb in drop:
                continue
            out.append((X, surv, ev[2]))
    return out


def _canonical_code(link):
    """Canonical byte encoding, invariant under component re-indexing."""
    t = link.trace()
    n = link.n
    passes = t.passages
    signs = {c.index: link.crossing_sign(c) for c in t.crossings}
    overs = {c.index: (0 if c.over == "l" else 1) for c in t.crossings}

    def comp_key(i):
        comp = link.components[i]
        self_cross = sum(1 for c, _s in passes[i] if c.comps[0] == c.comps[1])
        return (
            comp.role,
            comp.framing,
            -1 if comp.color is None else comp.color,
            comp.orientation,
            len(passes[i]),
            self_cross,
        )

    groups = {}
    for i in range(n):
        groups.setdefault(comp_key(i), []).append(i)
    group_keys = sorted(groups, key=repr)
    perm_sets = []
    total = 1
    for k in group_keys:
        members = groups[k]
        total *= _factorial(len(members))
        if total > 40000:
            raise ValidationError("canonicalization search too large for this diagram")
        perm_sets.append(list(itertools.permutations(members)))

    best = None
    for choice in itertools.product(*perm_sets):
        order = [i for per in choice for i in per]
        code = _code_for_order(order, passes, signs, overs)
        if best is None or code < best:
            best = code
    meta = tuple(sorted((comp_key(i) for i in range(n)), key=repr))
    return repr((meta, best)).encode()


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _code_for_order(order, passes, signs, overs):
    """Greedy minimal traversal code for a fixed component order."""
    code = []
    labels = {}
    for comp in order:
        plist = passes[comp]
        m = len(plist)
        if m == 0:
            code.append(("O",))
            continue
        best_seq = None
        best_labs = None
        for start in range(m):
            labs = dict(labels)
            seq = []
            for k in range(m):
                c, side = plist[(start + k) % m]
                lab = labs.get(c.index)
                fresh = lab is None
                if fresh:
                    lab = len(labs)
                    labs[c.index] = lab
                seq.append((0 if fresh else 1, lab, 1 if overs[c.index] == side else 0, signs[c.index]))
            if best_seq is None or seq < best_seq:
                best_seq = seq
                best_labs = labs
        labels = best_labs
        code.append(tuple(best_seq))
    return tuple(code)


# ---------------------------------------------------------------------------
# builders


class SliceBuilder:
    """Imperative construction of slice words with strand tracking."""

    def __init__(self):
        self.events = []
        self.occupant = []  # caller-chosen tag per strand position

    @property
    def width(self):
        return len(self.occupant)

    def cup(self, pos, tag=None):
        self.events.append((CUP, pos))
        self.occupant[pos:pos] = [tag, tag]

    def cap(self, pos):
        self.events.append((CAP, pos))
        del self.occupant[pos : pos + 2]

    def cross(self, pos, over):
        self.events.append((X, pos, over))
        o = self.occupant
        o[pos], o[pos + 1] = o[pos + 1], o[pos]

    def move(self, src, dst, over=True):
        """Move the strand at src to dst, passing over (or under) the rest."""
        while src < dst:
            self.cross(src, "l" if over else "r")
            src += 1
        while src > dst:
            self.cross(src - 1, "r" if over else "l")
            src -= 1

    def braid(self, word, offset=0):
        """Apply a braid word: k means sigma_k (positive crossing), -k its inverse."""
        for g in word:
            self.cross(offset + abs(g) - 1, "l" if g > 0 else "r")

    def position_of(self, tag):
        return self.occupant.index(tag)


def braid_closure(word, strands, components=None):
    """Trace closure of a braid word.

    Resulting components are numbered by the braid-permutation cycles sorted
    by smallest strand index (which matches the first-cup numbering).
    """
    evs = [(CUP, k) for k in range(strands)]
    for g in word:
        if not 1 <= abs(g) < strands:
            raise ValidationError(f"braid letter {g} out of range")
        evs.append((X, strands + abs(g) - 1, "l" if g > 0 else "r"))
    for k in range(strands - 1, -1, -1):
        evs.append((CAP, k))
    perm = list(range(strands))
    for g in word:
        k = abs(g) - 1
        perm[k], perm[k + 1] = perm[k + 1], perm[k]
    ncomp = _cycle_count(perm)
    if components is None:
        components = [Component() for _ in range(ncomp)]
    return FramedLink(evs, components)


def _cycle_count(perm):
    seen = [False] * len(perm)
    cnt = 0
    for i in range(len(perm)):
        if not seen[i]:
            cnt += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
    return cnt


def empty_link():
    return FramedLink([], [])


def unknot(framing=0, role="base", color=None, orientation=1):
    return FramedLink(
        [(CUP, 0), (CAP, 0)],
        [Component(framing=framing, role=role, color=color, orientation=orientation)],
    )


def disjoint_union(a, b):
    """Split union: concatenated slice words and decorations."""
    return FramedLink(list(a.slices) + list(b.slices), a.components + b.components)


# a crossing inserted between the two fresh strands of a cup is a curl;
# pinned by tests: over="r" right after (CUP, i) gives a self-crossing of
# sign +1 (the cup strands are anti-parallel, so "l"/"r" give -/+)
CURL_POSITIVE = "r"
CURL_NEGATIVE = "l"


def cable(link, indices):
    """Replace component i by indices[i] parallel push-offs w.r.t. its framing.

    Components with index 0 are deleted.  Each copy keeps the original
    framing; the mutual linking number of two copies equals that framing
    (explicit twist curls are inserted so copies are push-offs w.r.t. the
    framing rather than the blackboard framing).
    """
    if len(indices) != link.n:
        raise ValidationError("cable multi-index has wrong length")
    if any(c < 0 for c in indices):
        raise ValidationError("cable multiplicities must be non-negative")
    keep = [i for i in range(link.n) if indices[i] > 0]
    if not keep:
        return empty_link()
    base = link.sublink(keep)
    mult = [indices[i] for i in keep]
    adjusted = _with_writhe_matching_framing(base)
    cabled = _blackboard_cable(adjusted, mult)
    new_comps = []
    for i, m in enumerate(mult):
        for _ in range(m):
            new_comps.append(base.components[i].copy())
    return FramedLink(cabled, new_comps)


def _with_writhe_matching_framing(link):
    """Slice word of link with curls inserted so self-writhe == framing."""
    w = link.writhes()
    targets = []
    for i, comp in enumerate(link.components):
        if comp.framing.denominator != 1:
            raise ValidationError("cabling requires integral framings")
        targets.append(int(comp.framing) - w[i])
    comp_of_pos = link.component_of_positions()
    out = []
    done = set()
    for ev, comps in zip(link.slices, comp_of_pos):
        out.append(ev)
        if ev[0] == CUP:
            comp = comps[0]
            if comp not in done:
                done.add(comp)
                t = targets[comp]
                over = CURL_POSITIVE if t > 0 else CURL_NEGATIVE
                for _ in range(abs(t)):
                    out.append((X, ev[1], over))
    return out


def _blackboard_cable(slices, mult):
    """Blackboard-parallel cabling of a slice word (mult per component)."""
    t = trace_slices(slices)
    comp_of_pos = _positions_from(slices, t)
    out = []
    pending = []
    for ev, comps in zip(slices, comp_of_pos):
        kind, i = ev[0], ev[1]
        if kind == CUP:
            comp = comps[0]
            m = mult[comp]
            new_i = sum(mult[c] for c in pending[:i])
            pending[i:i] = [comp, comp]
            for k in range(m):
                out.append((CUP, new_i + k))
        elif kind == CAP:
            comp = comps[0]
            m = mult[comp]
            new_i = sum(mult[c] for c in pending[:i])
            del pending[i : i + 2]
            for k in range(m - 1, -1, -1):
                out.append((CAP, new_i + k))
        else:
            ca, cb = pending[i], pending[i + 1]
            ma, mb = mult[ca], mult[cb]
            new_i = sum(mult[c] for c in pending[:i])
            pending[i], pending[i + 1] = pending[i + 1], pending[i]
            for r in range(mb):
                for l in range(ma - 1, -1, -1):
                    out.append((X, new_i + l + r, ev[2]))
    return out


def _positions_from(slices, t):
    out = []
    pending = []
    owner = _cup_owners(slices, t)
    for idx, ev in enumerate(slices):
        kind, i = ev[0], ev[1]
        if kind == CUP:
            comp = owner[idx]
            pending[i:i] = [comp, comp]
            out.append((comp,))
        elif kind == CAP:
            out.append((pending[i],))
            del pending[i : i + 2]
        else:
            out.append((pending[i], pending[i + 1]))
            pending[i], pending[i + 1] = pending[i + 1], pending[i]
    return out


# ---------------------------------------------------------------------------
# special links: trivial link plus Borromean tangle insertions


def special_link(m, ell, replacements):
    """Trivial (ell + m)-component link with signed Borromean insertions.

    Components 1..ell are +1-framed surgery components; components
    ell+1..ell+m are 0-framed base components.  Each replacement (i, j, k,
    sign) with 1 <= i < j < k <= ell+m and i <= ell inserts a Borromean
    tangle (a pure-braid commutator) on one strand of each of the three
    components; each surgery index may appear in at most two replacements.
    sign +1 is the chirality used by the lambda_2n constructions.
    """
    total = m + ell
    if m < 0 or ell < 0 or total == 0:
        raise ValidationError("need at least one component")
    used = {}
    reps = []
    for rep in replacements:
        if len(rep) == 3:
            rep = (*rep, +1)
        i, j, k, sign = rep
        if not (1 <= i < j < k <= total):
            raise ValidationError(f"replacement indices must satisfy 1 <= i < j < k <= {total}")
        if i > ell:
            raise ValidationError("replacement must involve a surgery component (i <= ell)")
        if sign in ("+", "-"):
            sign = 1 if sign == "+" else -1
        if sign not in (1, -1):
            raise ValidationError("replacement sign must be +1 or -1")
        for idx in (i, j, k):
            if idx <= ell:
                used[idx] = used.get(idx, 0) + 1
                if used[idx] > 2:
                    raise ValidationError(
                        f"surgery component {idx} used more than twice in replacements"
                    )
        reps.append((i, j, k, sign))

    b = SliceBuilder()
    for c in range(total):
        b.cup(2 * c, c)

    for i, j, k, sign in reps:
        pi, pj, pk = 2 * (i - 1), 2 * (j - 1), 2 * (k - 1)
        b.move(pj, pi + 1, over=True)
        b.move(pk, pi + 2, over=True)
        a12 = [1, 1]
        a23 = [2, 2]

        def inv(w):
            return [-g for g in reversed(w)]

        word = a12 + a23 + inv(a12) + inv(a23)
        if sign < 0:
            word = inv(word)
        b.braid(word, offset=pi)
        b.move(pi + 2, pk, over=True)
        b.move(pi + 1, pj, over=True)

    for c in range(total - 1, -1, -1):
        b.cap(2 * c)

    comps = [
        Component(framing=1, role="surgery") if c < ell else Component(framing=0, role="base")
        for c in range(total)
    ]
    return FramedLink(b.events, comps)
