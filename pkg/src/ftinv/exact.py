"""Exact integer/rational linear algebra, polynomials in z, and formal sums.

Everything in this package is exact: matrices hold Python ints (or Fractions
where stated), polynomials hold Fractions, and no tolerance parameter exists
anywhere.
"""

from __future__ import annotations

from fractions import Fraction


class ValidationError(ValueError):
    """Bad input to an operation (wrong shape, failed precondition)."""


class EngineCapError(RuntimeError):
    """A hard engine limit (strand width, degree cap) was exceeded."""


class TheoremViolation(AssertionError):
    """An identity the implementation is supposed to guarantee failed.

    Raised e.g. when an alternating Conway sum is not divisible by z^l;
    indicates a bug, never bad user input.
    """


# ---------------------------------------------------------------------------
# integer matrices


def mat_shape(m):
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if any(len(r) != cols for r in m):
        raise ValidationError("matrix is not rectangular")
    return rows, cols


def mat_identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    ra, ca = mat_shape(a)
    rb, cb = mat_shape(b)
    if ca != rb:
        raise ValidationError("matrix dimensions do not match")
    out = [[0] * cb for _ in range(ra)]
    for i in range(ra):
        ai = a[i]
        for k in range(ca):
            if ai[k]:
                bk = b[k]
                oi = out[i]
                aik = ai[k]
                for j in range(cb):
                    oi[j] += aik * bk[j]
    return out


def xgcd(a, b):
    """Extended gcd with g >= 0: returns (x, y, g) with x*a + y*b == g."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def smith_normal_form(m, with_transforms=False):
    """Smith normal form of an integer matrix.

    Returns (factors, rank) where factors are the non-negative invariant
    factors d1 | d2 | ... (padded with zeros up to min(rows, cols)) and rank
    is the number of nonzero factors.  With with_transforms=True, returns
    (factors, rank, U, V) with U*m*V diagonal equal to the factors.  Entries
    are cleared with unimodular xgcd transforms, smallest pivot first, which
    keeps coefficient growth in check.
    """
    rows, cols = mat_shape(m)
    a = [list(r) for r in m]
    u = mat_identity(rows)
    v = mat_identity(cols)
    want_t = with_transforms

    def clear_col_entry(t, i):
        # combine rows t and i so a[i][t] becomes 0 (unimodular)
        p, b = a[t][t], a[i][t]
        if b == 0:
            return
        if p and b % p == 0:
            q = b // p
            a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            if want_t:
                u[i] = [x - q * y for x, y in zip(u[i], u[t])]
            return
        x, y, g = xgcd(p, b)
        c1, c2 = -(b // g), p // g
        a[t], a[i] = (
            [x * s + y * w for s, w in zip(a[t], a[i])],
            [c1 * s + c2 * w for s, w in zip(a[t], a[i])],
        )
        if want_t:
            u[t], u[i] = (
                [x * s + y * w for s, w in zip(u[t], u[i])],
                [c1 * s + c2 * w for s, w in zip(u[t], u[i])],
            )

    def clear_row_entry(t, j):
        # combine columns t and j so a[t][j] becomes 0 (unimodular)
        p, b = a[t][t], a[t][j]
        if b == 0:
            return
        if p and b % p == 0:
            q = b // p
            for r in a:
                r[j] -= q * r[t]
            if want_t:
                for r in v:
                    r[j] -= q * r[t]
            return
        x, y, g = xgcd(p, b)
        c1, c2 = -(b // g), p // g
        for r in a:
            r[t], r[j] = x * r[t] + y * r[j], c1 * r[t] + c2 * r[j]
        if want_t:
            for r in v:
                r[t], r[j] = x * r[t] + y * r[j], c1 * r[t] + c2 * r[j]

    n = min(rows, cols)
    t = 0
    while t < n:
        # move the smallest nonzero entry of the remaining block to (t, t)
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best[0] != t:
            a[t], a[best[0]] = a[best[0]], a[t]
            if want_t:
                u[t], u[best[0]] = u[best[0]], u[t]
        if best[1] != t:
            for r in a:
                r[t], r[best[1]] = r[best[1]], r[t]
            if want_t:
                for r in v:
                    r[t], r[best[1]] = r[best[1]], r[t]
        # clear column t, then row t; column ops can refill the column
        while True:
            for i in range(t + 1, rows):
                clear_col_entry(t, i)
            for j in range(t + 1, cols):
                clear_row_entry(t, j)
            if all(a[i][t] == 0 for i in range(t + 1, rows)):
                break
        # divisibility: fold any non-multiple into row t and redo this block
        piv = a[t][t]
        fold = None
        for i in range(t + 1, rows):
            if any(x % piv for x in a[i][t + 1 :]):
                fold = i
                break
        if fold is not None:
            a[t] = [x + y for x, y in zip(a[t], a[fold])]
            if want_t:
                u[t] = [x + y for x, y in zip(u[t], u[fold])]
            continue
        if piv < 0:
            a[t] = [-x for x in a[t]]
            if want_t:
                u[t] = [-x for x in u[t]]
        t += 1

    factors = [a[i][i] for i in range(n)]
    rank = sum(1 for d in factors if d)
    if with_transforms:
        return factors, rank, u, v
    return factors, rank


def invariant_factors(m):
    """Nontrivial invariant factors (>1) of an integer matrix."""
    factors, _ = smith_normal_form(m)
    return [d for d in factors if d > 1]


def signature_nullity(m):
    """(l+, l-, l0) eigenvalue sign counts of a symmetric matrix, exactly.

    Uses congruence diagonalization over the rationals (Sylvester's law),
    with the standard 2x2 trick when the diagonal is zero.
    """
    rows, cols = mat_shape(m)
    if rows != cols:
        raise ValidationError("signature_nullity requires a square matrix")
    for i in range(rows):
        for j in range(rows):
            if m[i][j] != m[j][i]:
                raise ValidationError("signature_nullity requires a symmetric matrix")
    a = [[Fraction(x) for x in row] for row in m]
    n = rows
    pos = neg = zero = 0
    idx = 0
    while idx < n:
        # find a usable pivot on the diagonal
        piv = None
        for i in range(idx, n):
            if a[i][i] != 0:
                piv = i
                break
        if piv is None:
            # either the remaining block is 0, or pick i,j with a[i][j] != 0
            off = None
            for i in range(idx, n):
                for j in range(i + 1, n):
                    if a[i][j] != 0:
                        off = (i, j)
                        break
                if off:
                    break
            if off is None:
                zero += n - idx
                break
            i, j = off
            # row/col i += row/col j makes a[i][i] = 2 a[i][j] != 0
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        if piv != idx:
            a[idx], a[piv] = a[piv], a[idx]
            for row in a:
                row[idx], row[piv] = row[piv], row[idx]
        d = a[idx][idx]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in range(idx + 1, n):
            if a[i][idx]:
                q = a[i][idx] / d
                for k in range(n):
                    a[i][k] -= q * a[idx][k]
                for k in range(n):
                    a[k][i] -= q * a[k][idx]
        idx += 1
    return pos, neg, zero


def is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def rank_mod_p(m, p):
    """Rank of an integer matrix over the field with p elements."""
    if not is_prime(p):
        raise ValidationError(f"{p} is not prime")
    rows, cols = mat_shape(m)
    a = [[x % p for x in row] for row in m]
    rank = 0
    col = 0
    for col in range(cols):
        piv = None
        for i in range(rank, rows):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][col], -1, p)
        a[rank] = [(x * inv) % p for x in a[rank]]
        for i in range(rows):
            if i != rank and a[i][col]:
                f = a[i][col]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def solve_integer(columns, target):
    """Solve sum_i y_i * columns[i] = target over the integers.

    columns is a list of integer vectors (all the same length).  Returns a
    list y or None when no integral solution exists.
    """
    n = len(target)
    if not columns:
        return [] if all(x == 0 for x in target) else None
    mat = [[col[i] for col in columns] for i in range(n)]
    factors, rank, u, v = smith_normal_form(mat, with_transforms=True)
    ub = [sum(u[i][k] * target[k] for k in range(n)) for i in range(n)]
    z = [0] * len(columns)
    for i in range(n):
        d = factors[i] if i < len(factors) else 0
        if d == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % d:
                return None
            if i < len(columns):
                z[i] = ub[i] // d
    return [sum(v[i][k] * z[k] for k in range(len(columns))) for i in range(len(columns))]


def in_integer_span(columns, target):
    """True iff target lies in the Z-span of the given integer vectors."""
    return solve_integer(columns, target) is not None


# ---------------------------------------------------------------------------
# polynomials in z with rational coefficients


class ZPoly:
    """Polynomial in the formal variable z with Fraction coefficients.

    Zero coefficients are never stored; the zero polynomial has degree -1
    (reported as None by .degree for clarity).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for e, c in coeffs.items():
                c = Fraction(c)
                if c:
                    if e < 0:
                        raise ValidationError("ZPoly exponents must be non-negative")
                    self.coeffs[e] = c

    @classmethod
    def const(cls, c):
        return cls({0: Fraction(c)})

    @classmethod
    def z(cls, power=1, coeff=1):
        return cls({power: Fraction(coeff)})

    @property
    def degree(self):
        return max(self.coeffs) if self.coeffs else None

    def coefficient(self, e):
        return self.coeffs.get(e, Fraction(0))

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, ZPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == ZPoly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ZPoly.const(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return ZPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ZPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ZPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return ZPoly.const(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ZPoly({e: c * other for e, c in self.coeffs.items()})
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return ZPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = ZPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def divisible_by_z_power(self, k):
        return all(e >= k for e in self.coeffs)

    def __repr__(self):
        return f"ZPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                zs = "z" if e == 1 else f"z^{e}"
                body = zs if mag == 1 else f"{mag}*{zs}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+{body}" if c > 0 else f"-{body}")
        return "".join(parts)


# ---------------------------------------------------------------------------
# formal sums


class FormalSum:
    """Integer-linear combination of hashable basis elements.

    The basis type is arbitrary; equality of elements is dictionary-key
    equality (our basis objects hash/compare by canonical encoding).  Zero
    coefficients are dropped eagerly.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms is None:
            return
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = terms
        for x, c in items:
            if c:
                nc = self.terms.get(x, 0) + c
                if nc:
                    self.terms[x] = nc
                elif x in self.terms:
                    del self.terms[x]

    @classmethod
    def single(cls, x, coeff=1):
        return cls([(x, coeff)])

    @classmethod
    def zero(cls):
        return cls()

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for x, c in other.terms.items():
            nc = out.get(x, 0) + c
            if nc:
                out[x] = nc
            else:
                del out[x]
        s = FormalSum()
        s.terms = out
        return s

    def __neg__(self):
        s = FormalSum()
        s.terms = {x: -c for x, c in self.terms.items()}
        return s

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        if k == 0:
            return FormalSum()
        s = FormalSum()
        s.terms = {x: k * c for x, c in self.terms.items()}
        return s

    def map_basis(self, f):
        """Apply f to every basis element (f returns an element or a FormalSum)."""
        out = FormalSum()
        for x, c in self.terms.items():
            y = f(x)
            if isinstance(y, FormalSum):
                out = out + c * y
            else:
                out = out + FormalSum.single(y, c)
        return out

    def __repr__(self):
        if not self.terms:
            return "FormalSum(0)"
        bits = ", ".join(f"{c}*{x!r}" for x, c in self.terms.items())
        return f"FormalSum({bits})"
