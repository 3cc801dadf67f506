"""Arithmetic in the cyclotomic integers Z[q], q a primitive p-th root of unity.

Elements are stored in the power basis of h = q - 1, which is a Z-basis
h^0 .. h^(p-2).  The h-adic valuation and the coefficient projections to
Z_{p^k} live here as well.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .exact import ValidationError, is_prime

MAX_P = 31


def _check_p(p):
    if not is_prime(p) or p == 2 or p > MAX_P:
        raise ValidationError(f"p must be an odd prime <= {MAX_P}, got {p}")


_MINPOLY_TAIL = {}  # p -> tuple of h^{p-1} coefficients in the basis
_P_OVER_H = {}  # p -> tuple: the element p/h


def _minpoly_tail(p):
    # Phi_p(1+h) = sum_k C(p, k+1) h^k is monic of degree p-1,
    # so h^{p-1} = -sum_{k<p-1} C(p, k+1) h^k.
    if p not in _MINPOLY_TAIL:
        _MINPOLY_TAIL[p] = tuple(-comb(p, k + 1) for k in range(p - 1))
    return _MINPOLY_TAIL[p]


def _p_over_h(p):
    # From Phi_p(1+h) = 0: p = -sum_{k>=1} C(p, k+1) h^k, so
    # p/h = -sum_{j=0}^{p-2} C(p, j+2) h^j, exactly.
    if p not in _P_OVER_H:
        _P_OVER_H[p] = tuple(-comb(p, j + 2) for j in range(p - 1))
    return _P_OVER_H[p]


class CyclotomicInt:
    """Element of Lambda_p = Z[q] in the h = q - 1 power basis."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p, coeffs=None):
        _check_p(p)
        self.p = p
        n = p - 1
        if coeffs is None:
            self.coeffs = (0,) * n
        else:
            coeffs = list(coeffs)
            if len(coeffs) > n:
                coeffs = _reduce(p, coeffs)
            coeffs += [0] * (n - len(coeffs))
            self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, p):
        return cls(p)

    @classmethod
    def one(cls, p):
        return cls(p, [1])

    @classmethod
    def integer(cls, p, n):
        return cls(p, [n])

    @classmethod
    def h_power(cls, p, d, coeff=1):
        return cls(p, [0] * d + [coeff])

    def _binop_check(self, other):
        if isinstance(other, int):
            return CyclotomicInt.integer(self.p, other)
        if not isinstance(other, CyclotomicInt) or other.p != self.p:
            raise ValidationError("mixed cyclotomic rings")
        return other

    def __eq__(self, other):
        if isinstance(other, int):
            other = CyclotomicInt.integer(self.p, other)
        if not isinstance(other, CyclotomicInt):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __add__(self, other):
        other = self._binop_check(other)
        return CyclotomicInt(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInt(self.p, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._binop_check(other)
        return self + (-other)

    def __rsub__(self, other):
        return CyclotomicInt.integer(self.p, other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInt(self.p, [a * other for a in self.coeffs])
        other = self._binop_check(other)
        n = self.p - 1
        prod = [0] * (2 * n - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CyclotomicInt(self.p, prod)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValidationError("negative powers not defined in Lambda_p")
        out = CyclotomicInt.one(self.p)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conjugate(self):
        """The automorphism q -> q^(p-1) (complex conjugation)."""
        return from_q_poly(self.p, {(-e) % self.p: c for e, c in self.to_q_poly().items()})

    def to_q_poly(self):
        """Rewrite in the q-power basis: dict exponent (0..p-2) -> integer."""
        # h^j = (q-1)^j expanded by binomials
        out = {}
        for j, a in enumerate(self.coeffs):
            if a:
                for i in range(j + 1):
                    c = a * comb(j, i) * (-1) ** (j - i)
                    out[i] = out.get(i, 0) + c
        return {e: c for e, c in out.items() if c}

    def __str__(self):
        if not any(self.coeffs):
            return "0"
        parts = []
        for j, a in enumerate(self.coeffs):
            if not a:
                continue
            if j == 0:
                body = str(a)
            else:
                hs = "h" if j == 1 else f"h^{j}"
                if a == 1:
                    body = hs
                elif a == -1:
                    body = f"-{hs}"
                else:
                    body = f"{a}*{hs}"
            if parts and not body.startswith("-"):
                parts.append("+" + body)
            else:
                parts.append(body)
        return "".join(parts) + f"  (p={self.p})"

    def __repr__(self):
        return f"CyclotomicInt(p={self.p}, {list(self.coeffs)})"


def _reduce(p, coeffs):
    """Reduce a raw h-power coefficient list below degree p-1."""
    n = p - 1
    work = list(coeffs)
    tail = _minpoly_tail(p)
    for d in range(len(work) - 1, n - 1, -1):
        c = work[d]
        if c:
            work[d] = 0
            for k in range(n):
                work[d - n + k] += c * tail[k]
    return work[:n]


def from_q_power(p, e):
    """q^e as an element of Lambda_p (e reduced mod p): (1+h)^(e mod p)."""
    _check_p(p)
    e %= p
    coeffs = [comb(e, k) for k in range(e + 1)]
    return CyclotomicInt(p, coeffs)


def from_q_poly(p, qdict):
    """Sum of c * q^e over a dict exponent -> integer coefficient."""
    out = CyclotomicInt.zero(p)
    for e, c in qdict.items():
        out = out + c * from_q_power(p, e)
    return out


def divide_by_h(a):
    """Exact division a / h in Lambda_p; raises if h does not divide a.

    h | a iff the constant coefficient a0 is divisible by p (the residue map
    Lambda_p / (h) = Z_p sends a to a0 mod p).  Writing a = c*p + (a - c*p)
    with c = a0/p, the second summand has zero constant term, so divides by
    a coefficient shift, and p/h is the explicit element -sum C(p,j+2) h^j.
    """
    p = a.p
    if a.coeffs[0] % p:
        raise ValidationError("element is not divisible by h")
    c = a.coeffs[0] // p
    shifted = list(a.coeffs[1:]) + [0]
    if c:
        ph = _p_over_h(p)
        shifted = [s + c * t for s, t in zip(shifted, ph)]
    return CyclotomicInt(p, shifted)


def v_h(a):
    """h-adic valuation of a in Lambda_p; None stands for +infinity (a = 0)."""
    if not a:
        return None
    v = 0
    while a.coeffs[0] % a.p == 0:
        a = divide_by_h(a)
        v += 1
    return v


def pi_d(a, d):
    """The projection pi^d: Lambda_p -> Z_{p^k} sending a to a_j mod p^k,

    where j = d mod (p-1) and k = floor(d / (p-1)) + 1.
    """
    if d < 0:
        raise ValidationError("d must be non-negative")
    p = a.p
    j = d % (p - 1)
    k = d // (p - 1) + 1
    return a.coeffs[j] % p**k


def divide_exact(a, b):
    """Exact quotient a / b in Lambda_p; raises if b = 0 or quotient not integral."""
    p = a.p
    if not b:
        raise ZeroDivisionError("division by zero in Lambda_p")
    if b.p != p:
        raise ValidationError("mixed cyclotomic rings")
    n = p - 1
    # solve b * x = a as a linear system over Q in the h basis
    cols = []
    for j in range(n):
        col = (b * CyclotomicInt.h_power(p, j)).coeffs
        cols.append(col)
    mat = [[Fraction(cols[j][i]) for j in range(n)] for i in range(n)]
    rhs = [Fraction(c) for c in a.coeffs]
    x = _solve_fraction(mat, rhs)
    if x is None:
        raise ValidationError("division not exact in Lambda_p (no solution)")
    out = []
    for xi in x:
        if xi.denominator != 1:
            raise ValidationError("division not exact in Lambda_p (non-integral quotient)")
        out.append(int(xi))
    return CyclotomicInt(p, out)


def _solve_fraction(mat, rhs):
    n = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            return None  # singular; b is a zero divisor only if b = 0, caught above
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col]
        a[col] = [x / inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [a[i][n] for i in range(n)]
