"""Exact arithmetic in the cyclotomic field Q(zeta_n).

Elements are stored as an integer coefficient vector over a common positive
denominator, reduced modulo the n-th cyclotomic polynomial so that every
element has exactly one representation.  ``CycNum.coeffs`` exposes the
rational coefficients of ``c0 + c1*z + ... + c_{d-1}*z^(d-1)``.

Multiplication packs both operands into a single integer (Kronecker
substitution), which is considerably faster in CPython than a double loop.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import gmpy2
import mpmath

__all__ = [
    "CycNum",
    "CyclotomicContext",
    "ContextMismatch",
    "cyclotomic_polynomial",
    "context",
    "zeta_pow",
    "inv",
    "conj",
    "to_complex",
    "parse_literal",
]


# operands with at most this many nonzero coefficients use a direct product
_SPARSE_TERMS = 3


class ContextMismatch(ValueError):
    """Operands live in different cyclotomic fields."""


# ---------------------------------------------------------------------------
# integer polynomial helpers (coefficient lists, low degree first)
# ---------------------------------------------------------------------------

def _trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _divexact_monic(num: list[int], den: tuple[int, ...]) -> list[int]:
    """Quotient of ``num`` by the monic ``den``; raises if the remainder is nonzero."""
    rem = list(num)
    dd = len(den) - 1
    quot = [0] * (len(rem) - dd)
    for k in range(len(rem) - 1, dd - 1, -1):
        c = rem[k]
        if c:
            quot[k - dd] = c
            for i, e in enumerate(den):
                rem[k - dd + i] -= c * e
    if any(rem):
        raise ArithmeticError("inexact polynomial division")
    return quot


def _polymul(a, b) -> list[int]:
    """Product of two integer polynomials (nonempty coefficient sequences).

    Both operands are packed into one integer with a slot wide enough for any
    product coefficient, multiplied once, and unpacked.  Signed slots are
    handled by splitting signs on the way in and adding a per-slot offset on
    the way out.
    """
    ma = max(map(abs, a))
    mb = max(map(abs, b))
    length = len(a) + len(b) - 1
    if not ma or not mb:
        return [0] * length
    bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 2
    pack = gmpy2.pack
    ka = pack([x if x > 0 else 0 for x in a], bits) - pack([-x if x < 0 else 0 for x in a], bits)
    kb = pack([x if x > 0 else 0 for x in b], bits) - pack([-x if x < 0 else 0 for x in b], bits)
    half = 1 << (bits - 1)
    slots = gmpy2.unpack(ka * kb + pack([half] * length, bits), bits)
    return [int(x) - half for x in slots]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first.

    Computed as (x^n - 1) divided exactly by Phi_d for every proper divisor d.
    """
    if n < 1:
        raise ValueError(f"cyclotomic polynomial needs n >= 1, got {n}")
    if n == 1:
        return (-1, 1)
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p = _divexact_monic(p, cyclotomic_polynomial(d))
    return tuple(p)


class CyclotomicContext:
    """The field Q(zeta_n), with zeta an abstract primitive n-th root of unity.

    Obtain instances through :func:`context`, which caches one per n.
    """

    def __init__(self, n: int):
        if n < 2:
            raise ValueError(f"conductor must be >= 2, got {n}")
        self.n = n
        self.phi_n = cyclotomic_polynomial(n)
        self.degree = len(self.phi_n) - 1
        d = self.degree
        # rows[k - d] = x^k mod Phi_n for d <= k < n, stored sparsely
        rows = []
        cur = [-c for c in self.phi_n[:-1]]
        for _ in range(d, n):
            rows.append([(i, c) for i, c in enumerate(cur) if c])
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for i in range(d):
                    cur[i] -= top * self.phi_n[i]
        self._rows = rows
        self._zeta = {}
        self.zero = CycNum._raw(self, (0,) * d, 1)
        self.one = self.from_int(1)

    def __repr__(self) -> str:
        return f"CyclotomicContext(n={self.n})"

    def __eq__(self, other) -> bool:
        return isinstance(other, CyclotomicContext) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("CyclotomicContext", self.n))

    def __reduce__(self):
        return (context, (self.n,))

    def reduce(self, p) -> list[int]:
        """Reduce an integer polynomial of any length modulo Phi_n."""
        n, d = self.n, self.degree
        c = list(p)
        if len(c) > n:
            for k in range(n, len(c)):
                c[k % n] += c[k]
            del c[n:]
        if len(c) <= d:
            return c + [0] * (d - len(c))
        low = c[:d]
        rows = self._rows
        for k in range(d, len(c)):
            v = c[k]
            if v:
                for i, r in rows[k - d]:
                    low[i] += v * r
        return low

    def from_int(self, value: int) -> CycNum:
        return CycNum._raw(self, (value,) + (0,) * (self.degree - 1), 1)

    def from_rational(self, value) -> CycNum:
        value = Fraction(value)
        return CycNum._raw(
            self, (value.numerator,) + (0,) * (self.degree - 1), value.denominator
        )

    def zeta_pow(self, k: int) -> CycNum:
        k %= self.n
        z = self._zeta.get(k)
        if z is None:
            mono = [0] * k + [1]
            z = CycNum._raw(self, tuple(self.reduce(mono)), 1)
            self._zeta[k] = z
        return z

    def from_coeffs(self, coeffs) -> CycNum:
        """Element sum(coeffs[i] * zeta^i); any length, rational entries allowed."""
        fr = [Fraction(c) for c in coeffs] or [Fraction(0)]
        den = math.lcm(*(f.denominator for f in fr))
        return CycNum(self, self.reduce([f.numerator * (den // f.denominator) for f in fr]), den)


@lru_cache(maxsize=None)
def context(n: int) -> CyclotomicContext:
    """Shared context for Q(zeta_n)."""
    return CyclotomicContext(n)


def _content_gcd(num, den: int) -> int:
    return math.gcd(den, *num)


class CycNum:
    """Immutable element of Q(zeta_n) in canonical form ``num / den``."""

    __slots__ = ("ctx", "num", "den", "_hash")

    def __init__(self, ctx: CyclotomicContext, num, den: int = 1):
        num = tuple(num)
        if len(num) != ctx.degree:
            num = tuple(ctx.reduce(num))
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num = tuple(-c for c in num)
            den = -den
        g = _content_gcd(num, den)
        if g > 1:
            num = tuple(c // g for c in num)
            den //= g
        self.ctx = ctx
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, ctx, num, den):
        self = object.__new__(cls)
        self.ctx = ctx
        self.num = num
        self.den = den
        self._hash = None
        return self

    @classmethod
    def _make(cls, ctx, num, den):
        # num already reduced, den > 0
        g = math.gcd(den, *num)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        if not any(num):
            den = 1
        return cls._raw(ctx, tuple(num), den)

    # -- inspection -------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def height(self) -> int:
        """Bit size of the largest stored integer; a cost measure."""
        return max(max(abs(c) for c in self.num).bit_length(), self.den.bit_length())

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other) -> CycNum | None:
        if isinstance(other, CycNum):
            if other.ctx.n != self.ctx.n:
                raise ContextMismatch(
                    f"Q(zeta_{self.ctx.n}) and Q(zeta_{other.ctx.n}) elements mixed"
                )
            return other
        if isinstance(other, int):
            return self.ctx.from_int(other)
        if isinstance(other, Rational):
            return self.ctx.from_rational(other)
        return None

    # -- field operations -------------------------------------------------

    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        if self.den == b.den:
            return CycNum._make(self.ctx, [x + y for x, y in zip(self.num, b.num)], self.den)
        g = math.gcd(self.den, b.den)
        fa, fb = b.den // g, self.den // g
        return CycNum._make(
            self.ctx, [x * fa + y * fb for x, y in zip(self.num, b.num)], self.den * fa
        )

    __radd__ = __add__

    def __neg__(self):
        return CycNum._raw(self.ctx, tuple(-c for c in self.num), self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return b + (-self)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        ctx = self.ctx
        if self.is_rational():
            s = self.num[0]
            return CycNum._make(ctx, [s * c for c in b.num], self.den * b.den)
        if b.is_rational():
            s = b.num[0]
            return CycNum._make(ctx, [s * c for c in self.num], self.den * b.den)
        sa, sb = self._support(), b._support()
        if len(sa) <= _SPARSE_TERMS or len(sb) <= _SPARSE_TERMS:
            if len(sb) < len(sa):
                sa, sb = sb, sa
            prod = [0] * (2 * ctx.degree - 1)
            for i, c in sa:
                for j, e in sb:
                    prod[i + j] += c * e
        else:
            prod = _polymul(self.num, b.num)
        return CycNum._make(ctx, ctx.reduce(prod), self.den * b.den)

    __rmul__ = __mul__

    def sub_mul(self, f: CycNum, p: CycNum) -> CycNum:
        """``self - f * p`` with a single normalization (elimination kernel)."""
        ctx = self.ctx
        if f.is_rational() or p.is_rational() or len(f._support()) <= _SPARSE_TERMS:
            return self - f * p
        prod = ctx.reduce(_polymul(f.num, p.num))
        pd = f.den * p.den
        g = math.gcd(self.den, pd)
        sa, sp = pd // g, self.den // g
        return CycNum._make(ctx, [x * sa - y * sp for x, y in zip(self.num, prod)], self.den * sa)

    def _support(self) -> list[tuple[int, int]]:
        return [(i, c) for i, c in enumerate(self.num) if c]

    def inv(self) -> CycNum:
        """Multiplicative inverse by the extended Euclidean algorithm against Phi_n."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_n)")
        ctx = self.ctx
        if self.is_rational():
            return CycNum(ctx, (self.den,) + (0,) * (ctx.degree - 1), self.num[0])
        # invariant r_i == s_i * a (mod Phi_n), a = integer numerator of self;
        # r_i kept primitive over Z, s_i = S_i / D_i rational
        r0, r1 = list(ctx.phi_n), _trim(list(self.num))
        s0, d0 = [0], 1
        s1, d1 = [1], 1
        while len(r1) > 1:
            lc = r1[-1]
            rem = list(r0)
            k1 = len(r1) - 1
            q = [0] * (len(rem) - k1)
            scale = 1
            # pseudo-division: lc^e * r0 = q * r1 + rem
            for k in range(len(rem) - 1, k1 - 1, -1):
                c = rem[k]
                rem = [lc * x for x in rem]
                q = [lc * x for x in q]
                scale *= lc
                if c:
                    q[k - k1] += c
                    for i, e in enumerate(r1):
                        rem[k - k1 + i] -= c * e
                rem.pop()
            rem = _trim(rem)
            g = math.gcd(*rem) if rem else 1
            if rem and rem[-1] < 0:
                g = -g
            rem = [x // g for x in rem]
            # s2 = (scale * s0 - q * s1) / g
            qs1 = _polymul(q, s1)
            size = max(len(s0), len(qs1))
            a = s0 + [0] * (size - len(s0))
            b = qs1 + [0] * (size - len(qs1))
            s2 = [scale * x * d1 - y * d0 for x, y in zip(a, b)]
            d2 = d0 * d1 * g
            s2 = ctx.reduce(s2) if len(s2) > ctx.degree else s2
            h = math.gcd(d2, *s2)
            if d2 < 0:
                h = -h
            s2 = [x // h for x in s2]
            d2 //= h
            r0, r1 = r1, rem
            s0, d0, s1, d1 = s1, d1, s2, d2
        if not r1:
            raise ArithmeticError("element shares a factor with Phi_n")
        c = r1[0]
        num = ctx.reduce(s1)
        return CycNum(ctx, tuple(self.den * x for x in num), d1 * c)

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return self * b.inv()

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return b * self.inv()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        base = self if e >= 0 else self.inv()
        e = abs(e)
        result = self.ctx.one
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def conj(self) -> CycNum:
        """Image under zeta -> zeta^(n-1), i.e. complex conjugation."""
        ctx = self.ctx
        n = ctx.n
        p = [0] * n
        for i, c in enumerate(self.num):
            p[(-i) % n] += c
        return CycNum._raw(ctx, tuple(ctx.reduce(p)), self.den)

    def galois(self, m: int) -> CycNum:
        """Image under zeta -> zeta^m for m coprime to n."""
        ctx = self.ctx
        n = ctx.n
        if math.gcd(m, n) != 1:
            raise ValueError(f"{m} is not a unit modulo {n}")
        p = [0] * n
        for i, c in enumerate(self.num):
            p[(i * m) % n] += c
        return CycNum._raw(ctx, tuple(ctx.reduce(p)), self.den)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        try:
            b = self._coerce(other)
        except ContextMismatch:
            return False
        if b is None:
            return NotImplemented
        return self.den == b.den and self.num == b.num

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self.num[0], self.den))
            else:
                self._hash = hash((self.ctx.n, self.num, self.den))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # -- output -----------------------------------------------------------

    def to_complex(self, precision: int = 30) -> mpmath.mpc:
        """Value at zeta = exp(2*pi*i/n), computed with ``precision`` + 10 working digits."""
        if precision < 1:
            raise ValueError("precision must be at least one digit")
        n = self.ctx.n
        with mpmath.workdps(precision + 10):
            total = mpmath.mpc(0)
            for i, c in enumerate(self.num):
                if c:
                    total += c * mpmath.expjpi(mpmath.mpf(2 * i) / n)
            total /= self.den
            # returned with the guard digits intact; rounding here to the
            # global context would throw the extra precision away
            return total

    def __complex__(self):
        return complex(self.to_complex(20))

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if i == 0 else f"{c}*z^{i}")
        return " + ".join(terms) if terms else "0"

    def __repr__(self) -> str:
        return f"CycNum(n={self.ctx.n}, {self})"

    def __reduce__(self):
        return (CycNum, (self.ctx, self.num, self.den))


def zeta_pow(ctx: CyclotomicContext, k: int) -> CycNum:
    return ctx.zeta_pow(k)


def inv(a: CycNum) -> CycNum:
    return a.inv()


def conj(a: CycNum) -> CycNum:
    return a.conj()


def to_complex(a: CycNum, precision: int = 30) -> mpmath.mpc:
    return a.to_complex(precision)


_TERM = re.compile(r"^(-?\d+(?:/\d+)?)(?:\*z\^(\d+))?$")


def parse_literal(ctx: CyclotomicContext, text: str) -> CycNum:
    """Parse the ``c0 + c1*z^1 + ... + ck*z^k`` literal format.

    Terms are separated by `` + ``; each coefficient is ``p`` or ``p/q``
    (possibly negative).  Exponents may repeat or exceed the field degree,
    in which case the result is reduced.
    """
    text = text.strip()
    if text == "0":
        return ctx.zero
    coeffs: dict[int, Fraction] = {}
    for raw in text.split(" + "):
        m = _TERM.match(raw.strip())
        if m is None:
            raise ValueError(f"malformed cyclotomic term {raw!r}")
        k = int(m.group(2)) if m.group(2) is not None else 0
        coeffs[k] = coeffs.get(k, Fraction(0)) + Fraction(m.group(1))
    dense = [Fraction(0)] * (max(coeffs) + 1)
    for k, c in coeffs.items():
        dense[k] = c
    return ctx.from_coeffs(dense)
