"""Exact arithmetic in Q(sqrt 5), its ring of integers Z[eps] and the trace-dual lattice.

Elements of K = Q(sqrt 5) are stored as ``(p + q*sqrt5) / d`` with integers
``p, q`` and ``d > 0`` in lowest terms, which keeps one gcd per operation.
Fourier indices live in the inverse different O_K* = (1/sqrt5) Z[eps] and are
written ``(a + b*eps)/sqrt5``; everything here is integer arithmetic, no floats.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import NamedTuple, Union

Rat = Fraction
Number = Union[int, Fraction, "QuadRat"]


def _sign_a_plus_b_sqrt5(a: int, b: int) -> int:
    """Exact sign of a + b*sqrt(5) for integers a, b."""
    if a >= 0 and b >= 0:
        return 0 if a == 0 and b == 0 else 1
    if a <= 0 and b <= 0:
        return -1
    # opposite signs: compare a^2 with 5 b^2
    diff = a * a - 5 * b * b
    if diff == 0:
        return 0  # impossible for (a, b) != 0, sqrt5 is irrational
    return (1 if a > 0 else -1) if diff > 0 else (1 if b > 0 else -1)


class QuadRat:
    """An element (p + q sqrt5)/d of Q(sqrt 5), immutable and canonical."""

    __slots__ = ("_p", "_q", "_d", "_hash")

    def __init__(self, a: int | Fraction | str = 0, b: int | Fraction | str = 0):
        a = Fraction(a)
        b = Fraction(b)
        d = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
        self._set(a.numerator * (d // a.denominator), b.numerator * (d // b.denominator), d)

    def _set(self, p: int, q: int, d: int) -> None:
        g = gcd(gcd(p, q), d)
        if g != 1:
            p //= g
            q //= g
            d //= g
        self._p = p
        self._q = q
        self._d = d
        self._hash = None

    @classmethod
    def _raw(cls, p: int, q: int, d: int) -> QuadRat:
        obj = object.__new__(cls)
        if d < 0:
            p, q, d = -p, -q, -d
        obj._set(p, q, d)
        return obj

    @classmethod
    def coerce(cls, x: Number) -> QuadRat:
        if isinstance(x, QuadRat):
            return x
        if isinstance(x, int):
            return cls._raw(x, 0, 1)
        if isinstance(x, Fraction):
            return cls._raw(x.numerator, 0, x.denominator)
        raise TypeError(f"cannot coerce {type(x).__name__} to QuadRat")

    # components ---------------------------------------------------------
    @property
    def a(self) -> Fraction:
        return Fraction(self._p, self._d)

    @property
    def b(self) -> Fraction:
        return Fraction(self._q, self._d)

    @property
    def raw(self) -> tuple[int, int, int]:
        return self._p, self._q, self._d

    def is_rational(self) -> bool:
        return self._q == 0

    def is_integral_rational(self) -> bool:
        return self._q == 0 and self._d == 1

    # arithmetic ----------------------------------------------------------
    def __add__(self, other: Number) -> QuadRat:
        if not isinstance(other, QuadRat):
            try:
                other = QuadRat.coerce(other)
            except TypeError:
                return NotImplemented
        if self._d == other._d:
            return QuadRat._raw(self._p + other._p, self._q + other._q, self._d)
        return QuadRat._raw(
            self._p * other._d + other._p * self._d,
            self._q * other._d + other._q * self._d,
            self._d * other._d,
        )

    __radd__ = __add__

    def __neg__(self) -> QuadRat:
        return QuadRat._raw(-self._p, -self._q, self._d)

    def __pos__(self) -> QuadRat:
        return self

    def __sub__(self, other: Number) -> QuadRat:
        if not isinstance(other, QuadRat):
            try:
                other = QuadRat.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Number) -> QuadRat:
        return QuadRat.coerce(other) - self

    def __mul__(self, other: Number) -> QuadRat:
        if isinstance(other, int):
            return QuadRat._raw(self._p * other, self._q * other, self._d)
        if not isinstance(other, QuadRat):
            try:
                other = QuadRat.coerce(other)
            except TypeError:
                return NotImplemented
        p1, q1, d1 = self._p, self._q, self._d
        p2, q2, d2 = other._p, other._q, other._d
        return QuadRat._raw(p1 * p2 + 5 * q1 * q2, p1 * q2 + q1 * p2, d1 * d2)

    __rmul__ = __mul__

    def conj(self) -> QuadRat:
        return QuadRat._raw(self._p, -self._q, self._d)

    def inv(self) -> QuadRat:
        if self._p == 0 and self._q == 0:
            raise ZeroDivisionError("division by zero in K")
        # 1/((p + q s)/d) = d (p - q s) / (p^2 - 5 q^2)
        n = self._p * self._p - 5 * self._q * self._q
        return QuadRat._raw(self._d * self._p, -self._d * self._q, n)

    def __truediv__(self, other: Number) -> QuadRat:
        if isinstance(other, int):
            if other == 0:
                raise ZeroDivisionError("division by zero in K")
            return QuadRat._raw(self._p, self._q, self._d * other)
        if not isinstance(other, QuadRat):
            try:
                other = QuadRat.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other: Number) -> QuadRat:
        return QuadRat.coerce(other) * self.inv()

    def __pow__(self, n: int) -> QuadRat:
        if n < 0:
            return self.inv() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def trace(self) -> Fraction:
        return Fraction(2 * self._p, self._d)

    def norm(self) -> Fraction:
        return Fraction(self._p * self._p - 5 * self._q * self._q, self._d * self._d)

    def sign(self) -> int:
        """Sign under the real embedding sqrt5 > 0."""
        return _sign_a_plus_b_sqrt5(self._p, self._q)

    def is_totally_positive(self) -> bool:
        return self.sign() > 0 and self.conj().sign() > 0

    def sqrt(self) -> QuadRat | None:
        """Exact square root in K if it exists (the one positive under sqrt5 > 0), else None."""
        if not self:
            return self
        a, b = self.a, self.b
        if b == 0:
            r = _rational_sqrt(a)
            if r is not None:
                return QuadRat(r)
            r = _rational_sqrt(a / 5)
            return None if r is None else QuadRat(0, r)
        # (x + y s)^2 = x^2 + 5 y^2 + 2 x y s; x^2 is a root of X^2 - a X + 5 b^2 / 4
        disc = _rational_sqrt(a * a - 5 * b * b)
        if disc is None:
            return None
        for x2 in ((a + disc) / 2, (a - disc) / 2):
            x = _rational_sqrt(x2)
            if x is None or x == 0:
                continue
            y = b / (2 * x)
            cand = QuadRat(x, y)
            if cand * cand == self:
                return cand if cand.sign() > 0 else -cand
        return None

    # comparisons ---------------------------------------------------------
    def __bool__(self) -> bool:
        return self._p != 0 or self._q != 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuadRat):
            return self._p == other._p and self._q == other._q and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self._q == 0 and Fraction(self._p, self._d) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._p, self._q, self._d)) if self._q else hash(Fraction(self._p, self._d))
        return self._hash

    # text ------------------------------------------------------------------
    def __repr__(self) -> str:
        return f"QuadRat({self.a}, {self.b})"

    def __str__(self) -> str:
        return format_quad(self)


ZERO = QuadRat(0)
ONE = QuadRat(1)
SQRT5 = QuadRat(0, 1)
EPS = QuadRat(Fraction(1, 2), Fraction(1, 2))
EPS_CONJ = EPS.conj()


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = isqrt(x.numerator), isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def _frac_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def format_quad(x: QuadRat) -> str:
    """Text form ``p/q`` or ``p/q+r/s*s5`` (``-`` when the surd part is negative)."""
    if x.b == 0:
        return _frac_text(x.a)
    sign = "-" if x.b < 0 else "+"
    return f"{_frac_text(x.a)}{sign}{_frac_text(abs(x.b))}*s5"


_QUAD_RE = re.compile(r"^(-?\d+(?:/\d+)?)(?:([+-])(\d+(?:/\d+)?)\*s5)?$")


def parse_quad(text: str) -> QuadRat:
    m = _QUAD_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad coefficient {text!r}")
    a = Fraction(m.group(1))
    b = Fraction(m.group(3)) if m.group(3) else Fraction(0)
    if m.group(2) == "-":
        b = -b
    return QuadRat(a, b)


def quad_arith(x: QuadRat, y: QuadRat | None, op: str) -> QuadRat:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inv()
    if op == "conj":
        return x.conj()
    raise ValueError(f"unknown operation {op!r}")


def trace_norm(x: QuadRat) -> tuple[Fraction, Fraction]:
    return x.trace(), x.norm()


# --------------------------------------------------------------------------
# trace-dual lattice


class DualIndex(NamedTuple):
    """nu = (a + b*eps)/sqrt5 in O_K*; its trace is b."""

    a: int
    b: int

    def __add__(self, other):  # type: ignore[override]
        return DualIndex(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return DualIndex(self.a - other.a, self.b - other.b)

    @property
    def trace(self) -> int:
        return self.b

    def conj(self) -> DualIndex:
        return DualIndex(-self.a - self.b, self.b)

    def is_totally_positive(self) -> bool:
        return is_totally_positive(self.a, self.b)

    def to_quad(self) -> QuadRat:
        return dual_to_quad(self)

    def integral(self) -> tuple[int, int]:
        """The element nu*sqrt5 = a + b*eps of Z[eps], as the pair (a, b)."""
        return self.a, self.b


def is_totally_positive(a: int, b: int) -> bool:
    # a + b eps > 0  <=>  (2a + b) + b sqrt5 > 0 ; conjugate: (-2a - b) + b sqrt5 > 0
    return _sign_a_plus_b_sqrt5(2 * a + b, b) > 0 and _sign_a_plus_b_sqrt5(-2 * a - b, b) > 0


@lru_cache(maxsize=None)
def dual_to_quad(nu: DualIndex) -> QuadRat:
    a, b = nu
    return QuadRat(Fraction(b, 2), Fraction(2 * a + b, 10))


def quad_to_dual(x: QuadRat) -> DualIndex:
    """Inverse of dual_to_quad; raises if x is not in O_K*."""
    b = x.a * 2
    a2 = x.b * 10 - b
    if b.denominator != 1 or a2.denominator != 1 or a2.numerator % 2:
        raise ValueError(f"{x} is not in the inverse different")
    return DualIndex(a2.numerator // 2, b.numerator)


def dual_norm(nu: DualIndex) -> Fraction:
    """Field norm n(nu) = N(a + b eps) / N(sqrt5) = -(a^2 + ab - b^2)/5."""
    a, b = nu
    return Fraction(-(a * a + a * b - b * b), 5)


@lru_cache(maxsize=None)
def dual_layer(b: int) -> tuple[DualIndex, ...]:
    """Totally positive indices of trace exactly b, sorted by a."""
    if b <= 0:
        return ()
    # -b eps < a < b (eps - 1); the scan window is generous, the test is exact
    return tuple(DualIndex(a, b) for a in range(-2 * b, b + 1) if is_totally_positive(a, b))


def enumerate_dual(T: int) -> list[DualIndex]:
    out: list[DualIndex] = []
    for b in range(1, T + 1):
        out.extend(dual_layer(b))
    return out


def unit_scale(nu: DualIndex, power: int = 1) -> DualIndex:
    """Multiply nu by eps^(2*power) (a totally positive unit)."""
    x = dual_to_quad(nu) * EPS ** (2 * power)
    return quad_to_dual(x)


# --------------------------------------------------------------------------
# ideal divisor sums in Z[eps] (class number one, so ideals are elements)


def _factor_int(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _int_norm(a: int, b: int) -> int:
    """N(a + b eps) = a^2 + ab - b^2."""
    return a * a + a * b - b * b


def _split_root(p: int) -> int:
    """A root of x^2 - x - 1 mod p for p = +-1 mod 5."""
    for r in range(p):
        if (r * r - r - 1) % p == 0:
            return r
    raise ValueError(f"{p} does not split")


def prime_ideal_exponents(a: int, b: int) -> list[tuple[int, int]]:
    """Factor the principal ideal (a + b eps) as a list of (norm of prime, exponent)."""
    if a == 0 and b == 0:
        raise ValueError("zero has no factorisation")
    g = gcd(a, b)
    a0, b0 = a // g, b // g
    out: list[tuple[int, int]] = []
    content = _factor_int(g)
    primitive = _factor_int(_int_norm(a0, b0))
    for p in sorted(set(content) | set(primitive)):
        e_c = content.get(p, 0)
        e_n = primitive.get(p, 0)
        if p == 5:
            out.append((5, 2 * e_c + e_n))
        elif p % 5 in (2, 3):
            # inert; a primitive element has norm prime to p
            out.append((p * p, e_c + e_n // 2))
        else:
            r = _split_root(p)
            # a primitive element lies in at most one of the two primes over p
            e1 = e_c + (e_n if (a0 + b0 * r) % p == 0 else 0)
            e2 = e_c + (0 if (a0 + b0 * r) % p == 0 else e_n)
            out.extend([(p, e1), (p, e2)])
    return [(q, e) for q, e in out if e]


def divisor_norm_sum(nu: DualIndex, k: int) -> Fraction:
    """Sum over integral ideals c dividing (nu)*d_K of N(c)^(k-1)."""
    if not nu.is_totally_positive():
        raise ValueError(f"{nu} is not totally positive")
    total = 1
    for q, e in prime_ideal_exponents(*nu.integral()):
        m = q ** (k - 1)
        total *= sum(m**i for i in range(e + 1))
    return Fraction(total)
