"""Sparse multivariate polynomials with weighted grading.

The main ring is T4 = K[phi2, chi5, chi6, X] with weights (2, 5, 6, 15), X
standing for chi15.  ``Poly`` itself is coefficient-agnostic: the free bracket
algebra reuses it over Q with a different variable set.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .numfield import ONE, ZERO, QuadRat, format_quad, parse_quad


@dataclass(frozen=True)
class Ring:
    names: tuple[str, ...]
    weights: tuple[int, ...]
    zero: object = ZERO
    one: object = ONE

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, var: str | int) -> int:
        if isinstance(var, int):
            return var
        try:
            return self.names.index(var)
        except ValueError:
            raise KeyError(f"no variable {var!r} in ring {self.names}") from None


T4 = Ring(("phi2", "chi5", "chi6", "X"), (2, 5, 6, 15))
PHI2, CHI5, CHI6, XVAR = 0, 1, 2, 3


class Poly:
    """Immutable sparse polynomial: a dict from exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: dict | None = None, _clean: bool = False):
        self.ring = ring
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            self.terms = {e: c for e, c in terms.items() if c}

    # constructors -----------------------------------------------------------
    @classmethod
    def const(cls, ring: Ring, c) -> Poly:
        if not c:
            return cls(ring)
        if isinstance(c, (int, Fraction)) and isinstance(ring.one, QuadRat):
            c = QuadRat.coerce(c)
        return cls(ring, {(0,) * ring.nvars: c}, _clean=True)

    @classmethod
    def var(cls, ring: Ring, v: str | int, power: int = 1) -> Poly:
        e = [0] * ring.nvars
        e[ring.index(v)] = power
        return cls(ring, {tuple(e): ring.one}, _clean=True)

    @classmethod
    def monomial(cls, ring: Ring, exps: Sequence[int], c=None) -> Poly:
        c = ring.one if c is None else c
        if isinstance(c, (int, Fraction)) and isinstance(ring.one, QuadRat):
            c = QuadRat.coerce(c)
        return cls(ring, {tuple(exps): c})

    def _coerce(self, other) -> Poly | None:
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        if isinstance(other, (int, Fraction, QuadRat)):
            return Poly.const(self.ring, other)
        return None

    # arithmetic ---------------------------------------------------------------
    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for e, c in small.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly(self.ring, out, _clean=True)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(self.ring, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other) -> Poly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        return (-self) + other

    def scale(self, c) -> Poly:
        if not c:
            return Poly(self.ring)
        return Poly(self.ring, {e: x * c for e, x in self.terms.items()}, _clean=True)

    def __mul__(self, other) -> Poly:
        if isinstance(other, (int, Fraction, QuadRat)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                prev = get(e)
                out[e] = c1 * c2 if prev is None else prev + c1 * c2
        return Poly(self.ring, {e: c for e, c in out.items() if c}, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        if n < 0:
            raise ValueError("negative power")
        result = Poly.const(self.ring, self.ring.one)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, c) -> Poly:
        if isinstance(c, Poly):
            return exact_div(self, c)
        return self.scale(1 / QuadRat.coerce(c) if isinstance(self.ring.one, QuadRat) else Fraction(1) / c)

    # comparison -------------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, QuadRat)):
            other = Poly.const(self.ring, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    # structure ------------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.zero)

    def term_weight(self, e: Sequence[int]) -> int:
        return sum(w * x for w, x in zip(self.ring.weights, e))

    def weights(self) -> set[int]:
        return {self.term_weight(e) for e in self.terms}

    def weight(self) -> int | None:
        """Common weight of all terms, None when not isobaric (the zero polynomial has weight None)."""
        ws = self.weights()
        return ws.pop() if len(ws) == 1 else None

    def is_isobaric(self) -> bool:
        return len(self.weights()) == 1

    def degree(self, var: str | int) -> int:
        i = self.ring.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, x in enumerate(e) if x}

    def coeff(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), self.ring.zero)

    def coefficients_in(self, var: str | int) -> list[Poly]:
        """Coefficients c_k (polynomials free of var) with self = sum c_k var^k."""
        i = self.ring.index(var)
        n = self.degree(i)
        buckets: list[dict] = [dict() for _ in range(n + 1)]
        for e, c in self.terms.items():
            k = e[i]
            buckets[k][e[:i] + (0,) + e[i + 1 :]] = c
        return [Poly(self.ring, b, _clean=True) for b in buckets]

    def monomial_content(self) -> tuple[int, ...]:
        """Exponentwise minimum over all terms (the largest monomial dividing self)."""
        if not self.terms:
            return (0,) * self.ring.nvars
        return tuple(min(col) for col in zip(*self.terms))

    def shift(self, exps: Sequence[int], sign: int = 1) -> Poly:
        """Multiply (sign=1) or divide (sign=-1) by the monomial with exponents exps."""
        out = {}
        for e, c in self.terms.items():
            ne = tuple(x + sign * y for x, y in zip(e, exps))
            if min(ne) < 0:
                raise ValueError("monomial does not divide polynomial")
            out[ne] = c
        return Poly(self.ring, out, _clean=True)

    def partial(self, var: str | int) -> Poly:
        i = self.ring.index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1 :]] = c * k
        return Poly(self.ring, out, _clean=True)

    def substitute(self, values: dict[int, Poly]) -> Poly:
        """Replace selected variables by polynomials (a ring homomorphism)."""
        out = Poly(self.ring)
        cache: dict[tuple[int, int], Poly] = {}
        for e, c in self.terms.items():
            keep = list(e)
            term = Poly.const(self.ring, c)
            for i, val in values.items():
                if e[i]:
                    key = (i, e[i])
                    if key not in cache:
                        cache[key] = val ** e[i]
                    term = term * cache[key]
                    keep[i] = 0
            out = out + term.shift(keep)
        return out

    def map_coeffs(self, f: Callable) -> Poly:
        return Poly(self.ring, {e: f(c) for e, c in self.terms.items()})

    def evaluate(self, values: Sequence, one, power: Callable | None = None):
        """Evaluate at values in any commutative ring, given its unit ``one``."""
        power = power or (lambda x, k: x**k)
        total = None
        cache: dict[tuple[int, int], object] = {}
        for e, c in self.terms.items():
            term = one * c
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in cache:
                        cache[(i, k)] = power(values[i], k)
                    term = term * cache[(i, k)]
            total = term if total is None else total + term
        return one * 0 if total is None else total

    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        """Canonical order: descending weight, then descending lexicographic exponents."""
        return sorted(self.terms.items(), key=lambda t: (self.term_weight(t[0]), t[0]), reverse=True)

    # text --------------------------------------------------------------------------
    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"Poly({to_text(self)!r})"


# ---------------------------------------------------------------------------
# convenience constructors for T4


def gen(name: str, ring: Ring = T4) -> Poly:
    return Poly.var(ring, name)


def const(c, ring: Ring = T4) -> Poly:
    return Poly.const(ring, c)


def zero(ring: Ring = T4) -> Poly:
    return Poly(ring)


phi2 = gen("phi2")
chi5 = gen("chi5")
chi6 = gen("chi6")
X = gen("X")


def poly_arith(p: Poly, q: Poly | int, op: str) -> Poly:
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    if op == "pow":
        return p**q
    raise ValueError(f"unknown operation {op!r}")


def weight_check(p: Poly) -> int | str:
    w = p.weight()
    return "not isobaric" if w is None else w


def partial(p: Poly, var: str | int) -> Poly:
    return p.partial(var)


# ---------------------------------------------------------------------------
# text format: coeff*phi2^a*chi5^b*chi6^c[*X^d]


def _fmt_coeff(c) -> str:
    if isinstance(c, QuadRat):
        return format_quad(c)
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def to_text(p: Poly) -> str:
    if not p.terms:
        return "0"
    parts = []
    fixed = p.ring == T4
    for e, c in p.sorted_terms():
        pieces = [_fmt_coeff(c)]
        for i, (name, k) in enumerate(zip(p.ring.names, e)):
            if fixed and i < 3:
                pieces.append(f"{name}^{k}")
            elif k:
                pieces.append(f"{name}^{k}")
        parts.append("*".join(pieces))
    return " + ".join(parts)


_TERM_RE = re.compile(r"^(?P<c>-?\d+(?:/\d+)?(?:[+-]\d+(?:/\d+)?\*s5)?)(?P<m>(?:\*[A-Za-z_][A-Za-z_0-9]*\^\d+)*)$")


def from_text(text: str, ring: Ring = T4) -> Poly:
    text = text.strip()
    if text == "0":
        return Poly(ring)
    terms: dict = {}
    quad = isinstance(ring.one, QuadRat)
    for chunk in text.split(" + "):
        m = _TERM_RE.match(chunk.strip())
        if not m:
            raise ValueError(f"bad term {chunk!r}")
        c = parse_quad(m.group("c")) if quad else Fraction(m.group("c"))
        e = [0] * ring.nvars
        for piece in filter(None, m.group("m").split("*")):
            name, k = piece.split("^")
            e[ring.index(name)] += int(k)
        e = tuple(e)
        terms[e] = terms.get(e, ring.zero) + c
    return Poly(ring, terms)


# ---------------------------------------------------------------------------
# exact division, resultants


def _lex_lead(p: Poly):
    e = max(p.terms)
    return e, p.terms[e]


def exact_div(p: Poly, q: Poly) -> Poly:
    """p / q when q divides p exactly; raises ArithmeticError otherwise."""
    if not q.terms:
        raise ZeroDivisionError("division by the zero polynomial")
    if len(q.terms) == 1:
        (eq, cq), = q.terms.items()
        inv = 1 / cq
        out = {}
        for e, c in p.terms.items():
            ne = tuple(x - y for x, y in zip(e, eq))
            if min(ne) < 0:
                raise ArithmeticError("inexact polynomial division")
            out[ne] = c * inv
        return Poly(p.ring, out, _clean=True)
    lq, cq = _lex_lead(q)
    inv = 1 / cq
    rem = dict(p.terms)
    quo: dict = {}
    while rem:
        lr = max(rem)
        cr = rem[lr]
        ne = tuple(x - y for x, y in zip(lr, lq))
        if min(ne) < 0:
            raise ArithmeticError("inexact polynomial division")
        c = cr * inv
        quo[ne] = c
        for e, x in q.terms.items():
            te = tuple(a + b for a, b in zip(e, ne))
            v = rem.get(te, p.ring.zero) - c * x
            if v:
                rem[te] = v
            else:
                rem.pop(te, None)
    return Poly(p.ring, quo, _clean=True)


def sylvester_matrix(p: Poly, q: Poly, var: str | int) -> list[list[Poly]]:
    """Sylvester matrix with p's coefficient rows on top, highest powers first."""
    a = p.coefficients_in(var)[::-1]
    b = q.coefficients_in(var)[::-1]
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    z = Poly(p.ring)
    rows = []
    for i in range(n):
        rows.append([z] * i + a + [z] * (size - m - 1 - i))
    for i in range(m):
        rows.append([z] * i + b + [z] * (size - n - 1 - i))
    return rows


def bareiss_det(mat: list[list[Poly]]) -> Poly:
    """Fraction-free Gaussian elimination; every division is exact."""
    n = len(mat)
    if n == 0:
        raise ValueError("empty matrix")
    ring = mat[0][0].ring
    a = [row[:] for row in mat]
    sign = 1
    prev = Poly.const(ring, ring.one)
    for k in range(n - 1):
        if not a[k][k]:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Poly(ring)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def minors_det(mat: list[list[Poly]]) -> Poly:
    """Laplace expansion along the first row (the slow reference method)."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = Poly(mat[0][0].ring)
    for j in range(n):
        if not mat[0][j]:
            continue
        sub = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = mat[0][j] * minors_det(sub)
        total = total + term if j % 2 == 0 else total - term
    return total


def resultant(p: Poly, q: Poly, var: str | int) -> Poly:
    """Res_var(p, q) = det of the Sylvester matrix (p's rows on top)."""
    if p.degree(var) <= 0 or q.degree(var) <= 0:
        raise ValueError(f"resultant needs positive degree in {var}")
    return bareiss_det(sylvester_matrix(p, q, var))


# ---------------------------------------------------------------------------
# univariate polynomials over K: coefficient lists, lowest degree first


def uni_trim(a: list) -> list:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def uni_divmod(a: list, b: list) -> tuple[list, list]:
    a, b = uni_trim(a), uni_trim(b)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    q = [ZERO] * max(len(a) - len(b) + 1, 0)
    inv = 1 / QuadRat.coerce(b[-1])
    while len(a) >= len(b):
        c = a[-1] * inv
        k = len(a) - len(b)
        q[k] = c
        for i, x in enumerate(b):
            a[i + k] = a[i + k] - c * x
        a = uni_trim(a)
    return q, a


def uni_gcd(a: list, b: list) -> list:
    """Monic gcd over K."""
    a, b = uni_trim(a), uni_trim(b)
    while b:
        _, r = uni_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    inv = 1 / QuadRat.coerce(a[-1])
    return [x * inv for x in a]


def uni_eval(a: list, x):
    acc = ZERO
    for c in reversed(a):
        acc = acc * x + c
    return acc


def uni_rational_roots(a: list) -> list[Fraction]:
    """Rational roots of a univariate polynomial with rational coefficients."""
    from math import gcd, lcm

    a = uni_trim(a)
    if not a:
        raise ValueError("zero polynomial has every root")
    coeffs = [QuadRat.coerce(c) for c in a]
    if any(not c.is_rational() for c in coeffs):
        raise ValueError("coefficients must be rational")
    fr = [c.a for c in coeffs]
    den = lcm(*(c.denominator for c in fr))
    ints = [int(c * den) for c in fr]
    g = gcd(*ints)
    ints = [c // g for c in ints]
    roots = []
    while ints and ints[0] == 0:
        roots.append(Fraction(0))
        ints = ints[1:]
    if len(ints) <= 1:
        return sorted(set(roots))

    def divisors(n: int) -> list[int]:
        n = abs(n)
        small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
        return sorted(set(small + [n // d for d in small]))

    for p in divisors(ints[0]):
        for q in divisors(ints[-1]):
            for s in (1, -1):
                r = Fraction(s * p, q)
                if sum(c * r**i for i, c in enumerate(ints)) == 0:
                    roots.append(r)
    return sorted(set(roots))


# ---------------------------------------------------------------------------
# binomial-product shapes


BINOMIAL_KINDS = {
    # active variable pair -> (kind label, (i, wi), (j, wj)) with u = v_j^pj / v_i^pi
    frozenset({PHI2, CHI6}): ("a*phi2^3-chi6", PHI2, CHI6, 3, 1),
    frozenset({PHI2, CHI5}): ("b*phi2^5-chi5^2", PHI2, CHI5, 5, 2),
    frozenset({CHI5, CHI6}): ("d*chi5^6-chi6^5", CHI5, CHI6, 6, 5),
}


@dataclass
class ResultantShape:
    unit: QuadRat
    monomial: tuple[int, ...]
    binomial_kind: str
    cofactor: Poly
    weight: int  # weight of the cofactor
    univariate: list = field(default_factory=list, repr=False)

    def roots_polynomial(self) -> list:
        """Monic univariate polynomial in u whose roots are the binomial constants."""
        return self.univariate


def binomial_shape(p: Poly, kind: str | None = None) -> ResultantShape:
    """Split p = unit * monomial * cofactor, cofactor a product of binomials of one kind.

    The cofactor is read as a univariate polynomial in u (e.g. u = chi6/phi2^3) by the
    weight grading.  A pure monomial has an empty product; its kind is taken from
    ``kind`` when given.
    """
    if not p:
        raise ValueError("unexpected factor shape: zero polynomial")
    w = p.weight()
    if w is None:
        raise ValueError("unexpected factor shape: not isobaric")
    mono = p.monomial_content()
    cof = p.shift(mono, -1)
    active = cof.variables()
    if XVAR in active:
        raise ValueError("unexpected factor shape: involves X")
    if not active:
        unit = cof.constant_term()
        label = kind or "none"
        return ResultantShape(unit, mono, label, Poly.const(p.ring, ONE), 0, [ONE])
    key = frozenset(active)
    if key not in BINOMIAL_KINDS:
        raise ValueError(f"unexpected factor shape: variables {sorted(p.ring.names[i] for i in active)}")
    label, i, j, pi, pj = BINOMIAL_KINDS[key]
    # each term v_i^x v_j^y; y must be a multiple of pj; u-degree = y / pj
    coeffs: dict[int, QuadRat] = {}
    for e, c in cof.terms.items():
        y = e[j]
        if y % pj:
            raise ValueError("unexpected factor shape: exponent not a binomial multiple")
        coeffs[y // pj] = c
    n = max(coeffs)
    uni = [coeffs.get(k, ZERO) for k in range(n + 1)]
    # product_s (c_s v_i^pi - v_j^pj) = v_i^(pi n) * prod(c_s - u) ; leading coefficient (-1)^n
    lead = uni[-1]
    unit = lead * (-1) ** n
    monic = [x / lead for x in uni]
    return ResultantShape(unit, mono, label, cof.scale(1 / unit), w - p.term_weight(mono), monic)


def _from_univariate(uni: list, kind_key: frozenset, ring: Ring = T4) -> Poly:
    label, i, j, pi, pj = BINOMIAL_KINDS[kind_key]
    n = len(uni) - 1
    terms = {}
    for k, c in enumerate(uni):
        if c:
            e = [0] * ring.nvars
            e[i] = pi * (n - k)
            e[j] = pj * k
            terms[tuple(e)] = c
    return Poly(ring, terms)


def gcd_and_shape(p: Poly, q: Poly) -> tuple[Poly, tuple[ResultantShape, ResultantShape]]:
    """gcd of the binomial-product cofactors of p and q, with both shapes."""
    sp, sq = binomial_shape(p), binomial_shape(q)
    kp = frozenset(sp.cofactor.variables())
    kq = frozenset(sq.cofactor.variables())
    if not kp or not kq:
        return Poly.const(p.ring, ONE), (sp, sq)
    if kp != kq:
        return Poly.const(p.ring, ONE), (sp, sq)
    g = uni_gcd(sp.univariate, sq.univariate)
    if len(g) <= 1:
        return Poly.const(p.ring, ONE), (sp, sq)
    return _from_univariate(g, kp, p.ring), (sp, sq)


def isobaric_parts(p: Poly) -> dict[int, Poly]:
    out: dict[int, dict] = {}
    for e, c in p.terms.items():
        out.setdefault(p.term_weight(e), {})[e] = c
    return {w: Poly(p.ring, t, _clean=True) for w, t in out.items()}


def poly_sum(polys: Iterable[Poly], ring: Ring = T4) -> Poly:
    total = Poly(ring)
    for p in polys:
        total = total + p
    return total
