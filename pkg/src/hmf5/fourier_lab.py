"""Exact Fourier expansions at infinity of Hilbert modular forms for Q(sqrt5).

A series is stored as its constant term plus a dict from integer pairs (a, b),
standing for the dual index (a + b*eps)/sqrt5, to coefficients in K.  Every
series knows the trace bound T through which its coefficients are exact; all
operations return the minimum of the operand bounds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from pathlib import Path
from typing import Mapping

from .numfield import (
    ONE,
    SQRT5,
    ZERO,
    DualIndex,
    QuadRat,
    divisor_norm_sum,
    dual_layer,
    dual_to_quad,
    enumerate_dual,
    is_totally_positive,
    unit_scale,
)
from .polyring import Poly

Index = tuple[int, int]
Weight = tuple[int, int]


class SeriesError(ArithmeticError):
    pass


@dataclass(frozen=True)
class FourierSeries:
    const: QuadRat
    coeffs: Mapping[Index, QuadRat]
    bound: int
    weight: Weight = (0, 0)

    # construction -------------------------------------------------------------
    @classmethod
    def make(cls, const, coeffs: Mapping, bound: int, weight: Weight = (0, 0)) -> FourierSeries:
        clean = {}
        for (a, b), c in coeffs.items():
            if b > bound:
                continue
            c = QuadRat.coerce(c)
            if not c:
                continue
            if not is_totally_positive(a, b):
                raise ValueError(f"index {(a, b)} is not totally positive")
            clean[(a, b)] = c
        return cls(QuadRat.coerce(const), clean, bound, tuple(weight))

    @classmethod
    def constant(cls, c, bound: int, weight: Weight = (0, 0)) -> FourierSeries:
        return cls(QuadRat.coerce(c), {}, bound, tuple(weight))

    @classmethod
    def zero(cls, bound: int, weight: Weight = (0, 0)) -> FourierSeries:
        return cls(ZERO, {}, bound, tuple(weight))

    # access -----------------------------------------------------------------------
    def coeff(self, idx) -> QuadRat:
        a, b = idx
        if b == 0 and a == 0:
            return self.const
        if b > self.bound:
            raise SeriesError(f"index {(a, b)} beyond trace bound {self.bound}")
        return self.coeffs.get((a, b), ZERO)

    @property
    def parallel_weight(self) -> int | None:
        w1, w2 = self.weight
        return w1 if w1 == w2 else None

    def is_zero(self) -> bool:
        return not self.const and not self.coeffs

    def is_cuspidal(self) -> bool:
        return not self.const

    def min_trace(self) -> int | None:
        if self.const:
            return 0
        return min((b for _, b in self.coeffs), default=None)

    def truncate(self, bound: int) -> FourierSeries:
        if bound > self.bound:
            raise SeriesError("cannot raise the trace bound of a series")
        return FourierSeries(self.const, {k: v for k, v in self.coeffs.items() if k[1] <= bound}, bound, self.weight)

    def with_weight(self, weight: Weight) -> FourierSeries:
        return FourierSeries(self.const, self.coeffs, self.bound, tuple(weight))

    def items(self) -> list[tuple[Index, QuadRat]]:
        """Nonzero terms including the constant, in canonical (trace, a) order."""
        out = [((0, 0), self.const)] if self.const else []
        out += sorted(self.coeffs.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        return out

    # arithmetic ---------------------------------------------------------------------
    def _check_weight(self, other: FourierSeries) -> Weight:
        if self.is_zero():
            return other.weight
        if other.is_zero() or self.weight == other.weight:
            return self.weight
        raise SeriesError(f"weight mismatch {self.weight} vs {other.weight}")

    def __add__(self, other: FourierSeries) -> FourierSeries:
        w = self._check_weight(other)
        T = min(self.bound, other.bound)
        out = {k: v for k, v in self.coeffs.items() if k[1] <= T}
        for k, v in other.coeffs.items():
            if k[1] > T:
                continue
            s = out.get(k, ZERO) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return FourierSeries(self.const + other.const, out, T, w)

    def __neg__(self) -> FourierSeries:
        return FourierSeries(-self.const, {k: -v for k, v in self.coeffs.items()}, self.bound, self.weight)

    def __sub__(self, other: FourierSeries) -> FourierSeries:
        return self + (-other)

    def scale(self, c) -> FourierSeries:
        c = QuadRat.coerce(c)
        if not c:
            return FourierSeries.zero(self.bound, self.weight)
        return FourierSeries(self.const * c, {k: v * c for k, v in self.coeffs.items()}, self.bound, self.weight)

    def __mul__(self, other) -> FourierSeries:
        if not isinstance(other, FourierSeries):
            return self.scale(other)
        T = min(self.bound, other.bound)
        w = (self.weight[0] + other.weight[0], self.weight[1] + other.weight[1])
        A = self.items()
        B = other.items()
        out: dict[Index, QuadRat] = {}
        for (a1, b1), c1 in A:
            if b1 > T:
                break
            for (a2, b2), c2 in B:
                if b1 + b2 > T:
                    break
                k = (a1 + a2, b1 + b2)
                prev = out.get(k)
                out[k] = c1 * c2 if prev is None else prev + c1 * c2
        const = out.pop((0, 0), ZERO)
        return FourierSeries(const, {k: v for k, v in out.items() if v}, T, w)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> FourierSeries:
        result = FourierSeries.constant(ONE, self.bound)
        for _ in range(n):
            result = result * self
        return result

    def D(self, axis: int) -> FourierSeries:
        """(2 pi i)^-1 d/dz_axis: multiply the coefficient at nu by nu (axis 1) or nu' (axis 2)."""
        out = {}
        for k, v in self.coeffs.items():
            q = dual_to_quad(DualIndex(*k))
            out[k] = v * (q if axis == 1 else q.conj())
        w = (self.weight[0] + 2, self.weight[1]) if axis == 1 else (self.weight[0], self.weight[1] + 2)
        return FourierSeries(ZERO, out, self.bound, w)

    # symmetries ---------------------------------------------------------------------------
    def swap(self) -> FourierSeries:
        """F o C with C(z, z') = (z', z): the coefficient at nu moves to nu'."""
        out = {(-a - b, b): v for (a, b), v in self.coeffs.items()}
        return FourierSeries(self.const, out, self.bound, (self.weight[1], self.weight[0]))

    def is_symmetric(self) -> bool:
        return self == self.swap()

    def is_antisymmetric(self) -> bool:
        return self == -self.swap()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FourierSeries):
            return NotImplemented
        T = min(self.bound, other.bound)
        if self.const != other.const:
            return False
        mine = {k: v for k, v in self.coeffs.items() if k[1] <= T}
        theirs = {k: v for k, v in other.coeffs.items() if k[1] <= T}
        return mine == theirs

    __hash__ = None  # type: ignore[assignment]

    def first_difference(self, other: FourierSeries) -> Index | None:
        T = min(self.bound, other.bound)
        if self.const != other.const:
            return (0, 0)
        for idx in enumerate_dual(T):
            if self.coeffs.get(idx, ZERO) != other.coeffs.get(idx, ZERO):
                return (idx.a, idx.b)
        return None


# involutions at series level ------------------------------------------------------------

def unit_action_defect(F: FourierSeries) -> Index | None:
    """First index with f_{eps^2 nu} != (-1)^k f_nu inside the bound (None if consistent)."""
    k = F.parallel_weight
    if k is None:
        raise SeriesError("unit action needs a parallel weight")
    sign = -1 if k % 2 else 1
    for idx in enumerate_dual(F.bound):
        img = unit_scale(idx, 1)
        if img.b > F.bound:
            continue
        if F.coeffs.get((img.a, img.b), ZERO) != F.coeffs.get((idx.a, idx.b), ZERO) * sign:
            return (idx.a, idx.b)
    return None


def iota_series(F: FourierSeries) -> FourierSeries:
    """F(eps^2 z', eps'^2 z): coefficient at mu is f at eps'^2 mu'.

    Since f_{eps^{-2} nu} = (-1)^k f_nu for parallel weight k, this equals
    (-1)^k times the swap, which keeps the trace bound; the unit relation is
    asserted on the available window."""
    if unit_action_defect(F) is not None:
        raise SeriesError("series violates the unit relation")
    k = F.parallel_weight
    S = F.swap()
    return -S if k % 2 else S


def iota_by_index_map(F: FourierSeries) -> dict[Index, QuadRat]:
    """Direct index-map version of iota, on the indices whose preimage is inside the bound."""
    out = {}
    for idx in enumerate_dual(F.bound):
        src = unit_scale(DualIndex(*idx).conj(), -1)  # eps'^2 mu' = eps^-2 mu'
        if src.b <= F.bound:
            out[(idx.a, idx.b)] = F.coeffs.get((src.a, src.b), ZERO)
    return out


# brackets ------------------------------------------------------------------------------------

def _w(F: FourierSeries, axis: int) -> int:
    return F.weight[axis - 1]


def bracket1(F: FourierSeries, G: FourierSeries, axis: int) -> FourierSeries:
    """[F,G]_{1_axis} = f_i F D_i G - g_i G D_i F."""
    out = F * G.D(axis) * _w(F, axis) - G * F.D(axis) * _w(G, axis)
    w = list(F.weight[i] + G.weight[i] for i in range(2))
    w[axis - 1] += 2
    return out.with_weight(tuple(w))


def lambda_op(F: FourierSeries) -> FourierSeries:
    """Lambda F = F D_1 D_2 F - D_1 F D_2 F."""
    return F * F.D(1).D(2) - F.D(1) * F.D(2)


def pi_op(F: FourierSeries, axis: int) -> FourierSeries:
    """Pi_i F = f_i F D_i^2 F - (f_i + 1)(D_i F)^2."""
    f = _w(F, axis)
    d = F.D(axis)
    return F * d.D(axis) * f - d * d * (f + 1)


def triple(F: FourierSeries, G: FourierSeries, H: FourierSeries) -> FourierSeries:
    """[F,G,H] = ((g+h)/2) det(fF gG hH ; D_1 ; D_2)."""
    ws = [S.parallel_weight for S in (F, G, H)]
    if None in ws:
        raise SeriesError("triple bracket needs parallel weights")
    f, g, h = ws
    r0 = [F * f, G * g, H * h]
    r1 = [S.D(1) for S in (F, G, H)]
    r2 = [S.D(2) for S in (F, G, H)]
    det = (r0[0] * (r1[1] * r2[2] - r1[2] * r2[1])
           - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
           + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]))
    w = f + g + h + 2
    return (det * Fraction(g + h, 2)).with_weight((w, w))


def triple_nested(F: FourierSeries, G: FourierSeries, H: FourierSeries, sign: int) -> FourierSeries:
    a = bracket1(F, bracket1(G, H, 2), 1)
    b = bracket1(F, bracket1(G, H, 1), 2)
    return (a + b * sign) * Fraction(1, 2)


def triple_star(F: FourierSeries, G: FourierSeries, H: FourierSeries) -> FourierSeries:
    return triple_nested(F, G, H, +1)


def bracket_ops(kind: str, *forms: FourierSeries, axis: int = 1) -> FourierSeries:
    if kind == "bracket1":
        return bracket1(forms[0], forms[1], axis)
    if kind == "pi":
        return pi_op(forms[0], axis)
    if kind == "lambda":
        return lambda_op(forms[0])
    if kind == "triple":
        return triple(*forms)
    if kind == "triple_star":
        return triple_star(*forms)
    raise ValueError(f"unknown bracket kind {kind!r}")


def star_coefficient(alpha: Index, nu: Index, mu: Index, f: int) -> Fraction:
    """Coefficient of f_alpha g_nu h_mu in [F,G,H]^* for weights (f, 2, 5).

    Expanding the two nested brackets gives conjugate contributions, so the
    coefficient is half the trace of (f(nu'+mu') - 7 alpha')(2 mu - 5 nu)."""
    q = lambda i: dual_to_quad(DualIndex(*i)) if i != (0, 0) else ZERO  # noqa: E731
    A, N, M = q(alpha), q(nu), q(mu)
    x = ((N + M).conj() * f - A.conj() * 7) * (M * 2 - N * 5)
    return x.trace() / 2


def displayed_star_coefficient(alpha: Index, nu: Index, mu: Index, f: int) -> Fraction:
    """The alternative closed form t((f alpha' - 7(nu'+mu'))(2 nu - 5 mu)), kept for comparison."""
    q = lambda i: dual_to_quad(DualIndex(*i)) if i != (0, 0) else ZERO  # noqa: E731
    A, N, M = q(alpha), q(nu), q(mu)
    return ((A.conj() * f - (N + M).conj() * 7) * (N * 2 - M * 5)).trace()


def star_by_formula(F: FourierSeries, G: FourierSeries, H: FourierSeries, coefficient=star_coefficient) -> FourierSeries:
    """[F,G,H]^* assembled term by term from a closed coefficient formula (weights (f,2,5))."""
    f = F.parallel_weight
    if (G.parallel_weight, H.parallel_weight) != (2, 5):
        raise SeriesError("closed formula is stated for weights (f, 2, 5)")
    T = min(F.bound, G.bound, H.bound)
    out: dict[Index, QuadRat] = {}
    for (a1, b1), c1 in F.items():
        for (a2, b2), c2 in G.items():
            if b1 + b2 > T:
                break
            for (a3, b3), c3 in H.items():
                if b1 + b2 + b3 > T:
                    break
                c = coefficient((a1, b1), (a2, b2), (a3, b3), f)
                if c:
                    k = (a1 + a2 + a3, b1 + b2 + b3)
                    out[k] = out.get(k, ZERO) + c1 * c2 * c3 * c
    const = out.pop((0, 0), ZERO)
    w = f + 9
    return FourierSeries(const, {k: v for k, v in out.items() if v}, T, (w, w))


# division and square root --------------------------------------------------------------------

def series_divide(A: FourierSeries, B: FourierSeries) -> FourierSeries:
    if not B.const:
        raise SeriesError("divisor must have a nonzero constant term")
    T = min(A.bound, B.bound)
    inv0 = B.const.inv()
    Bitems = [(k, v) for k, v in B.coeffs.items() if k[1] <= T]
    q: dict[Index, QuadRat] = {}
    q0 = A.const * inv0
    for idx in enumerate_dual(T):
        k = (idx.a, idx.b)
        s = A.coeffs.get(k, ZERO)
        for (a, b), v in Bitems:
            if b > idx.b:
                continue
            rest = (idx.a - a, idx.b - b)
            if rest == (0, 0):
                s = s - v * q0
            else:
                r = q.get(rest)
                if r is not None:
                    s = s - v * r
        s = s * inv0
        if s:
            q[k] = s
    w = (A.weight[0] - B.weight[0], A.weight[1] - B.weight[1])
    return FourierSeries(q0, q, T, w)


def _solve_exact(rows: list[list[QuadRat]], rhs: list[QuadRat], ncols: int) -> list[QuadRat] | None:
    """Gauss-Jordan over K; returns the unique solution, or None if inconsistent or underdetermined."""
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = m[r][c].inv()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                fct = m[i][c]
                m[i] = [x - fct * y for x, y in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    if any(m[i][-1] for i in range(r, len(m))):
        return None
    if r < ncols:
        return None
    sol = [ZERO] * ncols
    for i, c in enumerate(piv_cols):
        sol[c] = m[i][-1]
    return sol


def series_sqrt(A: FourierSeries, sign_index: Index = (0, 1)) -> FourierSeries:
    """Cuspidal square root of a series starting in trace 2.

    The trace-1 layer comes from the trace-2 coefficients of A; each later
    layer k is the unique solution of the linear system read off trace k+1.
    The result is exact through trace A.bound - 1.  Sign: the coefficient at
    ``sign_index`` is positive."""
    if A.const:
        raise SeriesError("square root expects a cuspidal series")
    if any(b < 2 for _, b in A.coeffs):
        raise SeriesError("not a perfect square at trace 1")
    T = A.bound - 1
    if T < 1:
        raise SeriesError("bound too small for a square root")
    L1 = [(i.a, i.b) for i in dual_layer(1)]
    e_pos = sign_index
    e_oth = next(e for e in L1 if e != e_pos)
    sq_pos = A.coeffs.get((2 * e_pos[0], 2), ZERO)
    sq_oth = A.coeffs.get((2 * e_oth[0], 2), ZERO)
    c_pos = sq_pos.sqrt()
    c_oth = sq_oth.sqrt()
    if c_pos is None or c_oth is None or not c_pos:
        raise SeriesError("not a perfect square at trace 2")
    mixed = A.coeffs.get((e_pos[0] + e_oth[0], 2), ZERO)
    if c_pos * c_oth * 2 != mixed:
        c_oth = -c_oth
    if c_pos * c_oth * 2 != mixed:
        raise SeriesError("not a perfect square at trace 2")
    x: dict[Index, QuadRat] = {e_pos: c_pos, e_oth: c_oth}
    first = {e_pos: c_pos, e_oth: c_oth}
    # the remaining trace-2 coefficients of A must vanish
    for idx in dual_layer(2):
        k = (idx.a, idx.b)
        want = sum((x[e] * x.get((k[0] - e[0], 1), ZERO) for e in L1), ZERO)
        if want != A.coeffs.get(k, ZERO):
            raise SeriesError("not a perfect square at trace 2")
    for layer in range(2, T + 1):
        unknowns = [(i.a, i.b) for i in dual_layer(layer)]
        col = {u: j for j, u in enumerate(unknowns)}
        rows, rhs = [], []
        for idx in dual_layer(layer + 1):
            k = (idx.a, idx.b)
            # known part: products of layers 1..layer-1 except those touching the unknown layer
            known = ZERO
            for (a1, b1), c1 in x.items():
                if b1 >= layer + 1:
                    continue
                b2 = layer + 1 - b1
                if b2 == layer or b2 == 1 and b1 == layer:
                    continue
                c2 = x.get((k[0] - a1, b2))
                if c2 is not None:
                    known = known + c1 * c2
            row = [ZERO] * len(unknowns)
            for e, ce in first.items():
                j = col.get((k[0] - e[0], layer))
                if j is not None:
                    row[j] = row[j] + ce * 2
            rows.append(row)
            rhs.append(A.coeffs.get(k, ZERO) - known)
        sol = _solve_exact(rows, rhs, len(unknowns))
        if sol is None:
            raise SeriesError(f"not a perfect square at trace {layer + 1}")
        for u, v in zip(unknowns, sol):
            if v:
                x[u] = v
    w = (A.weight[0] // 2, A.weight[1] // 2)
    return FourierSeries(ZERO, x, T, w)


# Eisenstein series and the generators ---------------------------------------------------------

def divisor_series(T: int) -> FourierSeries:
    """The C-free part e of phi2 = 1 + C e."""
    coeffs = {(i.a, i.b): QuadRat.coerce(divisor_norm_sum(i, 2)) for i in enumerate_dual(T)}
    return FourierSeries(ZERO, coeffs, T, (2, 2))


def eisenstein_phi2(T: int, C) -> FourierSeries:
    e = divisor_series(T)
    return (FourierSeries.constant(ONE, T, (2, 2)) + e.scale(C)).with_weight((2, 2))


def chi5_squared(phi2: FourierSeries) -> FourierSeries:
    """(-1/2880) (Pi_1 phi2 Pi_2 phi2 - 9 (Lambda phi2)^2) / phi2."""
    lam = lambda_op(phi2)
    num = pi_op(phi2, 1) * pi_op(phi2, 2) - lam * lam * 9
    return (series_divide(num, phi2) * Fraction(-1, 2880)).with_weight((10, 10))


@dataclass(frozen=True)
class CalibrationReport:
    C: Fraction
    condition: list  # gcd of the condition polynomials, lowest degree first
    positive_roots: list
    samples: int


def _newton_to_monomial(xs: list, newton: list) -> list:
    """Convert divided-difference coefficients to a coefficient list (lowest degree first)."""
    out = [Fraction(0)]
    basis = [Fraction(1)]
    for i, c in enumerate(newton):
        if len(out) < len(basis):
            out += [Fraction(0)] * (len(basis) - len(out))
        out = [o + c * bb for o, bb in zip(out, basis)] + out[len(basis):]
        # basis *= (x - xs[i])
        nb = [Fraction(0)] * (len(basis) + 1)
        for j, bb in enumerate(basis):
            nb[j + 1] += bb
            nb[j] -= bb * xs[i]
        basis = nb
    while out and not out[-1]:
        out.pop()
    return out


def _divided_differences(xs: list, ys: list) -> list:
    d = list(ys)
    coef = [d[0]]
    for j in range(1, len(xs)):
        d = [(d[i + 1] - d[i]) / (xs[i + j] - xs[i]) for i in range(len(d) - 1)]
        coef.append(d[0])
    return coef


def _klein_conditions(C, pairs, T: int = 5) -> list[Fraction]:
    from .hilbert_ring import KLEIN_CORE

    g = build_generators(T, C=C, chi15_scale=DISPLAYED_CHI15_SCALE, check=False)
    L = g.chi15 * g.chi15
    R = evaluate_poly(KLEIN_CORE, g)
    out = []
    for k1, k2 in pairs:
        v = R.coeff(k1) * L.coeff(k2) - R.coeff(k2) * L.coeff(k1)
        if not v.is_rational():
            raise SeriesError("proportionality condition is not rational")
        out.append(v.a)
    return out


def calibrate_C(max_samples: int = 40) -> CalibrationReport:
    """The normalisation C of phi2 = 1 + C e from the Klein relation.

    For phi2 = 1 + C e every coefficient of chi15^2 and of the Klein polynomial
    is a polynomial in C, so proportionality of the two series at a few index
    pairs is a polynomial condition on C.  The conditions are interpolated
    exactly from sample values (until the top divided differences vanish)
    and their gcd is solved over Q.  The square root is solvable for every C,
    so it does not constrain C on its own."""
    from .polyring import uni_gcd, uni_rational_roots

    k1 = (-2, 4)
    pairs = [(k1, k) for k in ((-5, 5), (-3, 5), (-2, 5), (-4, 5))]
    xs: list[Fraction] = []
    ys: list[list[Fraction]] = [[] for _ in pairs]
    polys = None
    for n in range(1, max_samples + 1):
        x = Fraction(n)
        xs.append(x)
        for lst, v in zip(ys, _klein_conditions(x, pairs)):
            lst.append(v)
        if n < 6:
            continue
        newton = [_divided_differences(xs, y) for y in ys]
        if all(not c[-1] and not c[-2] for c in newton):
            polys = [_newton_to_monomial(xs, c) for c in newton]
            break
    if polys is None:
        raise SeriesError("calibration condition did not stabilise")
    g = [QuadRat.coerce(c) for c in polys[0]]
    for p in polys[1:]:
        g = uni_gcd(g, [QuadRat.coerce(c) for c in p])
    roots = [r for r in uni_rational_roots(g) if r > 0]
    if len(roots) != 1:
        raise SeriesError(f"normalisation not unique: {roots}")
    return CalibrationReport(roots[0], [c.a for c in g], roots, len(xs))


def content(F: FourierSeries) -> Fraction | None:
    """gcd of all coefficients (constant included) if they are rational integers, else None."""
    g = 0
    for _, c in F.items():
        if not c.is_integral_rational():
            return None
        g = gcd(g, int(c.a))
    return Fraction(g)


def first_non_integral(F: FourierSeries) -> Index | None:
    for k, c in F.items():
        if not c.is_integral_rational():
            return k
    return None


@dataclass(frozen=True)
class GeneratorSet:
    phi2: FourierSeries
    chi5: FourierSeries
    chi6: FourierSeries
    chi15: FourierSeries
    C: Fraction
    chi15_scale: QuadRat
    chi5_sign_index: Index = (0, 1)

    @property
    def bound(self) -> int:
        return self.phi2.bound

    def as_dict(self) -> dict[str, FourierSeries]:
        return {"phi2": self.phi2, "chi5": self.chi5, "chi6": self.chi6, "chi15": self.chi15}


# the scale sqrt5/22 in front of [chi6, phi2, chi5] as displayed; the scale that
# gives integral coefficients of unit content is computed by integral_scale
DISPLAYED_CHI15_SCALE = SQRT5 * Fraction(1, 22)
_C_CACHE: dict[str, Fraction] = {}


def integral_scale(B: FourierSeries) -> QuadRat:
    """The s in K with s*B rational-integral of content 1 and positive first coefficient."""
    items = [kv for kv in B.items()]
    if not items:
        raise SeriesError("cannot normalise the zero series")
    c0 = items[0][1]
    ratios = [c / c0 for _, c in items]
    if any(not r.is_rational() for r in ratios):
        raise SeriesError("coefficients are not proportional over Q")
    from math import lcm

    den = lcm(*(r.a.denominator for r in ratios))
    nums = [int(r.a * den) for r in ratios]
    g = gcd(*nums)
    # s * c0 = den / g makes the first coefficient den/g > 0
    return QuadRat.coerce(Fraction(den, g)) / c0


def default_C() -> Fraction:
    if "C" not in _C_CACHE:
        _C_CACHE["C"] = calibrate_C().C
    return _C_CACHE["C"]


def build_generators(T: int, C: Fraction | None = None, chi15_scale: QuadRat | None = None,
                     check: bool = True) -> GeneratorSet:
    """phi2 (Eisenstein), chi6 = Lambda phi2 / 24, chi5 by square root, chi15 = s [chi6, phi2, chi5].

    Without an explicit scale, s is the one making chi15 integral of unit content."""
    if T < 4:
        raise ValueError("trace bound must be at least 4")
    if C is None:
        C = default_C()
    phi2_ext = eisenstein_phi2(T + 1, C)
    chi5 = series_sqrt(chi5_squared(phi2_ext)).with_weight((5, 5))
    phi2 = phi2_ext.truncate(T)
    chi6 = (lambda_op(phi2) * Fraction(1, 24)).with_weight((6, 6))
    bracket = triple(chi6, phi2, chi5)
    if chi15_scale is None:
        chi15_scale = integral_scale(bracket)
    chi15 = bracket.scale(chi15_scale).with_weight((15, 15))
    gens = GeneratorSet(phi2, chi5, chi6, chi15, Fraction(C), QuadRat.coerce(chi15_scale))
    if check:
        for name, S in gens.as_dict().items():
            bad = first_non_integral(S)
            if bad is not None:
                raise SeriesError(f"{name} has a non-integral coefficient at {bad}")
            if content(S) != 1:
                raise SeriesError(f"{name} has content {content(S)}")
    return gens


# polynomial evaluation ---------------------------------------------------------------------------

def evaluate_poly(p: Poly, gens: GeneratorSet) -> FourierSeries:
    """The substitution homomorphism phi2, chi5, chi6, X -> series."""
    base = [gens.phi2, gens.chi5, gens.chi6, gens.chi15]
    T = gens.bound
    w = p.weight()
    weight = (w, w) if w is not None else (0, 0)
    if p.is_zero():
        return FourierSeries.zero(T, weight)
    cache: dict[tuple[int, int], FourierSeries] = {}

    def power(i: int, k: int) -> FourierSeries:
        if k == 0:
            return FourierSeries.constant(ONE, T)
        if (i, k) not in cache:
            cache[(i, k)] = base[i] if k == 1 else power(i, k - 1) * base[i]
        return cache[(i, k)]

    total = FourierSeries.zero(T)
    for e, c in p.sorted_terms():
        term = FourierSeries.constant(ONE, T)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        term = term.scale(c).with_weight((0, 0))
        total = total + term
    return total.with_weight(weight)


def evaluate_element(x, gens: GeneratorSet) -> FourierSeries:
    """Evaluate a pair (even, odd) meaning even + chi15 * odd."""
    even, odd = x.even, x.odd
    out = evaluate_poly(even, gens)
    if not odd.is_zero():
        o = gens.chi15 * evaluate_poly(odd, gens)
        out = out.with_weight(o.weight) + o if out.is_zero() else out + o.with_weight(out.weight)
    return out


# derivations on series -------------------------------------------------------------------------

_PAIRS = {"d": ("phi2", "chi5"), "e": ("phi2", "chi6"), "f": ("chi5", "chi6")}


def derivation_series(tag: str, X: FourierSeries, gens: GeneratorSet) -> FourierSeries:
    """d1(X) = [X, [phi2, chi5]_{1_2}]_{1_1}, d2 swaps the axes; e uses (phi2, chi6), f (chi5, chi6).

    Tags: d1, d2, dstar, dsub and likewise for e and f."""
    family, kind = tag[0], tag[1:]
    a, b = (getattr(gens, n) for n in _PAIRS[family])
    one = bracket1(X, bracket1(a, b, 2), 1)
    two = bracket1(X, bracket1(a, b, 1), 2)
    if kind == "1":
        return one
    if kind == "2":
        return two
    w = one.weight
    if kind == "star":
        return ((one + two.with_weight(w)) * Fraction(1, 2))
    if kind == "sub":
        return ((one - two.with_weight(w)) * Fraction(1, 2))
    raise ValueError(f"unknown derivation {tag!r}")


@dataclass
class CheckLine:
    name: str
    ok: bool
    detail: str = ""

    def text(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}" + (f": {self.detail}" if self.detail else "")


def verify_derivation_table(T: int = 10, gens: GeneratorSet | None = None) -> list[CheckLine]:
    from .hilbert_ring import STAR_TABLE

    gens = gens or build_generators(T)
    lines = []
    for (tag, var), rhs in STAR_TABLE.items():
        lhs = derivation_series(tag, getattr(gens, var), gens)
        rhs_s = evaluate_poly(rhs, gens)
        diff = lhs.first_difference(rhs_s.with_weight(lhs.weight))
        name = f"{tag}({var})"
        lines.append(CheckLine(name, diff is None, "" if diff is None else f"first difference at {diff}"))
    return lines


@dataclass(frozen=True)
class LCalibration:
    l1: QuadRat
    l2: QuadRat
    l3: QuadRat
    variables: tuple[str, str, str]
    vanishing: dict[str, bool] = field(default_factory=dict)

    def to_constants(self, lam):
        """LConstants for the ring model; ``lam`` must match the chi15 these l's refer to."""
        from .hilbert_ring import LConstants

        return LConstants(self.l1, self.l2, self.l3, lam)


def _constant_quotient(A: FourierSeries, B: FourierSeries) -> QuadRat:
    """The constant c with A = c B (coefficient-wise), or an error."""
    ratio = None
    T = min(A.bound, B.bound)
    for idx in enumerate_dual(T):
        k = (idx.a, idx.b)
        a, b = A.coeffs.get(k, ZERO), B.coeffs.get(k, ZERO)
        if not b:
            if a:
                raise SeriesError(f"quotient is not constant at {k}")
            continue
        r = a / b
        if ratio is None:
            ratio = r
        elif r != ratio:
            raise SeriesError(f"quotient is not constant at {k}")
    if A.const or B.const or ratio is None:
        raise SeriesError("quotient undefined")
    return ratio


def calibrate_l_constants(T: int = 10, gens: GeneratorSet | None = None) -> LCalibration:
    """l1, l2, l3 from d_*(chi6), e_*(chi5), f_*(v) divided by chi15.

    For f the differentiated variable is found empirically: among phi2, chi5,
    chi6 exactly one must have a nonzero image under f_*."""
    gens = gens or build_generators(T)
    vanish = {}
    for tag, var in (("dsub", "phi2"), ("dsub", "chi5"), ("esub", "phi2"), ("esub", "chi6")):
        vanish[f"{tag}({var})"] = derivation_series(tag, getattr(gens, var), gens).is_zero()
    l1 = _constant_quotient(derivation_series("dsub", gens.chi6, gens), gens.chi15)
    l2 = _constant_quotient(derivation_series("esub", gens.chi5, gens), gens.chi15)
    f_images = {v: derivation_series("fsub", getattr(gens, v), gens) for v in ("phi2", "chi5", "chi6")}
    nonzero = [v for v, s in f_images.items() if not s.is_zero()]
    for v, s in f_images.items():
        vanish[f"fsub({v})"] = s.is_zero()
    if len(nonzero) != 1:
        raise SeriesError(f"f_* is nonzero on {nonzero}")
    l3 = _constant_quotient(f_images[nonzero[0]], gens.chi15)
    return LCalibration(l1, l2, l3, ("chi6", "chi5", nonzero[0]), vanish)


def klein_check(gens: GeneratorSet, lam=None) -> Index | None:
    """First index where chi15^2 and chi(lam) differ (None if they agree through the bound)."""
    from .hilbert_ring import LAMBDA, chi_polynomial

    lhs = gens.chi15 * gens.chi15
    rhs = evaluate_poly(chi_polynomial(LAMBDA if lam is None else lam), gens)
    return lhs.first_difference(rhs.with_weight(lhs.weight))


def klein_lambda(gens: GeneratorSet) -> QuadRat:
    """The constant lambda with chi15^2 = lambda * (Klein core), from the series."""
    from .hilbert_ring import KLEIN_CORE

    sq = gens.chi15 * gens.chi15
    return _constant_quotient(sq, evaluate_poly(KLEIN_CORE, gens).with_weight(sq.weight))


def symmetry_ledger(gens: GeneratorSet) -> dict[str, str]:
    out = {}
    for name, S in gens.as_dict().items():
        if S.is_symmetric():
            out[name] = "symmetric"
        elif S.is_antisymmetric():
            out[name] = "antisymmetric"
        else:
            out[name] = "neither"
    return out


# coefficient cache -----------------------------------------------------------------------------

def dump_series(F: FourierSeries, path: str | Path, name: str, C: Fraction | None = None,
                sign_convention: str = "chi5 coefficient at (0,1) positive") -> None:
    header = {"form": name, "weight": list(F.weight), "trace_bound": F.bound,
              "C": None if C is None else str(C), "chi5_sign": sign_convention}
    lines = [json.dumps(header)]
    for (a, b), c in F.items():
        lines.append(json.dumps({"index": [a, b], "coeff": [_frac(c.a), _frac(c.b)]}))
    Path(path).write_text("\n".join(lines) + "\n")


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def load_series(path: str | Path) -> tuple[dict, FourierSeries]:
    text = Path(path).read_text().splitlines()
    header = json.loads(text[0])
    const = ZERO
    coeffs = {}
    for line in text[1:]:
        if not line.strip():
            continue
        rec = json.loads(line)
        a, b = rec["index"]
        c = QuadRat(Fraction(rec["coeff"][0]), Fraction(rec["coeff"][1]))
        if (a, b) == (0, 0):
            const = c
        else:
            coeffs[(a, b)] = c
    F = FourierSeries.make(const, coeffs, header["trace_bound"], tuple(header["weight"]))
    return header, F
