"""The rings T* = K[phi2, chi5, chi6] and T = T* + chi15 T* with their derivations.

Elements of T are pairs (p, q) meaning p + chi15*q; the product uses
chi15^2 = chi.  Star derivations come from the explicit table on the
generators, sub derivations from the constants l1, l2, l3.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .numfield import QuadRat
from .polyring import CHI5, CHI6, PHI2, T4, XVAR, Poly, chi5, chi6, const, phi2, to_text

LAMBDA = Fraction(484, 49)

# chi without the factor lambda
KLEIN_CORE = (
    50000 * chi5**6
    - 1000 * phi2**2 * chi6 * chi5**4
    + phi2**5 * chi5**4
    - 2 * phi2**4 * chi6**2 * chi5**2
    + 1800 * phi2 * chi6**3 * chi5**2
    + phi2**3 * chi6**4
    - 864 * chi6**5
)


def chi_polynomial(lam=LAMBDA) -> Poly:
    return KLEIN_CORE * lam


GENERATORS = {"phi2": PHI2, "chi5": CHI5, "chi6": CHI6}
_F = Fraction

STAR_TABLE: dict[tuple[str, str], Poly] = {
    ("dstar", "phi2"): chi5 * (phi2**3 - 1050 * chi6) * _F(4, 5),
    ("dstar", "chi5"): phi2 * (7 * chi6**2 - 15 * phi2 * chi5**2) * _F(1, 10),
    ("dstar", "chi6"): chi5 * (phi2**2 * chi6 + 875 * chi5**2) * _F(-2, 5),
    ("estar", "phi2"): -1152 * chi6**2 + 240 * phi2 * chi5**2 + phi2**3 * chi6 * _F(4, 5),
    ("estar", "chi5"): chi5 * (phi2**2 * chi6 * _F(-6, 5) + 200 * chi5**2),
    ("estar", "chi6"): -240 * chi5**2 * chi6 - phi2**2 * chi6**2 * _F(8, 5) + phi2**3 * chi5**2 * _F(4, 5),
    ("fstar", "phi2"): chi5 * (550 * chi5**2 - phi2**2 * chi6 * _F(4, 5)),
    ("fstar", "chi5"): chi6 * (phi2 * chi5**2 * _F(7, 2) - chi6**2 * _F(33, 10)),
    ("fstar", "chi6"): chi5 * (phi2**2 * chi5**2 * _F(11, 4) - phi2 * chi6**2 * _F(59, 20)),
}

# weight added by each family of derivations
SHIFT = {"d": 9, "e": 10, "f": 13}
# variable differentiated by the sub derivations
SUB_VARIABLE = {"d": "chi6", "e": "chi5", "f": "phi2"}
STAR_TAGS = ("dstar", "estar", "fstar")
SUB_TAGS = ("dsub", "esub", "fsub")
FULL_TAGS = ("d1", "d2", "e1", "e2", "f1", "f2")
ALL_TAGS = FULL_TAGS + STAR_TAGS + SUB_TAGS


class NotCalibratedError(RuntimeError):
    pass


@dataclass(frozen=True)
class TElement:
    """p + chi15 * q with p, q in T*."""

    even: Poly
    odd: Poly

    @classmethod
    def of(cls, even: Poly | int = 0, odd: Poly | int = 0) -> TElement:
        e = even if isinstance(even, Poly) else const(even)
        o = odd if isinstance(odd, Poly) else const(odd)
        return cls(e, o)

    @classmethod
    def chi15(cls) -> TElement:
        return cls(const(0), const(1))

    def __add__(self, other: TElement) -> TElement:
        return TElement(self.even + other.even, self.odd + other.odd)

    def __sub__(self, other: TElement) -> TElement:
        return TElement(self.even - other.even, self.odd - other.odd)

    def __neg__(self) -> TElement:
        return TElement(-self.even, -self.odd)

    def mul(self, other: TElement, lam=LAMBDA) -> TElement:
        chi = chi_polynomial(lam)
        return TElement(self.even * other.even + chi * self.odd * other.odd,
                        self.even * other.odd + self.odd * other.even)

    def __mul__(self, other) -> TElement:
        if isinstance(other, TElement):
            return self.mul(other)
        return TElement(self.even * other, self.odd * other)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.even.is_zero() and self.odd.is_zero()

    @property
    def weight(self) -> int | None:
        """Common weight with chi15 counted as 15, or None."""
        ws = set()
        if not self.even.is_zero():
            ws |= self.even.weights()
        if not self.odd.is_zero():
            ws |= {w + 15 for w in self.odd.weights()}
        return ws.pop() if len(ws) == 1 else None

    def to_poly(self) -> Poly:
        """The 4-variable representative p + X q."""
        return self.even + Poly.var(T4, XVAR) * self.odd

    def text(self) -> str:
        return f"{to_text(self.even)} + X*({to_text(self.odd)})"


def _image(tag: str, var: str) -> Poly:
    return STAR_TABLE[(tag, var)]


def star_on_poly(tag: str, p: Poly) -> Poly:
    """Leibniz extension of a star derivation to T*."""
    out = const(0)
    for name, idx in GENERATORS.items():
        dp = p.partial(idx)
        if not dp.is_zero():
            out = out + dp * _image(tag, name)
    return out


# chi15-image factor of the star derivations: t(chi15) = c_t * chi15, with t(chi) = 2 c_t chi
CHI15_FACTORS: dict[str, Poly] = {
    "dstar": -(phi2**2) * chi5,
    "estar": (phi2**2 * chi6 - 300 * chi5**2) * -2,
    "fstar": phi2 * chi5 * chi6 * _F(-1, 2),
}


def chi_remark_check() -> dict[str, bool]:
    """t(chi) computed by Leibniz equals 2 c_t chi for the three star derivations."""
    chi = chi_polynomial()
    expected = {
        "dstar": -2 * phi2**2 * chi5 * chi,
        "estar": -4 * (phi2**2 * chi6 - 300 * chi5**2) * chi,
        "fstar": -(phi2 * chi5 * chi6) * chi,
    }
    out = {}
    for tag in STAR_TAGS:
        img = star_on_poly(tag, chi)
        out[tag] = img == expected[tag] and img == CHI15_FACTORS[tag] * chi * 2
    return out


def derive_star(tag: str, x: TElement) -> TElement:
    c = CHI15_FACTORS[tag]
    return TElement(star_on_poly(tag, x.even), c * x.odd + star_on_poly(tag, x.odd))


STATED_L1 = QuadRat(0, Fraction(11, 5))  # 11/sqrt5


@dataclass
class LConstants:
    """The constants of the sub derivations; None means not yet calibrated.

    ``lam`` is the factor of the Klein polynomial in chi15^2 = chi for the
    chi15 normalisation the l's refer to."""

    l1: QuadRat | None = None
    l2: QuadRat | None = None
    l3: QuadRat | None = None
    lam: Fraction | QuadRat = LAMBDA

    @classmethod
    def stated(cls) -> LConstants:
        """Only l1 = 11/sqrt5 is given explicitly; l2, l3 stay uncalibrated."""
        return cls(l1=STATED_L1)

    def get(self, family: str) -> QuadRat:
        val = {"d": self.l1, "e": self.l2, "f": self.l3}[family]
        if val is None:
            raise NotCalibratedError("constants not calibrated")
        return val

    @property
    def calibrated(self) -> bool:
        return None not in (self.l1, self.l2, self.l3)


def derive_sub(tag: str, x: TElement, consts: LConstants) -> TElement:
    """t_*(p + chi15 q) = (l/2) dchi/dv q + l chi dq/dv + chi15 l dp/dv."""
    family = tag[0]
    l = consts.get(family)
    v = GENERATORS[SUB_VARIABLE[family]]
    chi = chi_polynomial(consts.lam)
    even = chi.partial(v) * x.odd * (l * Fraction(1, 2)) + chi * x.odd.partial(v) * l
    odd = x.even.partial(v) * l
    return TElement(even, odd)


def derive(tag: str, x: TElement, consts: LConstants | None = None) -> TElement:
    """Any of d1, d2, e1, e2, f1, f2, dstar, ..., fsub."""
    if tag in STAR_TAGS:
        return derive_star(tag, x)
    consts = consts or LConstants()
    if tag in SUB_TAGS:
        return derive_sub(tag, x, consts)
    if tag in FULL_TAGS:
        family, k = tag[0], tag[1]
        s = derive_star(family + "star", x)
        t = derive_sub(family + "sub", x, consts)
        return s + t if k == "1" else s - t
    raise ValueError(f"unknown derivation {tag!r}")


def derive_full(tag: str, x: TElement, consts: LConstants) -> TElement:
    if tag not in FULL_TAGS:
        raise ValueError(f"{tag!r} is not one of {FULL_TAGS}")
    return derive(tag, x, consts)


def involution(which: str, x: TElement) -> TElement:
    """iota: chi15 -> -chi15; sigma: chi5 -> -chi5 (chi15 fixed)."""
    if which == "iota":
        return TElement(x.even, -x.odd)
    if which == "sigma":
        sub = {CHI5: -Poly.var(T4, CHI5)}
        return TElement(x.even.substitute(sub), x.odd.substitute(sub))
    raise ValueError(f"unknown involution {which!r}")


# derivation matrix ---------------------------------------------------------------------

ROWS = STAR_TAGS
COLS = ("phi2", "chi5", "chi6")


def derivation_matrix() -> list[list[Poly]]:
    return [[STAR_TABLE[(t, v)] for v in COLS] for t in ROWS]


def minor(M: list[list[Poly]], i: int, j: int) -> Poly:
    r = [k for k in range(3) if k != i]
    c = [k for k in range(3) if k != j]
    return M[r[0]][c[0]] * M[r[1]][c[1]] - M[r[0]][c[1]] * M[r[1]][c[0]]


def minor_matrix(M: list[list[Poly]] | None = None) -> list[list[Poly]]:
    M = M or derivation_matrix()
    return [[minor(M, i, j) for j in range(3)] for i in range(3)]


def adjugate(M: list[list[Poly]] | None = None) -> list[list[Poly]]:
    M = M or derivation_matrix()
    return [[minor(M, j, i) * (-1) ** (i + j) for j in range(3)] for i in range(3)]


def det3(M: list[list[Poly]]) -> Poly:
    return sum((M[0][j] * minor(M, 0, j) * (-1) ** j for j in range(3)), const(0))


def weight_table(M: list[list[Poly]]) -> list[list[int | None]]:
    return [[p.weight() for p in row] for row in M]


@dataclass
class WeightReport:
    M: list[list[int | None]]
    minors: list[list[int | None]]
    adjugate_pair_weights: set[int]
    adjugate_identity: bool
    det_weight: int | None
    det_nonzero: bool

    @property
    def ok(self) -> bool:
        return (self.M == [[11, 14, 15], [12, 15, 16], [15, 18, 19]]
                and self.minors == [[34, 31, 30], [33, 30, 29], [30, 27, 26]]
                and self.adjugate_pair_weights == {45}
                and self.adjugate_identity)


def weight_report() -> WeightReport:
    """Weights of M and of its minors; the adjugate check pairs each m_ij with its cofactor."""
    M = derivation_matrix()
    Mt = minor_matrix(M)
    adj = adjugate(M)
    pair = set()
    for i in range(3):
        for j in range(3):
            pair.add((M[i][j].weight() or 0) + (Mt[i][j].weight() or 0))
    d = det3(M)
    ident = True
    for i in range(3):
        for j in range(3):
            s = sum((adj[i][k] * M[k][j] for k in range(3)), const(0))
            if s != (d if i == j else const(0)):
                ident = False
    return WeightReport(weight_table(M), weight_table(Mt), pair, ident, d.weight(), not d.is_zero())


# four-variable model -----------------------------------------------------------------------

def generator_images(tag: str, consts: LConstants | None = None) -> dict[int, Poly]:
    """Images of phi2, chi5, chi6, X in the 4-variable ring."""
    out = {}
    for name, idx in GENERATORS.items():
        out[idx] = derive(tag, TElement.of(Poly.var(T4, idx)), consts).to_poly()
    out[XVAR] = derive(tag, TElement.chi15(), consts).to_poly()
    return out


def apply_on_t4(tag: str, p: Poly, consts: LConstants | None = None,
                images: dict[int, Poly] | None = None) -> Poly:
    """Derivation acting on a 4-variable polynomial by the chain rule."""
    images = images or generator_images(tag, consts)
    out = Poly(T4)
    for idx, img in images.items():
        dp = p.partial(idx)
        if not dp.is_zero():
            out = out + dp * img
    return out


def klein_relation_poly(lam=LAMBDA) -> Poly:
    return Poly.var(T4, XVAR) ** 2 - chi_polynomial(lam)
