"""Free differential algebra for checking bracket identities with symbolic weights.

Three form symbols F, G, H each come with their partials up to order two
(``F_1, F_2, F_11, F_12, F_22``); the weights f, g, h are extra polynomial
indeterminates, so an identity that reduces to zero here holds for every
parallel weight.  The derivations ``D_1, D_2`` stand for (2 pi i)^-1 d/dz_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polyring import Poly, Ring, to_text

FORMS = ("F", "G", "H")
_SUFFIXES = ("", "_1", "_2", "_11", "_12", "_22")
_NAMES = tuple(f"{s}{suf}" for s in FORMS for suf in _SUFFIXES) + ("f", "g", "h")
FREE = Ring(_NAMES, (1,) * len(_NAMES), zero=Fraction(0), one=Fraction(1))

# derivative tables on the suffix: axis -> suffix -> suffix (None = order 3)
_NEXT = {
    1: {"": "_1", "_1": "_11", "_2": "_12", "_11": None, "_12": None, "_22": None},
    2: {"": "_2", "_1": "_12", "_2": "_22", "_11": None, "_12": None, "_22": None},
}


class DerivationOrderError(ValueError):
    pass


def symbol(name: str) -> Poly:
    return Poly.var(FREE, name)


def weight_var(name: str) -> Poly:
    return Poly.var(FREE, name)


def _deriv_targets(axis: int) -> dict[int, int | None]:
    out: dict[int, int | None] = {}
    for s in FORMS:
        for suf in _SUFFIXES:
            nxt = _NEXT[axis][suf]
            out[FREE.index(s + suf)] = None if nxt is None else FREE.index(s + nxt)
    return out


_TARGETS = {1: _deriv_targets(1), 2: _deriv_targets(2)}


def derive(expr: Poly, axis: int) -> Poly:
    """Formal D_axis: Leibniz over the symbol alphabet; weights are constants."""
    targets = _TARGETS[axis]
    out: dict = {}
    for e, c in expr.terms.items():
        for i, k in enumerate(e):
            if not k or i not in targets:
                continue
            t = targets[i]
            if t is None:
                raise DerivationOrderError("derivation order exceeded")
            ne = list(e)
            ne[i] -= 1
            ne[t] += 1
            ne = tuple(ne)
            out[ne] = out.get(ne, 0) + c * k
    return Poly(FREE, out)


@dataclass(frozen=True)
class Form:
    """A free expression together with its weight on each axis."""

    expr: Poly
    w1: Poly
    w2: Poly

    def weight(self, axis: int) -> Poly:
        return self.w1 if axis == 1 else self.w2

    @property
    def parallel(self) -> bool:
        return self.w1 == self.w2


def basic_form(name: str) -> Form:
    """One of F, G, H with parallel symbolic weight f, g, h."""
    w = weight_var(name.lower())
    return Form(symbol(name), w, w)


def bracket1(A: Form, B: Form, axis: int) -> Form:
    """[A, B]_{1_axis} = a_i A D_i B - b_i B D_i A, weight a + b + 2 on the axis."""
    expr = A.weight(axis) * A.expr * derive(B.expr, axis) - B.weight(axis) * B.expr * derive(A.expr, axis)
    two = Poly.const(FREE, 2)
    w1 = A.w1 + B.w1 + (two if axis == 1 else 0)
    w2 = A.w2 + B.w2 + (two if axis == 2 else 0)
    return Form(expr, w1, w2)


def _det3(rows: list[list[Poly]]) -> Poly:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def triple_plain(F: Form, G: Form, H: Form) -> Form:
    """[F,G,H] = ((g+h)/2) det(fF gG hH ; D_1 ; D_2)."""
    for A in (F, G, H):
        if not A.parallel:
            raise ValueError("triple bracket needs parallel weights")
    rows = [
        [F.w1 * F.expr, G.w1 * G.expr, H.w1 * H.expr],
        [derive(A.expr, 1) for A in (F, G, H)],
        [derive(A.expr, 2) for A in (F, G, H)],
    ]
    expr = (G.w1 + H.w1) * _det3(rows) * Fraction(1, 2)
    w = F.w1 + G.w1 + H.w1 + 2
    return Form(expr, w, w)


def triple_nested(F: Form, G: Form, H: Form, sign: int) -> Form:
    """1/2([F,[G,H]_{1_2}]_{1_1} + sign [F,[G,H]_{1_1}]_{1_2})."""
    a = bracket1(F, bracket1(G, H, 2), 1)
    b = bracket1(F, bracket1(G, H, 1), 2)
    expr = (a.expr + b.expr * sign) * Fraction(1, 2)
    return Form(expr, a.w1, a.w2)


def triple_star(F: Form, G: Form, H: Form) -> Form:
    return triple_nested(F, G, H, +1)


def free_bracket1(A: Form, B: Form, axis: int) -> Form:
    return bracket1(A, B, axis)


def free_triple(F: Form, G: Form, H: Form, variant: str = "plain") -> Form:
    if variant == "plain":
        return triple_plain(F, G, H)
    if variant == "star":
        return triple_star(F, G, H)
    raise ValueError(f"unknown variant {variant!r}")


@dataclass
class IdentityReport:
    name: str
    residual: Poly

    @property
    def verified(self) -> bool:
        return self.residual.is_zero()

    def text(self) -> str:
        if self.verified:
            return "IDENTITY VERIFIED"
        return to_text(self.residual)


def formulone_sides(F: Form, G: Form, H: Form) -> tuple[Poly, Poly]:
    """Literal three-group transcription of the quadratic relation (kept for reference)."""
    f, g, h = F.w1, G.w1, H.w1
    S = lambda A, B, C: triple_star(A, B, C).expr  # noqa: E731
    plain = triple_plain(F, G, H).expr
    lhs = (f + g) * (f + h) * plain * plain
    rhs = (
        (f + g) * (g + h) * (S(F, F, G) * S(H, G, H) - S(F, G, H) * S(H, F, G))
        - (g + h) * (f + h) * (S(H, G, H) * S(G, F, G) - S(H, F, G) * S(G, F, H))
        + (g + h) * (g + h) * (S(F, F, H) * S(G, G, H) - S(F, G, H) * S(G, F, H))
    )
    return lhs, rhs


def star_matrix(F: Form, G: Form, H: Form) -> list[list[Poly]]:
    """M[i][j] = [X_j, pair_i]^* with pairs (G,H), (G,F), (H,F) and X = (G, H, F)."""
    pairs = [(G, H), (G, F), (H, F)]
    cols = [G, H, F]
    return [[triple_star(X, A, B).expr for X in cols] for A, B in pairs]


def minor2(M: list[list[Poly]], i: int, j: int) -> Poly:
    """2x2 minor of a 3x3 matrix with row i and column j removed (0-based)."""
    r = [k for k in range(3) if k != i]
    c = [k for k in range(3) if k != j]
    return M[r[0]][c[0]] * M[r[1]][c[1]] - M[r[0]][c[1]] * M[r[1]][c[0]]


def antidiagonal_sides(F: Form, G: Form, H: Form) -> tuple[Poly, Poly]:
    """(f+g)(f+h)[F,G,H]^2 against its expression through the anti-diagonal minors of M."""
    f, g, h = F.w1, G.w1, H.w1
    M = star_matrix(F, G, H)
    plain = triple_plain(F, G, H).expr
    lhs = (f + g) * (f + h) * plain * plain
    rhs = (
        -(g + h) * (g + h) * minor2(M, 0, 2)
        + (g + h) * (f + g) * minor2(M, 1, 1)
        - (g + h) * (f + h) * minor2(M, 2, 0)
    )
    return lhs, rhs


def verify_triplo() -> IdentityReport:
    F, G, H = (basic_form(n) for n in FORMS)
    residual = triple_plain(F, G, H).expr - triple_nested(F, G, H, -1).expr
    return IdentityReport("triple bracket as nested brackets", residual)


def verify_formulone() -> IdentityReport:
    """The three-group relation exactly as displayed."""
    F, G, H = (basic_form(n) for n in FORMS)
    lhs, rhs = formulone_sides(F, G, H)
    return IdentityReport("quadratic relation, displayed form", lhs - rhs)


def verify_formulone_corrected() -> IdentityReport:
    """The same relation with the weight factors attached to the anti-diagonal minors."""
    F, G, H = (basic_form(n) for n in FORMS)
    lhs, rhs = antidiagonal_sides(F, G, H)
    return IdentityReport("quadratic relation, anti-diagonal minors", lhs - rhs)


def specialize_weights(expr: Poly, f, g, h) -> Poly:
    vals = {FREE.index("f"): Poly.const(FREE, Fraction(f)),
            FREE.index("g"): Poly.const(FREE, Fraction(g)),
            FREE.index("h"): Poly.const(FREE, Fraction(h))}
    return expr.substitute(vals)
