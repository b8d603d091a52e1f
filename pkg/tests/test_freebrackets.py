from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from hmf5.freebrackets import (
    FREE,
    DerivationOrderError,
    Form,
    antidiagonal_sides,
    basic_form,
    bracket1,
    derive,
    formulone_sides,
    free_triple,
    specialize_weights,
    symbol,
    triple_nested,
    triple_plain,
    triple_star,
    verify_formulone,
    verify_formulone_corrected,
    verify_triplo,
)
from hmf5.polyring import Poly

F, G, H = (basic_form(n) for n in "FGH")
f, g, h = (Poly.var(FREE, n) for n in "fgh")
z1, z2 = sympy.symbols("z1 z2")


def test_bracket_with_itself_vanishes():
    assert bracket1(F, F, 1).expr.is_zero()
    assert bracket1(G, G, 2).expr.is_zero()


def test_bracket_antisymmetric():
    for axis in (1, 2):
        assert bracket1(F, G, axis).expr == -bracket1(G, F, axis).expr


def test_bracket_expansion_and_weights():
    b = bracket1(F, G, 2)
    assert b.expr == f * symbol("F") * symbol("G_2") - g * symbol("G") * symbol("F_2")
    assert b.w1 == f + g and b.w2 == f + g + 2
    assert not b.parallel


def test_plain_triple_alternating():
    assert triple_plain(F, G, G).expr.is_zero()
    assert triple_plain(F, F, H).expr.is_zero()
    assert triple_plain(F, G, H).w1 == f + g + h + 2


def test_triple_needs_parallel_weights():
    with pytest.raises(ValueError):
        triple_plain(bracket1(F, G, 1), G, H)


def test_free_triple_dispatch():
    assert free_triple(F, G, H) == triple_plain(F, G, H)
    assert free_triple(F, G, H, "star") == triple_star(F, G, H)
    with pytest.raises(ValueError):
        free_triple(F, G, H, "other")


def test_star_with_constant_weight_zero_vanishes():
    one = Form(Poly.const(FREE, 1), Poly.const(FREE, 0), Poly.const(FREE, 0))
    assert triple_star(one, G, H).expr.is_zero()


def test_star_weights():
    s = triple_star(F, G, H)
    assert s.w1 == s.w2 == f + g + h + 2


def test_triplo_identity():
    rep = verify_triplo()
    assert rep.verified
    assert rep.text() == "IDENTITY VERIFIED"


def test_displayed_quadratic_relation_does_not_hold():
    rep = verify_formulone()
    assert not rep.verified
    assert len(rep.residual.terms) > 0


def test_antidiagonal_quadratic_relation_holds():
    assert verify_formulone_corrected().verified


def test_antidiagonal_relation_at_weights_6_2_5():
    lhs, rhs = antidiagonal_sides(F, G, H)
    assert specialize_weights(lhs - rhs, 6, 2, 5).is_zero()
    assert not specialize_weights(lhs, 6, 2, 5).is_zero()
    l0, r0 = formulone_sides(F, G, H)
    assert not specialize_weights(l0 - r0, 6, 2, 5).is_zero()


def test_derivation_order_cap():
    with pytest.raises(DerivationOrderError):
        derive(symbol("F_12"), 1)


# -- formal properties of D_1, D_2 -------------------------------------------

_LOW = ("F", "G", "H", "F_1", "G_2", "H_1", "f", "g")
_SAFE_AXIS = {"F_1": 2, "G_2": 1, "H_1": 2}


@st.composite
def low_poly(draw, axis):
    names = [n for n in _LOW if _SAFE_AXIS.get(n, axis) == axis]
    out = Poly.const(FREE, 0)
    for _ in range(draw(st.integers(1, 3))):
        term = Poly.const(FREE, draw(st.integers(-5, 5)))
        for n in draw(st.lists(st.sampled_from(names), max_size=3)):
            term = term * Poly.var(FREE, n)
        out = out + term
    return out


@given(st.data(), st.sampled_from([1, 2]))
def test_leibniz(data, axis):
    p, q = data.draw(low_poly(axis)), data.draw(low_poly(axis))
    assert derive(p * q, axis) == derive(p, axis) * q + p * derive(q, axis)


@given(st.lists(st.sampled_from(["F", "G", "H", "f"]), min_size=1, max_size=4))
def test_partials_commute(names):
    p = Poly.const(FREE, 1)
    for n in names:
        p = p * Poly.var(FREE, n)
    assert derive(derive(p, 1), 2) == derive(derive(p, 2), 1)


# -- concrete oracle: evaluate on explicit functions with sympy ---------------

def _evaluate(expr: Poly, funcs: dict, weights: dict, at: dict | None = None):
    table = {}
    for name, fn in funcs.items():
        table[name] = fn
        table[name + "_1"] = sympy.diff(fn, z1)
        table[name + "_2"] = sympy.diff(fn, z2)
        table[name + "_11"] = sympy.diff(fn, z1, 2)
        table[name + "_12"] = sympy.diff(fn, z1, z2)
        table[name + "_22"] = sympy.diff(fn, z2, 2)
    if at is not None:
        table = {k: v.subs(at) for k, v in table.items()}
    table.update({k: sympy.Integer(v) for k, v in weights.items()})
    total = sympy.Integer(0)
    for e, c in expr.terms.items():
        mono = sympy.Rational(c.numerator, c.denominator)
        for i, k in enumerate(e):
            if k:
                mono *= table[FREE.names[i]] ** k
        total += mono
    return sympy.expand(total)


def _br(a, wa, b, wb, var):
    # [A, B] on one axis with weights as (w1, w2)
    i = 0 if var == z1 else 1
    return a * wa[i] * sympy.diff(b, var) - b * wb[i] * sympy.diff(a, var), (
        wa[0] + wb[0] + (2 if i == 0 else 0), wa[1] + wb[1] + (2 if i == 1 else 0))


poly2 = st.builds(
    lambda c: sum(ci * z1**i * z2**j for ci, (i, j) in zip(c, [(0, 0), (1, 0), (0, 1), (2, 1), (1, 2), (3, 0)])),
    st.lists(st.integers(-3, 3), min_size=6, max_size=6))


@given(poly2, poly2, poly2, st.integers(1, 8), st.integers(1, 8), st.integers(1, 8))
def test_star_and_plain_match_concrete_functions(pF, pG, pH, wf, wg, wh):
    funcs = {"F": pF, "G": pG, "H": pH}
    weights = {"f": wf, "g": wg, "h": wh}
    # direct nested brackets in sympy
    gh2, w_gh2 = _br(pG, (wg, wg), pH, (wh, wh), z2)
    gh1, w_gh1 = _br(pG, (wg, wg), pH, (wh, wh), z1)
    a, _ = _br(pF, (wf, wf), gh2, w_gh2, z1)
    b, _ = _br(pF, (wf, wf), gh1, w_gh1, z2)
    assert _evaluate(triple_star(F, G, H).expr, funcs, weights) == sympy.expand((a + b) / 2)
    assert _evaluate(triple_nested(F, G, H, -1).expr, funcs, weights) == sympy.expand((a - b) / 2)
    m = sympy.Matrix([[wf * pF, wg * pG, wh * pH],
                      [sympy.diff(x, z1) for x in (pF, pG, pH)],
                      [sympy.diff(x, z2) for x in (pF, pG, pH)]])
    plain = sympy.expand(Fraction(wg + wh, 2) * m.det())
    assert _evaluate(triple_plain(F, G, H).expr, funcs, weights) == plain


_SIDES = antidiagonal_sides(F, G, H)


@given(poly2, poly2, poly2, st.integers(1, 6), st.integers(1, 6), st.integers(1, 6),
       st.fractions(-3, 3, max_denominator=4), st.fractions(-3, 3, max_denominator=4))
def test_antidiagonal_relation_on_concrete_functions(pF, pG, pH, wf, wg, wh, x, y):
    funcs = {"F": pF, "G": pG, "H": pH}
    weights = {"f": wf, "g": wg, "h": wh}
    at = {z1: sympy.Rational(x.numerator, x.denominator), z2: sympy.Rational(y.numerator, y.denominator)}
    lhs, rhs = (_evaluate(side, funcs, weights, at) for side in _SIDES)
    assert lhs == rhs
