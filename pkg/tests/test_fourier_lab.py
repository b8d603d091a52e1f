from fractions import Fraction

import pytest
import sympy
from hypothesis import given

from hmf5.fourier_lab import (
    DISPLAYED_CHI15_SCALE,
    FourierSeries,
    SeriesError,
    bracket1,
    build_generators,
    calibrate_C,
    calibrate_l_constants,
    derivation_series,
    displayed_star_coefficient,
    dump_series,
    evaluate_poly,
    iota_by_index_map,
    iota_series,
    klein_check,
    klein_lambda,
    lambda_op,
    load_series,
    series_divide,
    series_sqrt,
    star_by_formula,
    star_coefficient,
    symmetry_ledger,
    triple,
    triple_nested,
    triple_star,
    unit_action_defect,
    verify_derivation_table,
)
from hmf5.hilbert_ring import LAMBDA, STAR_TABLE
from hmf5.numfield import DualIndex, QuadRat, dual_to_quad, enumerate_dual
from strategies import isobaric


# -- series arithmetic ----------------------------------------------------------

def test_make_rejects_non_positive_index():
    with pytest.raises(ValueError):
        FourierSeries.make(0, {(1, 1): 1}, 3)
    F = FourierSeries.make(1, {(0, 1): 2, (0, 9): 5}, 3)
    assert (0, 9) not in F.coeffs
    with pytest.raises(SeriesError):
        F.coeff((0, 4))


def test_series_product_and_weight():
    F = FourierSeries.make(1, {(0, 1): 2}, 4, (2, 2))
    G = F * F
    assert G.weight == (4, 4)
    assert G.coeff((0, 0)) == QuadRat(1) and G.coeff((0, 1)) == QuadRat(4) and G.coeff((0, 2)) == QuadRat(4)
    with pytest.raises(SeriesError):
        F + G


def test_derivative_multiplies_by_index():
    F = FourierSeries.make(3, {(0, 1): 1, (-3, 2): 2}, 3, (2, 2))
    D1, D2 = F.D(1), F.D(2)
    nu = dual_to_quad(DualIndex(-3, 2))
    assert D1.coeff((-3, 2)) == nu * 2 and D2.coeff((-3, 2)) == nu.conj() * 2
    assert D1.is_cuspidal() and D1.weight == (4, 2) and D2.weight == (2, 4)
    assert F.D(1).D(2) == F.D(2).D(1)
    assert F.swap().swap() == F


def test_lambda_phi2_is_cuspidal_multiple_of_chi6(gens10):
    lam = lambda_op(gens10.phi2)
    assert lam.is_cuspidal()
    assert lam == gens10.chi6 * 24
    assert bracket1(gens10.phi2, gens10.phi2, 1).is_zero()


def test_division_and_square_root(gens10):
    p, c5 = gens10.phi2, gens10.chi5
    assert series_divide(p * gens10.chi6, p) == gens10.chi6
    with pytest.raises(SeriesError):
        series_divide(p, c5)
    root = series_sqrt(c5 * c5)
    assert root == c5
    with pytest.raises(SeriesError):
        series_sqrt(p)


# -- the generators ---------------------------------------------------------------

def _zeta_k_minus_one() -> sympy.Rational:
    # zeta_K(-1) = zeta(-1) L(-1, chi_5), with L(-1, chi) = -B_{2,chi}/2
    f = 5
    chi = {1: 1, 2: -1, 3: -1, 4: 1, 5: 0}
    b2chi = f * sum(chi[a] * sympy.bernoulli(2, sympy.Rational(a, f)) for a in range(1, f + 1))
    return sympy.Rational(-1, 12) * (-b2chi / 2)


def test_normalisation_matches_zeta_value():
    rep = calibrate_C()
    assert _zeta_k_minus_one() == sympy.Rational(1, 30)
    # Eisenstein series of weight 2: zeta_K(-1)/4 + sum sigma_1; normalised constant term 1
    assert rep.C == 120 == 4 / _zeta_k_minus_one()
    assert rep.positive_roots == [120]


def test_generators_are_integral_with_unit_content(gens10):
    assert gens10.C == 120
    assert gens10.chi15_scale == QuadRat(0, Fraction(1, 14))
    assert gens10.phi2.coeff((0, 0)) == QuadRat(1)
    assert gens10.chi5.coeff((0, 1)) == QuadRat(1) and gens10.chi5.coeff((-1, 1)) == QuadRat(-1)
    assert gens10.chi15.min_trace() == 2
    for name, S in gens10.as_dict().items():
        assert S.bound == 10
        assert S.weight == ({"phi2": 2, "chi5": 5, "chi6": 6, "chi15": 15}[name],) * 2
        assert unit_action_defect(S) is None


def test_displayed_chi15_scale_is_not_integral():
    with pytest.raises(SeriesError):
        build_generators(6, chi15_scale=DISPLAYED_CHI15_SCALE)


def test_bound_validation():
    with pytest.raises(ValueError):
        build_generators(3)


def test_truncation_is_sound(gens10):
    g8 = build_generators(8)
    for name, S in g8.as_dict().items():
        assert S.first_difference(getattr(gens10, name).truncate(8)) is None


def test_symmetry_ledger(gens10):
    assert symmetry_ledger(gens10) == {"phi2": "symmetric", "chi5": "antisymmetric",
                                       "chi6": "symmetric", "chi15": "symmetric"}


@given(isobaric(weights=(2, 4, 5, 6)), isobaric(weights=(2, 5, 6)))
def test_evaluation_is_a_homomorphism(gens6, p, q):
    lhs = evaluate_poly(p * q, gens6)
    rhs = evaluate_poly(p, gens6) * evaluate_poly(q, gens6)
    assert lhs.first_difference(rhs.with_weight(lhs.weight)) is None


# -- derivations and constants -------------------------------------------------------

def test_derivation_table_holds_on_series(gens10):
    lines = verify_derivation_table(gens=gens10)
    assert len(lines) == len(STAR_TABLE)
    assert all(line.ok for line in lines), [line.text() for line in lines if not line.ok]


def test_sub_constants(gens10):
    cal = calibrate_l_constants(gens=gens10)
    assert cal.l1 == QuadRat(0, Fraction(14, 5))
    assert cal.l2 == QuadRat(0, Fraction(-16, 5))
    assert cal.l3 == QuadRat(0, Fraction(22, 5))
    assert cal.variables == ("chi6", "chi5", "phi2")
    assert all(cal.vanishing[k] for k in cal.vanishing if k != "fsub(phi2)")
    consts = cal.to_constants(Fraction(1, 16))
    assert consts.calibrated and consts.lam == Fraction(1, 16)


def test_klein_relation_constant(gens10):
    assert klein_lambda(gens10) == QuadRat(Fraction(1, 16))
    assert klein_check(gens10, Fraction(1, 16)) is None
    assert klein_check(gens10) is not None
    assert klein_check(gens10, LAMBDA) is not None


def test_iota_fixes_tstar_and_negates_chi15(gens10):
    for name in ("phi2", "chi5", "chi6"):
        S = getattr(gens10, name)
        assert iota_series(S) == S
    assert iota_series(gens10.chi15) == -gens10.chi15


def test_iota_index_map_agrees(gens10):
    for S in gens10.as_dict().values():
        direct = iota_by_index_map(S)
        via_swap = iota_series(S)
        for k, v in direct.items():
            assert via_swap.coeff(k) == v


@pytest.mark.parametrize("fam", "def")
def test_second_derivation_is_conjugate_on_series(gens10, fam):
    for name in ("phi2", "chi6", "chi15"):
        S = getattr(gens10, name)
        one = derivation_series(fam + "1", iota_series(S), gens10)
        assert iota_series(one) == derivation_series(fam + "2", S, gens10)


def test_triple_bracket_as_nested(gens6):
    a, b, c = gens6.chi6, gens6.phi2, gens6.chi5
    assert triple(a, b, c) == triple_nested(a, b, c, -1)


# -- closed coefficient formula for the star bracket ------------------------------------

def test_star_coefficient_constant_terms():
    for mu in enumerate_dual(4):
        m = (mu.a, mu.b)
        for f in (2, 6, 15):
            assert star_coefficient((0, 0), (0, 0), m, f) == 2 * f * dual_to_quad(mu).norm()


@pytest.mark.parametrize("name", ["phi2", "chi6", "chi15"])
def test_star_formula_matches_series(gens6, name):
    F = getattr(gens6, name)
    direct = triple_star(F, gens6.phi2, gens6.chi5)
    assert star_by_formula(F, gens6.phi2, gens6.chi5) == direct


def test_alternative_closed_form_differs(gens6):
    F = gens6.chi6
    alt = star_by_formula(F, gens6.phi2, gens6.chi5, coefficient=displayed_star_coefficient)
    assert alt != triple_star(F, gens6.phi2, gens6.chi5)


# -- coefficient cache ----------------------------------------------------------------------

def test_dump_and_load_round_trip(tmp_path, gens6):
    path = tmp_path / "chi15.jsonl"
    dump_series(gens6.chi15, path, "chi15", C=gens6.C)
    header, F = load_series(path)
    assert header["form"] == "chi15" and header["C"] == "120" and header["trace_bound"] == 6
    assert F == gens6.chi15 and F.weight == (15, 15)
