"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from hmf5.numfield import QuadRat
from hmf5.polyring import T4, Poly

small_fracs = st.builds(Fraction, st.integers(-30, 30), st.integers(1, 12))
nonzero_fracs = small_fracs.filter(bool)
quads = st.builds(QuadRat, small_fracs, small_fracs)
nonzero_quads = quads.filter(bool)
rational_quads = st.builds(QuadRat, small_fracs)


def monomials_of_weight(w: int, with_x: bool = False) -> list[tuple[int, int, int, int]]:
    out = []
    for x in range((w // 15 + 1) if with_x else 1):
        rest = w - 15 * x
        for c6 in range(rest // 6 + 1):
            for c5 in range((rest - 6 * c6) // 5 + 1):
                r = rest - 6 * c6 - 5 * c5
                if r % 2 == 0:
                    out.append((r // 2, c5, c6, x))
    return out


@st.composite
def isobaric(draw, weights=(2, 4, 5, 6, 7, 8, 10, 11, 12), coeffs=quads, with_x=False):
    """A nonzero isobaric polynomial of a drawn weight."""
    w = draw(st.sampled_from(weights))
    monos = monomials_of_weight(w, with_x)
    chosen = draw(st.lists(st.sampled_from(monos), min_size=1, max_size=4, unique=True))
    terms = {m: draw(coeffs.filter(bool)) for m in chosen}
    return Poly(T4, terms)


@st.composite
def small_poly(draw, coeffs=rational_quads, nvars=3, max_deg=3, max_terms=4):
    """A small, not necessarily isobaric polynomial in phi2, chi5, chi6."""
    n = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(nvars)) + (0,) * (4 - nvars)
        terms[e] = draw(coeffs)
    return Poly(T4, terms)
