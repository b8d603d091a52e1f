"""Ideals of T* and of the quotient model K[phi2, chi5, chi6, X]/(X^2 - chi).

Membership goes through reduced Gröbner bases (Buchberger over Q(sqrt5) with
weight-graded orders).  On top of that: stability of ideals under the
derivations, the classification of the ideals P(a, b), and the resultant
computations used to locate stable prime ideals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .hilbert_ring import (
    KLEIN_CORE,
    LAMBDA,
    STAR_TABLE,
    STAR_TAGS,
    LConstants,
    apply_on_t4,
    chi_polynomial,
    derivation_matrix,
    generator_images,
    klein_relation_poly,
    minor,
    star_on_poly,
)
from .numfield import ONE, ZERO, QuadRat
from .polyring import (
    CHI5,
    CHI6,
    PHI2,
    T4,
    XVAR,
    Poly,
    Ring,
    ResultantShape,
    binomial_shape,
    from_text,
    gcd_and_shape,
    resultant,
    to_text,
    uni_gcd,
    uni_rational_roots,
    uni_trim,
)

# ---------------------------------------------------------------------------
# monomial orders


@dataclass(frozen=True)
class MonomialOrder:
    """A total monomial order given by a sort key; the leading term has the largest key."""

    name: str
    key: Callable[[tuple[int, ...]], tuple]


def _weight(e: Sequence[int]) -> int:
    return sum(w * x for w, x in zip(T4.weights, e))


def _wrevlex(e):
    return (_weight(e),) + tuple(-x for x in reversed(e))


def _wlex(e):
    return (_weight(e),) + tuple(e)


def _elim_x(e):
    # X-degree first: eliminates X (block order, weighted revlex inside)
    return (e[XVAR], _weight(e)) + tuple(-x for x in reversed(e))


ORDERS = {
    "wrevlex": MonomialOrder("wrevlex", _wrevlex),
    "wlex": MonomialOrder("wlex", _wlex),
    "elimX": MonomialOrder("elimX", _elim_x),
}


def get_order(order: str | MonomialOrder) -> MonomialOrder:
    if isinstance(order, MonomialOrder):
        return order
    try:
        return ORDERS[order]
    except KeyError:
        raise ValueError(f"unknown monomial order {order!r}; choose from {sorted(ORDERS)}") from None


# ---------------------------------------------------------------------------
# dict-level helpers (terms: exponent tuple -> QuadRat)


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def _axpy(target: dict, src: dict, c, shift: tuple) -> None:
    """target += c * x^shift * src, in place."""
    for e, d in src.items():
        m = tuple(x + y for x, y in zip(e, shift))
        v = target.get(m, ZERO) + c * d
        if v:
            target[m] = v
        else:
            target.pop(m, None)


def _lead(terms: dict, key) -> tuple:
    return max(terms, key=key)


@dataclass
class _Elem:
    terms: dict
    lm: tuple
    cof: list[dict] | None  # coefficients on the original generators


def _monic(el: _Elem) -> _Elem:
    inv = ONE / el.terms[el.lm]
    if inv == ONE:
        return el
    terms = {e: c * inv for e, c in el.terms.items()}
    cof = None if el.cof is None else [{e: c * inv for e, c in q.items()} for q in el.cof]
    return _Elem(terms, el.lm, cof)


def _reduce(terms: dict, basis: list[_Elem], key, full: bool = True) -> tuple[dict, list[dict]]:
    """Normal form of terms modulo a monic basis, with the quotients used."""
    p = dict(terms)
    rem: dict = {}
    quots: list[dict] = [{} for _ in basis]
    while p:
        m = max(p, key=key)
        for k, g in enumerate(basis):
            if _divides(g.lm, m):
                c = p[m]
                s = _sub(m, g.lm)
                _axpy(p, g.terms, -c, s)
                v = quots[k].get(s, ZERO) + c
                if v:
                    quots[k][s] = v
                else:
                    quots[k].pop(s, None)
                break
        else:
            if not full:
                rem.update(p)
                break
            rem[m] = p.pop(m)
    return rem, quots


def _combine(quots: list[dict], basis: list[_Elem], ngens: int) -> list[dict]:
    """Express sum_k quots[k] * basis[k] through the original generators."""
    out = [dict() for _ in range(ngens)]
    for q, g in zip(quots, basis):
        if not q:
            continue
        for s, c in q.items():
            for i in range(ngens):
                if g.cof[i]:
                    _axpy(out[i], g.cof[i], c, s)
    return out


def _buchberger(gens: list[dict], key, track: bool) -> list[_Elem]:
    n = len(gens)
    zero_shift = (0,) * T4.nvars
    G: list[_Elem] = []
    for i, t in enumerate(gens):
        cof = [dict() for _ in range(n)] if track else None
        if track:
            cof[i] = {zero_shift: ONE}
        G.append(_monic(_Elem(dict(t), _lead(t, key), cof)))

    def reduce_elem(el: _Elem, basis: list[_Elem]) -> _Elem | None:
        rem, quots = _reduce(el.terms, basis, key)
        if not rem:
            return None
        cof = None
        if track:
            sub = _combine(quots, basis, n)
            cof = [dict(c) for c in el.cof]
            for i in range(n):
                _axpy(cof[i], sub[i], -ONE, zero_shift)
        return _monic(_Elem(rem, _lead(rem, key), cof))

    # start from an interreduced set so that trivial redundancy does not breed pairs
    basis: list[_Elem] = []
    for el in sorted(G, key=lambda e: key(e.lm)):
        r = reduce_elem(el, basis)
        if r is not None:
            basis.append(r)

    pending = {(i, j) for j in range(len(basis)) for i in range(j)}
    while pending:
        i, j = min(pending, key=lambda ij: (_weight(_lcm(basis[ij[0]].lm, basis[ij[1]].lm)), ij[1], ij[0]))
        pending.discard((i, j))
        a, b = basis[i], basis[j]
        l = _lcm(a.lm, b.lm)
        # product criterion
        if all(x == 0 or y == 0 for x, y in zip(a.lm, b.lm)):
            continue
        # chain criterion
        skip = False
        for k, c in enumerate(basis):
            if k in (i, j) or not _divides(c.lm, l):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                skip = True
                break
        if skip:
            continue
        sa, sb = _sub(l, a.lm), _sub(l, b.lm)
        s: dict = {}
        _axpy(s, a.terms, ONE, sa)
        _axpy(s, b.terms, -ONE, sb)
        if not s:
            continue
        cof = None
        if track:
            cof = [dict() for _ in range(n)]
            for q in range(n):
                _axpy(cof[q], a.cof[q], ONE, sa)
                _axpy(cof[q], b.cof[q], -ONE, sb)
        r = reduce_elem(_Elem(s, _lead(s, key), cof), basis)
        if r is None:
            continue
        basis.append(r)
        new = len(basis) - 1
        pending |= {(k, new) for k in range(new)}

    # minimise, then interreduce tails
    keep = [g for idx, g in enumerate(basis)
            if not any(_divides(h.lm, g.lm) and (h.lm != g.lm or k < idx)
                       for k, h in enumerate(basis) if k != idx)]
    keep.sort(key=lambda e: key(e.lm))
    out = []
    for idx, g in enumerate(keep):
        others = keep[:idx] + keep[idx + 1:]
        r = reduce_elem(g, others)
        assert r is not None and r.lm == g.lm
        out.append(r)
    return out


# ---------------------------------------------------------------------------
# ideals


AMBIENTS = ("Tstar", "Tquot")


@dataclass(frozen=True)
class PolyIdeal:
    """An ideal of T* (no X) or of the quotient model (X^2 - chi appended)."""

    generators: tuple[Poly, ...]
    ambient: str = "Tstar"
    order: str = "wrevlex"
    lam: Fraction | QuadRat = LAMBDA
    name: str = ""
    groebner_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.ambient not in AMBIENTS:
            raise ValueError(f"ambient must be one of {AMBIENTS}")
        gens = tuple(self.generators)
        if not gens or any(g.is_zero() for g in gens):
            raise ValueError("generators must be nonzero")
        if self.ambient == "Tstar" and any(XVAR in g.variables() for g in gens):
            raise ValueError("X appears in a generator of an ideal of T*")
        if self.ambient == "Tquot":
            rel = klein_relation_poly(self.lam)
            if rel not in gens:
                gens = gens + (rel,)
        get_order(self.order)
        object.__setattr__(self, "generators", gens)

    def with_order(self, order: str) -> PolyIdeal:
        return PolyIdeal(self.generators, self.ambient, order, self.lam, self.name)

    @property
    def basis(self) -> list[Poly]:
        return groebner(self)

    def __str__(self) -> str:
        return self.name or "(" + ", ".join(to_text(g) for g in self.generators) + ")"


def _gb(ideal: PolyIdeal, track: bool) -> list[_Elem]:
    cached = ideal.groebner_cache.get(track) or (ideal.groebner_cache.get(True) if not track else None)
    if cached is not None:
        return cached
    key = get_order(ideal.order).key
    out = _buchberger([g.terms for g in ideal.generators], key, track)
    ideal.groebner_cache[track] = out
    return out


def groebner(ideal: PolyIdeal) -> list[Poly]:
    """Reduced Gröbner basis for the ideal's order (monic, sorted by leading monomial)."""
    return [Poly(T4, dict(e.terms), _clean=True) for e in _gb(ideal, False)]


def leading_monomials(ideal: PolyIdeal) -> list[tuple[int, ...]]:
    return [e.lm for e in _gb(ideal, False)]


@dataclass
class Membership:
    member: bool
    normal_form: Poly
    certificate: list[Poly] | None = None  # cofactors on ideal.generators

    def __bool__(self) -> bool:
        return self.member


def member(p: Poly, ideal: PolyIdeal, certificate: bool = False) -> Membership:
    """Normal form of p against the Gröbner basis; with a cofactor certificate when asked."""
    basis = _gb(ideal, certificate)
    key = get_order(ideal.order).key
    rem, quots = _reduce(p.terms, basis, key)
    nf = Poly(T4, rem, _clean=True)
    if not certificate or rem:
        return Membership(not rem, nf)
    cof = _combine(quots, basis, len(ideal.generators))
    return Membership(True, nf, [Poly(T4, c, _clean=True) for c in cof])


def certificate_holds(p: Poly, ideal: PolyIdeal, cert: Sequence[Poly]) -> bool:
    total = Poly(T4)
    for c, g in zip(cert, ideal.generators):
        total = total + c * g
    return total == p


def contraction(ideal: PolyIdeal) -> PolyIdeal:
    """The intersection of a quotient-model ideal with T*, by eliminating X."""
    if ideal.ambient != "Tquot":
        return ideal
    elim = ideal.with_order("elimX")
    keep = [g for g in groebner(elim) if XVAR not in g.variables()]
    return PolyIdeal(tuple(keep), "Tstar", ideal.order, ideal.lam, f"{ideal} ∩ T*")


# ---------------------------------------------------------------------------
# stability


@dataclass
class StabilityReport:
    ideal: str
    verdicts: dict[str, bool]
    certificates: dict[tuple[str, int], list[Poly]]
    offending: dict[str, tuple[int, Poly]]
    certificates_ok: bool

    @property
    def stable(self) -> bool:
        return all(self.verdicts.values())

    def text(self) -> str:
        lines = [f"ideal {self.ideal}: {'stable' if self.stable else 'not stable'}"]
        for tag, ok in self.verdicts.items():
            if ok:
                lines.append(f"  {tag}: stable")
            else:
                i, nf = self.offending[tag]
                lines.append(f"  {tag}: not stable (generator {i}, normal form {to_text(nf)})")
        lines.append(f"  certificates re-multiply: {self.certificates_ok}")
        return "\n".join(lines)


def image_of(tag: str, g: Poly, ideal: PolyIdeal, consts: LConstants | None,
             cache: dict | None = None) -> Poly:
    if ideal.ambient == "Tstar":
        if tag not in STAR_TAGS:
            raise ValueError(f"{tag} does not preserve T*; use the quotient model")
        return star_on_poly(tag, g)
    if tag not in STAR_TAGS:
        if consts is None:
            consts = LConstants()
        if consts.lam != ideal.lam:
            raise ValueError("constants refer to a different lambda than the ideal")
    images = None
    if cache is not None:
        images = cache.get(tag)
        if images is None:
            images = cache[tag] = generator_images(tag, consts)
    return apply_on_t4(tag, g, consts, images)


def is_stable(ideal: PolyIdeal, derivations: Iterable[str] = STAR_TAGS,
              consts: LConstants | None = None) -> StabilityReport:
    """Check t(g) in the ideal for every generator g and derivation t.

    Sub and full derivations need calibrated l constants (NotCalibratedError otherwise).
    """
    verdicts: dict[str, bool] = {}
    certs: dict[tuple[str, int], list[Poly]] = {}
    bad: dict[str, tuple[int, Poly]] = {}
    ok_all = True
    cache: dict = {}
    for tag in derivations:
        verdicts[tag] = True
        for i, g in enumerate(ideal.generators):
            img = image_of(tag, g, ideal, consts, cache)
            m = member(img, ideal, certificate=True)
            if not m.member:
                verdicts[tag] = False
                bad[tag] = (i, m.normal_form)
                break
            certs[(tag, i)] = m.certificate
            ok_all = ok_all and certificate_holds(img, ideal, m.certificate)
    return StabilityReport(str(ideal), verdicts, certs, bad, ok_all)


# ---------------------------------------------------------------------------
# named ideals

phi2 = Poly.var(T4, PHI2)
chi5 = Poly.var(T4, CHI5)
chi6 = Poly.var(T4, CHI6)
X = Poly.var(T4, XVAR)


def P_ideal(a, b, order: str = "wrevlex") -> PolyIdeal:
    a, b = QuadRat.coerce(a), QuadRat.coerce(b)
    gens = (phi2**5 * a - chi5**2, phi2**3 * b - chi6)
    return PolyIdeal(gens, "Tstar", order, name=f"P({a.a if a.is_rational() else a}, {b.a if b.is_rational() else b})")


def Q_ideal(a, b, lam=LAMBDA, order: str = "wrevlex") -> PolyIdeal:
    p = P_ideal(a, b)
    return PolyIdeal(p.generators[:2] + (X,), "Tquot", order, lam, name="Q" + p.name[1:])


def _parse_pair(text: str) -> tuple[Fraction, Fraction]:
    inner = text[text.index("(") + 1: text.rindex(")")]
    a, b = (Fraction(s.strip()) for s in inner.split(","))
    return a, b


def named_ideal(spec: str, lam=LAMBDA, order: str = "wrevlex") -> PolyIdeal:
    """chi, chi5, chi15, P(a,b), Q(a,b) or a comma separated generator list."""
    s = spec.strip()
    if s == "chi":
        return PolyIdeal((chi_polynomial(lam),), "Tstar", order, lam, "(chi)")
    if s == "chi5":
        return PolyIdeal((chi5,), "Tstar", order, lam, "(chi5)")
    if s == "chi15":
        return PolyIdeal((X,), "Tquot", order, lam, "(chi15)")
    if s.startswith("P("):
        return P_ideal(*_parse_pair(s), order=order)
    if s.startswith("Q("):
        return Q_ideal(*_parse_pair(s), lam=lam, order=order)
    gens = tuple(from_text(t) for t in s.split(","))
    ambient = "Tquot" if any(XVAR in g.variables() for g in gens) else "Tstar"
    return PolyIdeal(gens, ambient, order, lam, f"({s})")


# ---------------------------------------------------------------------------
# classification of P(a, b)

E_SET = frozenset({(Fraction(1, 800000), Fraction(1, 800)),
                   (Fraction(1, 253125), Fraction(1, 675)),
                   (Fraction(0), Fraction(0))})


def stability_conditions(a, b) -> tuple[Fraction, Fraction]:
    a, b = Fraction(a), Fraction(b)
    return 125 * a + b - 900 * b * b, b * b + 3000 * a * b - 5 * a


@dataclass
class PabClassification:
    a: Fraction
    b: Fraction
    conditions: tuple[Fraction, Fraction]
    direct: bool | None = None

    @property
    def stable(self) -> bool:
        return self.conditions == (0, 0)

    @property
    def agrees(self) -> bool:
        return self.direct is None or self.direct == self.stable


def classify_Pab(a, b, direct: bool = True) -> PabClassification:
    """Stable iff both condition polynomials vanish; cross-checked by Gröbner stability."""
    out = PabClassification(Fraction(a), Fraction(b), stability_conditions(a, b))
    if direct:
        out.direct = is_stable(P_ideal(a, b), STAR_TAGS).stable
    return out


_AB = Ring(("a", "b"), (1, 1))


@dataclass
class StabilitySolution:
    solutions: set[tuple[Fraction, Fraction]]
    eliminant: list  # univariate in b, low degree first
    complete: bool  # every root of the eliminant is rational


def solve_stability_system() -> StabilitySolution:
    """All solutions of 125a + b - 900b^2 = b^2 + 3000ab - 5a = 0, by eliminating a."""
    a, b = Poly.var(_AB, 0), Poly.var(_AB, 1)
    p1 = a * 125 + b - b * b * 900
    p2 = b * b + a * b * 3000 - a * 5
    res = resultant(p1, p2, 0)
    deg = res.degree(1)
    uni = uni_trim([res.coeff((0, k)) for k in range(deg + 1)])
    roots = uni_rational_roots(uni)
    # multiplicity-free count: divide out the rational roots and see what is left
    rest = list(uni)
    for r in roots:
        while True:
            q, rmd = _div_linear(rest, r)
            if any(rmd):
                break
            rest = q
    complete = len(uni_trim(rest)) <= 1
    sols = set()
    for rb in roots:
        ua = _univariate_in_a(p1, rb)
        va = _univariate_in_a(p2, rb)
        g = uni_gcd(ua, va)
        for ra in uni_rational_roots(g):
            sols.add((ra, rb))
    return StabilitySolution(sols, uni, complete)


def _div_linear(a: list, r) -> tuple[list, list]:
    """Synthetic division of a (low degree first) by (x - r)."""
    n = len(a) - 1
    q = [ZERO] * n
    acc = ZERO
    for k in range(n, 0, -1):
        acc = acc * r + a[k]
        q[k - 1] = acc
    return q, [acc * r + a[0]]


def _univariate_in_a(p: Poly, bval) -> list:
    deg = p.degree(0)
    out = [ZERO] * (deg + 1)
    bq = QuadRat.coerce(bval)
    for e, c in p.terms.items():
        out[e[0]] = out[e[0]] + c * bq ** e[1]
    return uni_trim(out)


# ---------------------------------------------------------------------------
# the six resultants


def star(tag: str, p: Poly) -> Poly:
    return star_on_poly(tag, p)


@dataclass
class ResultantCheck:
    name: str
    variable: str
    description: str
    expected_monomial: tuple[int, ...]
    expected_weight: int
    resultant: Poly
    shape: ResultantShape | None
    error: str = ""

    @property
    def ok(self) -> bool:
        return (self.shape is not None
                and self.shape.monomial == self.expected_monomial
                and self.shape.weight == self.expected_weight
                and self.shape.unit.is_rational()
                and bool(self.shape.unit))

    def text(self) -> str:
        if self.shape is None:
            return f"{self.name}: {self.description} -> shape error: {self.error}"
        mono = "*".join(f"{T4.names[i]}^{k}" for i, k in enumerate(self.shape.monomial) if k) or "1"
        return (f"{self.name}: {self.description} = unit * {mono} * ({self.shape.binomial_kind} product, "
                f"weight {self.shape.weight})  {'ok' if self.ok else 'MISMATCH'}")


@dataclass
class CoprimeCheck:
    names: tuple[str, str]
    gcd: Poly

    @property
    def ok(self) -> bool:
        return self.gcd.is_constant()


@dataclass
class ResultantLemmaReport:
    checks: list[ResultantCheck]
    coprime: list[CoprimeCheck]
    variants: list[ResultantCheck]
    variant_coprime: list[CoprimeCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks) and all(c.ok for c in self.coprime)

    def first_failure(self) -> str | None:
        for c in self.checks:
            if not c.ok:
                return c.text()
        for c in self.coprime:
            if not c.ok:
                return f"cofactors of {c.names} share {to_text(c.gcd)}"
        return None

    def text(self) -> str:
        lines = [c.text() for c in self.checks]
        lines += [f"coprime {a}, {b}: {c.ok}" for c in self.coprime for a, b in [c.names]]
        if self.variants:
            lines.append("variants:")
            lines += ["  " + c.text() for c in self.variants]
            lines += [f"  coprime {a}, {b}: {c.ok}" for c in self.variant_coprime for a, b in [c.names]]
        return "\n".join(lines)


def _mono(**kw) -> tuple[int, ...]:
    e = [0] * T4.nvars
    for k, v in kw.items():
        e[T4.index(k)] = v
    return tuple(e)


def _check(name, var, desc, p, q, mono, weight) -> ResultantCheck:
    r = resultant(p, q, var)
    try:
        shape = binomial_shape(r)
        err = ""
    except ValueError as exc:
        shape, err = None, str(exc)
    return ResultantCheck(name, T4.names[var], desc, mono, weight, r, shape, err)


def _coprime(a: ResultantCheck, b: ResultantCheck) -> CoprimeCheck:
    g, _ = gcd_and_shape(a.resultant, b.resultant)
    return CoprimeCheck((a.name, b.name), g)


def reproduce_resultant_lemma(variants: bool = True) -> ResultantLemmaReport:
    """The six resultants used to show that stable primes meeting a polynomial ring contain (chi5, chi6)."""
    d = lambda p: star("dstar", p)  # noqa: E731
    e = lambda p: star("estar", p)  # noqa: E731
    f = lambda p: star("fstar", p)  # noqa: E731
    checks = [
        _check("R51", CHI5, "Res_chi5(d*chi5, d*^2 chi5)", d(chi5), d(d(chi5)), _mono(phi2=5, chi6=6), 12),
        _check("R52", CHI5, "Res_chi5(f*chi5, f*^2 chi5)", f(chi5), f(f(chi5)), _mono(chi6=15), 12),
        _check("R61", CHI6, "Res_chi6(d*chi6, d*^2 chi6)", d(chi6), d(d(chi6)), _mono(phi2=3, chi5=7), 10),
        _check("R62", CHI6, "Res_chi6(d*chi6, e*f*chi6)", d(chi6), e(f(chi6)), _mono(chi5=9), 20),
        _check("R21", PHI2, "Res_phi2(d*phi2, d*^2 phi2)", d(phi2), d(d(phi2)), _mono(chi5=11), 30),
        _check("R22", PHI2, "Res_phi2(e*phi2, e*^2 phi2)", e(phi2), e(e(phi2)), _mono(chi5=8), 60),
    ]
    by = {c.name: c for c in checks}
    coprime = []
    for a, b in (("R51", "R52"), ("R61", "R62"), ("R21", "R22")):
        if by[a].shape is not None and by[b].shape is not None:
            coprime.append(_coprime(by[a], by[b]))
    var_checks, var_coprime = [], []
    if variants:
        v1 = _check("R22f", PHI2, "Res_phi2(f*phi2, f*^2 phi2)", f(phi2), f(f(phi2)), _mono(chi5=8), 60)
        v2 = _check("R22de", PHI2, "Res_phi2(d*phi2, e*f*phi2)", d(phi2), e(f(phi2)), _mono(chi5=8), 60)
        var_checks = [v1, v2]
        var_coprime = [_coprime(by["R21"], v) for v in var_checks if v.shape is not None]
    return ResultantLemmaReport(checks, coprime, var_checks, var_coprime)


# ---------------------------------------------------------------------------
# the quadratic relation at (chi6, phi2, chi5)

_PAIR_TAG = {("phi2", "chi5"): "dstar", ("phi2", "chi6"): "estar", ("chi5", "chi6"): "fstar"}
_NAMES = ("phi2", "chi5", "chi6")


def star_bracket(x: str, a: str, b: str) -> Poly:
    """[x, a, b]^* for generator names; antisymmetric in (a, b)."""
    if a == b:
        return Poly(T4)
    if (a, b) in _PAIR_TAG:
        return STAR_TABLE[(_PAIR_TAG[(a, b)], x)]
    return -STAR_TABLE[(_PAIR_TAG[(b, a)], x)]


def _constant_ratio(p: Poly, q: Poly):
    """c with p = c q, or None."""
    if q.is_zero():
        return None
    e0 = next(iter(q.terms))
    c = p.coeff(e0) / q.terms[e0]
    return c if p == q.scale(c) else None


@dataclass
class FormuloneInstance:
    stated_constant: Fraction
    residual_literal: Poly
    residual_corrected: Poly
    implied_constant: object  # c with [chi6, phi2, chi5]^2 = c * KLEIN_CORE
    minors_nonzero: int
    entries_nonzero: bool

    @property
    def ok(self) -> bool:
        return self.residual_corrected.is_zero() and self.residual_literal.is_zero()

    def text(self) -> str:
        return "\n".join([
            f"constant c with [chi6,phi2,chi5]^2 = c*chi(lambda): {self.stated_constant}",
            f"residual (anti-diagonal form): {len(self.residual_corrected)} terms",
            f"residual (three-group form): {len(self.residual_literal)} terms",
            f"implied [chi6,phi2,chi5]^2 / Klein core: {self.implied_constant}",
            f"nonzero 2x2 minors of M: {self.minors_nonzero}/9",
        ])


def verify_formulone_instance(constant=Fraction(484, 5), lam=LAMBDA) -> FormuloneInstance:
    """(F, G, H) = (chi6, phi2, chi5), weights (6, 2, 5); both sides in T*."""
    F, G, H = "chi6", "phi2", "chi5"
    f, g, h = 6, 2, 5
    S = star_bracket
    chi = chi_polynomial(lam)
    lhs = chi * ((f + g) * (f + h) * Fraction(constant))
    M = derivation_matrix()  # rows (G,H), (G,F), (H,F) = d, e, f; columns (G, H, F)
    corrected = (minor(M, 0, 2) * (-(g + h) ** 2) + minor(M, 1, 1) * ((g + h) * (f + g))
                 - minor(M, 2, 0) * ((g + h) * (f + h)))
    literal = (
        (S(F, F, G) * S(H, G, H) - S(F, G, H) * S(H, F, G)) * ((f + g) * (g + h))
        - (S(H, G, H) * S(G, F, G) - S(H, F, G) * S(G, F, H)) * ((g + h) * (f + h))
        + (S(F, F, H) * S(G, G, H) - S(F, G, H) * S(G, F, H)) * ((g + h) ** 2)
    )
    implied = _constant_ratio(corrected, KLEIN_CORE * ((f + g) * (f + h)))
    nz = sum(1 for i in range(3) for j in range(3) if not minor(M, i, j).is_zero())
    entries = all(not p.is_zero() and p.weight() is not None for row in M for p in row)
    return FormuloneInstance(Fraction(constant), lhs - literal, lhs - corrected, implied, nz, entries)


# ---------------------------------------------------------------------------
# radicals of P(a, b)


@dataclass
class RadicalReport:
    a: Fraction
    b: Fraction
    lines: list[tuple[str, bool]]

    @property
    def ok(self) -> bool:
        return all(v for _, v in self.lines)

    def text(self) -> str:
        return "\n".join(f"{name}: {v}" for name, v in self.lines)


def minimal_power(p: Poly, ideal: PolyIdeal, max_k: int) -> int | None:
    q = Poly.const(T4, ONE)
    for k in range(1, max_k + 1):
        q = q * p
        if member(q, ideal):
            return k
    return None


def radical_witness(a, b, max_k: int = 4) -> RadicalReport:
    a, b = Fraction(a), Fraction(b)
    P = P_ideal(a, b)
    lines: list[tuple[str, bool]] = []
    if a == 0 and b == 0:
        R = PolyIdeal((chi5, chi6), name="(chi5, chi6)")
        lines.append(("chi5 not in P(0,0)", not member(chi5, P)))
        lines.append(("chi5^2 in P(0,0)", bool(member(chi5**2, P))))
        lines.append(("chi6 in P(0,0)", bool(member(chi6, P))))
        lines.append(("P(0,0) inside (chi5, chi6)", all(member(g, R) for g in P.generators)))
        return RadicalReport(a, b, lines)
    if a == 0 or b == 0:
        raise ValueError("a and b must both be nonzero or both zero")
    disp = (phi2**3 * b - chi6, phi2**2 * chi6 * a - chi5**2 * b, phi2 * chi5**2 * (b * b) - chi6**2 * a)
    labels = ("b phi2^3 - chi6", "a phi2^2 chi6 - b chi5^2", "b^2 phi2 chi5^2 - a chi6^2")
    for lab, g in zip(labels, disp):
        k = minimal_power(g, P, max_k)
        lines.append((f"({lab})^k in P(a,b), k = {k}", k is not None))
    R = PolyIdeal(disp, name="displayed radical")
    lines.append(("P(a,b) inside the displayed ideal", all(member(g, R) for g in P.generators)))
    return RadicalReport(a, b, lines)


@dataclass
class EnlargedIdealReport:
    a: Fraction
    b: Fraction
    primary_to_origin: bool  # every variable has a pure-power leading monomial
    powers: dict[str, int | None]

    @property
    def ok(self) -> bool:
        return self.primary_to_origin and all(k is not None for k in self.powers.values())


def enlarged_ideal_check(a, b, max_k: int = 40) -> EnlargedIdealReport:
    """For (a, b) off the stable set: P(a,b) + D*P(a,b) contains powers of phi2, chi5, chi6.

    The ideal is primary to (phi2, chi5, chi6) iff each variable has a pure power
    among the leading monomials of a Gröbner basis; the minimal power of each
    variable inside the ideal is then found by membership.
    """
    P = P_ideal(a, b)
    gens = list(P.generators)
    for tag in STAR_TAGS:
        gens += [star_on_poly(tag, g) for g in P.generators]
    J = PolyIdeal(tuple(g for g in gens if not g.is_zero()), name="P + D*P")
    lms = leading_monomials(J)
    primary = True
    powers: dict[str, int | None] = {}
    for name, idx in (("phi2", PHI2), ("chi5", CHI5), ("chi6", CHI6)):
        if not any(m[idx] and all(x == 0 for i, x in enumerate(m) if i != idx) for m in lms):
            primary = False
        powers[name] = minimal_power(Poly.var(T4, idx), J, max_k)
    return EnlargedIdealReport(Fraction(a), Fraction(b), primary, powers)


# ---------------------------------------------------------------------------
# quotient-model slice: stable ideals containing X pull back to stable ideals of T*


@dataclass
class PullbackCase:
    ideal: str
    stable_upstairs: bool
    contraction: list[Poly]
    stable_downstairs: bool

    @property
    def ok(self) -> bool:
        return (not self.stable_upstairs) or self.stable_downstairs


def pullback_slice(lam=LAMBDA) -> list[PullbackCase]:
    cases = [
        PolyIdeal((X,), "Tquot", lam=lam, name="(X)"),
        PolyIdeal((X, chi5, chi6), "Tquot", lam=lam, name="(X, chi5, chi6)"),
        PolyIdeal((X, chi5), "Tquot", lam=lam, name="(X, chi5)"),
        PolyIdeal((X, phi2), "Tquot", lam=lam, name="(X, phi2)"),
    ]
    for a, b in sorted(E_SET):
        q = Q_ideal(a, b, lam)
        cases.append(PolyIdeal(q.generators, "Tquot", lam=lam, name=q.name))
    out = []
    for J in cases:
        up = is_stable(J, STAR_TAGS).stable
        c = contraction(J)
        down = is_stable(c, STAR_TAGS).stable
        out.append(PullbackCase(J.name, up, list(c.generators), down))
    return out


# ---------------------------------------------------------------------------
# resultants of pairs of minors


@dataclass
class MinorResultant:
    first: tuple[int, int]
    second: tuple[int, int]
    variable: str
    nonzero: bool
    kind: str
    expected_kind: str
    error: str = ""

    @property
    def ok(self) -> bool:
        return self.nonzero and not self.error and self.kind in (self.expected_kind, "none")

    def text(self) -> str:
        tail = self.error or f"kind {self.kind}"
        return f"R{self.first}{self.second} in {self.variable}: nonzero={self.nonzero} {tail}"


_EXPECTED_KIND = {CHI6: "b*phi2^5-chi5^2", CHI5: "a*phi2^3-chi6"}

DEFAULT_MINOR_PAIRS = (((0, 0), (0, 1)), ((0, 2), (2, 0)), ((1, 1), (2, 2)))


def deep_minor_resultants(pairs: Iterable[tuple[tuple[int, int], tuple[int, int]]] | None = None,
                          variables: Sequence[int] = (CHI6, CHI5)) -> list[MinorResultant]:
    """Resultants of pairs of 2x2 minors of M; all 36 pairs when ``pairs`` is "all"."""
    M = derivation_matrix()
    Mt = {(i, j): minor(M, i, j) for i in range(3) for j in range(3)}
    if pairs == "all":
        idx = sorted(Mt)
        pairs = [(p, q) for k, p in enumerate(idx) for q in idx[k + 1:]]
    elif pairs is None:
        pairs = DEFAULT_MINOR_PAIRS
    out = []
    for p, q in pairs:
        for v in variables:
            r = resultant(Mt[p], Mt[q], v)
            kind, err = "", ""
            if r.is_zero():
                out.append(MinorResultant(p, q, T4.names[v], False, "", _EXPECTED_KIND[v], "zero resultant"))
                continue
            try:
                kind = binomial_shape(r).binomial_kind
            except ValueError as exc:
                err = str(exc)
            out.append(MinorResultant(p, q, T4.names[v], True, kind, _EXPECTED_KIND[v], err))
    return out
