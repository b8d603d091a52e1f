"""Command line front end: every check as a subcommand, text or json reports.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import fourier_lab as fl
from . import freebrackets as fb
from . import hilbert_ring as hr
from . import ideal_lab as il
from .numfield import QuadRat, format_quad, parse_quad
from .polyring import to_text

COMMANDS = ("identities", "derivations", "structure", "stability", "classify",
            "resultants", "fourier-dump", "calibrate")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    trace_bound: int = 10
    output: str = "text"
    l_constants: tuple[QuadRat, QuadRat, QuadRat] | None = None
    lam: Fraction | None = None
    deep: bool = False
    cache_dir: Path | None = None
    ideal: str | None = None
    derivs: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.trace_bound < 4:
            raise UsageError("--trace-bound must be at least 4")
        if self.output not in ("text", "json"):
            raise UsageError("--output must be text or json")
        if self.derivs:
            bad = [d for d in self.derivs if d not in hr.ALL_TAGS]
            if bad:
                raise UsageError(f"unknown derivations {bad}; choose from {list(hr.ALL_TAGS)}")


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class Report:
    command: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    seconds: float = 0.0

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.ok), None)

    def to_json(self) -> str:
        return json.dumps({"command": self.command, "ok": self.ok,
                           "checks": [asdict(c) for c in self.checks],
                           "data": self.data, "seconds": round(self.seconds, 3)},
                          indent=2, sort_keys=True, default=str)

    def to_text(self) -> str:
        lines = [f"== {self.command}"]
        for c in self.checks:
            lines.append(f"{'PASS' if c.ok else 'FAIL'} {c.name}" + (f": {c.detail}" if c.detail else ""))
        for k, v in self.data.items():
            if isinstance(v, (list, tuple)):
                lines.append(f"{k}:")
                lines += [f"  {x}" for x in v]
            else:
                lines.append(f"{k}: {v}")
        bad = self.first_failure()
        lines.append("all checks passed" if bad is None else f"first failure: {bad.name}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# cache


def _q(x) -> str:
    return format_quad(QuadRat.coerce(x))


def load_generators(cfg: RunConfig) -> fl.GeneratorSet | None:
    if cfg.cache_dir is None:
        return None
    manifest = cfg.cache_dir / "generators.json"
    if not manifest.exists():
        return None
    meta = json.loads(manifest.read_text())
    if meta["trace_bound"] < cfg.trace_bound:
        return None
    series = {}
    for name in ("phi2", "chi5", "chi6", "chi15"):
        _, S = fl.load_series(cfg.cache_dir / f"{name}.jsonl")
        series[name] = S.truncate(cfg.trace_bound)
    return fl.GeneratorSet(series["phi2"], series["chi5"], series["chi6"], series["chi15"],
                           Fraction(meta["C"]), parse_quad(meta["chi15_scale"]))


def save_generators(cfg: RunConfig, gens: fl.GeneratorSet) -> list[str]:
    cfg.cache_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, S in gens.as_dict().items():
        path = cfg.cache_dir / f"{name}.jsonl"
        fl.dump_series(S, path, name, gens.C)
        written.append(str(path))
    manifest = {"trace_bound": gens.bound, "C": str(gens.C), "chi15_scale": _q(gens.chi15_scale)}
    (cfg.cache_dir / "generators.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return written


def get_generators(cfg: RunConfig, report: Report | None = None) -> fl.GeneratorSet:
    gens = load_generators(cfg)
    if gens is not None:
        if report is not None:
            report.data["generators"] = f"loaded from {cfg.cache_dir}"
        return gens
    gens = fl.build_generators(cfg.trace_bound)
    if cfg.cache_dir is not None:
        save_generators(cfg, gens)
    if report is not None:
        report.data["generators"] = f"built at trace bound {cfg.trace_bound}"
    return gens


@dataclass
class Calibration:
    C: Fraction
    lam: Fraction
    l1: QuadRat
    l2: QuadRat
    l3: QuadRat
    trace_bound: int

    def constants(self) -> hr.LConstants:
        return hr.LConstants(self.l1, self.l2, self.l3, self.lam)

    def to_json(self) -> dict:
        return {"C": str(self.C), "lambda": str(self.lam), "l1": _q(self.l1), "l2": _q(self.l2),
                "l3": _q(self.l3), "trace_bound": self.trace_bound}

    @classmethod
    def from_json(cls, d: dict) -> Calibration:
        return cls(Fraction(d["C"]), Fraction(d["lambda"]), parse_quad(d["l1"]), parse_quad(d["l2"]),
                   parse_quad(d["l3"]), d["trace_bound"])


def verify_calibration(cal: Calibration, gens: fl.GeneratorSet) -> list[Check]:
    """Cheap re-check of cached constants against the series."""
    out = [Check("C matches generators", cal.C == gens.C)]
    out.append(Check("chi15^2 = lambda * Klein core", fl.klein_check(gens, cal.lam) is None))
    for tag, var, l in (("dsub", "chi6", cal.l1), ("esub", "chi5", cal.l2), ("fsub", "phi2", cal.l3)):
        S = fl.derivation_series(tag, getattr(gens, var), gens)
        ok = S.first_difference(gens.chi15.scale(l).with_weight(S.weight)) is None
        out.append(Check(f"{tag}({var}) = {_q(l)} chi15", ok))
    return out


def get_calibration(cfg: RunConfig, report: Report | None = None) -> Calibration:
    path = None if cfg.cache_dir is None else cfg.cache_dir / "calibration.json"
    gens = get_generators(cfg)
    if path is not None and path.exists():
        cal = Calibration.from_json(json.loads(path.read_text()))
        checks = verify_calibration(cal, gens)
        if report is not None:
            report.checks += checks
            report.data["calibration"] = f"verified cached constants from {path}"
        if all(c.ok for c in checks):
            return cal
    lcal = fl.calibrate_l_constants(cfg.trace_bound, gens)
    lam = fl.klein_lambda(gens)
    cal = Calibration(gens.C, lam.a, lcal.l1, lcal.l2, lcal.l3, cfg.trace_bound)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(cal.to_json(), indent=2) + "\n")
    return cal


# ---------------------------------------------------------------------------
# subcommands


def cmd_identities(cfg: RunConfig, rep: Report) -> None:
    for r in (fb.verify_triplo(), fb.verify_formulone(), fb.verify_formulone_corrected()):
        detail = "IDENTITY VERIFIED" if r.verified else f"residual with {len(r.residual)} terms"
        rep.add(r.name, r.verified, detail)


def cmd_derivations(cfg: RunConfig, rep: Report) -> None:
    gens = get_generators(cfg, rep)
    for line in fl.verify_derivation_table(cfg.trace_bound, gens):
        rep.add(line.name, line.ok, line.detail)


def cmd_structure(cfg: RunConfig, rep: Report) -> None:
    gens = get_generators(cfg, rep)
    for name, S in gens.as_dict().items():
        bad = fl.first_non_integral(S)
        rep.add(f"{name} integral", bad is None, "" if bad is None else f"at {bad}")
        rep.add(f"{name} unit content", fl.content(S) == 1)
    rep.add("phi2 constant term 1", gens.phi2.const == 1)
    diff = fl.klein_check(gens)
    rep.add(f"chi15^2 = chi with lambda = {hr.LAMBDA}", diff is None,
            "" if diff is None else f"first difference at {diff}")
    lam = fl.klein_lambda(gens)
    rep.data["lambda from series"] = format_quad(lam)
    rep.data["C"] = str(gens.C)
    rep.data["chi15 scale"] = format_quad(gens.chi15_scale)
    ledger = fl.symmetry_ledger(gens)
    expected = {"phi2": "symmetric", "chi5": "antisymmetric", "chi6": "symmetric", "chi15": "symmetric"}
    for name, kind in expected.items():
        rep.add(f"{name} {kind}", ledger[name] == kind, ledger[name])
    rep.add("iota(chi15) = -chi15", fl.iota_series(gens.chi15) == gens.chi15.scale(-1))


def _consts_for(cfg: RunConfig, tags: Sequence[str]) -> hr.LConstants | None:
    if all(t in hr.STAR_TAGS for t in tags):
        return None
    if cfg.l_constants is not None:
        l1, l2, l3 = cfg.l_constants
        return hr.LConstants(l1, l2, l3, cfg.lam if cfg.lam is not None else hr.LAMBDA)
    return get_calibration(cfg).constants()


def _stability_case(rep: Report, ideal: il.PolyIdeal, tags: Sequence[str], expect: bool,
                    consts: hr.LConstants | None = None) -> None:
    r = il.is_stable(ideal, tags, consts)
    label = f"{ideal} {'stable' if expect else 'not stable'} under {','.join(tags)}"
    detail = "" if r.stable == expect else f"got {'stable' if r.stable else 'not stable'}"
    rep.add(label, r.stable == expect, detail)
    rep.add(f"{ideal} certificates re-multiply", r.certificates_ok)


def cmd_stability(cfg: RunConfig, rep: Report) -> None:
    if cfg.ideal is not None:
        tags = cfg.derivs or hr.STAR_TAGS
        consts = _consts_for(cfg, tags)
        lam = consts.lam if consts is not None else hr.LAMBDA
        try:
            ideal = il.named_ideal(cfg.ideal, lam=lam)
        except (ValueError, KeyError) as exc:
            raise UsageError(f"bad ideal {cfg.ideal!r}: {exc}") from None
        r = il.is_stable(ideal, tags, consts)
        for tag, ok in r.verdicts.items():
            detail = "" if ok else f"normal form {to_text(r.offending[tag][1])}"
            rep.add(f"{ideal} {tag}-stable", ok, detail)
        rep.add("certificates re-multiply", r.certificates_ok)
        return
    star = hr.STAR_TAGS
    _stability_case(rep, il.named_ideal("chi"), star, True)
    _stability_case(rep, il.named_ideal("chi5"), ("estar",), True)
    _stability_case(rep, il.named_ideal("chi5"), ("dstar",), False)
    _stability_case(rep, il.named_ideal("chi15"), star, True)
    consts = _consts_for(cfg, hr.FULL_TAGS)
    chi15 = il.named_ideal("chi15", lam=consts.lam)
    r = il.is_stable(chi15, hr.FULL_TAGS, consts)
    rep.add("(chi15) not stable under d1..f2", not r.stable,
            ", ".join(t for t, ok in r.verdicts.items() if not ok) + " fail")
    for a, b in sorted(il.E_SET):
        _stability_case(rep, il.P_ideal(a, b), star, True)
        _stability_case(rep, il.Q_ideal(a, b, consts.lam), hr.FULL_TAGS, True, consts)


GRID_A = (Fraction(0), Fraction(1, 800000), Fraction(1, 253125), Fraction(1), Fraction(-1, 2))
GRID_B = (Fraction(0), Fraction(1, 800), Fraction(1, 675), Fraction(1), Fraction(2))


def cmd_classify(cfg: RunConfig, rep: Report) -> None:
    sol = il.solve_stability_system()
    pts = sorted(sol.solutions)
    rep.data["E"] = [f"({a}, {b})" for a, b in pts]
    rep.add("solutions equal the stable set", sol.solutions == set(il.E_SET))
    rep.add("eliminant fully split over Q", sol.complete)
    disagree = []
    for a in GRID_A:
        for b in GRID_B:
            c = il.classify_Pab(a, b)
            if not c.agrees:
                disagree.append(f"({a}, {b})")
    rep.add("condition polynomials agree with Gröbner stability on the 5x5 grid", not disagree,
            ", ".join(disagree))


def cmd_resultants(cfg: RunConfig, rep: Report) -> None:
    r = il.reproduce_resultant_lemma()
    for c in r.checks:
        rep.add(c.name, c.ok, c.text().split(": ", 1)[1])
    for c in r.coprime:
        rep.add(f"coprime cofactors {c.names[0]}, {c.names[1]}", c.ok)
    rep.data["variants"] = [c.text() for c in r.variants] + [
        f"coprime {c.names[0]}, {c.names[1]}: {c.ok}" for c in r.variant_coprime]
    if cfg.deep:
        for m in il.deep_minor_resultants("all"):
            rep.add(m.text(), m.ok)


def cmd_fourier_dump(cfg: RunConfig, rep: Report) -> None:
    if cfg.cache_dir is None:
        cfg.cache_dir = Path("hmf5-cache")
    gens = fl.build_generators(cfg.trace_bound)
    written = save_generators(cfg, gens)
    for path in written:
        header, S = fl.load_series(path)
        rep.add(f"round trip {Path(path).name}", S == gens.as_dict()[header["form"]])
    rep.data["files"] = written


def cmd_calibrate(cfg: RunConfig, rep: Report) -> None:
    cr = fl.calibrate_C()
    rep.data["C"] = f"{cr.C} (unique positive root of the Klein proportionality condition, {cr.samples} samples)"
    cal = get_calibration(cfg, rep)
    rep.add("C from interpolation matches generators", cal.C == cr.C)
    rep.data["lambda"] = f"{cal.lam} (chi15^2 / Klein core on series, integral chi15)"
    rep.data["l1"] = f"{_q(cal.l1)} (d_*(chi6) / chi15)"
    rep.data["l2"] = f"{_q(cal.l2)} (e_*(chi5) / chi15)"
    rep.data["l3"] = f"{_q(cal.l3)} (f_*(phi2) / chi15)"
    rep.add("l1 = 11/sqrt5", cal.l1 == hr.STATED_L1, f"computed {_q(cal.l1)}")
    rep.add("lambda = 484/49", cal.lam == hr.LAMBDA, f"computed {cal.lam}")


HANDLERS = {
    "identities": cmd_identities,
    "derivations": cmd_derivations,
    "structure": cmd_structure,
    "stability": cmd_stability,
    "classify": cmd_classify,
    "resultants": cmd_resultants,
    "fourier-dump": cmd_fourier_dump,
    "calibrate": cmd_calibrate,
}


def run(command: str, cfg: RunConfig) -> Report:
    if command not in HANDLERS:
        raise UsageError(f"unknown command {command!r}")
    rep = Report(command)
    t0 = time.perf_counter()
    HANDLERS[command](cfg, rep)
    rep.seconds = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hmf5", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--trace-bound", type=int, default=10)
    p.add_argument("--output", choices=("text", "json"), default="text")
    p.add_argument("--deep", action="store_true", help="resultants of all pairs of 2x2 minors")
    p.add_argument("--cache-dir", type=Path, default=None)
    p.add_argument("--ideal", default=None, help="chi, chi5, chi15, P(a,b), Q(a,b) or generators")
    p.add_argument("--derivs", default=None, help="comma separated, e.g. dstar,estar,fstar")
    p.add_argument("--l-constants", default=None, help="l1,l2,l3 as a+b*s5 literals")
    p.add_argument("--lam", default=None, help="lambda in chi15^2 = lambda * Klein core")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    consts = None
    if ns.l_constants:
        parts = ns.l_constants.split(",")
        if len(parts) != 3:
            raise UsageError("--l-constants needs three values")
        try:
            consts = tuple(parse_quad(x.strip()) for x in parts)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    derivs = tuple(d.strip() for d in ns.derivs.split(",")) if ns.derivs else None
    lam = Fraction(ns.lam) if ns.lam else None
    return RunConfig(ns.trace_bound, ns.output, consts, lam, ns.deep, ns.cache_dir, ns.ideal, derivs)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(ns)
        rep = run(ns.command, cfg)
    except (UsageError, hr.NotCalibratedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(rep.to_json() if cfg.output == "json" else rep.to_text())
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
