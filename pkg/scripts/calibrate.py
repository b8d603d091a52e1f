"""Recompute C, lambda and the sub-derivation constants from the Fourier expansions."""

import argparse

from hmf5 import fourier_lab as fl
from hmf5.numfield import format_quad


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trace-bound", type=int, default=10)
    ap.add_argument("--displayed-scale", action="store_true",
                    help="use sqrt5/22 for chi15 instead of the integral normalisation")
    args = ap.parse_args()

    rep = fl.calibrate_C()
    print(f"C = {rep.C}  (condition gcd degree {len(rep.condition) - 1}, {rep.samples} samples)")
    scale = fl.DISPLAYED_CHI15_SCALE if args.displayed_scale else None
    gens = fl.build_generators(args.trace_bound, chi15_scale=scale, check=not args.displayed_scale)
    print(f"chi15 scale = {format_quad(gens.chi15_scale)}")
    print(f"lambda = {format_quad(fl.klein_lambda(gens))}")
    cal = fl.calibrate_l_constants(args.trace_bound, gens)
    for name, val, var in zip(("l1", "l2", "l3"), (cal.l1, cal.l2, cal.l3), cal.variables):
        print(f"{name} = {format_quad(val)}  (differentiates {var})")
    print("symmetry:", fl.symmetry_ledger(gens))


if __name__ == "__main__":
    main()
