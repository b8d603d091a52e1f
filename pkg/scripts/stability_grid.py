"""Classify P(a, b) on a grid of rational points, cross-checked by Gröbner stability."""

import argparse
from fractions import Fraction

from hmf5 import ideal_lab as il


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a", default="0,1/800000,1/253125,1/1000,1", help="comma separated values of a")
    ap.add_argument("--b", default="0,1/800,1/675,1/100,1", help="comma separated values of b")
    args = ap.parse_args()

    a_vals = [Fraction(x) for x in args.a.split(",")]
    b_vals = [Fraction(x) for x in args.b.split(",")]
    disagree = 0
    for a in a_vals:
        for b in b_vals:
            c = il.classify_Pab(a, b)
            disagree += not c.agrees
            mark = "stable" if c.stable else "-"
            print(f"a={str(a):>10} b={str(b):>8}  {mark:7} conditions={tuple(map(str, c.conditions))}")
    sol = il.solve_stability_system()
    print("solutions of the system:", sorted((str(a), str(b)) for a, b in sol.solutions))
    print("disagreements with Gröbner stability:", disagree)


if __name__ == "__main__":
    main()
