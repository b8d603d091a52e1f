"""Resultants behind the intersection lemma, and of all pairs of 2x2 minors of M."""

import argparse

from hmf5 import ideal_lab as il


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--all-pairs", action="store_true", help="all 36 pairs of minors instead of three")
    args = ap.parse_args()

    print(il.reproduce_resultant_lemma(variants=True).text())
    print()
    rows = il.deep_minor_resultants("all" if args.all_pairs else None)
    for r in rows:
        print(("ok   " if r.ok else "FAIL ") + r.text())
    print(f"{sum(r.ok for r in rows)}/{len(rows)} minor resultants have the expected shape")


if __name__ == "__main__":
    main()
