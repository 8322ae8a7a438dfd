"""Print the commutator witness for the explicit unipotent representation over a range of s."""

import argparse

from parcalc import covers as cv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g", type=int, default=2)
    ap.add_argument("--n", type=int, default=0)
    ap.add_argument("--rank", type=int, default=2)
    ap.add_argument("--s-max", type=int, default=10)
    args = ap.parse_args()

    rep = cv.explicit_nondensity_rep(args.g, args.n, args.rank)
    print(f"relator image: {cv.relator_image(rep)}")
    for s in range(1, args.s_max + 1):
        w = cv.vs_test(rep, s)
        if w is None:
            print(f"s={s:>3}: no witness at word length 1")
            continue
        x, y = w.labels()
        print(f"s={s:>3}: [{x}^s, {y}^s] top row {w.commutator[0]}")


if __name__ == "__main__":
    main()
