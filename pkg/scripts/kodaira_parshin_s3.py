"""Count homomorphisms, epimorphisms and Nielsen classes from the once-punctured
genus-g surface group to a finite group, and split the admissible ones by the
order of the boundary image together with the Riemann-Hurwitz genus of the cover.

    python3 scripts/kodaira_parshin_s3.py --g 2 --group S3
"""

import argparse
from collections import Counter
from dataclasses import dataclass

from parcalc import covers as cv


@dataclass(frozen=True)
class CensusConfig:
    g: int = 2
    group: str = "S3"
    cap: int = cv.DEFAULT_HOM_CAP


def main():
    ap = argparse.ArgumentParser(description="Nielsen-class census for one-point-branched G-covers")
    ap.add_argument("--g", type=int, default=CensusConfig.g)
    ap.add_argument("--group", default=CensusConfig.group)
    ap.add_argument("--cap", type=int, default=CensusConfig.cap)
    args = CensusConfig(**vars(ap.parse_args()))

    G = cv.named_group(args.group)
    report = cv.gamma_index_report(args.g, G, args.cap)
    print(f"G = {G.label()} (order {G.order}, center-free: {G.is_center_free()}), base genus {args.g}")
    print(f"homomorphisms {report.hom_count}, surjective {report.epi_count}, "
          f"classes {report.nielsen_class_count}")

    classes = cv.nielsen_classify(cv.enumerate_surface_homs(args.g, G, args.cap))
    by_order = Counter()
    admissible = 0
    for c in classes:
        if cv.kodaira_parshin_admissible(c.representative):
            admissible += 1
            by_order[cv.order(cv.boundary_image(c.representative))] += 1
    print(f"admissible classes (boundary image nontrivial): {admissible}")
    for e, count in sorted(by_order.items()):
        h = cv.riemann_hurwitz_genus(args.g, G.order, e)
        print(f"  boundary order {e}: {count} classes, cover genus {h}, h^2 >= g+1: {h * h >= args.g + 1}")


if __name__ == "__main__":
    main()
