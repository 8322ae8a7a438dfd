"""Tabulate, per genus, the smallest total rank admitting a non-semistable HN polygon.

Compares the enumerator's answer with the closed form: the least r with r^2 >= 4(g+1).

    python3 scripts/amgm_threshold.py --max-genus 12 --denom-bound 4 --slope-bound 3
"""

import argparse
import math
import time
from dataclasses import dataclass

from parcalc import hnengine as hn


@dataclass(frozen=True)
class ThresholdConfig:
    max_genus: int = 12
    denom_bound: int = 4
    slope_bound: str = "3"
    rank_limit: int = 64


def first_nonempty_rank(g, cfg):
    for r in range(1, cfg.rank_limit + 1):
        polys = hn.enumerate_candidate_polygons(r, g, cfg.denom_bound, cfg.slope_bound)
        if polys:
            return r, len(polys)
    return None, 0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-genus", type=int, default=ThresholdConfig.max_genus)
    ap.add_argument("--denom-bound", type=int, default=ThresholdConfig.denom_bound)
    ap.add_argument("--slope-bound", default=ThresholdConfig.slope_bound)
    cfg = ThresholdConfig(**vars(ap.parse_args()))

    print(f"{'g':>3} {'closed form':>11} {'enumerated':>10} {'#polygons':>10} {'sec':>6}")
    mismatches = 0
    for g in range(cfg.max_genus + 1):
        t0 = time.perf_counter()
        predicted = math.isqrt(4 * (g + 1) - 1) + 1
        found, count = first_nonempty_rank(g, cfg)
        mismatches += found != predicted
        print(f"{g:>3} {predicted:>11} {found!s:>10} {count:>10} {time.perf_counter() - t0:>6.2f}")
    print("all match" if not mismatches else f"{mismatches} mismatches")


if __name__ == "__main__":
    main()
