"""Harder-Narasimhan polygon arithmetic.

Section bounds (Riemann-Roch and Clifford), a step-by-step certificate for the
rank inequality satisfied by bundles that are not generically globally
generated, the constraint predicates on HN polygons of isomonodromic
deformations, and an exhaustive search over candidate polygons.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import CapExceeded, PreconditionError, StructuralError
from .exactlin import as_fraction, rational_from_json

DEFAULT_ENUM_CAP = 10**6


@dataclass(frozen=True)
class HNPolygon:
    """Graded pieces (rank, slope) of an HN filtration, steepest first.

    Construction does not enforce the decreasing-slope invariant so that
    :func:`validate_polygon` can be asked about arbitrary piece lists.
    """

    pieces: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple((int(r), as_fraction(mu)) for r, mu in self.pieces))

    @classmethod
    def of(cls, ranks: Sequence[int], slopes: Sequence) -> HNPolygon:
        if len(ranks) != len(slopes):
            raise StructuralError("ranks and slopes differ in length")
        return cls(tuple(zip(ranks, slopes)))

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(r for r, _ in self.pieces)

    @property
    def slopes(self) -> tuple[Fraction, ...]:
        return tuple(mu for _, mu in self.pieces)

    @property
    def total_rank(self) -> int:
        return sum(self.ranks)

    @property
    def degree(self) -> Fraction:
        return sum((r * mu for r, mu in self.pieces), Fraction(0))

    def __len__(self) -> int:
        return len(self.pieces)


def validate_polygon(p: HNPolygon) -> bool:
    if not p.pieces or any(r < 1 for r in p.ranks):
        return False
    return all(a > b for a, b in zip(p.slopes, p.slopes[1:]))


def _require_valid(p: HNPolygon) -> None:
    if not validate_polygon(p):
        raise StructuralError(f"not an HN polygon: {polygon_to_json(p)}")


def rr_lower_bound(deg, rk: int, g: int) -> Fraction:
    """Riemann-Roch lower bound deg + (1 - g) rk for h^0."""
    return as_fraction(deg) + (1 - g) * rk


def clifford_h0_bound(p: HNPolygon, g: int) -> Fraction:
    """Upper bound for h^0 of a bundle with HN polygon ``p``, piece by piece.

    Pieces of slope > 2g - 2 have no H^1 and contribute their Euler
    characteristic; the others contribute the Clifford bound deg/2 + rk.
    """
    _require_valid(p)
    # Work in integers over a common denominator 2L; slope mu is num / L.
    L = math.lcm(*(mu.denominator for mu in p.slopes))
    total = aggregate = 0
    for r, mu in p.pieces:
        num = mu.numerator * (L // mu.denominator)
        if not 0 <= num <= 2 * g * L:
            raise PreconditionError(f"slope {mu} outside [0, {2 * g}]")
        if num > (2 * g - 2) * L:
            total += 2 * r * num + 2 * L * (1 - g) * r
        else:
            total += r * num + 2 * L * r
        aggregate += r * num + 2 * L * r
    assert total <= aggregate
    return Fraction(total, 2 * L)


# -- rank chain ---------------------------------------------------------------

_OPS = {"<=": operator.le, "<": operator.lt, ">=": operator.ge, ">": operator.gt, "==": operator.eq}


@dataclass(frozen=True)
class ChainStep:
    label: str
    lhs: Fraction
    relation: str
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return _OPS[self.relation](self.lhs, self.rhs)


@dataclass(frozen=True)
class RankChainCertificate:
    ok: bool
    failed_hypothesis: str | None
    corank: int
    section_bound_lhs: Fraction | None = None
    section_bound_rhs: Fraction | None = None
    final_bound: Fraction | None = None
    steps: tuple[ChainStep, ...] = field(default=())

    @property
    def verdicts(self) -> tuple[bool, ...]:
        return tuple(s.holds for s in self.steps)


def rank_chain_certify(muV, rkV: int, muU, rkU: int, delta: int, g: int, strict: bool = False) -> RankChainCertificate:
    """Check the rank inequality rk V >= g (rk V - rk U) - delta, one step at a time.

    ``strict`` selects the variant with mu(V) > 2g - 2 and a strict conclusion.
    The section-bound inequality deg V + (1-g) rk V <= deg U / 2 + rk U + delta
    is a hypothesis here (it packages the h^0 accounting). A violated
    hypothesis gives a certificate with ``ok=False`` naming it; no exception.
    """
    muV, muU = as_fraction(muV), as_fraction(muU)
    c = rkV - rkU
    lt = "<" if strict else "<="
    gt = ">" if strict else ">="

    def fail(why: str) -> RankChainCertificate:
        return RankChainCertificate(False, why, c)

    if rkV < 1 or rkU < 0 or delta < 0 or g < 0:
        return fail("ranks, delta and genus must be non-negative with rk V >= 1")
    if rkU >= rkV:
        return fail("U must be a proper subbundle (rk U < rk V)")
    final = Fraction(g * c - delta)
    if g == 0:
        # rk V >= 1 > -delta whatever the rest of the data is.
        step = ChainStep("conclusion (g = 0)", Fraction(rkV), gt, final)
        return RankChainCertificate(step.holds, None, c, final_bound=final, steps=(step,))

    if not (muV > 2 * g - 2 if strict else muV >= 2 * g - 2):
        return fail(f"mu(V) {gt} 2g - 2")
    if rkU > 0:
        if muU > muV:
            return fail("mu(U) <= mu(V)")
        if not 0 <= muU <= 2 * g:
            return fail("0 <= mu(U) <= 2g")
    degV = muV * rkV
    degU = muU * rkU if rkU else Fraction(0)
    sb_lhs = degV + (1 - g) * rkV
    sb_rhs = degU / 2 + rkU + delta
    if not sb_lhs <= sb_rhs:
        return fail("section bound deg V + (1-g) rk V <= deg U / 2 + rk U + delta")

    steps = [
        ChainStep("section bound", sb_lhs, "<=", sb_rhs),
        ChainStep("mu(U) <= mu(V)", sb_rhs, "<=", muV / 2 * (rkV - c) + rkV - c + delta),
        ChainStep("rearranged", (muV + 2) * c, "<=", (2 * g - muV) * rkV + 2 * delta),
        ChainStep("slope floor", Fraction(2 * g * c), lt, (muV + 2) * c),
        ChainStep("2g - mu(V) <= 2", (2 * g - muV) * rkV + 2 * delta, "<=", Fraction(2 * rkV + 2 * delta)),
        ChainStep("conclusion", Fraction(rkV), gt, final),
    ]
    ok = all(s.holds for s in steps)
    return RankChainCertificate(ok, None, c, sb_lhs, sb_rhs, final, tuple(steps))


def non_ggg_min_rank(g: int, strict_slope: bool) -> int:
    """Least rank of a semistable, not generically globally generated bundle of slope >= 2g-2."""
    return g + 1 if strict_slope else g


# -- constraints --------------------------------------------------------------


@dataclass(frozen=True)
class ConstraintReport:
    gap_ok: bool
    gap_violations: tuple[int, ...]
    product_ok: bool
    product_failures: tuple[int, ...]
    witnesses: dict[int, tuple[int, int]]
    amgm_forced_semistable: bool

    @property
    def ok(self) -> bool:
        return self.gap_ok and self.product_ok


def _product_witness(ranks: Sequence[int], i: int, g: int) -> tuple[int, int] | None:
    """First (j, k) with j < i < k and ranks[j+1] * ranks[k] >= g + 1 (1-based pieces)."""
    m = len(ranks)
    for j in range(i):
        for k in range(i + 1, m + 1):
            if ranks[j] * ranks[k - 1] >= g + 1:
                return j, k
    return None


def hn_constraints_check(p: HNPolygon, g: int) -> ConstraintReport:
    _require_valid(p)
    mus, ranks = p.slopes, p.ranks
    m = len(p)
    gaps = tuple(i for i in range(1, m) if mus[i - 1] - mus[i] > 1)
    witnesses, failures = {}, []
    for i in range(1, m):
        w = _product_witness(ranks, i, g)
        if w is None:
            failures.append(i)
        else:
            witnesses[i] = w
    return ConstraintReport(
        gap_ok=not gaps,
        gap_violations=gaps,
        product_ok=not failures,
        product_failures=tuple(failures),
        witnesses=witnesses,
        amgm_forced_semistable=semistable_forced(p.total_rank, g),
    )


def semistable_forced(rank: int, g: int) -> bool:
    """rank < 2 sqrt(g + 1), decided in integers."""
    return rank * rank < 4 * (g + 1)


# -- enumeration --------------------------------------------------------------


def slope_grid(denom_bound: int, slope_bound) -> list[Fraction]:
    """All rationals with denominator <= denom_bound and |x| <= slope_bound, ascending."""
    slope_bound = as_fraction(slope_bound)
    vals = set()
    for q in range(1, denom_bound + 1):
        top = math.floor(slope_bound * q)
        for num in range(-top, top + 1):
            vals.add(Fraction(num, q))
    return sorted(vals)


def compositions(n: int, min_parts: int = 1) -> Iterator[tuple[int, ...]]:
    """Ordered compositions of n, in lexicographic order."""
    if n == 0:
        return
    def rec(rest: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for first in range(1, rest + 1):
            for tail in rec(rest - first):
                yield (first,) + tail
    for comp in rec(n):
        if len(comp) >= min_parts:
            yield comp


def _ranks_pass(ranks: tuple[int, ...], g: int) -> bool:
    return all(_product_witness(ranks, i, g) is not None for i in range(1, len(ranks)))


def _gap_chains(grid: list[Fraction], length: int) -> Iterator[tuple[Fraction, ...]]:
    """Strictly decreasing sequences from ``grid`` with consecutive gaps in (0, 1]."""
    def rec(prefix: tuple[Fraction, ...]) -> Iterator[tuple[Fraction, ...]]:
        if len(prefix) == length:
            yield prefix
            return
        last = prefix[-1]
        for mu in grid:
            if mu >= last:
                break
            if last - mu <= 1:
                yield from rec(prefix + (mu,))
    for start in grid:
        yield from rec((start,))


def _count_gap_chains(grid: list[Fraction], length: int) -> int:
    counts = [1] * len(grid)
    for _ in range(length - 1):
        counts = [
            sum(counts[b] for b in range(a) if 0 < grid[a] - grid[b] <= 1) for a in range(len(grid))
        ]
    return sum(counts)


def enumerate_candidate_polygons(
    total_rank: int,
    g: int,
    denom_bound: int,
    slope_bound,
    cap: int = DEFAULT_ENUM_CAP,
    degree_window: tuple | None = None,
) -> list[HNPolygon]:
    """Every non-semistable polygon of the given rank passing both HN constraints.

    Search space: rank compositions with >= 2 parts, slopes on the grid of
    :func:`slope_grid`, strictly decreasing. The product test depends only on
    ranks and the gap test only on consecutive slopes, so compositions are
    filtered first and slope chains are grown with the gap bound built in.
    ``degree_window=(lo, hi)`` keeps only polygons with lo <= degree <= hi.
    ``cap`` bounds the number of slope chains visited; the count is computed
    before searching.
    """
    if total_rank < 1 or denom_bound < 1 or as_fraction(slope_bound) <= 0:
        raise PreconditionError("total_rank, denom_bound and slope_bound must be positive")
    grid = slope_grid(denom_bound, slope_bound)
    comps = [c for c in compositions(total_rank, 2) if _ranks_pass(c, g)]
    chain_counts: dict[int, int] = {}
    for c in comps:
        if len(c) not in chain_counts:
            chain_counts[len(c)] = _count_gap_chains(grid, len(c))
    estimate = sum(chain_counts[len(c)] for c in comps)
    if estimate > cap:
        raise CapExceeded(estimate, cap, "polygon search")
    lo, hi = (None, None) if degree_window is None else map(as_fraction, degree_window)
    out = []
    for c in comps:
        for slopes in _gap_chains(grid, len(c)):
            p = HNPolygon(tuple(zip(c, slopes)))
            if lo is not None and not lo <= p.degree <= hi:
                continue
            out.append(p)
    out.sort(key=lambda p: (p.ranks, p.slopes))
    return out


def amgm_witness(total_rank: int) -> HNPolygon:
    """Two pieces (ceil(r/2), floor(r/2)) with slopes (1, 0)."""
    a, b = (total_rank + 1) // 2, total_rank // 2
    return HNPolygon.of((a, b), (1, 0))


# -- JSON ---------------------------------------------------------------------


def polygon_to_json(p: HNPolygon) -> dict:
    return {"pieces": [{"rk": r, "mu": str(mu)} for r, mu in p.pieces]}


def polygon_from_json(d: dict) -> HNPolygon:
    try:
        pieces = []
        for piece in d["pieces"]:
            rk = piece["rk"]
            if isinstance(rk, bool) or not isinstance(rk, int):
                raise StructuralError(f"rank must be an integer: {rk!r}")
            pieces.append((rk, rational_from_json(piece["mu"])))
        return HNPolygon(tuple(pieces))
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"bad polygon: {exc}") from exc


def report_to_json(r: ConstraintReport) -> dict:
    return {
        "gap_ok": r.gap_ok,
        "gap_violations": list(r.gap_violations),
        "product_ok": r.product_ok,
        "product_failures": list(r.product_failures),
        "witnesses": [{"i": i, "j": j, "k": k} for i, (j, k) in sorted(r.witnesses.items())],
        "amgm_forced_semistable": r.amgm_forced_semistable,
    }


def report_from_json(d: dict) -> ConstraintReport:
    return ConstraintReport(
        gap_ok=d["gap_ok"],
        gap_violations=tuple(d["gap_violations"]),
        product_ok=d["product_ok"],
        product_failures=tuple(d["product_failures"]),
        witnesses={w["i"]: (w["j"], w["k"]) for w in d["witnesses"]},
        amgm_forced_semistable=d["amgm_forced_semistable"],
    )


def certificate_to_json(c: RankChainCertificate) -> dict:
    opt = lambda x: None if x is None else str(x)  # noqa: E731
    return {
        "ok": c.ok,
        "failed_hypothesis": c.failed_hypothesis,
        "corank": c.corank,
        "section_bound_lhs": opt(c.section_bound_lhs),
        "section_bound_rhs": opt(c.section_bound_rhs),
        "final_bound": opt(c.final_bound),
        "steps": [
            {"label": s.label, "lhs": str(s.lhs), "rel": s.relation, "rhs": str(s.rhs), "holds": s.holds}
            for s in c.steps
        ],
    }
