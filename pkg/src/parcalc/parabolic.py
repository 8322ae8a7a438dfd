"""Parabolic bundles on marked curves, numerically and with explicit flags.

A :class:`ParabolicShell` keeps only what the degree calculus needs: rank,
degree of the underlying bundle, and at each marked point the weights with the
dimensions of the corresponding flag jumps. An :class:`ExplicitParabolicBundle`
adds the flags themselves as subspaces of Q^rank, which is what the induced
sub/quotient structures are computed from.

Weights are exact rationals in [0, 1).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import exactlin as el
from .errors import PreconditionError, StructuralError
from .exactlin import Subspace, as_fraction, rational_from_json


@dataclass(frozen=True)
class MarkedCurve:
    genus: int
    n_points: int = 0

    def __post_init__(self):
        if self.genus < 0 or self.n_points < 0:
            raise StructuralError(f"negative genus or point count: ({self.genus}, {self.n_points})")

    def is_hyperbolic(self) -> bool:
        g, n = self.genus, self.n_points
        return g >= 2 or (g == 1 and n > 0) or (g == 0 and n > 2)

    @property
    def log_canonical_degree(self) -> int:
        """deg of omega_C(D)."""
        return 2 * self.genus - 2 + self.n_points


@dataclass(frozen=True)
class PointWeights:
    """Weights at one marked point, each with the dimension of its flag jump."""

    entries: tuple[tuple[Fraction, int], ...]

    def __post_init__(self):
        entries = tuple((as_fraction(w), int(m)) for w, m in self.entries)
        if not entries:
            raise StructuralError("a marked point needs at least one weight")
        for w, m in entries:
            if not 0 <= w < 1:
                raise StructuralError(f"weight {w} not in [0, 1)")
            if m < 1:
                raise StructuralError(f"multiplicity {m} must be positive")
        ws = [w for w, _ in entries]
        if any(a >= b for a, b in zip(ws, ws[1:])):
            raise StructuralError(f"weights not strictly increasing: {[str(w) for w in ws]}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def merged(cls, pairs: Iterable[tuple[Fraction, int]]) -> PointWeights:
        """Build from unsorted pairs, adding multiplicities of equal weights."""
        acc: dict[Fraction, int] = {}
        for w, m in pairs:
            acc[w] = acc.get(w, 0) + m
        return cls(tuple(sorted(acc.items())))

    @classmethod
    def trivial(cls, rank: int) -> PointWeights:
        return cls(((Fraction(0), rank),))

    @property
    def rank(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(w for w, _ in self.entries)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.entries)

    def contribution(self) -> Fraction:
        return sum((w * m for w, m in self.entries), Fraction(0))

    def mult_at_zero(self) -> int:
        w, m = self.entries[0]
        return m if w == 0 else 0


@dataclass(frozen=True)
class ParabolicShell:
    """Numerical skeleton of a parabolic bundle.

    ``coparabolic`` marks the shell as standing for the coparabolic companion
    of the parabolic bundle it describes; its (copar-)degree is the same number.
    """

    rank: int
    degree0: int
    curve: MarkedCurve
    point_weights: tuple[PointWeights, ...] = ()
    coparabolic: bool = False

    def __post_init__(self):
        if self.rank < 1:
            raise StructuralError(f"rank must be positive, got {self.rank}")
        pw = tuple(p if isinstance(p, PointWeights) else PointWeights(tuple(p)) for p in self.point_weights)
        object.__setattr__(self, "point_weights", pw)
        object.__setattr__(self, "degree0", int(self.degree0))
        if len(pw) != self.curve.n_points:
            raise StructuralError(f"{len(pw)} weight lists for {self.curve.n_points} marked points")
        for j, p in enumerate(pw):
            if p.rank != self.rank:
                raise StructuralError(f"multiplicities at point {j} sum to {p.rank}, rank is {self.rank}")

    @property
    def max_weight(self) -> Fraction:
        return max((w for p in self.point_weights for w in p.weights), default=Fraction(0))

    def is_trivial_structure(self) -> bool:
        return all(p.weights == (0,) for p in self.point_weights)


def trivial_shell(rank: int, degree: int, curve: MarkedCurve) -> ParabolicShell:
    """Vector bundle with the trivial parabolic structure (all weights 0)."""
    return ParabolicShell(rank, degree, curve, tuple(PointWeights.trivial(rank) for _ in range(curve.n_points)))


def par_deg(s: ParabolicShell) -> Fraction:
    return s.degree0 + sum((p.contribution() for p in s.point_weights), Fraction(0))


def copar_deg(s: ParabolicShell) -> Fraction:
    # Coparabolic degree of E-hat is by definition the parabolic degree of E.
    return par_deg(s)


def par_slope(s: ParabolicShell) -> Fraction:
    return par_deg(s) / s.rank


def slope(s: ParabolicShell) -> Fraction:
    """Ordinary slope of the underlying bundle."""
    return Fraction(s.degree0, s.rank)


def slope_excess(s: ParabolicShell) -> Fraction:
    """mu_star - mu; bounded above by n times the largest weight."""
    return par_slope(s) - slope(s)


def _check_same_curve(a: ParabolicShell, b: ParabolicShell) -> None:
    if a.curve != b.curve:
        raise StructuralError(f"shells live on different curves: {a.curve} vs {b.curve}")


def tensor_shell(a: ParabolicShell, b: ParabolicShell) -> ParabolicShell:
    _check_same_curve(a, b)
    carry = 0
    points = []
    for pa, pb in zip(a.point_weights, b.point_weights):
        pairs = []
        for wa, ma in pa.entries:
            for wb, mb in pb.entries:
                total = wa + wb
                whole = math.floor(total)
                carry += whole * ma * mb
                pairs.append((total - whole, ma * mb))
        points.append(PointWeights.merged(pairs))
    out = ParabolicShell(
        a.rank * b.rank,
        a.degree0 * b.rank + b.degree0 * a.rank + carry,
        a.curve,
        tuple(points),
        a.coparabolic or b.coparabolic,
    )
    assert par_deg(out) == par_deg(a) * b.rank + par_deg(b) * a.rank
    return out


def dual_shell(a: ParabolicShell) -> ParabolicShell:
    points = []
    shift = 0
    for p in a.point_weights:
        shift += a.rank - p.mult_at_zero()
        points.append(PointWeights.merged((1 - w if w else w, m) for w, m in p.entries))
    out = dataclasses.replace(a, degree0=-a.degree0 - shift, point_weights=tuple(points))
    assert par_deg(out) == -par_deg(a)
    return out


def weight_shift(a: ParabolicShell, t) -> ParabolicShell:
    """Shell of E[t], the filtration re-indexed by E[t]_b = E_{t+b}, for t >= 0.

    Weights move to frac(w - t); each flag step whose weight is passed by the
    fractional part of t drops out of the degree-0 piece, and every whole unit
    of t twists by O(-D). par_deg therefore decreases by exactly n * rank * t.
    """
    t = as_fraction(t)
    if t < 0:
        raise PreconditionError(f"negative weight shift {t} is not supported")
    whole = math.floor(t)
    frac = t - whole
    points = []
    drop = whole * a.curve.n_points * a.rank
    for p in a.point_weights:
        pairs = []
        for w, m in p.entries:
            if w < frac:
                drop += m
                pairs.append((w - frac + 1, m))
            else:
                pairs.append((w - frac, m))
        # frac(w - t) is injective on [0, 1), so merging never adds anything.
        points.append(PointWeights.merged(pairs))
    out = dataclasses.replace(a, degree0=a.degree0 - drop, point_weights=tuple(points))
    assert par_deg(out) == par_deg(a) - a.curve.n_points * a.rank * t
    return out


def log_canonical_shell(curve: MarkedCurve) -> ParabolicShell:
    """omega_C(D) with the trivial structure."""
    return trivial_shell(1, curve.log_canonical_degree, curve)


def serre_twist(a: ParabolicShell) -> ParabolicShell:
    """Shell of (E^vee)-hat tensor omega_C(D), the Serre-dual partner of ``a``."""
    out = tensor_shell(dual_shell(a), log_canonical_shell(a.curve))
    out = dataclasses.replace(out, coparabolic=not a.coparabolic)
    assert par_slope(out) == a.curve.log_canonical_degree - par_slope(a)
    return out


# -- explicit flags -----------------------------------------------------------


@dataclass(frozen=True)
class ExplicitParabolicBundle:
    """A shell together with its flags.

    ``flags[j]`` is the full chain E^1_j = Q^rank > E^2_j > ... > E^{n_j+1}_j = 0,
    so it has one more entry than there are weights at point j.
    """

    shell: ParabolicShell
    flags: tuple[tuple[Subspace, ...], ...]

    def __post_init__(self):
        s = self.shell
        if len(self.flags) != s.curve.n_points:
            raise StructuralError(f"{len(self.flags)} flags for {s.curve.n_points} marked points")
        for j, (chain, pw) in enumerate(zip(self.flags, s.point_weights)):
            if len(chain) != len(pw.entries) + 1:
                raise StructuralError(f"point {j}: flag has {len(chain)} steps for {len(pw.entries)} weights")
            if any(sub.ambient_dim != s.rank for sub in chain):
                raise StructuralError(f"point {j}: flag step in wrong ambient dimension")
            if chain[0].dim != s.rank or chain[-1].dim != 0:
                raise StructuralError(f"point {j}: flag must run from the full fiber to 0")
            for k, (big, small) in enumerate(zip(chain, chain[1:])):
                if not el.is_subspace(small, big) or big.dim - small.dim != pw.entries[k][1]:
                    raise StructuralError(f"point {j}: step {k + 1} is not a jump of dimension {pw.entries[k][1]}")

    @property
    def rank(self) -> int:
        return self.shell.rank

    @property
    def degree0(self) -> int:
        return self.shell.degree0


def explicit_bundle(
    degree0: int,
    curve: MarkedCurve,
    flags: Sequence[Sequence[Subspace]],
    weights: Sequence[Sequence],
    rank: int | None = None,
) -> ExplicitParabolicBundle:
    """Assemble a bundle from flags and weights, reading multiplicities off the flags."""
    if rank is None:
        if not flags:
            raise StructuralError("rank cannot be inferred without marked points")
        rank = flags[0][0].ambient_dim
    pws = []
    for chain, ws in zip(flags, weights):
        if len(ws) != len(chain) - 1:
            raise StructuralError("need exactly one weight per flag step")
        pws.append(PointWeights(tuple((as_fraction(w), a.dim - b.dim) for w, a, b in zip(ws, chain, chain[1:]))))
    shell = ParabolicShell(rank, degree0, curve, tuple(pws))
    return ExplicitParabolicBundle(shell, tuple(tuple(c) for c in flags))


@dataclass(frozen=True)
class SubbundleDatum:
    """Fiber data of a subbundle F of E, with its degree supplied by the caller."""

    sub_rank: int
    sub_degree0: int
    fibers: tuple[Subspace, ...] = field(default=())

    def __post_init__(self):
        if self.sub_rank < 1:
            raise PreconditionError("a subbundle must have positive rank")
        for j, f in enumerate(self.fibers):
            if f.dim != self.sub_rank:
                raise StructuralError(f"fiber {j} has dimension {f.dim}, expected {self.sub_rank}")


def _check_subbundle(e: ExplicitParabolicBundle, f: SubbundleDatum) -> None:
    if f.sub_rank >= e.rank:
        raise PreconditionError(f"subbundle rank {f.sub_rank} is not below bundle rank {e.rank}")
    if len(f.fibers) != len(e.flags):
        raise StructuralError(f"{len(f.fibers)} subbundle fibers for {len(e.flags)} marked points")
    for j, fib in enumerate(f.fibers):
        if fib.ambient_dim != e.rank:
            raise StructuralError(f"subbundle fiber {j} lives in dimension {fib.ambient_dim}, not {e.rank}")


def _collapse(steps: list[Subspace], weights: tuple[Fraction, ...]) -> tuple[list[Subspace], list[Fraction]]:
    """Drop repeated steps; each surviving nonzero step keeps the largest weight realizing it."""
    chain: list[Subspace] = []
    ws: list[Fraction] = []
    for k, step in enumerate(steps):
        w = weights[k] if k < len(weights) else None
        if chain and chain[-1] == step:
            if w is not None and step.dim > 0:
                ws[-1] = max(ws[-1], w)
            continue
        chain.append(step)
        if w is not None and step.dim > 0:
            ws.append(w)
    return chain, ws


def induced_sub_structure(e: ExplicitParabolicBundle, f: SubbundleDatum) -> ExplicitParabolicBundle:
    """Parabolic structure induced on F: flag E^k cap F, max weight per distinct step.

    Subspaces are returned in the ambient coordinates of E restricted to F's
    fiber, re-expressed in a basis of F's fiber (the RREF basis), so the result
    lives in Q^sub_rank.
    """
    _check_subbundle(e, f)
    flags, weights = [], []
    for chain, pw, fib in zip(e.flags, e.shell.point_weights, f.fibers):
        steps = [el.intersect(step, fib) for step in chain]
        collapsed, ws = _collapse(steps, pw.weights)
        coords = _coordinates_in(fib)
        flags.append([el.span([coords(v) for v in s.basis], f.sub_rank) for s in collapsed])
        weights.append(ws)
    return explicit_bundle(f.sub_degree0, e.shell.curve, flags, weights, f.sub_rank)


def induced_quotient_structure(e: ExplicitParabolicBundle, f: SubbundleDatum) -> ExplicitParabolicBundle:
    """Parabolic structure induced on E/F: flag (E^k + F)/F, max weight per distinct step."""
    _check_subbundle(e, f)
    flags, weights = [], []
    for chain, pw, fib in zip(e.flags, e.shell.point_weights, f.fibers):
        steps = [el.project_to_quotient(step, fib) for step in chain]
        collapsed, ws = _collapse(steps, pw.weights)
        flags.append(collapsed)
        weights.append(ws)
    return explicit_bundle(e.degree0 - f.sub_degree0, e.shell.curve, flags, weights, e.rank - f.sub_rank)


def _coordinates_in(sub: Subspace):
    """Return v -> coordinates of v (assumed in ``sub``) w.r.t. sub's RREF basis.

    In RREF the coordinate on basis row i is the entry of v at that row's pivot.
    """
    pivots = [next(c for c, x in enumerate(row) if x != 0) for row in sub.basis]
    return lambda v: tuple(v[p] for p in pivots)


# -- JSON ---------------------------------------------------------------------


def curve_to_json(c: MarkedCurve) -> dict:
    return {"g": c.genus, "n": c.n_points}


def curve_from_json(d: dict) -> MarkedCurve:
    try:
        return MarkedCurve(_int(d["g"]), _int(d["n"]))
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"bad curve: {d!r}") from exc


def _int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise StructuralError(f"expected an integer, got {x!r}")
    return x


def shell_to_json(s: ParabolicShell) -> dict:
    out = {
        "rank": s.rank,
        "degree0": s.degree0,
        "curve": curve_to_json(s.curve),
        "points": [[{"w": str(w), "m": m} for w, m in p.entries] for p in s.point_weights],
    }
    if s.coparabolic:
        out["copar"] = True
    return out


def shell_from_json(d: dict) -> ParabolicShell:
    try:
        points = tuple(
            PointWeights(tuple((rational_from_json(e["w"]), _int(e["m"])) for e in p)) for p in d["points"]
        )
        return ParabolicShell(
            _int(d["rank"]), _int(d["degree0"]), curve_from_json(d["curve"]), points, bool(d.get("copar", False))
        )
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"bad shell: {exc}") from exc


def subspace_to_json(s: Subspace) -> list:
    return [[str(x) for x in row] for row in s.basis]


def subspace_from_json(rows: list, ambient_dim: int) -> Subspace:
    try:
        return el.span([[rational_from_json(x) for x in row] for row in rows], ambient_dim)
    except TypeError as exc:
        raise StructuralError(f"bad subspace: {rows!r}") from exc


def bundle_to_json(e: ExplicitParabolicBundle) -> dict:
    return {
        "degree0": e.degree0,
        "curve": curve_to_json(e.shell.curve),
        "rank": e.rank,
        "points": [
            {"weights": [str(w) for w in pw.weights], "flag": [subspace_to_json(s) for s in chain]}
            for chain, pw in zip(e.flags, e.shell.point_weights)
        ],
    }


def bundle_from_json(d: dict) -> ExplicitParabolicBundle:
    try:
        rank = _int(d["rank"])
        curve = curve_from_json(d["curve"])
        flags = [[subspace_from_json(s, rank) for s in p["flag"]] for p in d["points"]]
        weights = [p["weights"] for p in d["points"]]
        return explicit_bundle(_int(d["degree0"]), curve, flags, [[rational_from_json(w) for w in ws] for ws in weights], rank)
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"bad bundle: {exc}") from exc


def subbundle_from_json(d: dict, ambient_dim: int) -> SubbundleDatum:
    try:
        fibers = tuple(subspace_from_json(f, ambient_dim) for f in d["fibers"])
        return SubbundleDatum(_int(d["sub_rank"]), _int(d["sub_degree0"]), fibers)
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"bad subbundle datum: {exc}") from exc


def subbundle_to_json(f: SubbundleDatum) -> dict:
    return {"sub_rank": f.sub_rank, "sub_degree0": f.sub_degree0, "fibers": [subspace_to_json(s) for s in f.fibers]}
