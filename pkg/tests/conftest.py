from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from parcalc import exactlin as el
from parcalc import parabolic as pb

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def rationals(max_denom=12, lo=-5, hi=5):
    return st.builds(
        lambda q, p: Fraction(p, q),
        st.integers(1, max_denom),
        st.integers(lo * max_denom, hi * max_denom),
    ).filter(lambda x: lo <= x <= hi)


def weights_in_unit(max_denom=12):
    return st.builds(lambda q, p: Fraction(p % q, q), st.integers(1, max_denom), st.integers(0, 10**6))


@st.composite
def point_weights(draw, rank, max_denom=12):
    ws = sorted(set(draw(st.lists(weights_in_unit(max_denom), min_size=1, max_size=rank))))
    # random composition of rank into len(ws) positive parts
    cuts = sorted(draw(st.sets(st.integers(1, rank - 1), min_size=len(ws) - 1, max_size=len(ws) - 1))) if len(ws) > 1 else []
    bounds = [0] + cuts + [rank]
    return pb.PointWeights(tuple((w, b - a) for w, a, b in zip(ws, bounds, bounds[1:])))


@st.composite
def shells(draw, curve=None, max_rank=6, max_points=3, max_denom=12):
    if curve is None:
        curve = pb.MarkedCurve(draw(st.integers(0, 4)), draw(st.integers(0, max_points)))
    rank = draw(st.integers(1, max_rank))
    pws = tuple(draw(point_weights(rank, max_denom)) for _ in range(curve.n_points))
    return pb.ParabolicShell(rank, draw(st.integers(-20, 20)), curve, pws)


@st.composite
def shell_pairs(draw, max_rank=6, max_points=3, max_denom=12):
    curve = pb.MarkedCurve(draw(st.integers(0, 4)), draw(st.integers(0, max_points)))
    return (
        draw(shells(curve, max_rank, max_points, max_denom)),
        draw(shells(curve, max_rank, max_points, max_denom)),
    )


@st.composite
def subspaces(draw, n, dim=None, max_entry=3):
    if dim is None:
        dim = draw(st.integers(0, n))
    rows = draw(
        st.lists(st.lists(st.integers(-max_entry, max_entry), min_size=n, max_size=n), min_size=dim, max_size=dim)
    )
    return el.span(rows, n)


# -- plain-random generators for the large acceptance sweeps -----------------


def random_weights_at_point(rng: random.Random, rank: int, max_denom: int = 12) -> pb.PointWeights:
    k = rng.randint(1, rank)
    ws = set()
    while len(ws) < k:
        q = rng.randint(1, max_denom)
        ws.add(Fraction(rng.randrange(q), q))
        if len(ws) < k and rng.random() < 0.1:
            break
    ws = sorted(ws)
    cuts = sorted(rng.sample(range(1, rank), len(ws) - 1)) if len(ws) > 1 else []
    bounds = [0] + cuts + [rank]
    return pb.PointWeights(tuple((w, b - a) for w, a, b in zip(ws, bounds, bounds[1:])))


def random_shell(rng: random.Random, curve: pb.MarkedCurve, max_rank=6, max_denom=12) -> pb.ParabolicShell:
    rank = rng.randint(1, max_rank)
    pws = tuple(random_weights_at_point(rng, rank, max_denom) for _ in range(curve.n_points))
    return pb.ParabolicShell(rank, rng.randint(-20, 20), curve, pws)


def random_basis(rng: random.Random, n: int) -> list[list[int]]:
    while True:
        rows = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        if el.rank(rows, n) == n:
            return rows


def random_flag(rng: random.Random, n: int, mults: list[int]) -> list[el.Subspace]:
    """Full flag with the given jump dimensions, built from a random basis."""
    basis = random_basis(rng, n)
    chain, remaining = [], n
    chain.append(el.span(basis, n))
    for m in mults:
        remaining -= m
        chain.append(el.span(basis[n - remaining:] if remaining else [], n))
    return chain


def random_explicit_bundle(rng: random.Random, curve: pb.MarkedCurve, max_rank=5, max_denom=12):
    rank = rng.randint(2, max_rank)
    flags, weights = [], []
    for _ in range(curve.n_points):
        pw = random_weights_at_point(rng, rank, max_denom)
        flags.append(random_flag(rng, rank, list(pw.multiplicities)))
        weights.append(list(pw.weights))
    return pb.explicit_bundle(rng.randint(-10, 10), curve, flags, weights, rank)


def random_subbundle(rng: random.Random, e: pb.ExplicitParabolicBundle) -> pb.SubbundleDatum:
    """Random proper subbundle data; half the time aligned with flag steps to force collapses."""
    k = rng.randint(1, e.rank - 1)
    fibers = []
    for chain in e.flags:
        if rng.random() < 0.5:
            pool = [list(v) for step in chain for v in step.basis]
            rng.shuffle(pool)
            rows = []
            for v in pool:
                if el.rank(rows + [v], e.rank) > len(rows):
                    rows.append(v)
                if len(rows) == k:
                    break
        else:
            rows = []
        while el.rank(rows, e.rank) < k:
            v = [rng.randint(-2, 2) for _ in range(e.rank)]
            if el.rank(rows + [v], e.rank) > len(rows):
                rows.append(v)
        fibers.append(el.span(rows, e.rank))
    return pb.SubbundleDatum(k, rng.randint(-10, 10), tuple(fibers))


@pytest.fixture
def rng():
    return random.Random(20261015)
