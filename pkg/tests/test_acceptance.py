"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line with its runtime."""

import itertools
import math
import random
import time
from fractions import Fraction as F

import pytest

from parcalc import covers as cv
from parcalc import hnengine as hn
from parcalc import parabolic as pb

from cli_fixtures import cases, load, run_in_process, run_subprocess
from conftest import random_explicit_bundle, random_shell, random_subbundle


@pytest.fixture
def gate(capsys):
    """Time the body, print one status line, then enforce the runtime limit."""
    state = {}

    def start(number, title, limit):
        state.update(number=number, title=title, limit=limit, t0=time.perf_counter())

    def finish(ok, detail=""):
        elapsed = time.perf_counter() - state["t0"]
        limit = state["limit"]
        passed = ok and (limit is None or elapsed < limit)
        budget = f" (limit {limit} s)" if limit is not None else ""
        with capsys.disabled():
            print(f"\n[{'PASS' if passed else 'FAIL'}] criterion {state['number']}: {state['title']}"
                  f" | {detail} | {elapsed:.2f} s{budget}")
        assert ok, detail
        assert passed, f"runtime {elapsed:.2f} s over {limit} s"

    return start, finish


def test_criterion_1_tensor_dual_identities(gate):
    start, finish = gate
    start(1, "tensor and dual degree identities", 5)
    rng = random.Random(1)
    bad, n = 0, 10_000
    for _ in range(n):
        curve = pb.MarkedCurve(rng.randint(0, 4), rng.randint(0, 3))
        a, b = random_shell(rng, curve), random_shell(rng, curve)
        pa, pb_ = pb.par_deg(a), pb.par_deg(b)
        if pb.par_deg(pb.tensor_shell(a, b)) != pa * b.rank + pb_ * a.rank:
            bad += 1
        if pb.par_deg(pb.dual_shell(a)) != -pa:
            bad += 1
    finish(bad == 0, f"{n} pairs, {bad} violations")


def test_criterion_2_induced_additivity(gate):
    start, finish = gate
    start(2, "induced sub/quotient additivity", 10)
    rng = random.Random(2)
    bad, n = 0, 1000
    for _ in range(n):
        e = random_explicit_bundle(rng, pb.MarkedCurve(rng.randint(0, 3), rng.randint(0, 3)), max_rank=5)
        f = random_subbundle(rng, e)
        total = pb.par_deg(pb.induced_sub_structure(e, f).shell) + pb.par_deg(pb.induced_quotient_structure(e, f).shell)
        bad += total != pb.par_deg(e.shell)
    finish(bad == 0, f"{n} bundles, {bad} violations")


def _grid(lo, hi, denom):
    return sorted({F(p, q) for q in range(1, denom + 1) for p in range(math.ceil(lo * q), math.floor(hi * q) + 1)})


def test_criterion_3_clifford_aggregate(gate):
    start, finish = gate
    start(3, "Clifford aggregate bound over the grid", 30)
    checked = bad = 0
    for g in range(0, 5):
        slopes = sorted(_grid(0, 2 * g, 4), reverse=True)
        for total in range(1, 5):
            for comp in hn.compositions(total):
                for mus in itertools.combinations(slopes, len(comp)):
                    p = hn.HNPolygon.of(comp, mus)
                    deg = sum(r * m for r, m in zip(comp, mus))
                    checked += 1
                    bad += hn.clifford_h0_bound(p, g) > deg / 2 + total
    finish(bad == 0 and checked > 0, f"{checked} polygons, {bad} violations")


def test_criterion_4_rank_chain_soundness(gate):
    """Hypotheses are screened in integers (slopes scaled by 12), so the certifier
    only sees instances that satisfy them; each must certify and obey the bound."""
    start, finish = gate
    start(4, "rank-chain soundness over the grid", 30)
    on_grid = [n for n in range(12) if n % 3 == 0 or n % 4 == 0]  # residues of 12*mu, denominators <= 4
    instances = bad = 0
    for g, strict in itertools.product(range(0, 5), (False, True)):
        for rkV, delta in itertools.product(range(1, 7), range(0, 4)):
            for rkU in range(0, rkV):
                # section bound plus mu(U) <= mu(V) caps mu(V)
                top = F(rkU + delta + (g - 1) * rkV) / (rkV - F(rkU, 2))
                lo_v = 12 * (2 * g - 2) + (1 if strict else 0)
                for nV in range(lo_v, math.floor(12 * top) + 1):
                    if nV % 12 not in on_grid:
                        continue
                    u_range = range(0, min(nV, 24 * g) + 1) if rkU else (0,)
                    for nU in u_range:
                        if rkU and nU % 12 not in on_grid:
                            continue
                        # 2 * 12 * (section bound)
                        if 2 * nV * rkV + 24 * (1 - g) * rkV > nU * rkU + 24 * rkU + 24 * delta:
                            continue
                        instances += 1
                        cert = hn.rank_chain_certify(F(nV, 12), rkV, F(nU, 12), rkU, delta, g, strict)
                        c = rkV - rkU
                        holds = rkV > g * c - delta if strict else rkV >= g * c - delta
                        bad += not (cert.ok and holds)
    finish(bad == 0 and instances > 0, f"{instances} instances, {bad} violations")


def test_criterion_5_amgm_threshold(gate):
    start, finish = gate
    start(5, "AM-GM threshold for g <= 12", 60)
    problems = []
    for g in range(0, 13):
        r = 1
        while r * r < 4 * (g + 1):
            if hn.enumerate_candidate_polygons(r, g, 4, 3):
                problems.append(f"g={g} r={r} non-empty")
            r += 1
        polys = hn.enumerate_candidate_polygons(r, g, 4, 3)
        if hn.amgm_witness(r) not in polys:
            problems.append(f"g={g} r={r} missing witness")
    for g in (2, 3):
        if hn.enumerate_candidate_polygons(3, g, 4, 3) or not hn.enumerate_candidate_polygons(4, g, 4, 3):
            problems.append(f"g={g} rank 3/4 check")
    finish(not problems, "; ".join(problems) or "thresholds reproduced for g = 0..12")


def test_criterion_6_kodaira_parshin_s3(gate):
    start, finish = gate
    start(6, "S3 genus-two counts and example assignment", 5)
    S3 = cv.symmetric(3)
    report = cv.gamma_index_report(2, S3)
    classes = cv.nielsen_classify(cv.enumerate_surface_homs(2, S3))
    pc = lambda s: cv.parse_cycles(s, 3)  # noqa: E731
    h = cv.SurfaceHom(cv.SurfacePresentation(2, 1), S3, (pc("(12)"), cv.identity(3), pc("(13)"), cv.identity(3)))
    ok = (
        report == cv.GammaIndexReport(1296, 1170, 195)
        and len(classes) == 195
        and all(c.size == 6 for c in classes)
        and cv.boundary_image(h) == pc("(123)")
        and cv.kodaira_parshin_admissible(h)
    )
    finish(ok, f"{report}, boundary {cv.format_cycles(cv.boundary_image(h))}")


def test_criterion_7_riemann_hurwitz_floor(gate):
    start, finish = gate
    start(7, "Riemann-Hurwitz genus and genus floor", 1)
    h = cv.riemann_hurwitz_genus(2, 6, 3)
    finish(h == 9 and h * h >= 2 + 1, f"genus {h}, {h * h} >= 3")


def test_criterion_8_nondensity_witness(gate):
    """The witness pair is (a1, a2) with images (1 s; 0 1) and (1 0; s 1).
    A^s B^s and B^s A^s have top-left entries 1 + s^2 and 1, which is the
    s^2 offset; the commutator itself has top-left 1 + s^2 + s^4."""
    start, finish = gate
    start(8, "non-density witness for s = 1..100", 1)
    rep = cv.explicit_nondensity_rep(2, 0, 2)
    m = rep.image_map()
    bad = []
    for s in range(1, 101):
        w = cv.vs_test(rep, s, 1)
        x, y = cv.mat_pow(m["a1"], s), cv.mat_pow(m["a2"], s)
        ok = (
            w is not None
            and w.labels() == ("a1", "a2")
            and w.word_length == 1
            and cv.mat_mul(x, y)[0][0] - cv.mat_mul(y, x)[0][0] == s * s
            and cv.mat_mul(x, y)[0][0] == 1 + s * s
            and w.commutator[0][0] - 1 == s * s * (1 + s * s)
            and w.commutator != cv.mat_identity(2)
        )
        if not ok:
            bad.append(s)
    finish(not bad, f"failures at s={bad}" if bad else "witness (a1, a2) at length 1 for all s")


def test_criterion_9_cli_golden(gate):
    start, finish = gate
    start(9, "CLI golden corpus byte-identical across runs", None)
    paths = cases()
    commands = {load(p)["argv"][0] for p in paths}
    mismatched = []
    for path in paths:
        case = load(path)
        golden = path.with_suffix(".out").read_bytes()
        status, out = run_subprocess(case)
        status2, out2 = run_in_process(case)
        if not (out == golden == out2.encode() and status == status2 == case["exit"]):
            mismatched.append(path.stem)
    from parcalc.cli import COMMANDS

    ok = not mismatched and len(paths) >= 20 and commands == set(COMMANDS)
    finish(ok, f"{len(paths)} fixtures over {len(commands)} subcommands, mismatches {mismatched}")
