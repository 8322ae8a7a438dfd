"""Command-line front end: JSON in, JSON out.

Exit status 0 on success, 1 on a precondition failure or an exceeded cap,
2 on malformed input. Errors are printed as {"error": code, "detail": ...}.
Rationals are always JSON strings ("p/q" or an integer string).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Callable

from . import covers as cv
from . import hnengine as hn
from . import parabolic as pb
from .errors import CapExceeded, PreconditionError, StructuralError
from .exactlin import rational_from_json

CAP_ENV = "PARCALC_CAP"


def default_cap(fallback: int) -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError as exc:
        raise StructuralError(f"{CAP_ENV}={raw!r} is not an integer") from exc


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _read_input(args) -> object:
    if args.json is not None:
        text = args.json
    elif args.input is not None:
        with open(args.input) as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"invalid JSON: {exc}") from exc


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise StructuralError(f"--{name.replace('_', '-')} is required")


# -- subcommands --------------------------------------------------------------


def cmd_pardeg(args):
    s = pb.shell_from_json(_read_input(args))
    return {"par_deg": str(pb.par_deg(s))}


def cmd_tensor(args):
    d = _read_input(args)
    return pb.shell_to_json(pb.tensor_shell(pb.shell_from_json(d["a"]), pb.shell_from_json(d["b"])))


def cmd_dual(args):
    return pb.shell_to_json(pb.dual_shell(pb.shell_from_json(_read_input(args))))


def cmd_shift(args):
    d = _read_input(args)
    t = args.t if args.t is not None else d.get("t")
    if t is None:
        raise StructuralError("shift amount t missing (use --t or a \"t\" key)")
    return pb.shell_to_json(pb.weight_shift(pb.shell_from_json(d["shell"]), rational_from_json(t)))


def cmd_serre_twist(args):
    return pb.shell_to_json(pb.serre_twist(pb.shell_from_json(_read_input(args))))


def _induce(args, fn):
    d = _read_input(args)
    e = pb.bundle_from_json(d["bundle"])
    f = pb.subbundle_from_json(d["sub"], e.rank)
    out = fn(e, f)
    res = pb.bundle_to_json(out)
    res["par_deg"] = str(pb.par_deg(out.shell))
    return res


def cmd_induce_sub(args):
    return _induce(args, pb.induced_sub_structure)


def cmd_induce_quot(args):
    return _induce(args, pb.induced_quotient_structure)


def cmd_clifford(args):
    _need(args, "g")
    p = hn.polygon_from_json(_read_input(args))
    bound = hn.clifford_h0_bound(p, args.g)
    return {"bound": str(bound), "aggregate": str(p.degree / 2 + p.total_rank)}


def cmd_rr(args):
    _need(args, "g", "rank", "deg")
    return {"lower_bound": str(hn.rr_lower_bound(rational_from_json(args.deg), args.rank, args.g))}


def cmd_rank_chain(args):
    d = _read_input(args)
    try:
        cert = hn.rank_chain_certify(
            rational_from_json(d["muV"]), int(d["rkV"]), rational_from_json(d["muU"]), int(d["rkU"]),
            int(d["delta"]), int(d["g"]), bool(d.get("strict", False)),
        )
    except KeyError as exc:
        raise StructuralError(f"missing key {exc}") from exc
    return hn.certificate_to_json(cert)


def cmd_hn_check(args):
    _need(args, "g")
    p = hn.polygon_from_json(_read_input(args))
    return hn.report_to_json(hn.hn_constraints_check(p, args.g))


def cmd_hn_enumerate(args):
    _need(args, "g", "rank")
    cap = args.cap if args.cap is not None else default_cap(hn.DEFAULT_ENUM_CAP)
    polys = hn.enumerate_candidate_polygons(
        args.rank, args.g, args.denom_bound, rational_from_json(args.slope_bound), cap=cap
    )
    return {"count": len(polys), "polygons": [hn.polygon_to_json(p) for p in polys]}


def cmd_semistable_forced(args):
    _need(args, "g", "rank")
    return {"semistable_forced": hn.semistable_forced(args.rank, args.g)}


def _group(args) -> cv.PermGroup:
    _need(args, "group")
    return cv.named_group(args.group)


def cmd_covers_enumerate(args):
    _need(args, "g")
    G = _group(args)
    cap = args.cap if args.cap is not None else default_cap(cv.DEFAULT_HOM_CAP)
    rows = []
    for h in cv.enumerate_surface_homs(args.g, G, cap):
        b = cv.boundary_image(h)
        if args.admissible_only and not cv.kodaira_parshin_admissible(h):
            continue
        rows.append({"images": cv.hom_to_json(h), "boundary": cv.format_cycles(b)})
    return {"group": G.label(), "order": G.order, "count": len(rows), "homs": rows}


def cmd_covers_classify(args):
    _need(args, "g")
    G = _group(args)
    cap = args.cap if args.cap is not None else default_cap(cv.DEFAULT_HOM_CAP)
    report = cv.gamma_index_report(args.g, G, cap)
    homs = list(cv.enumerate_surface_homs(args.g, G, cap))
    classes = cv.nielsen_classify(homs, surjective_only=not args.all)
    return {
        "group": G.label(),
        "center_free": G.is_center_free(),
        "hom_count": report.hom_count,
        "epi_count": report.epi_count,
        "nielsen_class_count": report.nielsen_class_count,
        "classes": [
            {
                "rep": cv.hom_to_json(c.representative),
                "size": c.size,
                "boundary": cv.format_cycles(cv.boundary_image(c.representative)),
            }
            for c in classes
        ],
    }


def cmd_covers_rh(args):
    _need(args, "g", "order", "e")
    return {"genus": cv.riemann_hurwitz_genus(args.g, args.order, args.e)}


def cmd_rep_vs_test(args):
    _need(args, "g", "n", "s")
    rank = args.rank if args.rank is not None else 2
    rep = cv.explicit_nondensity_rep(args.g, args.n, rank)
    res = cv.witness_to_json(cv.vs_test(rep, args.s, args.word_bound))
    res["rep"] = cv.rep_to_json(rep)
    res["relator_image"] = cv.matrix_to_json(cv.relator_image(rep))
    return res


COMMANDS: dict[str, tuple[Callable, str]] = {
    "pardeg": (cmd_pardeg, "parabolic degree of a shell"),
    "tensor": (cmd_tensor, "tensor product of shells {\"a\":..., \"b\":...}"),
    "dual": (cmd_dual, "dual shell"),
    "shift": (cmd_shift, "weight shift E[t] of {\"shell\":..., \"t\":\"p/q\"}"),
    "serre-twist": (cmd_serre_twist, "dual tensor omega_C(D)"),
    "induce-sub": (cmd_induce_sub, "induced structure on a subbundle {\"bundle\":..., \"sub\":...}"),
    "induce-quot": (cmd_induce_quot, "induced structure on the quotient"),
    "clifford": (cmd_clifford, "piecewise h^0 bound of an HN polygon"),
    "rr": (cmd_rr, "Riemann-Roch lower bound deg + (1-g) rk"),
    "rank-chain": (cmd_rank_chain, "certify rk V >= g (rk V - rk U) - delta"),
    "hn-check": (cmd_hn_check, "HN constraint predicates of a polygon"),
    "hn-enumerate": (cmd_hn_enumerate, "all polygons passing the HN constraints"),
    "semistable-forced": (cmd_semistable_forced, "is rank^2 < 4(g+1)"),
    "covers-enumerate": (cmd_covers_enumerate, "homomorphisms from the once-punctured surface group"),
    "covers-classify": (cmd_covers_classify, "hom/epi/Nielsen-class counts"),
    "covers-rh": (cmd_covers_rh, "Riemann-Hurwitz genus of a one-point-branched G-cover"),
    "rep-vs-test": (cmd_rep_vs_test, "search for a witness outside V_s"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parcalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", help="inline JSON input")
        p.add_argument("--input", metavar="FILE", help="read JSON input from FILE (default: stdin)")
        p.add_argument("--output", metavar="FILE", help="write the result to FILE")
        p.add_argument("--g", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--rank", type=int)
        p.add_argument("--deg")
        p.add_argument("--t")
        p.add_argument("--denom-bound", type=int, default=4)
        p.add_argument("--slope-bound", default="3")
        p.add_argument("--group", help='S3, S4, A5, Cn, or generators like "(1,2);(1,2,3)"')
        p.add_argument("--order", type=int)
        p.add_argument("--e", type=int)
        p.add_argument("--s", type=int)
        p.add_argument("--word-bound", type=int, default=1)
        p.add_argument(
            "--cap",
            type=int,
            help=f"enumeration cap (defaults: polygons {hn.DEFAULT_ENUM_CAP}, homs {cv.DEFAULT_HOM_CAP}; "
            f"${CAP_ENV} overrides)",
        )
        p.add_argument("--all", action="store_true", help="covers-classify: include non-surjective homs")
        p.add_argument("--admissible-only", action="store_true")
    return parser


def run(argv: list[str]) -> tuple[int, str]:
    """Execute one command; return (exit status, text written to the output sink)."""
    args = build_parser().parse_args(argv)
    fn = COMMANDS[args.command][0]
    try:
        result = fn(args)
    except (PreconditionError, CapExceeded) as exc:
        return 1, dumps({"error": exc.code, "detail": exc.detail})
    except StructuralError as exc:
        return 2, dumps({"error": exc.code, "detail": exc.detail})
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        return 2, dumps({"error": "malformed", "detail": f"{type(exc).__name__}: {exc}"})
    text = dumps(result)
    return 0, text


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    status, text = run(argv)
    out_path = build_parser().parse_args(argv).output
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
