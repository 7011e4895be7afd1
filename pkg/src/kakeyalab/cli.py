"""Command-line entry point.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import comb
from pathlib import Path

import numpy as np

from . import __version__
from .codes import code_dims, highdim_kakeya_audit, highdim_sweep, restriction_equality_check
from .galois import Field, make_field, prime_power
from .geometry import PointSet, plane
from .kakeya import (
    KakeyaError,
    analysis_report,
    conic_plus_external_point,
    construct_hyperoval_kakeya,
    construct_oval_kakeya,
    intersection_spectrum,
    random_config,
    verify_incidence_formula,
)
from .nuclei import internal_nuclei, is_conic_plus_external_point, verify_bk
from .search import (
    bound_ladder,
    closed_form_minimum,
    dual_blocking_check,
    min_kakeya,
    minimal_dual_blocking_enumeration,
)
from .segre import (
    conic_relation_census,
    one_tangent_points,
    random_admissible_pair,
    segre_products,
    triple_point_census,
    verify_mu_lambda,
)


class UsageError(Exception):
    pass


def _field(args) -> Field:
    if args.q is not None:
        if args.p is not None or args.t is not None:
            raise UsageError("give either --q or --p/--t")
        try:
            p, t = prime_power(args.q)
        except ValueError as e:
            raise UsageError(str(e)) from None
    elif args.p is not None:
        p, t = args.p, args.t or 1
    else:
        raise UsageError("a field is required: --q Q or --p P [--t T]")
    try:
        return make_field(p, t)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _read_pointset(path: str) -> PointSet:
    try:
        return PointSet.from_json(Path(path).read_text())
    except (OSError, ValueError, KeyError) as e:
        raise UsageError(f"cannot read point set from {path}: {e}") from None


def _on_off(value: str) -> bool:
    return value == "on"


# ------------------------------------------------------------- subcommands

def cmd_construct(args) -> dict:
    F = _field(args)
    try:
        if args.kind == "hyperoval":
            config = construct_hyperoval_kakeya(F)
        else:
            config = construct_oval_kakeya(F, args.tangent_choice)
    except KakeyaError as e:
        raise UsageError(str(e)) from None
    report = analysis_report(config, args.kind)
    expected = closed_form_minimum(F.q)
    report["expected_size"] = expected
    report["holds"] = report["size"] == expected and all(c["holds"] for c in report["identities_checked"])
    return report


def cmd_verify(args) -> dict:
    F = _field(args)
    P = plane(F)
    rng = np.random.default_rng(args.seed)
    failures = []
    for _ in range(args.samples):
        c = random_config(P, rng)
        check = verify_incidence_formula(c)
        if not check.holds:
            failures.append({"config": c.to_dict(), **check.to_dict()})
    return {"samples": args.samples, "failures": failures, "holds": not failures}


def cmd_spectrum(args) -> dict:
    F = _field(args)
    if args.input:
        omega = _read_pointset(args.input)
        if omega.geometry != (2, F.p, F.t):
            raise UsageError("point set geometry does not match --q")
    else:
        try:
            omega = conic_plus_external_point(plane(F))
        except KakeyaError as e:
            raise UsageError(str(e)) from None
    spec = intersection_spectrum(omega)
    out = {"set": omega.to_dict(), **spec.to_dict(),
           "moments": [m.to_dict() for m in spec.moments()]}
    if len(omega) == F.q + 2:
        out["nuclei"] = internal_nuclei(omega)
    out["holds"] = all(m["holds"] for m in out["moments"])
    return out


def cmd_nuclei(args) -> dict:
    F = _field(args)
    try:
        report = verify_bk(F, args.mode, samples=args.samples, seed=args.seed, source=args.source)
    except KakeyaError as e:
        raise UsageError(str(e)) from None
    return report


def cmd_segre(args) -> dict:
    F = _field(args)
    P = plane(F)
    if args.check == "products":
        rng = np.random.default_rng(args.seed)
        bad = 0
        for _ in range(args.samples):
            X, frame = random_admissible_pair(P, rng)
            pr = segre_products(X, frame)
            bad += F.prod([pr.p1, pr.p2, pr.p3]) != 1
        return {"check": "products", "samples": args.samples, "failures": bad, "holds": bad == 0}
    if args.check == "triple-point":
        rng = np.random.default_rng(args.seed)
        worst = 0
        for _ in range(args.samples):
            rep = triple_point_census(random_config(P, rng))
            worst = max(worst, len(rep["exceptional_points"]))
        return {"check": "triple-point", "samples": args.samples, "max_exceptions": worst,
                "in_hypothesis": F.q % 2 == 1, "holds": worst <= 1 if F.q % 2 else None}
    try:
        omega = conic_plus_external_point(P)
    except KakeyaError as e:
        raise UsageError(str(e)) from None
    if args.check == "mu-lambda":
        rows = [verify_mu_lambda(omega, U) for U in one_tangent_points(omega)]
        return {"check": "mu-lambda", "omega": omega.to_dict(), "points": rows,
                "holds": all(all(r["checks"].values()) for r in rows)}
    rows = conic_relation_census(omega)
    return {"check": "conic", "omega": omega.to_dict(), "frames": rows, "holds": all(r["holds"] for r in rows)}


def cmd_search(args) -> dict:
    F = _field(args)
    res = min_kakeya(F, prune=_on_off(args.prune), symmetry=_on_off(args.symmetry),
                     workers=args.workers, node_budget=args.node_budget)
    out = res.to_dict(max_witnesses=args.witnesses)
    out["closed_form"] = closed_form_minimum(F.q)
    if args.check_witnesses and F.q % 2:
        from .nuclei import kakeya_to_omega

        ok = all(is_conic_plus_external_point(kakeya_to_omega(w).omega)["is_conic_plus_external"]
                 for w in res.witnesses)
        out["witnesses_conic_plus_external"] = ok
    out["holds"] = res.exact and res.k == out["closed_form"] and out.get("witnesses_conic_plus_external", True)
    return out


def cmd_bounds(args) -> dict:
    F = _field(args)
    k = None
    if args.search:
        k = min_kakeya(F, prune=True, symmetry=True).k
    try:
        return bound_ladder(F.q, k)
    except KakeyaError as e:
        raise UsageError(str(e)) from None


def cmd_dual_blocking(args) -> dict:
    F = _field(args)
    if args.input:
        S = _read_pointset(args.input)
        rep = dual_blocking_check(S)
        return {**rep.to_dict(), "holds": True}
    try:
        out = minimal_dual_blocking_enumeration(F)
    except KakeyaError as e:
        raise UsageError(str(e)) from None
    reports = out.pop("reports")
    out["sets"] = [r.to_dict() for r in reports]
    out["holds"] = out["other_count"] == 0 and out["min_dual_blocking_size"] == F.q * (F.q + 1) // 2
    return out


def cmd_rank(args) -> dict:
    F = _field(args)
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    dims = code_dims(args.n - 1, F)
    out = dims.to_dict()
    out["n"] = args.n
    out["dvir_bound"] = comb(F.q + args.n - 1, args.n)
    if args.restriction:
        out["restriction"] = restriction_equality_check(args.n, F)
    out["holds"] = all(dims.checks().values()) and out.get("restriction", {}).get("holds", True)
    return out


def cmd_audit(args) -> dict:
    F = _field(args)
    if args.input:
        K = _read_pointset(args.input)
        try:
            return highdim_kakeya_audit(args.n, F, K)
        except ValueError as e:
            raise UsageError(str(e)) from None
    return highdim_sweep(args.n, F, samples=None if args.exhaustive else args.samples, seed=args.seed)


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "nuclei": cmd_nuclei,
    "segre": cmd_segre,
    "search-min": cmd_search,
    "bounds": cmd_bounds,
    "dual-blocking": cmd_dual_blocking,
    "rank-bound": cmd_rank,
    "audit-highdim": cmd_audit,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, help="field order (prime power)")
    common.add_argument("--p", type=int, help="characteristic")
    common.add_argument("--t", type=int, help="extension degree")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--dump-field-tables", metavar="DIR",
                        help="also write add.csv and mul.csv of the field to DIR")

    parser = argparse.ArgumentParser(prog="kakeyalab", description="Finite field Kakeya experiments")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("construct", parents=[common], help="build a hyperoval or oval Kakeya set")
    s.add_argument("--kind", choices=["hyperoval", "oval"], required=True)
    s.add_argument("--tangent-choice", type=int, help="line index for l_A (oval only)")

    s = sub.add_parser("verify", parents=[common], help="incidence formula on random configurations")
    s.add_argument("--samples", type=int, default=1000)

    s = sub.add_parser("spectrum", parents=[common], help="intersection numbers of a point set")
    s.add_argument("--input", help="PointSet JSON; default: conic plus external point")

    s = sub.add_parser("nuclei", parents=[common], help="maximum number of internal nuclei")
    s.add_argument("--mode", choices=["exhaustive", "random"], default="exhaustive")
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--source", choices=["uniform", "kakeya"], default="uniform")

    s = sub.add_parser("segre", parents=[common], help="triple-product identities")
    s.add_argument("--check", choices=["products", "mu-lambda", "conic", "triple-point"], required=True)
    s.add_argument("--samples", type=int, default=1000)

    s = sub.add_parser("search-min", parents=[common], help="exact minimum Kakeya size")
    s.add_argument("--prune", choices=["on", "off"], default="on")
    s.add_argument("--symmetry", choices=["on", "off"], default="off")
    s.add_argument("--witnesses", type=int, default=10, help="number of witnesses to print")
    s.add_argument("--node-budget", type=int)
    s.add_argument("--check-witnesses", action="store_true",
                   help="test that each witness dualizes to a conic plus an external point")

    s = sub.add_parser("bounds", parents=[common], help="lower bound ladder for odd q")
    s.add_argument("--search", action="store_true", help="also compute k(q) by search")

    s = sub.add_parser("dual-blocking", parents=[common], help="minimal dual blocking sets (q=3)")
    s.add_argument("--input", help="PointSet JSON to test instead of enumerating")

    s = sub.add_parser("rank-bound", parents=[common], help="code dimension bound")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--restriction", action="store_true", help="also check the restriction equality")

    s = sub.add_parser("audit-highdim", parents=[common], help="audit Besicovitch sets in AG(n,q)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--input", help="PointSet JSON of affine points")
    s.add_argument("--exhaustive", action="store_true")
    s.add_argument("--samples", type=int, default=1000)
    return parser


def _to_csv(command: str, report: dict) -> str:
    if "a" not in report:
        raise UsageError(f"csv output is only available for spectra, not {command}")
    lines = ["i,a_i"] + [f"{i},{v}" for i, v in enumerate(report["a"])]
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        F = _field(args)
        report = COMMANDS[args.command](args)
        if args.dump_field_tables:
            d = Path(args.dump_field_tables)
            d.mkdir(parents=True, exist_ok=True)
            (d / "add.csv").write_text(F.to_csv("add"))
            (d / "mul.csv").write_text(F.to_csv("mul"))
        report = {**report, "command": args.command, "p": F.p, "t": F.t, "q": F.q,
                  "version": __version__, "seed": args.seed}
        text = _to_csv(args.command, report) if args.format == "csv" else json.dumps(report, indent=2, sort_keys=True) + "\n"
    except UsageError as e:
        print(f"kakeyalab: error: {e}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if report.get("holds", True) is not False else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
