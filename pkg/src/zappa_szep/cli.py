"""Command-line front end. Every command reads JSON files and prints one JSON
report on stdout; timing goes to stderr.

Exit codes: 0 ok, 1 a checked claim or cross-method agreement failed,
2 the input was malformed or violated a precondition.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .center import center_via_theorem
from .central_aut import (
    ConditionReport,
    _Ctx,
    _conditions,
    _sort_stack,
    compute_PQRS,
    decompose_images,
    decompose_theta,
    enumerate_Ac_stack,
    stack_keys,
    unstack,
    verify_abcd_product,
)
from .errors import ClaimFailed, GuardExceeded, NotAGroup, TheoremViolation, ZappaSzepError
from .groups import center_bruteforce, hom_violation
from .homs import central_automorphism_images
from .matched_pair import (
    build_external_product,
    group_from_json,
    group_to_json,
    mp_from_json,
    validate_matched_pair,
)
from .order_p5 import CHECKS, build_p5, max_order, run_checks

OK, CLAIM_FAILED, INVALID_INPUT = "ok", "claim-failed", "invalid-input"
EXIT_CODES = {OK: 0, CLAIM_FAILED: 1, INVALID_INPUT: 2}


@dataclass
class CommandResult:
    status: str
    report: dict
    elapsed: float = 0.0  # milliseconds

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


class _InvalidInput(Exception):
    pass


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _InvalidInput(f"cannot read {path}: {exc}") from exc


def _guard(order: int) -> None:
    if order > max_order():
        raise GuardExceeded(f"product order {order} exceeds ZSZ_MAX_ORDER={max_order()}")


def _load_mp(path: str, require_valid: bool = True):
    doc = _load(path)
    if not isinstance(doc, dict):
        raise _InvalidInput("matched-pair document must be a JSON object")
    mp = mp_from_json(doc)
    _guard(mp.H.order * mp.K.order)
    if require_valid:
        rep = validate_matched_pair(mp)
        if not rep.valid:
            raise _InvalidInput(f"not a matched pair: fails {', '.join(rep.failed())}")
    return mp


def _subgroup_json(sub) -> dict:
    return {"order": sub.order, "members": list(sub.members)}


# --- commands ---------------------------------------------------------------------------


def cmd_validate_group(args) -> CommandResult:
    doc = _load(args.file)
    if not isinstance(doc, dict):
        raise _InvalidInput("group document must be a JSON object")
    try:
        G = group_from_json(doc)
    except NotAGroup as exc:
        return CommandResult(CLAIM_FAILED, {"valid": False, "reason": exc.reason, "witness": list(exc.witness)})
    return CommandResult(OK, {"valid": True, "order": G.order, "abelian": G.is_abelian})


def cmd_validate_mp(args) -> CommandResult:
    mp = _load_mp(args.file, require_valid=False)
    rep = validate_matched_pair(mp)
    return CommandResult(OK if rep.valid else CLAIM_FAILED, {"valid": rep.valid, **rep.to_json()})


def cmd_build(args) -> CommandResult:
    zs = build_external_product(_load_mp(args.file))
    doc = group_to_json(zs.product)
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(doc, fh, sort_keys=True)
        return CommandResult(OK, {"order": zs.product.order, "written": args.output})
    return CommandResult(OK, doc)


def cmd_center(args) -> CommandResult:
    mp = _load_mp(args.file)
    zs = build_external_product(mp)
    report: dict = {}
    if args.method in ("theorem", "both"):
        report["theorem"] = _subgroup_json(center_via_theorem(mp, zs))
    if args.method in ("brute", "both"):
        report["brute"] = _subgroup_json(center_bruteforce(zs.product))
    status = OK
    if args.method == "both":
        report["agree"] = report["theorem"] == report["brute"]
        status = OK if report["agree"] else CLAIM_FAILED
    return CommandResult(status, report)


def cmd_autc(args) -> CommandResult:
    mp = _load_mp(args.file)
    zs = build_external_product(mp)
    report: dict = {}
    keys = {}
    if args.method in ("oracle", "both"):
        dec = _sort_stack(decompose_images(central_automorphism_images(zs.product), zs))
        keys["oracle"] = stack_keys(dec)
        report["oracle"] = {"count": int(dec[0].shape[0])}
    if args.method in ("matrix", "both"):
        ac = enumerate_Ac_stack(mp)
        keys["matrix"] = stack_keys(ac)
        report["matrix"] = {"count": int(ac[0].shape[0])}
        if args.list:
            report["matrices"] = [m.to_json() for m in unstack(ac, mp)]
    elif args.list:
        report["matrices"] = [m.to_json() for m in unstack(dec, mp)]
    status = OK
    if args.method == "both":
        report["agree"] = bool(np.array_equal(keys["oracle"], keys["matrix"]))
        status = OK if report["agree"] else CLAIM_FAILED
    return CommandResult(status, report)


def cmd_pqrs(args) -> CommandResult:
    mp = _load_mp(args.file)
    pq = compute_PQRS(mp)
    report = {
        name: {"order": len(getattr(pq, name)), "maps": [np.asarray(m).tolist() for m in getattr(pq, name).members]}
        for name in "PQRS"
    }
    return CommandResult(OK, report)


def cmd_abcd(args) -> CommandResult:
    mp = _load_mp(args.file)
    rep = verify_abcd_product(mp, strict=False)
    broken = rep.hypothesis_holds and not rep.abcd_equals_Ac
    return CommandResult(CLAIM_FAILED if broken else OK, rep.to_json())


def cmd_example(args) -> CommandResult:
    reports = run_checks(args.p, args.check)
    body = {"p": args.p, "reports": [r.to_json() for r in reports]}
    return CommandResult(OK if all(r.ok for r in reports) else CLAIM_FAILED, body)


def cmd_decompose(args) -> CommandResult:
    mp = _load_mp(args.mp_file)
    zs = build_external_product(mp)
    doc = _load(args.theta_file)
    image = doc.get("image") if isinstance(doc, dict) else doc
    try:
        image = np.asarray(image, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise _InvalidInput(f"theta must be a list of integers: {exc}") from exc
    G = zs.product
    if image.shape != (G.order,) or image.min() < 0 or image.max() >= G.order:
        raise _InvalidInput(f"theta must list {G.order} product indices")
    if np.unique(image).size != G.order or hom_violation(G, G, image) is not None:
        raise _InvalidInput("theta is not an automorphism of the product")
    m = decompose_theta(image, zs)  # NotCentral surfaces as invalid input
    conds = ConditionReport(_conditions(_Ctx(mp), *m.arrays()))
    return CommandResult(OK if conds.ok else CLAIM_FAILED, {"matrix": m.to_json(), "conditions": conds.to_json()})


# --- dispatch ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zsz", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-group", help="check the group axioms of a Cayley table")
    p.add_argument("file")
    p.set_defaults(fn=cmd_validate_group)

    p = sub.add_parser("validate-mp", help="check C1-C6 for a matched pair")
    p.add_argument("file")
    p.set_defaults(fn=cmd_validate_mp)

    p = sub.add_parser("build", help="Cayley table of the product")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("center", help="center of the product")
    p.add_argument("file")
    p.add_argument("--method", choices=("theorem", "brute", "both"), default="both")
    p.set_defaults(fn=cmd_center)

    p = sub.add_parser("autc", help="central automorphisms of the product")
    p.add_argument("file")
    p.add_argument("--method", choices=("oracle", "matrix", "both"), default="both")
    p.add_argument("--list", action="store_true", help="include every matrix in the report")
    p.set_defaults(fn=cmd_autc)

    p = sub.add_parser("pqrs", help="the subgroups P, Q, R, S")
    p.add_argument("file")
    p.set_defaults(fn=cmd_pqrs)

    p = sub.add_parser("abcd", help="compare ABCD with the full matrix group")
    p.add_argument("file")
    p.set_defaults(fn=cmd_abcd)

    p = sub.add_parser("example", help="claims about the order p^5 example")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--check", choices=CHECKS + ("all",), default="all")
    p.set_defaults(fn=cmd_example)

    p = sub.add_parser("decompose", help="matrix of a central automorphism")
    p.add_argument("mp_file")
    p.add_argument("theta_file")
    p.set_defaults(fn=cmd_decompose)
    return ap


def dispatch(argv: Optional[Sequence[str]] = None) -> CommandResult:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        result = args.fn(args)
    except ClaimFailed as exc:
        result = CommandResult(CLAIM_FAILED, exc.report.to_json())
    except TheoremViolation as exc:
        detail = exc.report.to_json() if exc.report is not None else None
        result = CommandResult(CLAIM_FAILED, {"error": str(exc), "report": detail})
    except (_InvalidInput, ZappaSzepError) as exc:
        result = CommandResult(INVALID_INPUT, {"error": str(exc), "kind": type(exc).__name__})
    result.elapsed = (time.perf_counter() - start) * 1000.0
    return result


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        result = dispatch(argv)
    except SystemExit as exc:  # argparse usage errors
        return 2 if exc.code else 0
    json.dump({"status": result.status, "report": result.report}, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")
    print(f"elapsed {result.elapsed:.1f} ms", file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
