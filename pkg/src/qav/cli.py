"""Command-line entry point: runs named verification suites and prints
deterministic reports.

Exit codes: 0 when every executed check passes, 1 when any check fails,
2 on usage or resource errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import lop, rmatrix, vecrep
from .liedata import AlgebraData, check_cartan
from .rmatrix import ResourceBoundError
from .series import verify_fu_product

SUITES = (
    "cartan",
    "crossing",
    "drinfeld-rep",
    "eiprei",
    "f-series",
    "gauss",
    "lowrank",
    "main-structure",
    "psi",
    "relrbar",
    "unitarity",
    "ybe",
    "zseries",
)

_HEADER_NOTE = (
    "checks are run in the vector representation (central charge 0); "
    "a pass verifies necessity of the identities, not the abstract algebra"
)


def _skip(name, reason):
    return [{"name": name, "status": "skipped", "reason": reason}]


def _run_suite(suite, alg, K, W):
    if suite == "ybe":
        return rmatrix.check_ybe(alg)
    if suite == "unitarity":
        return rmatrix.check_unitarity(alg)
    if suite == "crossing":
        return rmatrix.check_crossing(alg, order=K)
    if suite == "cartan":
        return check_cartan(alg)
    if suite == "f-series":
        return verify_fu_product(alg, K, K)["checks"]
    if suite == "drinfeld-rep":
        return vecrep.check_drinfeld_window(alg, window=W)
    if suite == "gauss":
        return lop.check_gauss(alg, K)
    if suite == "lowrank":
        if (alg.type, alg.n) not in (("B", 1), ("D", 2)):
            return _skip(
                f"low-rank battery, {alg}",
                "defined for type B rank 1 and type D rank 2 only",
            )
        return lop.check_lowrank(alg, K)
    if suite == "relrbar":
        return lop.check_relrbar(alg, K, W)
    if suite == "eiprei":
        if alg.n < 2:
            return _skip(
                f"mirror identities, {alg}", "needs rank at least 2"
            )
        return lop.check_eiprei(alg, K)
    if suite == "zseries":
        return lop.z_series(alg, K)[2]
    if suite == "psi":
        if alg.n < 2:
            return _skip(
                f"reduction consistency, {alg}", "needs rank at least 2"
            )
        out = []
        for m in range(1, alg.n):
            out.extend(lop.check_psi_consistency(alg, m, K))
        return out
    if suite == "main-structure":
        return lop.check_main_theorem_structure(alg, K)
    raise ValueError(f"unknown suite: {suite}")


def _suite_report(suite, alg, K, W):
    t0 = time.monotonic()
    checks = _run_suite(suite, alg, K, W)
    elapsed_ms = int((time.monotonic() - t0) * 1000)
    report = {
        "suite": suite,
        "algebra": {"type": alg.type, "rank": alg.n},
        "order": K,
        "window": W,
        "note": _HEADER_NOTE,
        "checks": checks,
    }
    if suite in ("gauss", "lowrank", "relrbar", "eiprei", "zseries", "psi",
                 "main-structure"):
        wiring = lop.build_lops(alg, K).wiring
        report["conventions"] = wiring
    return report, elapsed_ms


def _emit_text(report, elapsed_ms, out):
    head = f"[{report['suite']}] {report['algebra']['type']}{report['algebra']['rank']}"
    print(f"{head}  (order {report['order']}, window {report['window']}, "
          f"{elapsed_ms} ms)", file=out)
    for c in report["checks"]:
        line = f"  {c['status']:7s} {c['name']}"
        if c["status"] == "fail" and c.get("witness") is not None:
            line += f"  witness: {c['witness']}"
        if c["status"] == "skipped" and c.get("reason"):
            line += f"  ({c['reason']})"
        print(line, file=out)


def run(argv) -> int:
    parser = argparse.ArgumentParser(
        prog="qav",
        description="exact symbolic checks for orthogonal quantum affine algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    chk = sub.add_parser("check", help="run a verification suite")
    chk.add_argument("suite", choices=SUITES + ("all",))
    chk.add_argument("--type", dest="type_", choices=("B", "D"), default="B")
    chk.add_argument("--rank", type=int, default=1)
    chk.add_argument("--order", type=int, default=10)
    chk.add_argument("--window", type=int, default=3)
    chk.add_argument("--format", dest="fmt", choices=("text", "json"),
                     default="text")
    chk.add_argument("--dump", default=None)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        alg = AlgebraData(args.type_, args.rank)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    suites = sorted(SUITES) if args.suite == "all" else [args.suite]
    reports = []
    try:
        for suite in suites:
            reports.append(_suite_report(suite, alg, args.order, args.window))
    except ResourceBoundError as exc:
        print(f"error: resource bound exceeded: {exc}", file=sys.stderr)
        return 2
    except (lop.LopError, ArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    payload = {"schema": 1, "reports": [r for r, _ in reports]}
    if args.fmt == "json":
        text = json.dumps(payload, indent=2, sort_keys=True)
        print(text)
    else:
        for report, ms in reports:
            _emit_text(report, ms, sys.stdout)
    if args.dump:
        with open(args.dump, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
    failed = any(
        c["status"] == "fail" for r, _ in reports for c in r["checks"]
    )
    return 1 if failed else 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
