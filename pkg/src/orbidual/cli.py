"""
Command-line interface.

    orbidual validate swap13_24.json
    orbidual verify-duality swap13_24.json --oracle --format structured
    orbidual catalog instances.jsonl --output results.jsonl

Exit codes: 0 success, 2 parse or validation error, 3 oracle inapplicable or
over the size cap, 4 regression signal (duality fails on an instance that
satisfies the parity condition, a check fails, or a catalog conflict).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Callable

from . import documents as docs
from .engine import (
    DEFAULT_ORACLE_CAP,
    Instance,
    OracleCapExceeded,
    bhht_dual,
    bruteforce,
    reduced_orbifold_euler,
    verify_duality,
)
from .fixed import OracleInapplicable
from .invertible import diagonal_symmetry_group, dual_subgroup
from .propositions import Check, check_fixed_points, check_ker_c_equals_im_a
from .symmetry import parity_condition

EXIT_OK, EXIT_INVALID, EXIT_ORACLE, EXIT_REGRESSION = 0, 2, 3, 4

COMMANDS = (
    "validate",
    "transpose",
    "symmetry-group",
    "dual-group",
    "euler",
    "verify-duality",
    "oracle-check",
    "catalog",
)


class Output:
    def __init__(self, path: str | None):
        self.path = path
        self.lines: list[str] = []

    def write(self, line: str = ""):
        self.lines.append(line)

    def flush(self):
        text = "".join(line + "\n" for line in self.lines)
        if self.path:
            with open(self.path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _group_doc(G) -> dict:
    return {"order": G.order, "generators": [docs.vector_document(g) for g in G.generators]}


def _group_text(label: str, G) -> list[str]:
    lines = [f"{label}: order {G.order}"]
    lines += [f"  generator {g}" for g in G.generators] or ["  (trivial)"]
    return lines


# --------------------------------------------------------------------------
# single-instance commands; each returns (exit code, structured doc, text lines)


def cmd_validate(inst: Instance, args):
    blocks = [
        {"kind": b.kind, "variables": [v + 1 for v in b.variables], "exponents": list(b.exponents)}
        for b in inst.dec.blocks
    ]
    actions = [
        {"power": a.power, "block": a.block, "N": a.N, "kind": a.kind, "ell": a.ell, "s": a.s, "k": a.k}
        for a in inst.blocks.actions
        if a.kind != "trivial"
    ]
    doc = {
        "name": inst.name,
        "n": inst.n,
        "valid": True,
        "polynomial": str(inst.E),
        "blocks": blocks,
        "block_actions": actions,
        "group_order": inst.G.order,
        "symmetry_order": inst.S.order,
        "pc": parity_condition(inst.S),
        "hash": docs.canonical_hash(inst),
    }
    text = [f"{inst.name or 'instance'}: valid", f"f = {inst.E}", f"atoms: {inst.dec}"]
    text.append(f"S = <{inst.S.generator}>, order {inst.S.order}; |G| = {inst.G.order}")
    for a in actions:
        blk = inst.dec.blocks[a["block"]]
        text.append(
            f"  s^{a['power']} returns {blk} after N={a['N']} steps as a rotation "
            f"(l={a['ell']}, s={a['s']}, k={a['k']})"
        )
    text.append(f"parity condition: {'holds' if doc['pc'] else 'fails'}")
    return EXIT_OK, doc, text


def cmd_transpose(inst: Instance, args):
    Et = inst.E.T
    doc = {"name": (inst.name + "~") if inst.name else "", "n": inst.n, "monomials": [list(r) for r in Et.rows]}
    return EXIT_OK, doc, [f"f~ = {Et}", docs.dumps(doc)]


def cmd_symmetry_group(inst: Instance, args):
    Gf = diagonal_symmetry_group(inst.E)
    return EXIT_OK, _group_doc(Gf), _group_text("G_f", Gf)


def cmd_dual_group(inst: Instance, args):
    Gt = dual_subgroup(inst.E, inst.G)
    return EXIT_OK, _group_doc(Gt), _group_text("dual group", Gt)


def _oracle(inst: Instance, cap: int):
    try:
        return bruteforce(inst, cap).reduced
    except (OracleInapplicable, OracleCapExceeded) as exc:
        print(f"oracle: {exc}", file=sys.stderr)
        return "inapplicable"


def _run_oracle(report, inst: Instance, cap: int, dual: Instance | None = None) -> int:
    """Fill in oracle values on the report (and its dual side); returns an exit code."""
    report.oracle_value = _oracle(inst, cap)
    values = [report.oracle_value]
    if dual is not None:
        report.dual_report.oracle_value = _oracle(dual, cap)
        values.append(report.dual_report.oracle_value)
    return EXIT_ORACLE if "inapplicable" in values else EXIT_OK


def _report_text(inst, report, doc) -> list[str]:
    lines = [
        f"{inst.name or 'instance'} (n={inst.n}, |G|={inst.G.order}, S=<{inst.S.generator}>)",
        f"  reduced orbifold Euler characteristic: {report.reduced}",
        f"  unreduced: {report.unreduced}   point term: {report.point_term}   relative: {report.relative}",
        f"  parity condition: {'holds' if report.pc_holds else 'fails'}",
    ]
    if "dual" in doc:
        d = doc["dual"]
        lines.append(f"  dual: |G~|={d['order']}, reduced {d['reduced']}, unreduced {d['unreduced']}")
        v = doc["duality_verdict"]
        lines.append(f"  duality: {v['lhs']} {'==' if v['equal'] else '!='} {v['sign']} * {v['rhs']}")
    if doc["oracle"]["ran"]:
        o = doc["oracle"]
        extra = f", dual {o['dual_value']}" if "dual_value" in o else ""
        lines.append(f"  oracle: {o['value']}{extra} ({'agrees' if o['agrees'] else 'DISAGREES'})")
    return lines


def cmd_euler(inst: Instance, args):
    t0 = time.perf_counter()
    report = reduced_orbifold_euler(inst)
    timings = {"pipeline": time.perf_counter() - t0}
    code = EXIT_OK
    if args.oracle:
        t0 = time.perf_counter()
        code = _run_oracle(report, inst, args.max_oracle_order)
        timings["oracle"] = time.perf_counter() - t0
    doc = docs.result_document(inst, report, args.oracle, timings)
    if args.oracle and code == EXIT_OK and not doc["oracle"]["agrees"]:
        code = EXIT_REGRESSION
    return code, doc, _report_text(inst, report, doc)


def _duality(inst: Instance, oracle: bool, cap: int, timings: dict | None):
    t0 = time.perf_counter()
    report = verify_duality(inst)
    dual = bhht_dual(inst)
    if timings is not None:
        timings["pipeline"] = time.perf_counter() - t0
    code = EXIT_OK
    if oracle:
        t0 = time.perf_counter()
        code = _run_oracle(report, inst, cap, dual)
        if timings is not None:
            timings["oracle"] = time.perf_counter() - t0
    doc = docs.result_document(inst, report, oracle, timings, dual)
    if report.pc_holds and not report.duality_verdict.equal:
        code = EXIT_REGRESSION
    elif oracle and code == EXIT_OK and not doc["oracle"]["agrees"]:
        code = EXIT_REGRESSION
    return code, doc, report


def cmd_verify_duality(inst: Instance, args):
    code, doc, report = _duality(inst, args.oracle, args.max_oracle_order, {})
    return code, doc, _report_text(inst, report, doc)


def cmd_oracle_check(inst: Instance, args):
    checks: list[Check] = []
    code = EXIT_OK
    report = reduced_orbifold_euler(inst)
    try:
        value = bruteforce(inst, args.max_oracle_order).reduced
        checks.append(Check("brute force = pipeline", value == report.reduced, f"{value} vs {report.reduced}"))
    except (OracleInapplicable, OracleCapExceeded) as exc:
        checks.append(Check("brute force = pipeline", False, f"inapplicable: {exc}"))
        code = EXIT_ORACLE
    checks.append(check_ker_c_equals_im_a(inst))
    checks.extend(check_fixed_points(inst))
    if code == EXIT_OK and not all(c.passed for c in checks):
        code = EXIT_REGRESSION
    doc = {
        "name": inst.name,
        "hash": docs.canonical_hash(inst),
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
    }
    return code, doc, [str(c) for c in checks]


SINGLE: dict[str, Callable] = {
    "validate": cmd_validate,
    "transpose": cmd_transpose,
    "symmetry-group": cmd_symmetry_group,
    "dual-group": cmd_dual_group,
    "euler": cmd_euler,
    "verify-duality": cmd_verify_duality,
    "oracle-check": cmd_oracle_check,
}


# --------------------------------------------------------------------------
# catalogs


def catalog_records(lines: list[str], oracle: bool, cap: int) -> tuple[list[dict], int]:
    """One result (or error record) per non-blank input line, in input order."""
    records = []
    worst = EXIT_OK
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            inst = docs.parse_instance(line)
        except docs.VALIDATION_ERRORS as exc:
            records.append({"line": lineno, "error": str(exc), "exit": EXIT_INVALID})
            continue
        try:
            code, doc, _ = _duality(inst, oracle, cap, None)
        except ArithmeticError as exc:
            records.append({"line": lineno, "name": inst.name, "error": str(exc), "exit": 1})
            continue
        if code == EXIT_REGRESSION:
            worst = EXIT_REGRESSION
        records.append(doc)
    return records, worst


def _read_catalog(path: str) -> list[dict]:
    if not os.path.exists(path):
        return []
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def cmd_catalog(args) -> int:
    lines = _read_input(args.input).split("\n")
    records, code = catalog_records(lines, args.oracle, args.max_oracle_order)
    existing = _read_catalog(args.output) if args.output else []
    try:
        merged = docs.catalog_merge(existing, records)
    except docs.CatalogConflict as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGRESSION
    out = Output(args.output)
    for rec in merged:
        out.write(docs.dumps(rec))
    out.flush()
    failed = sum(1 for r in records if "error" in r)
    print(f"{len(records) - failed} instances computed, {failed} failed", file=sys.stderr)
    return code


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbidual",
        description="Orbifold Euler characteristics of invertible polynomials and their dual pairs.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("input", help="instance file (catalog: one instance per line); '-' for stdin")
    parser.add_argument("--oracle", action="store_true", help="also run the brute-force oracle")
    parser.add_argument(
        "--max-oracle-order",
        type=int,
        default=DEFAULT_ORACLE_CAP,
        help=f"largest |G x| S| the oracle will enumerate (default {DEFAULT_ORACLE_CAP})",
    )
    parser.add_argument("--output", help="write to this path instead of stdout")
    parser.add_argument("--format", choices=("text", "structured"), default="text")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "catalog":
        try:
            return cmd_catalog(args)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
    try:
        inst = docs.parse_instance(_read_input(args.input))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except docs.VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    code, doc, text = SINGLE[args.command](inst, args)
    out = Output(args.output)
    if args.format == "structured":
        out.write(docs.dumps(doc))
    else:
        for line in text:
            out.write(line)
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
