"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 out of range or infeasible,
3 I/O or parse trouble. Output defaults to a human table; --format json or
--format csv switch to machine forms, which stay well formed even when a
command fails (an error document is emitted instead of partial output).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import bias, designer, device, fault_tolerance, representation, sequence
from .errors import (
    DegenerateTarget,
    Infeasible,
    InvalidInput,
    InvalidSequence,
    NimsError,
    OutOfRange,
    ParseError,
    RangeError,
)

ENV_CAP = "NIMS_ORACLE_CAP"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RANGE = 2
EXIT_PARSE = 3


class CliUsageError(NimsError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: A003 - argparse API
        raise CliUsageError(message)


@dataclass(frozen=True)
class CommandResult:
    exit_code: int
    text: str


def _load_seq(value: str) -> sequence.Sequence:
    if Path(value).exists():
        return sequence.sequence_from_file(value)
    return sequence.parse_bits(value)


def _load_defects(value: str) -> fault_tolerance.DefectMap:
    if Path(value).exists():
        return fault_tolerance.DefectMap.from_file(value)
    missing = {}
    for part in value.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" not in part:
            raise InvalidInput(f"inline defect {part!r} must be BIT:COUNT")
        bit, _, count = part.partition(":")
        try:
            missing[int(bit)] = int(count)
        except ValueError as exc:
            raise InvalidInput(f"bad defect entry {part!r}: {exc}") from exc
    return fault_tolerance.DefectMap(missing)


def _resolve_cap(args: argparse.Namespace) -> int:
    if getattr(args, "cap", None) is not None:
        return args.cap
    env = os.environ.get(ENV_CAP)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise InvalidInput(f"{ENV_CAP} must be an integer, got {env!r}") from exc
    return sequence.DEFAULT_ORACLE_CAP


def _csv_rows(rows: list[list[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _kv_text(pairs: list[tuple[str, object]]) -> str:
    width = max(len(k) for k, _ in pairs)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in pairs) + "\n"


def _render(fmt: str, doc: dict, csv_text: str | None, table_text: str | None) -> str:
    if fmt == "json":
        return json.dumps(doc) + "\n"
    if fmt == "csv":
        if csv_text is not None:
            return csv_text
        return _csv_rows([["key", "value"]] + [[k, json.dumps(v)] for k, v in doc.items()])
    if table_text is not None:
        return table_text
    return _kv_text([(k, v) for k, v in doc.items()])


def _cmd_validate(args) -> CommandResult:
    seq = _load_seq(args.seq)
    report = sequence.validate(seq)
    sums = sequence.prefix_sums(seq)
    doc = {"bits": list(seq.bits), **report.to_doc(), "totals": list(sums.totals)}
    csv_text = _csv_rows(
        [["constraint", "bit", "message"]]
        + [[v.constraint, v.index, v.message] for v in report.violations]
    )
    pairs = [
        ("bits", ",".join(map(str, seq.bits))),
        ("strict_valid", report.strict_valid),
        ("complete_capable", report.complete_capable),
        ("total", sums.totals[-1]),
    ]
    table = _kv_text(pairs)
    for v in report.violations:
        table += f"{v.constraint} at bit {v.index}: {v.message}\n"
    code = EXIT_OK if report.strict_valid else EXIT_VALIDATION
    return CommandResult(code, _render(args.format, doc, csv_text, table))


def _cmd_represent(args) -> CommandResult:
    seq = _load_seq(args.seq)
    rep = representation.represent(args.m, seq)
    doc = rep.to_doc()
    csv_text = _csv_rows(
        [["m", "beta", "signs"], [rep.target_m, rep.beta, " ".join(map(str, rep.signs))]]
    )
    table = _kv_text(
        [
            ("m", rep.target_m),
            ("signs", " ".join(f"{s:+d}" if s else "0" for s in rep.signs)),
            ("beta", rep.beta),
            ("expressed", rep.expressed_m),
        ]
    )
    return CommandResult(EXIT_OK, _render(args.format, doc, csv_text, table))


def _cmd_tolerance(args) -> CommandResult:
    seq = _load_seq(args.seq)
    report = fault_tolerance.tolerance_report(seq)
    doc = {"bits": list(seq.bits), **report.to_doc()}
    table_lines = ["bit  nominal  tolerance  proportion"]
    for e in report.entries:
        tol = "range only" if e.tolerance is None else str(e.tolerance)
        prop = "" if e.proportion is None else str(e.proportion)
        table_lines.append(f"{e.index:<4d} {e.nominal:<8d} {tol:<10s} {prop}")
    return CommandResult(
        EXIT_OK, _render(args.format, doc, report.to_csv(), "\n".join(table_lines) + "\n")
    )


def _cmd_defects(args) -> CommandResult:
    seq = _load_seq(args.seq)
    cap = _resolve_cap(args)
    if args.scan_budget is not None:
        scan = fault_tolerance.worst_case_scan(seq, args.scan_budget, cap=cap)
        table_lines = [f"budget {scan.budget}", "bit  nominal  tolerance  safe_up_to  status"]
        for e in scan.entries:
            tol = "range only" if e.tolerance is None else str(e.tolerance)
            table_lines.append(
                f"{e.index:<4d} {e.nominal:<8d} {tol:<10s} {e.safe_up_to:<11d} {e.status}"
            )
        return CommandResult(
            EXIT_OK, _render(args.format, scan.to_doc(), scan.to_csv(), "\n".join(table_lines) + "\n")
        )

    if args.defects is None:
        raise InvalidInput("pass --defects or --scan-budget")
    defects = _load_defects(args.defects)
    defective, report = fault_tolerance.apply_defects(seq, defects)
    tolerated = fault_tolerance.within_tolerance(seq, defects)
    oracle_ok = None
    gaps: list[list[int]] = []
    if defective.total <= cap:
        sums, gap_list = fault_tolerance.oracle_gaps(defective, cap=cap)
        oracle_ok = not gap_list
        gaps = [list(g) for g in gap_list[:20]]
    doc = {
        "bits": list(seq.bits),
        "defects": defects.to_doc()["defects"],
        "defective_bits": list(defective.bits),
        "strict_valid": report.strict_valid,
        "complete_capable": report.complete_capable,
        "within_tolerance": tolerated,
        "oracle_complete": oracle_ok,
        "gaps_sample": gaps,
    }
    csv_text = _csv_rows(
        [["bit", "nominal", "defective"]]
        + [[n, a, b] for n, (a, b) in enumerate(zip(seq.bits, defective.bits))]
    )
    table = _kv_text(
        [
            ("defective_bits", ",".join(map(str, defective.bits))),
            ("within_tolerance", tolerated),
            ("complete_capable", report.complete_capable),
            ("oracle_complete", oracle_ok),
        ]
    )
    code = EXIT_OK if report.complete_capable else EXIT_VALIDATION
    return CommandResult(code, _render(args.format, doc, csv_text, table))


def _design_spec_from_args(args) -> designer.DesignSpec:
    if args.spec:
        return designer.DesignSpec.from_file(args.spec)
    if args.a0 is None or args.msb_size is None or args.target_total is None:
        raise InvalidInput("pass --spec or all of --a0/--msb-size/--target-total")
    rules = []
    for raw in args.min_tolerance or []:
        if ":" not in raw:
            raise InvalidInput(f"min tolerance {raw!r} must be AT_LEAST:TOLERANCE")
        at_least, _, tol = raw.partition(":")
        rules.append(designer.ToleranceRule(int(at_least), int(tol)))
    from fractions import Fraction

    ratio = Fraction(args.max_ratio) if args.max_ratio else Fraction(3)
    return designer.DesignSpec(
        a0=args.a0,
        msb_size=args.msb_size,
        target_total=args.target_total,
        min_tolerance=tuple(rules),
        max_ratio=ratio,
    )


def _cmd_design(args) -> CommandResult:
    spec = _design_spec_from_args(args)
    result = designer.design(spec)
    doc = result.to_doc()
    csv_text = _csv_rows(
        [["bit", "junctions"]] + [[n, a] for n, a in enumerate(result.sequence.bits)]
    )
    table = _kv_text(
        [("bits", ",".join(map(str, result.sequence.bits)))]
        + [(k, v) for k, v in result.metadata.items()]
    )
    return CommandResult(EXIT_OK, _render(args.format, doc, csv_text, table))


def _cmd_plan(args) -> CommandResult:
    if args.device:
        rec = device.load_device(args.device)
        seq = rec.sequence()
        freq = args.freq if args.freq is not None else rec.metadata.frequency_hz
    else:
        if not args.seq:
            raise InvalidInput("pass --device or --seq")
        seq = _load_seq(args.seq)
        if args.freq is None:
            raise InvalidInput("--freq is required with --seq")
        freq = args.freq
    band = None
    if args.band:
        lo, _, hi = args.band.partition(":")
        try:
            band = (float(lo), float(hi))
        except ValueError as exc:
            raise InvalidInput(f"bad band {args.band!r}: {exc}") from exc
    result = bias.plan(args.volts, freq, seq, band)
    doc = result.to_doc()
    csv_text = _csv_rows(
        [
            ["V", "f", "m", "beta", "f_adjusted", "in_band"],
            [
                bias.fixed_decimal(result.target_voltage),
                bias.fixed_decimal(result.base_frequency_hz),
                result.m_target,
                result.representation.beta,
                bias.fixed_decimal(result.adjusted_frequency_hz),
                result.in_band,
            ],
        ]
    )
    table = _kv_text(
        [
            ("V", bias.fixed_decimal(result.target_voltage)),
            ("f", bias.fixed_decimal(result.base_frequency_hz)),
            ("m", result.m_target),
            ("beta", result.representation.beta),
            ("f_adjusted", bias.fixed_decimal(result.adjusted_frequency_hz)),
            ("shift", f"{result.frequency_shift:.3e}"),
            ("in_band", result.in_band),
        ]
    )
    if args.format == "json":
        return CommandResult(EXIT_OK, result.to_json() + "\n")
    return CommandResult(EXIT_OK, _render(args.format, doc, csv_text, table))


def _cmd_compare(args) -> CommandResult:
    candidates: list[tuple[str, sequence.Sequence]] = []
    if args.standards:
        for kind in ("binary", "ternary"):
            candidates.append(
                (kind, designer.standard_column(kind, args.msb_size, args.lsb_count))
            )
    for raw in args.candidate or []:
        if "=" not in raw:
            raise InvalidInput(f"candidate {raw!r} must be NAME=BITS")
        name, _, bits = raw.partition("=")
        candidates.append((name, _load_seq(bits)))
    table = designer.compare_logics(args.lsb_count, args.msb_size, candidates)
    lines = []
    for c in table.candidates:
        lines.append(
            f"{c.name}: {len(c.bits)} bits, {c.bits_to_msb} below bank size, "
            f"efficiency min {c.min_efficiency} mean {c.mean_efficiency}"
        )
    text = "\n".join(lines) + "\n" + table.to_csv()
    return CommandResult(EXIT_OK, _render(args.format, table.to_doc(), table.to_csv(), text))


def _cmd_report(args) -> CommandResult:
    rec = device.load_device(args.device)
    doc = device.build_report(rec, args.min_margin)
    rows = [["key", "value"]] + [
        [k, json.dumps(v)] for k, v in doc.items() if k not in ("margins", "tolerances", "lints", "notes")
    ]
    rows += [["margin_" + k, json.dumps(v)] for k, v in doc["margins"].items() if k != "violations"]
    rows += [
        ["margin_violation", f"bit {v['bit']} {v['side']} {v['width_ma']}"]
        for v in doc["margins"]["violations"]
    ]
    rows += [["lint", s] for s in doc["lints"]]
    rows += [["note", s] for s in doc["notes"]]
    csv_text = _csv_rows(rows)
    pairs = [
        ("total_junctions", doc["total_junctions"]),
        ("bit_count", doc["bit_count"]),
        ("complete_capable", doc["complete_capable"]),
        ("frequency_hz", bias.fixed_decimal(doc["frequency_hz"])),
        ("max_voltage_v", f"{doc['max_voltage_v']:.4f}"),
        ("resolution_v", f"{doc['resolution_v']:.3e}"),
        ("retuned_resolution_v", f"{doc['retuned_resolution_v']:.3e}"),
        ("margin threshold", doc["margins"]["threshold_ma"]),
        ("min positive step", doc["margins"]["min_positive_ma"]),
        ("min negative step", doc["margins"]["min_negative_ma"]),
        ("margin violations", len(doc["margins"]["violations"])),
    ]
    table = _kv_text(pairs)
    for v in doc["margins"]["violations"]:
        table += f"violation: bit {v['bit']} {v['side']} step {v['width_ma']} mA\n"
    for s in doc["lints"]:
        table += f"lint: {s}\n"
    for s in doc["notes"]:
        table += f"note: {s}\n"
    code = EXIT_OK if not doc["margins"]["violations"] else EXIT_VALIDATION
    return CommandResult(code, _render(args.format, doc, csv_text, table))


def _cmd_enumerate(args) -> CommandResult:
    seqs = sequence.enumerate_nims(args.a0, args.depth, args.max_bit, max_results=args.limit)
    doc = {
        "a0": args.a0,
        "depth": args.depth,
        "max_bit": args.max_bit,
        "count": len(seqs),
        "sequences": [list(s.bits) for s in seqs],
    }
    csv_text = _csv_rows([["sequence"]] + [[",".join(map(str, s.bits))] for s in seqs])
    table = "\n".join(",".join(map(str, s.bits)) for s in seqs) + ("\n" if seqs else "")
    return CommandResult(EXIT_OK, _render(args.format, doc, csv_text, table))


def _cmd_oracle(args) -> CommandResult:
    seq = _load_seq(args.seq)
    cap = _resolve_cap(args)
    sums = sequence.reachable_sums(seq, a0_offset=args.a0_offset, cap=cap)
    radius_sums = (
        sums
        if args.a0_offset
        else sequence.reachable_sums(seq, a0_offset=seq.bits[0] >= 2, cap=cap)
    )
    gaps = radius_sums.gaps(-radius_sums.span, radius_sums.span)
    complete = not gaps
    doc = {
        "bits": list(seq.bits),
        "total": sums.span,
        "a0_offset": args.a0_offset,
        "complete": complete,
        "interval_count": len(sums.intervals),
        "intervals": [list(iv) for iv in sums.intervals[:200]],
        "gap_count": sum(hi - lo + 1 for lo, hi in gaps),
        "gaps": [list(g) for g in gaps[:50]],
    }
    if args.sweep:
        check = representation.represent_range_check(seq, cap=cap)
        doc["sweep_checked"] = check.checked
        doc["sweep_failures"] = [list(f) for f in check.failures]
    csv_text = _csv_rows([["lo", "hi"]] + [[lo, hi] for lo, hi in sums.intervals[:200]])
    pairs = [
        ("total", sums.span),
        ("complete", complete),
        ("intervals", len(sums.intervals)),
        ("gap_count", doc["gap_count"]),
    ]
    if args.sweep:
        pairs.append(("sweep_checked", doc["sweep_checked"]))
        pairs.append(("sweep_failures", len(doc["sweep_failures"])))
    return CommandResult(EXIT_OK, _render(args.format, doc, csv_text, _kv_text(pairs)))


def build_parser() -> _Parser:
    parser = _Parser(prog="nims", description="Junction array sequence toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=("table", "csv", "json"), default="table")
        p.add_argument("--cap", type=int, default=None, help="oracle size cap")
        return p

    p = add("validate", "check chain constraints")
    p.add_argument("--seq", required=True)

    p = add("represent", "signed-digit decomposition of an integer")
    p.add_argument("--seq", required=True)
    p.add_argument("--m", type=int, required=True)

    p = add("tolerance", "per-bit fault tolerance")
    p.add_argument("--seq", required=True)

    p = add("defects", "apply a defect map or scan placements")
    p.add_argument("--seq", required=True)
    p.add_argument("--defects", default=None, help="JSON file or inline BIT:COUNT list")
    p.add_argument("--scan-budget", type=int, default=None)

    p = add("design", "lay out an array for a junction budget")
    p.add_argument("--spec", default=None, help="design spec JSON file")
    p.add_argument("--a0", type=int, default=None)
    p.add_argument("--msb-size", type=int, default=None)
    p.add_argument("--target-total", type=int, default=None)
    p.add_argument("--min-tolerance", action="append", default=None, metavar="AT_LEAST:TOL")
    p.add_argument("--max-ratio", default=None, metavar="P/Q")

    p = add("plan", "voltage bias plan")
    p.add_argument("--device", default=None)
    p.add_argument("--seq", default=None)
    p.add_argument("--volts", type=float, required=True)
    p.add_argument("--freq", type=float, default=None)
    p.add_argument("--band", default=None, metavar="LO:HI")

    p = add("compare", "tabulate candidate sequences")
    p.add_argument("--msb-size", type=int, required=True)
    p.add_argument("--lsb-count", type=int, default=14)
    p.add_argument("--candidate", action="append", default=None, metavar="NAME=BITS")
    p.add_argument("--standards", action="store_true", help="include binary and ternary columns")

    p = add("report", "summarize a measured device")
    p.add_argument("--device", required=True)
    p.add_argument("--min-margin", type=float, default=1.0)

    p = add("enumerate", "list strictly valid sequences")
    p.add_argument("--a0", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--max-bit", type=int, required=True)
    p.add_argument("--limit", type=int, default=1_000_000)

    p = add("oracle", "exact reachable-sum intervals")
    p.add_argument("--seq", required=True)
    p.add_argument("--a0-offset", action="store_true")
    p.add_argument("--sweep", action="store_true", help="also round-trip every target")

    return parser


_HANDLERS = {
    "validate": _cmd_validate,
    "represent": _cmd_represent,
    "tolerance": _cmd_tolerance,
    "defects": _cmd_defects,
    "design": _cmd_design,
    "plan": _cmd_plan,
    "compare": _cmd_compare,
    "report": _cmd_report,
    "enumerate": _cmd_enumerate,
    "oracle": _cmd_oracle,
}

_EXIT_BY_ERROR = (
    (CliUsageError, EXIT_PARSE),
    (ParseError, EXIT_PARSE),
    (InvalidInput, EXIT_PARSE),
    (OutOfRange, EXIT_RANGE),
    (RangeError, EXIT_RANGE),
    (Infeasible, EXIT_RANGE),
    (DegenerateTarget, EXIT_RANGE),
    (InvalidSequence, EXIT_VALIDATION),
)


def _error_result(exc: Exception, fmt: str) -> CommandResult:
    code = EXIT_PARSE if isinstance(exc, OSError) else None
    if code is None:
        for klass, mapped in _EXIT_BY_ERROR:
            if isinstance(exc, klass):
                code = mapped
                break
    if code is None:
        raise exc
    doc = {"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": code}}
    if fmt == "json":
        text = json.dumps(doc) + "\n"
    elif fmt == "csv":
        text = _csv_rows([["error", "message"], [type(exc).__name__, str(exc)]])
    else:
        text = f"error: {exc}\n"
    return CommandResult(code, text)


def _requested_format(argv: list[str]) -> str:
    for i, arg in enumerate(argv):
        if arg == "--format" and i + 1 < len(argv):
            return argv[i + 1]
        if arg.startswith("--format="):
            return arg.split("=", 1)[1]
    return "table"


def run(argv: list[str]) -> CommandResult:
    fmt = _requested_format(argv)
    try:
        args = build_parser().parse_args(argv)
        return _HANDLERS[args.command](args)
    except (NimsError, OSError) as exc:
        return _error_result(exc, fmt)


def main(argv: list[str] | None = None) -> int:
    raw = sys.argv[1:] if argv is None else list(argv)
    result = run(raw)
    # machine formats keep stdout parseable even on failure; table errors go to stderr
    machine = _requested_format(raw) in ("csv", "json")
    stream = sys.stdout if (result.exit_code == EXIT_OK or machine) else sys.stderr
    stream.write(result.text)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
