"""Command-line front end: ``dfpcodesign gen|run|verify|rocc|calibrate|costs``.

Exit status is 0 on success, 1 when verification finds mismatches or a
benchmark records pipeline errors, and 2 for bad input.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import rocc
from .accel import CostTable, CostTableError
from .decnum import DecimalError, RoundingMode, get_format
from .harness import (
    CATEGORIES,
    GenerationError,
    GeneratorConfig,
    VectorFileError,
    calibrate,
    emit_report,
    fixed,
    generate_vectors,
    read_vectors,
    run_benchmark,
    verify,
    write_vectors,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _csv_list(text: str) -> List[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _load_costs(path: Optional[str]) -> CostTable:
    return CostTable.load(path) if path else CostTable.default()


def _cmd_gen(args) -> int:
    cfg = GeneratorConfig(get_format(args.format), args.count, args.seed, _csv_list(args.categories))
    n = write_vectors(generate_vectors(cfg, RoundingMode(args.rounding)), args.out)
    print("wrote %d vectors to %s" % (n, args.out))
    return EXIT_OK


def _cmd_run(args) -> int:
    vectors = read_vectors(args.vectors)
    if not vectors:
        raise VectorFileError("%s holds no vectors" % args.vectors)
    result = run_benchmark(vectors, _csv_list(args.modes), _load_costs(args.costs), args.reps)
    records = result.records if args.records else None
    emit_report(result.rows, records, "json" if args.json else "csv", args.report,
                clock_hz=args.clock_hz, hex_width=vectors[0].format.hex_width)
    for row in result.rows:
        print("%-8s avg_total=%s speedup=%s" % (row.mode.value, fixed(row.avg_total, 6),
                                                 fixed(row.speedup_vs_software, 2)))
    for rec in result.errors:
        print("error: vector %d (%s) under %s: %s" % (rec.id, rec.category, rec.mode.value, rec.error),
              file=sys.stderr)
    return EXIT_FAIL if result.errors else EXIT_OK


def _cmd_verify(args) -> int:
    vectors = read_vectors(args.vectors)
    mismatches = verify(vectors, _load_costs(args.costs))
    for m in mismatches:
        print("mismatch: vector %d (%s): %s" % (m.id, m.category, "; ".join(m.reasons)))
    print("%d vectors, %d mismatches" % (len(vectors), len(mismatches)))
    return EXIT_FAIL if mismatches else EXIT_OK


def _cmd_calibrate(args) -> int:
    vectors = read_vectors(args.vectors)
    res = calibrate(vectors, args.target, _load_costs(args.costs))
    res.costs.dump(args.out)
    print("scale %.6f  method1 speedup %s  dummy speedup %s" % (
        float(res.scale), fixed(res.speedup_method1, 4), fixed(res.speedup_dummy, 4)))
    print("wrote cost table to %s" % args.out)
    ok = abs(res.speedup_method1 - args.target) <= args.tolerance
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_costs(args) -> int:
    CostTable.default().dump(args.out)
    print("wrote default cost table to %s" % args.out)
    return EXIT_OK


def _field_value(key: str, text: str) -> int:
    if key == "funct7":
        if text.upper() in rocc.Funct.__members__:
            return int(rocc.Funct[text.upper()])
        if len(text) == 7 and set(text) <= {"0", "1"}:
            return int(text, 2)
    if key == "opcode" and len(text) == 7 and set(text) <= {"0", "1"}:
        return int(text, 2)
    return int(text, 0)


def _cmd_rocc(args) -> int:
    if args.action == "decode":
        if len(args.words) != 1:
            raise ValueError("decode takes exactly one instruction word")
        instr = rocc.decode(rocc.parse_word(args.words[0]), _field_value("opcode", args.opcode))
        print(instr.describe())
        return EXIT_OK
    fields = {}
    for token in " ".join(args.words).replace(",", " ").split():
        key, sep, value = token.partition("=")
        if not sep or key not in rocc.RoccInstruction.__dataclass_fields__:
            raise ValueError("expected field=value, got %r" % token)
        fields[key] = _field_value(key, value)
    fields.setdefault("opcode", _field_value("opcode", args.opcode))
    print(rocc.format_word(rocc.encode(rocc.RoccInstruction(**fields))))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dfpcodesign",
                                     description="Decimal multiply co-design simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a test-vector file")
    p.add_argument("--format", default="d64", help="d64 or d128")
    p.add_argument("--count", type=int, default=8000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--categories", default=",".join(CATEGORIES))
    p.add_argument("--rounding", default="ties_even", choices=[m.value for m in RoundingMode])
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("run", help="benchmark vectors and write a report")
    p.add_argument("--vectors", required=True)
    p.add_argument("--modes", default="software,method1,dummy")
    p.add_argument("--costs", help="JSON cost table overlay (default: shipped table)")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--report", required=True)
    p.add_argument("--json", action="store_true", help="write JSON instead of CSV")
    p.add_argument("--records", action="store_true", help="include per-vector records")
    p.add_argument("--clock-hz", type=float, help="add a time proxy column (cycles / clock)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("verify", help="check pipelines against the oracle")
    p.add_argument("--vectors", required=True)
    p.add_argument("--costs")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("rocc", help="encode or decode a custom instruction word")
    p.add_argument("action", choices=["encode", "decode"])
    p.add_argument("words", nargs="+", help="decode: WORD; encode: field=value ...")
    p.add_argument("--opcode", default=format(rocc.DEFAULT_OPCODE, "07b"))
    p.set_defaults(func=_cmd_rocc)

    p = sub.add_parser("calibrate", help="fit the software-only costs to a target speedup")
    p.add_argument("--vectors", required=True)
    p.add_argument("--target", type=float, default=2.73)
    p.add_argument("--tolerance", type=float, default=0.15)
    p.add_argument("--costs")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("costs", help="write the shipped cost table as JSON")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_costs)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DecimalError, rocc.RoccError, CostTableError, VectorFileError, GenerationError,
            ValueError, KeyError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
