"""Benchmark runner and correctness verifier."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..accel import AcceleratorState, CostTable
from ..decnum import DecimalValue, Flags, decimal_decode
from ..pipelines import MODE_ORDER, Mode, run_mode
from .oracle import oracle_multiply
from .vectors import TestVector


@dataclass(frozen=True)
class VectorRecord:
    id: int
    category: str
    mode: Mode
    sw_cycles: int = 0
    hw_cycles: int = 0
    result_bits: Optional[int] = None
    flags: Flags = Flags.NONE
    authoritative: bool = True
    error: Optional[str] = None

    @property
    def total(self) -> int:
        return self.sw_cycles + self.hw_cycles


@dataclass(frozen=True)
class ReportRow:
    mode: Mode
    count: int
    avg_sw_cycles: Fraction
    avg_hw_cycles: Fraction
    speedup_vs_software: Optional[Fraction]
    errors: int = 0

    @property
    def avg_total(self) -> Fraction:
        return self.avg_sw_cycles + self.avg_hw_cycles


@dataclass
class BenchmarkResult:
    rows: List[ReportRow]
    records: List[VectorRecord]
    # summed software-primitive counts per mode, over the successful vectors
    sw_counts: Dict[Mode, Counter] = field(default_factory=dict)

    def row(self, mode) -> ReportRow:
        mode = Mode(mode)
        for r in self.rows:
            if r.mode is mode:
                return r
        raise KeyError(mode.value)

    @property
    def errors(self) -> List[VectorRecord]:
        return [r for r in self.records if r.error is not None]


def _ordered_modes(modes: Iterable) -> List[Mode]:
    wanted = {Mode(m) for m in modes}
    if not wanted:
        raise ValueError("at least one mode is required")
    return [m for m in MODE_ORDER if m in wanted]


def run_benchmark(vectors: Sequence[TestVector], modes: Iterable = MODE_ORDER,
                  costs: Optional[CostTable] = None, repetitions: int = 1) -> BenchmarkResult:
    """Run every vector under every mode and aggregate exact averages.

    Each repetition re-executes the pipeline, so cycle figures are sums over
    ``repetitions`` runs.  A vector whose pipeline raises is recorded with its
    error and left out of that mode's averages.
    """
    if repetitions <= 0:
        raise ValueError("repetitions must be positive")
    costs = costs or CostTable.default()
    ordered = _ordered_modes(modes)
    records: List[VectorRecord] = []
    totals: Dict[Mode, Tuple[int, int, int, int]] = {}
    counts: Dict[Mode, Counter] = {}
    for mode in ordered:
        state = AcceleratorState()  # private to this worker
        n = sw_sum = hw_sum = errors = 0
        agg: Counter = Counter()
        for vec in vectors:
            sw = hw = 0
            try:
                for _ in range(repetitions):
                    out, cyc = run_mode(mode, vec.a_bits, vec.b_bits, vec.format,
                                        vec.rounding, costs, state)
                    sw += cyc.sw_cycles
                    hw += cyc.hw_cycles
                    agg.update(cyc.sw_counts)
            except Exception as exc:  # recorded, not fatal
                errors += 1
                state = AcceleratorState()
                records.append(VectorRecord(vec.id, vec.category, mode,
                                            error="%s: %s" % (type(exc).__name__, exc)))
                continue
            n += 1
            sw_sum += sw
            hw_sum += hw
            records.append(VectorRecord(vec.id, vec.category, mode, sw, hw,
                                        out.result_bits, out.flags, out.authoritative))
        totals[mode] = (n, sw_sum, hw_sum, errors)
        counts[mode] = agg

    soft = totals.get(Mode.SOFTWARE)
    soft_avg = Fraction(soft[1] + soft[2], soft[0]) if soft and soft[0] else None
    rows = []
    for mode in ordered:
        n, sw_sum, hw_sum, errors = totals[mode]
        if n:
            avg_sw, avg_hw = Fraction(sw_sum, n), Fraction(hw_sum, n)
        else:
            avg_sw = avg_hw = Fraction(0)
        total = avg_sw + avg_hw
        speedup = soft_avg / total if soft_avg is not None and total else None
        rows.append(ReportRow(mode, n, avg_sw, avg_hw, speedup, errors))
    return BenchmarkResult(rows, records, counts)


# ---------------------------------------------------------------- verification

@dataclass(frozen=True)
class Mismatch:
    id: int
    category: str
    reasons: Tuple[str, ...]


def _describe(v: DecimalValue, flags: Flags) -> str:
    return "%s [%s]" % (v, ",".join(flags.names()) or "-")


def verify(vectors: Sequence[TestVector], costs: Optional[CostTable] = None) -> List[Mismatch]:
    """Check method1 and software against the reference result of every vector.

    The reference is the vector's own ``expected`` field when present (for
    externally supplied conformance vectors), otherwise the exact oracle.
    Results are compared after decoding, so redundant encodings of the same
    value (non-canonical declets) do not count as mismatches; the two
    pipelines must additionally agree bit for bit.
    """
    costs = costs or CostTable.default()
    state = AcceleratorState()
    out: List[Mismatch] = []
    for vec in vectors:
        fmt = vec.format
        if vec.expected_bits is not None:
            want = decimal_decode(vec.expected_bits, fmt)
            want_flags = vec.expected_flags
        else:
            want, want_flags = oracle_multiply(vec.a, vec.b, fmt, vec.rounding)
        reasons = []
        got_bits = {}
        for mode in (Mode.SOFTWARE, Mode.METHOD1):
            try:
                res, _ = run_mode(mode, vec.a_bits, vec.b_bits, fmt, vec.rounding, costs, state)
            except Exception as exc:
                state = AcceleratorState()
                reasons.append("%s raised %s: %s" % (mode.value, type(exc).__name__, exc))
                continue
            got_bits[mode] = res.result_bits
            got = decimal_decode(res.result_bits, fmt)
            if got.key() != want.key() or (want_flags is not None and res.flags != want_flags):
                reasons.append("%s: got %s, want %s" % (
                    mode.value, _describe(got, res.flags),
                    _describe(want, want_flags if want_flags is not None else res.flags)))
        if len(got_bits) == 2 and got_bits[Mode.SOFTWARE] != got_bits[Mode.METHOD1]:
            reasons.append("method1 bits %s differ from software bits %s" % (
                fmt.to_hex(got_bits[Mode.METHOD1]), fmt.to_hex(got_bits[Mode.SOFTWARE])))
        if reasons:
            out.append(Mismatch(vec.id, vec.category, tuple(reasons)))
    return out


# ---------------------------------------------------------------- calibration

# primitives only the software-only baseline pays for
SOFTWARE_ONLY_KNOBS = ("bin_convert", "limb_mul", "carry_pass")


@dataclass(frozen=True)
class CalibrationResult:
    costs: CostTable
    scale: Fraction
    speedup_method1: Fraction
    speedup_dummy: Optional[Fraction]


def calibrate(vectors: Sequence[TestVector], target: float = 2.73,
              costs: Optional[CostTable] = None,
              knobs: Sequence[str] = SOFTWARE_ONLY_KNOBS) -> CalibrationResult:
    """Scale the software-only primitive costs so method1's speedup hits ``target``.

    Cycle totals are linear in the cost table, so one benchmark pass gives the
    primitive counts and the scale factor is solved exactly; entries are then
    rounded to integers and the benchmark is rerun to report the achieved ratio.
    """
    costs = costs or CostTable.default()
    base = run_benchmark(vectors, MODE_ORDER, costs)
    soft_row, m1_row = base.row(Mode.SOFTWARE), base.row(Mode.METHOD1)
    soft_counts = base.sw_counts[Mode.SOFTWARE]
    knob_part = sum(costs.sw(k) * soft_counts[k] for k in knobs)
    if knob_part == 0:
        raise ValueError("the chosen knobs do not contribute to the software baseline")
    soft_total = soft_row.avg_total * soft_row.count
    fixed = soft_total - knob_part
    m1_total = m1_row.avg_total * soft_row.count
    scale = (Fraction(target) * m1_total - fixed) / knob_part
    if scale <= 0:
        raise ValueError("target speedup %.3f is unreachable with knobs %s" % (target, list(knobs)))
    tuned = costs.replace(**{"sw." + k: max(0, round(costs.sw(k) * scale)) for k in knobs})
    check = run_benchmark(vectors, MODE_ORDER, tuned)
    return CalibrationResult(tuned, scale, check.row(Mode.METHOD1).speedup_vs_software,
                             check.row(Mode.DUMMY).speedup_vs_software)
