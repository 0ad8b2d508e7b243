"""End-to-end decimal multiplication in three execution modes.

``software``
    Everything on the core: DPD decode into base-10**9 limbs, schoolbook limb
    multiplication, conversion back to digits, rounding and encoding.
``method1``
    DPD is unpacked straight to BCD in software; the accelerator's BCD adder
    builds the multiplicand multiples and accumulates the partial products.
``dummy``
    The method1 control flow with every accelerator call replaced by a stub
    that returns zero.  Its numeric result is meaningless and is marked
    non-authoritative; only its cycle count is of interest.

Software work is tallied per primitive in a :class:`SoftwareMeter` and priced
with the ``sw_op_cycles`` of a :class:`~dfpcodesign.accel.CostTable`, so cycle
counts are linear in the cost entries.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from . import accel, bcd
from .accel import AcceleratorBusyError, AcceleratorState, CommandTrace, CostTable, TraceEntry
from .decnum import (
    DecimalValue,
    Flags,
    FormatError,
    FormatParams,
    Kind,
    RoundingMode,
    apply_exponent_limits,
    coefficient_to_bcd,
    decimal_decode,
    decimal_encode,
)
from .rocc import Command, Funct

LIMB_BASE = 10 ** 9
LIMB_DIGITS = 9

# accelerator register allocation for method1
MM_BASE = 0        # MM[k] lives in register k
PRODUCT_BASE = 12  # chunk c accumulates in register 12 + c


class Mode(str, enum.Enum):
    SOFTWARE = "software"
    METHOD1 = "method1"
    DUMMY = "dummy"


MODE_ORDER = (Mode.SOFTWARE, Mode.METHOD1, Mode.DUMMY)


@dataclass(frozen=True)
class MultiplyOutcome:
    result_bits: int
    flags: Flags = Flags.NONE
    authoritative: bool = True


@dataclass(frozen=True)
class CycleBreakdown:
    mode: Mode
    sw_cycles: int
    hw_cycles: int = 0
    sw_counts: Mapping[str, int] = field(default_factory=dict, compare=False)

    @property
    def total(self) -> int:
        return self.sw_cycles + self.hw_cycles


class SoftwareMeter:
    def __init__(self):
        self.counts: Counter = Counter()

    def charge(self, primitive: str, n: int = 1) -> None:
        if n:
            self.counts[primitive] += n

    def cycles(self, costs: CostTable) -> int:
        return sum(costs.sw(name) * n for name, n in self.counts.items())


# ---------------------------------------------------------------- shared steps

def _check_width(bits: int, fmt: FormatParams) -> None:
    if not 0 <= bits < (1 << fmt.total_bits):
        raise FormatError("operand does not fit %s" % fmt.name)


def _front_end(a_bits: int, b_bits: int, fmt: FormatParams,
               meter: SoftwareMeter) -> Tuple[DecimalValue, DecimalValue]:
    _check_width(a_bits, fmt)
    _check_width(b_bits, fmt)
    meter.charge("loop_overhead")
    meter.charge("decode_dpd", 2 * fmt.declets)
    return decimal_decode(a_bits, fmt), decimal_decode(b_bits, fmt)


def handle_specials(a: DecimalValue, b: DecimalValue, fmt: FormatParams) -> Optional[MultiplyOutcome]:
    """Result for NaN or infinite operands, or ``None`` when both are finite."""
    if a.is_finite and b.is_finite:
        return None
    if a.is_nan or b.is_nan:
        if a.kind is Kind.SNAN or b.kind is Kind.SNAN:
            src = a if a.kind is Kind.SNAN else b
            flags = Flags.INVALID
        else:
            src = a if a.is_nan else b
            flags = Flags.NONE
        result = DecimalValue.nan(src.sign, src.payload_int)
        return MultiplyOutcome(decimal_encode(result, fmt), flags)
    # at least one infinity, no NaN
    if a.is_zero or b.is_zero:
        return MultiplyOutcome(decimal_encode(DecimalValue.nan(), fmt), Flags.INVALID)
    return MultiplyOutcome(decimal_encode(DecimalValue.infinity(a.sign ^ b.sign), fmt))


def compute_sign_exponent(a: DecimalValue, b: DecimalValue) -> Tuple[int, int]:
    return a.sign ^ b.sign, a.exponent + b.exponent


def _special_path(a, b, fmt, meter) -> Optional[MultiplyOutcome]:
    out = handle_specials(a, b, fmt)
    if out is not None:
        meter.charge("special_rule")
        meter.charge("encode_dpd", fmt.declets)
    return out


def _back_end(sign: int, digits: str, exponent: int, fmt: FormatParams,
              rounding: RoundingMode, meter: SoftwareMeter) -> MultiplyOutcome:
    """Round, fit the exponent range and encode the exact product."""
    exact = DecimalValue(sign, digits, exponent)
    result, flags = apply_exponent_limits(exact, fmt, rounding)
    if result.is_finite:
        removed = max(0, result.exponent - exponent)
    else:
        removed = max(0, exact.digits() - fmt.p)
    meter.charge("round_digit", removed)
    meter.charge("exponent_adjust", 2 if flags & ~Flags.INEXACT else 1)
    meter.charge("encode_dpd", fmt.declets)
    return MultiplyOutcome(decimal_encode(result, fmt), flags)


# ---------------------------------------------------------------- software

def _to_limbs(n: int) -> List[int]:
    limbs = []
    while True:
        n, r = divmod(n, LIMB_BASE)
        limbs.append(r)
        if not n:
            return limbs


def limb_multiply(x: int, y: int, meter: Optional[SoftwareMeter] = None) -> str:
    """Schoolbook base-10**9 multiplication; returns the product digits."""
    meter = meter or SoftwareMeter()
    xs, ys = _to_limbs(x), _to_limbs(y)
    meter.charge("bin_convert", len(xs) + len(ys))
    acc = [0] * (len(xs) + len(ys))
    for i, xi in enumerate(xs):
        for j, yj in enumerate(ys):
            acc[i + j] += xi * yj
            meter.charge("limb_mul")
    carry = 0
    for k in range(len(acc)):
        carry, acc[k] = divmod(acc[k] + carry, LIMB_BASE)
        meter.charge("carry_pass")
    while len(acc) > 1 and acc[-1] == 0:
        acc.pop()
    meter.charge("bin_convert", len(acc))
    return str(acc[-1]) + "".join("%09d" % limb for limb in reversed(acc[:-1]))


def multiply_software(a_bits: int, b_bits: int, fmt: FormatParams,
                      rounding: RoundingMode = RoundingMode.TIES_EVEN,
                      costs: Optional[CostTable] = None) -> Tuple[MultiplyOutcome, CycleBreakdown]:
    costs = costs or CostTable.default()
    meter = SoftwareMeter()
    a, b = _front_end(a_bits, b_bits, fmt, meter)
    out = _special_path(a, b, fmt, meter)
    if out is None:
        sign, exponent = compute_sign_exponent(a, b)
        meter.charge("sign_exponent")
        digits = limb_multiply(a.coefficient_int, b.coefficient_int, meter)
        out = _back_end(sign, digits, exponent, fmt, rounding, meter)
    return out, CycleBreakdown(Mode.SOFTWARE, meter.cycles(costs), 0, dict(meter.counts))


# ---------------------------------------------------------------- method1 flow

class _AcceleratorDriver:
    def __init__(self, state: AcceleratorState, costs: CostTable):
        self.state = state
        self.costs = costs
        self.trace = CommandTrace()

    def issue(self, cmd: Command) -> int:
        try:
            resp, cycles = accel.execute(self.state, cmd, self.costs)
        except Exception as exc:
            exc.trace = self.trace
            raise
        self.trace.entries.append(TraceEntry(cmd, cycles, resp))
        return resp.data if resp is not None else 0

    def shift(self, addr: int) -> None:
        accel.shift_register(self.state, addr, 1)


class _DummyDriver:
    """Stands in for the accelerator: every call costs a software call, returns 0."""

    def __init__(self, meter: SoftwareMeter):
        self.meter = meter

    def issue(self, cmd: Command) -> int:
        self.meter.charge("dummy_call")
        return 0

    def shift(self, addr: int) -> None:
        pass


def chunk_digits(fmt: FormatParams) -> int:
    """Multiplier digits per accumulation pass so products fit 48 digits."""
    return min(fmt.p, bcd.WIDE_DIGITS - fmt.p)


def method1_coefficient_product(x_bcd: int, y_bcd: int, fmt: FormatParams, driver,
                                meter: SoftwareMeter) -> int:
    """Drive the multiple-generation and accumulation loops; BCD product."""
    p = fmt.p
    driver.issue(Command(Funct.CLR_ALL))
    x_limbs = -(-4 * p // 64)
    for i, limb in enumerate(bcd.to_limbs(x_bcd, x_limbs)):
        driver.issue(Command(Funct.WR, rd=MM_BASE + 1, rs1=limb, xs1=1, rs2=i))

    # MM[k+1] = MM[1] + MM[k]
    for k in range(1, 9):
        meter.charge("loop_overhead")
        driver.issue(Command(Funct.DEC_ADD, rd=MM_BASE + k + 1, rs1=MM_BASE + 1,
                             rs2=MM_BASE + k, xd=1))

    chunk = chunk_digits(fmt)
    product = 0
    wide = 2 * p + 1
    for c, start in enumerate(range(0, p, chunk)):
        n = min(chunk, p - start)
        preg = PRODUCT_BASE + c
        for j in reversed(range(start, start + n)):
            meter.charge("loop_overhead")
            meter.charge("bcd_shift")
            digit = (y_bcd >> (4 * j)) & 0xF
            driver.shift(preg)
            driver.issue(Command(Funct.DEC_ADD, rd=preg, rs1=preg, rs2=MM_BASE + digit, xd=1))
        limbs = -(-(p + n) // bcd.WORD_DIGITS)
        part = bcd.from_limbs(driver.issue(Command(Funct.RD, rs1=preg, rs2=i, xd=1))
                              for i in range(limbs))
        if c == 0:
            product = part
        else:
            meter.charge("bcd_merge", -(-wide // bcd.WORD_DIGITS))
            product, _ = bcd.bcd_cla_add(product, bcd.bcd_shift_digits(part, start, wide),
                                         width=wide)
    return product


def _method1_like(a_bits, b_bits, fmt, rounding, meter, driver) -> MultiplyOutcome:
    a, b = _front_end(a_bits, b_bits, fmt, meter)
    out = _special_path(a, b, fmt, meter)
    if out is not None:
        return out
    sign, exponent = compute_sign_exponent(a, b)
    meter.charge("sign_exponent")
    product = method1_coefficient_product(coefficient_to_bcd(a), coefficient_to_bcd(b), fmt,
                                          driver, meter)
    return _back_end(sign, "%x" % product, exponent, fmt, rounding, meter)


def multiply_codesign_method1(a_bits: int, b_bits: int, fmt: FormatParams,
                              rounding: RoundingMode = RoundingMode.TIES_EVEN,
                              state: Optional[AcceleratorState] = None,
                              costs: Optional[CostTable] = None
                              ) -> Tuple[MultiplyOutcome, CycleBreakdown, CommandTrace]:
    costs = costs or CostTable.default()
    state = state if state is not None else AcceleratorState()
    if state.busy:
        raise AcceleratorBusyError("accelerator is busy")
    meter = SoftwareMeter()
    driver = _AcceleratorDriver(state, costs)
    out = _method1_like(a_bits, b_bits, fmt, rounding, meter, driver)
    trace = driver.trace
    return out, CycleBreakdown(Mode.METHOD1, meter.cycles(costs), trace.total_cycles,
                               dict(meter.counts)), trace


def multiply_dummy(a_bits: int, b_bits: int, fmt: FormatParams,
                   rounding: RoundingMode = RoundingMode.TIES_EVEN,
                   costs: Optional[CostTable] = None) -> Tuple[MultiplyOutcome, CycleBreakdown]:
    costs = costs or CostTable.default()
    meter = SoftwareMeter()
    out = _method1_like(a_bits, b_bits, fmt, rounding, meter, _DummyDriver(meter))
    # special operands never reach a stub, so those results are still exact
    authoritative = meter.counts["dummy_call"] == 0
    out = MultiplyOutcome(out.result_bits, out.flags, authoritative)
    return out, CycleBreakdown(Mode.DUMMY, meter.cycles(costs), 0, dict(meter.counts))


def run_mode(mode: Mode, a_bits: int, b_bits: int, fmt: FormatParams,
             rounding: RoundingMode = RoundingMode.TIES_EVEN,
             costs: Optional[CostTable] = None,
             state: Optional[AcceleratorState] = None) -> Tuple[MultiplyOutcome, CycleBreakdown]:
    """Uniform entry point used by the harness."""
    mode = Mode(mode)
    if mode is Mode.SOFTWARE:
        return multiply_software(a_bits, b_bits, fmt, rounding, costs)
    if mode is Mode.METHOD1:
        out, cyc, _ = multiply_codesign_method1(a_bits, b_bits, fmt, rounding, state, costs)
        return out, cyc
    return multiply_dummy(a_bits, b_bits, fmt, rounding, costs)


PIPELINES: Dict[Mode, Callable] = {
    Mode.SOFTWARE: multiply_software,
    Mode.METHOD1: multiply_codesign_method1,
    Mode.DUMMY: multiply_dummy,
}
