"""Reference multiplication on the standard library's ``decimal`` module.

``decimal`` follows the General Decimal Arithmetic rules with
arbitrary-precision integer coefficients; configured with the format's
precision, exponent limits and ``clamp=1`` it is an independent IEEE 754-2008
decimal interchange-format oracle for the pipelines.
"""

from __future__ import annotations

import decimal
from typing import Tuple

from ..decnum import DecimalValue, Flags, FormatParams, Kind, RoundingMode, decimal_decode

_ROUNDING = {
    RoundingMode.TIES_EVEN: decimal.ROUND_HALF_EVEN,
    RoundingMode.TIES_AWAY: decimal.ROUND_HALF_UP,
    RoundingMode.TOWARD_ZERO: decimal.ROUND_DOWN,
    RoundingMode.TOWARD_POSITIVE: decimal.ROUND_CEILING,
    RoundingMode.TOWARD_NEGATIVE: decimal.ROUND_FLOOR,
}

_SIGNALS = (
    (decimal.InvalidOperation, Flags.INVALID),
    (decimal.Overflow, Flags.OVERFLOW),
    (decimal.Underflow, Flags.UNDERFLOW),
    (decimal.Inexact, Flags.INEXACT),
    (decimal.Clamped, Flags.CLAMPED),
)


def context(fmt: FormatParams, rounding: RoundingMode = RoundingMode.TIES_EVEN) -> decimal.Context:
    return decimal.Context(prec=fmt.p, Emax=fmt.emax, Emin=fmt.emin, clamp=1,
                           rounding=_ROUNDING[rounding], traps=[])


def to_decimal(v: DecimalValue) -> decimal.Decimal:
    if v.kind is Kind.FINITE:
        return decimal.Decimal((v.sign, tuple(int(c) for c in v.coefficient), v.exponent))
    if v.kind is Kind.INFINITY:
        return decimal.Decimal("-Infinity" if v.sign else "Infinity")
    text = ("-" if v.sign else "") + ("sNaN" if v.kind is Kind.SNAN else "NaN") + v.payload
    return decimal.Decimal(text)


def from_decimal(d: decimal.Decimal) -> DecimalValue:
    sign, digits, exp = d.as_tuple()
    payload = "".join(map(str, digits)).lstrip("0")
    if exp == "F":
        return DecimalValue.infinity(sign)
    if exp in ("n", "N"):
        return DecimalValue(sign, kind=Kind.SNAN if exp == "N" else Kind.QNAN, payload=payload)
    return DecimalValue(sign, "".join(map(str, digits)), exp)


def oracle_multiply(a: DecimalValue, b: DecimalValue, fmt: FormatParams,
                    rounding: RoundingMode = RoundingMode.TIES_EVEN) -> Tuple[DecimalValue, Flags]:
    ctx = context(fmt, rounding)
    result = ctx.multiply(to_decimal(a), to_decimal(b))
    flags = Flags.NONE
    for signal, flag in _SIGNALS:
        if ctx.flags[signal]:
            flags |= flag
    return from_decimal(result), flags


def oracle_multiply_bits(a_bits: int, b_bits: int, fmt: FormatParams,
                         rounding: RoundingMode = RoundingMode.TIES_EVEN) -> Tuple[DecimalValue, Flags]:
    return oracle_multiply(decimal_decode(a_bits, fmt), decimal_decode(b_bits, fmt), fmt, rounding)
