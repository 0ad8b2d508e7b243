"""IEEE 754-2008 decimal interchange formats (DPD encoding).

Covers what decimal multiplication needs: the declet codec, decimal64 and
decimal128 packing, coefficient rounding and the exponent-range rules
(overflow, subnormal underflow and fold-down clamping).

Coefficients are carried as digit strings, most significant digit first.
Exponents are the integer ``q`` exponent, i.e. value = coefficient * 10**q.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Tuple

import numpy as np


class DecimalError(ValueError):
    """Base class for errors raised by the decimal codec."""


class InvalidDigitError(DecimalError):
    pass


class ExponentRangeError(DecimalError):
    pass


class FormatError(DecimalError):
    pass


class Kind(enum.Enum):
    FINITE = "finite"
    INFINITY = "infinity"
    QNAN = "qnan"
    SNAN = "snan"


class RoundingMode(enum.Enum):
    TIES_EVEN = "ties_even"
    TIES_AWAY = "ties_away"
    TOWARD_ZERO = "toward_zero"
    TOWARD_POSITIVE = "toward_positive"
    TOWARD_NEGATIVE = "toward_negative"


class Flags(enum.Flag):
    NONE = 0
    INVALID = enum.auto()
    OVERFLOW = enum.auto()
    UNDERFLOW = enum.auto()
    INEXACT = enum.auto()
    CLAMPED = enum.auto()

    def names(self) -> list:
        return [f.name.lower() for f in Flags if f and f in self and f is not Flags.NONE]

    @classmethod
    def from_names(cls, names) -> "Flags":
        out = cls.NONE
        for n in names:
            out |= cls[n.upper()]
        return out


@dataclass(frozen=True)
class FormatParams:
    name: str
    p: int
    bias: int
    total_bits: int
    declets: int
    exponent_continuation_bits: int
    combination_bits: int = 5

    @property
    def q_min(self) -> int:
        return -self.bias

    @property
    def q_max(self) -> int:
        return 3 * (1 << self.exponent_continuation_bits) - 1 - self.bias

    @property
    def emax(self) -> int:
        """Largest adjusted exponent of a finite number."""
        return self.q_max + self.p - 1

    @property
    def emin(self) -> int:
        return 1 - self.emax

    @property
    def hex_width(self) -> int:
        return self.total_bits // 4

    def to_hex(self, bits: int) -> str:
        return format(bits, "0%dX" % self.hex_width)

    def from_hex(self, text: str) -> int:
        text = text.strip()
        if text[:2].lower() == "0x":
            text = text[2:]
        if len(text) != self.hex_width:
            raise FormatError(
                "%s pattern needs %d hex digits, got %d" % (self.name, self.hex_width, len(text))
            )
        return int(text, 16)


DECIMAL64 = FormatParams("decimal64", p=16, bias=398, total_bits=64, declets=5,
                         exponent_continuation_bits=8)
DECIMAL128 = FormatParams("decimal128", p=34, bias=6176, total_bits=128, declets=11,
                          exponent_continuation_bits=12)

FORMATS = {
    "decimal64": DECIMAL64,
    "d64": DECIMAL64,
    "double": DECIMAL64,
    "decimal128": DECIMAL128,
    "d128": DECIMAL128,
    "quad": DECIMAL128,
}


def get_format(name: str) -> FormatParams:
    try:
        return FORMATS[name.lower()]
    except KeyError:
        raise FormatError("unknown decimal format %r" % name) from None


def format_for_hex(text: str) -> FormatParams:
    """Pick the interchange format from the length of a hex pattern."""
    n = len(text.strip().removeprefix("0x").removeprefix("0X"))
    for fmt in (DECIMAL64, DECIMAL128):
        if fmt.hex_width == n:
            return fmt
    raise FormatError("no decimal format is %d hex digits wide" % n)


@dataclass(frozen=True)
class DecimalValue:
    sign: int
    coefficient: str = ""
    exponent: int = 0
    kind: Kind = Kind.FINITE
    payload: str = ""

    def __post_init__(self):
        if self.sign not in (0, 1):
            raise DecimalError("sign must be 0 or 1")
        if self.kind is Kind.FINITE:
            if not self.coefficient or not self.coefficient.isdigit() or not self.coefficient.isascii():
                raise InvalidDigitError("bad coefficient %r" % self.coefficient)
            if self.payload:
                raise DecimalError("finite values carry no payload")
        else:
            if self.coefficient or self.exponent:
                raise DecimalError("special values have empty coefficient and exponent 0")
            if self.payload and (not self.payload.isdigit() or self.kind is Kind.INFINITY):
                raise DecimalError("bad payload %r" % self.payload)

    @classmethod
    def finite(cls, sign: int, coefficient: int, exponent: int) -> "DecimalValue":
        return cls(sign, str(coefficient), exponent)

    @classmethod
    def infinity(cls, sign: int = 0) -> "DecimalValue":
        return cls(sign, kind=Kind.INFINITY)

    @classmethod
    def nan(cls, sign: int = 0, payload: int = 0, signaling: bool = False) -> "DecimalValue":
        return cls(sign, kind=Kind.SNAN if signaling else Kind.QNAN,
                   payload=str(payload) if payload else "")

    @property
    def is_finite(self) -> bool:
        return self.kind is Kind.FINITE

    @property
    def is_nan(self) -> bool:
        return self.kind in (Kind.QNAN, Kind.SNAN)

    @property
    def coefficient_int(self) -> int:
        return int(self.coefficient) if self.coefficient else 0

    @property
    def payload_int(self) -> int:
        return int(self.payload) if self.payload else 0

    @property
    def is_zero(self) -> bool:
        return self.is_finite and self.coefficient_int == 0

    def digits(self) -> int:
        """Number of significant coefficient digits (1 for zero)."""
        return len(str(self.coefficient_int))

    def key(self) -> Tuple:
        """Identity of the value ignoring leading coefficient zeros."""
        if self.is_finite:
            return (self.sign, self.kind, self.coefficient_int, self.exponent)
        if self.kind is Kind.INFINITY:
            return (self.sign, self.kind)
        return (self.sign, self.kind, self.payload_int)

    def __str__(self) -> str:
        s = "-" if self.sign else ""
        if self.kind is Kind.FINITE:
            return "%s%dE%d" % (s, self.coefficient_int, self.exponent)
        if self.kind is Kind.INFINITY:
            return s + "Inf"
        return "%s%sNaN%s" % (s, "s" if self.kind is Kind.SNAN else "", self.payload)


# ---------------------------------------------------------------- declets
#
# Bit names follow the IEEE 754-2008 tables: digits (abcd)(efgh)(ijkm), declet
# pqr stu v wxy from bit 9 down to bit 0.

def _encode_declet_bits(d2: int, d1: int, d0: int) -> int:
    a, b, c, d = (d2 >> 3) & 1, (d2 >> 2) & 1, (d2 >> 1) & 1, d2 & 1
    e, f, g, h = (d1 >> 3) & 1, (d1 >> 2) & 1, (d1 >> 1) & 1, d1 & 1
    i, j, k, m = (d0 >> 3) & 1, (d0 >> 2) & 1, (d0 >> 1) & 1, d0 & 1
    sel = (a << 2) | (e << 1) | i
    if sel == 0b000:
        bits = (b, c, d, f, g, h, 0, j, k, m)
    elif sel == 0b001:
        bits = (b, c, d, f, g, h, 1, 0, 0, m)
    elif sel == 0b010:
        bits = (b, c, d, j, k, h, 1, 0, 1, m)
    elif sel == 0b011:
        bits = (b, c, d, 1, 0, h, 1, 1, 1, m)
    elif sel == 0b100:
        bits = (j, k, d, f, g, h, 1, 1, 0, m)
    elif sel == 0b101:
        bits = (f, g, d, 0, 1, h, 1, 1, 1, m)
    elif sel == 0b110:
        bits = (j, k, d, 0, 0, h, 1, 1, 1, m)
    else:
        bits = (0, 0, d, 1, 1, h, 1, 1, 1, m)
    out = 0
    for bit in bits:
        out = (out << 1) | bit
    return out


def _decode_declet_bits(declet: int) -> Tuple[int, int, int]:
    p, q, r = (declet >> 9) & 1, (declet >> 8) & 1, (declet >> 7) & 1
    s, t, u = (declet >> 6) & 1, (declet >> 5) & 1, (declet >> 4) & 1
    v = (declet >> 3) & 1
    w, x, y = (declet >> 2) & 1, (declet >> 1) & 1, declet & 1
    pqr = (p << 2) | (q << 1) | r
    stu = (s << 2) | (t << 1) | u
    wxy = (w << 2) | (x << 1) | y
    if not v:
        return pqr, stu, wxy
    if (w, x) == (0, 0):
        return pqr, stu, 8 | y
    if (w, x) == (0, 1):
        return pqr, 8 | u, (s << 2) | (t << 1) | y
    if (w, x) == (1, 0):
        return 8 | r, stu, (p << 2) | (q << 1) | y
    # w = x = 1: s and t select the case
    if (s, t) == (0, 0):
        return 8 | r, 8 | u, (p << 2) | (q << 1) | y
    if (s, t) == (0, 1):
        return 8 | r, (p << 2) | (q << 1) | u, 8 | y
    if (s, t) == (1, 0):
        return pqr, 8 | u, 8 | y
    return 8 | r, 8 | u, 8 | y


# Lookup tables built once from the boolean definitions above.
DPD_ENCODE_TABLE = np.array(
    [_encode_declet_bits(n // 100, (n // 10) % 10, n % 10) for n in range(1000)], dtype=np.uint16
)
DPD_DECODE_TABLE = np.array(
    [(lambda t: t[0] * 100 + t[1] * 10 + t[2])(_decode_declet_bits(dec)) for dec in range(1024)],
    dtype=np.uint16,
)
_ENC = DPD_ENCODE_TABLE.tolist()
_DEC = DPD_DECODE_TABLE.tolist()


def dpd_encode_declet(d2: int, d1: int, d0: int) -> int:
    for dig in (d2, d1, d0):
        if not 0 <= dig <= 9:
            raise InvalidDigitError("digit %r out of range" % (dig,))
    return _ENC[d2 * 100 + d1 * 10 + d0]


def dpd_decode_declet(declet: int) -> Tuple[int, int, int]:
    n = _DEC[declet & 0x3FF]
    return n // 100, (n // 10) % 10, n % 10


def is_canonical_declet(declet: int) -> bool:
    return _ENC[_DEC[declet & 0x3FF]] == declet


def _pack_declets(value: int, count: int) -> int:
    out = 0
    for i in range(count):
        value, group = divmod(value, 1000)
        out |= _ENC[group] << (10 * i)
    return out


def _unpack_declets(field: int, count: int) -> int:
    value = 0
    for i in reversed(range(count)):
        value = value * 1000 + _DEC[(field >> (10 * i)) & 0x3FF]
    return value


# ---------------------------------------------------------------- interchange

def decimal_encode(v: DecimalValue, fmt: FormatParams) -> int:
    ec = fmt.exponent_continuation_bits
    trailing_bits = 10 * fmt.declets
    sign = v.sign << (fmt.total_bits - 1)
    comb_shift = trailing_bits + ec

    if v.kind is Kind.INFINITY:
        return sign | (0b11110 << comb_shift)
    if v.is_nan:
        payload = v.payload_int
        if payload >= 10 ** (fmt.p - 1):
            raise ExponentRangeError("NaN payload wider than %d digits" % (fmt.p - 1))
        top = (0b11111 << comb_shift) | ((1 if v.kind is Kind.SNAN else 0) << (comb_shift - 1))
        return sign | top | _pack_declets(payload, fmt.declets)

    coeff = v.coefficient_int
    if coeff >= 10 ** fmt.p:
        raise ExponentRangeError("coefficient has more than %d digits" % fmt.p)
    if not fmt.q_min <= v.exponent <= fmt.q_max:
        raise ExponentRangeError(
            "exponent %d outside [%d, %d]" % (v.exponent, fmt.q_min, fmt.q_max)
        )
    biased = v.exponent + fmt.bias
    msd, rest = divmod(coeff, 10 ** (fmt.p - 1))
    ehigh = biased >> ec
    if msd < 8:
        comb = (ehigh << 3) | msd
    else:
        comb = 0b11000 | (ehigh << 1) | (msd & 1)
    return (sign | (comb << comb_shift) | ((biased & ((1 << ec) - 1)) << trailing_bits)
            | _pack_declets(rest, fmt.declets))


def decimal_decode(bits: int, fmt: FormatParams) -> DecimalValue:
    if not 0 <= bits < (1 << fmt.total_bits):
        raise FormatError("pattern does not fit %d bits" % fmt.total_bits)
    ec = fmt.exponent_continuation_bits
    trailing_bits = 10 * fmt.declets
    comb_shift = trailing_bits + ec
    sign = bits >> (fmt.total_bits - 1)
    comb = (bits >> comb_shift) & 0x1F
    trailing = _unpack_declets(bits & ((1 << trailing_bits) - 1), fmt.declets)

    if comb == 0b11110:
        return DecimalValue.infinity(sign)
    if comb == 0b11111:
        signaling = bool((bits >> (comb_shift - 1)) & 1)
        return DecimalValue.nan(sign, trailing, signaling)

    econt = (bits >> trailing_bits) & ((1 << ec) - 1)
    if comb >> 3 == 0b11:
        ehigh, msd = (comb >> 1) & 0b11, 8 | (comb & 1)
    else:
        ehigh, msd = comb >> 3, comb & 0b111
    biased = (ehigh << ec) | econt
    coeff = msd * 10 ** (fmt.p - 1) + trailing
    return DecimalValue(sign, str(coeff).zfill(fmt.p), biased - fmt.bias)


def coefficient_to_bcd(v: DecimalValue) -> int:
    """Pack the coefficient as BCD-8421, least significant digit in nibble 0."""
    if not v.is_finite:
        raise DecimalError("only finite values have a coefficient")
    # Hex rendering of the BCD word is the decimal digit string itself.
    return int(v.coefficient, 16)


# ---------------------------------------------------------------- rounding

def _round_up(mode: RoundingMode, sign: int, kept_last: int, first_removed: int,
              rest_nonzero: bool) -> bool:
    inexact = first_removed != 0 or rest_nonzero
    if not inexact:
        return False
    if mode is RoundingMode.TIES_EVEN:
        if first_removed == 5 and not rest_nonzero:
            return kept_last % 2 == 1
        return first_removed >= 5
    if mode is RoundingMode.TIES_AWAY:
        return first_removed >= 5
    if mode is RoundingMode.TOWARD_ZERO:
        return False
    if mode is RoundingMode.TOWARD_POSITIVE:
        return sign == 0
    return sign == 1


def round_coefficient(digits: str, target_p: int, mode: RoundingMode = RoundingMode.TIES_EVEN,
                      sign: int = 0) -> Tuple[str, int, bool]:
    """Round a digit string to at most ``target_p`` significant digits.

    Returns ``(digits, exponent_increment, inexact)``.  Leading zeros of the
    input are not significant.
    """
    if not digits:
        raise InvalidDigitError("empty digit string")
    sig = digits.lstrip("0") or "0"
    removed = len(sig) - target_p
    if removed <= 0:
        return sig, 0, False
    kept, dropped = sig[:-removed], sig[-removed:]
    first = ord(dropped[0]) - 48
    rest_nonzero = dropped[1:].strip("0") != ""
    inexact = first != 0 or rest_nonzero
    kept_int = int(kept) if kept else 0
    if _round_up(mode, sign, kept_int % 10, first, rest_nonzero):
        kept_int += 1
        if target_p and kept_int == 10 ** target_p:
            kept_int //= 10
            removed += 1
    return str(kept_int), removed, inexact


def _overflow_result(sign: int, fmt: FormatParams, mode: RoundingMode) -> DecimalValue:
    to_inf = {
        RoundingMode.TIES_EVEN: True,
        RoundingMode.TIES_AWAY: True,
        RoundingMode.TOWARD_ZERO: False,
        RoundingMode.TOWARD_POSITIVE: sign == 0,
        RoundingMode.TOWARD_NEGATIVE: sign == 1,
    }[mode]
    if to_inf:
        return DecimalValue.infinity(sign)
    return DecimalValue(sign, "9" * fmt.p, fmt.q_max)


def apply_exponent_limits(v: DecimalValue, fmt: FormatParams,
                          mode: RoundingMode = RoundingMode.TIES_EVEN
                          ) -> Tuple[DecimalValue, Flags]:
    """Fit a finite value of any precision into ``fmt``.

    Rounds to the format precision, then handles overflow, subnormal
    results (rounded once, directly at the tiny exponent) and fold-down of
    large exponents.  Flag semantics follow the General Decimal Arithmetic
    rules: a zero whose exponent has to move sets CLAMPED, as does a
    subnormal that rounds to zero.
    """
    if not v.is_finite:
        raise DecimalError("apply_exponent_limits needs a finite value")
    flags = Flags.NONE
    sign, q = v.sign, v.exponent
    coeff = v.coefficient.lstrip("0") or "0"
    etiny = fmt.q_min
    etop = fmt.q_max

    if coeff == "0":
        newq = min(max(q, etiny), etop)
        if newq != q:
            flags |= Flags.CLAMPED
        return DecimalValue(sign, "0", newq), flags

    adjusted = q + len(coeff) - 1
    if adjusted < fmt.emin:
        # Subnormal: the usable precision shrinks so the exponent stays >= etiny.
        if q < etiny:
            keep = len(coeff) - (etiny - q)
            if keep < 0:
                # Every digit is below the rounding position; only its
                # sticky-ness matters.  Prefix one zero so round_coefficient
                # sees the rounding digit as 0.
                coeff = "0" * (-keep) + coeff
                keep = 0
            coeff, inexact = _round_subnormal(coeff, keep, mode, sign)
            q = etiny
            if inexact:
                flags |= Flags.INEXACT | Flags.UNDERFLOW
                if coeff == "0":
                    flags |= Flags.CLAMPED
        return DecimalValue(sign, coeff, q), flags

    if len(coeff) > fmt.p:
        coeff, inc, inexact = round_coefficient(coeff, fmt.p, mode, sign)
        q += inc
        if inexact:
            flags |= Flags.INEXACT

    if q + len(coeff) - 1 > fmt.emax:
        return _overflow_result(sign, fmt, mode), flags | Flags.OVERFLOW | Flags.INEXACT

    if q > etop:
        coeff = coeff + "0" * (q - etop)
        q = etop
        flags |= Flags.CLAMPED
    return DecimalValue(sign, coeff, q), flags


def _round_subnormal(coeff: str, keep: int, mode: RoundingMode, sign: int) -> Tuple[str, bool]:
    """Drop ``len(coeff) - keep`` trailing digits with rounding.

    Unlike :func:`round_coefficient` the kept width is positional, so a carry
    that lengthens the coefficient is kept (it lands on a normal number).
    """
    kept, dropped = coeff[:keep], coeff[keep:]
    first = ord(dropped[0]) - 48
    rest_nonzero = dropped[1:].strip("0") != ""
    inexact = first != 0 or rest_nonzero
    kept_int = int(kept) if kept else 0
    if _round_up(mode, sign, kept_int % 10, first, rest_nonzero):
        kept_int += 1
    return str(kept_int), inexact
