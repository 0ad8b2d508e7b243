"""Scalar BCD-8421 kernels on Python integers.

A BCD value is an ``int`` holding one decimal digit per nibble, least
significant digit in nibble 0.  ``WIDE_DIGITS`` (48) is the width of the
accelerator's registers: three 64-bit limbs.
"""

from __future__ import annotations

from collections import Counter
from typing import List, Optional, Tuple

WORD_DIGITS = 16
WIDE_LIMBS = 3
WIDE_DIGITS = WORD_DIGITS * WIDE_LIMBS
LIMB_MASK = (1 << 64) - 1


class BcdError(ValueError):
    pass


class InvalidOperandError(BcdError):
    pass


class BcdRangeError(BcdError):
    pass


def _nibble_mask(width: int, nibble: int) -> int:
    # nibble repeated in each of `width` digit positions
    return int(("%X" % nibble) * width, 16) if width else 0


_SIXES = {}
_BOUNDARIES = {}


def _sixes(width: int) -> int:
    m = _SIXES.get(width)
    if m is None:
        m = _SIXES[width] = _nibble_mask(width, 6)
    return m


def _boundaries(width: int) -> int:
    # bit 4k for k = 1..width: carry-in positions of digits 1..width
    m = _BOUNDARIES.get(width)
    if m is None:
        m = _BOUNDARIES[width] = _nibble_mask(width, 1) << 4
    return m


def bcd_validate(w: int, width: int = WIDE_DIGITS) -> bool:
    """True iff ``w`` fits ``width`` digits and every nibble is <= 9."""
    if w < 0 or w >> (4 * width):
        return False
    # a nibble > 9 has bit 3 set together with bit 2 or bit 1
    hi = w & _nibble_mask(width, 8)
    mid = w & _nibble_mask(width, 6)
    return not (hi & ((mid << 1) | (mid << 2)))


def bcd_cla_add(a: int, b: int, carry_in: int = 0, width: int = WIDE_DIGITS) -> Tuple[int, int]:
    """Decimal sum of two BCD values modulo ``10**width``.

    All digit carries are resolved at once: every digit is pre-biased by 6 so
    a decimal carry coincides with a binary nibble carry, the binary carry
    vector is recovered from ``sum ^ a ^ b``, and the bias is removed from the
    digits that did not carry.  Returns ``(sum, carry_out)``.
    """
    if not (bcd_validate(a, width) and bcd_validate(b, width)):
        raise InvalidOperandError("operand is not valid %d-digit BCD" % width)
    if carry_in not in (0, 1):
        raise InvalidOperandError("carry_in must be 0 or 1")
    t1 = a + _sixes(width)
    t2 = t1 + b + carry_in
    carries = t2 ^ t1 ^ b
    no_carry = ~carries & (_boundaries(width))
    fix = (no_carry >> 2) | (no_carry >> 3)
    carry_out = (carries >> (4 * width)) & 1
    result = (t2 - fix) & ((1 << (4 * width)) - 1)
    return result, carry_out


def bin_to_bcd(n: int, width: int = WIDE_DIGITS) -> int:
    """Convert an unsigned binary integer to BCD (shift-and-add-3)."""
    if n < 0:
        raise BcdRangeError("negative value")
    if n >= 10 ** width:
        raise BcdRangeError("%d does not fit %d BCD digits" % (n, width))
    bcd = 0
    threes = _nibble_mask(width, 3)
    for i in reversed(range(n.bit_length())):
        # add 3 to every digit >= 5 before doubling
        ge5 = ((bcd + threes) >> 3) & _nibble_mask(width, 1)
        bcd += (ge5 << 1) | ge5
        bcd = (bcd << 1) | ((n >> i) & 1)
    return bcd


def bcd_to_int(w: int) -> int:
    return int("%x" % w) if w else 0


def int_to_bcd(n: int) -> int:
    """Direct hex-string packing, for tests and software-side glue."""
    return int(str(n), 16)


def bcd_shift_digits(w: int, k: int, width: int = WIDE_DIGITS) -> int:
    """Multiply by ``10**k``; digits shifted past ``width`` are dropped."""
    if k < 0:
        raise BcdRangeError("negative shift")
    return (w << (4 * k)) & ((1 << (4 * width)) - 1)


def significant_digits(w: int) -> int:
    return (w.bit_length() + 3) // 4


def gen_multiples(x: int, counter: Optional[Counter] = None) -> List[int]:
    """Table ``MM`` with ``MM[k] = k * x`` built by repeated BCD addition."""
    if not bcd_validate(x, WIDE_DIGITS - 1):
        raise InvalidOperandError("multiplicand is not valid BCD")
    mm = [0, x]
    for k in range(2, 10):
        s, _ = bcd_cla_add(mm[k - 1], x)
        if counter is not None:
            counter["bcd_cla_add"] += 1
        mm.append(s)
    return mm


def accumulate_partials(y: int, mm: List[int], digits: int = WORD_DIGITS,
                        counter: Optional[Counter] = None) -> int:
    """Shift-and-add product of the multiplicand behind ``mm`` and ``y``.

    Scans ``digits`` digits of ``y`` from the most significant one:
    ``product = product * 10 + MM[digit]``.
    """
    if not bcd_validate(y, digits):
        raise InvalidOperandError("multiplier is not valid %d-digit BCD" % digits)
    product = 0
    for j in reversed(range(digits)):
        product = bcd_shift_digits(product, 1)
        product, _ = bcd_cla_add(product, mm[(y >> (4 * j)) & 0xF])
        if counter is not None:
            counter["bcd_cla_add"] += 1
    return product


def to_limbs(w: int, limbs: int = WIDE_LIMBS) -> Tuple[int, ...]:
    return tuple((w >> (64 * i)) & LIMB_MASK for i in range(limbs))


def from_limbs(limbs) -> int:
    out = 0
    for i, limb in enumerate(limbs):
        out |= int(limb) << (64 * i)
    return out
