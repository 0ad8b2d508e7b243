"""Functional model of the BCD hardware kernels."""

from .scalar import (
    LIMB_MASK,
    WIDE_DIGITS,
    WIDE_LIMBS,
    WORD_DIGITS,
    BcdError,
    BcdRangeError,
    InvalidOperandError,
    accumulate_partials,
    bcd_cla_add,
    bcd_shift_digits,
    bcd_to_int,
    bcd_validate,
    bin_to_bcd,
    from_limbs,
    gen_multiples,
    int_to_bcd,
    significant_digits,
    to_limbs,
)
from .batch import (
    BACKENDS,
    DEFAULT_BACKEND,
    cla_add_batch,
    multiply_batch,
    pack,
    shift_digits_batch,
    unpack,
    validate_batch,
)
