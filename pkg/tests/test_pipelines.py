import random

import pytest

from dfpcodesign.accel import AcceleratorBusyError, AcceleratorState, CostTable, Phase
from dfpcodesign.decnum import (
    DECIMAL64,
    DECIMAL128,
    DecimalValue,
    Flags,
    FormatError,
    Kind,
    RoundingMode,
    decimal_decode,
    decimal_encode,
)
from dfpcodesign.harness.oracle import oracle_multiply
from dfpcodesign.pipelines import (
    Mode,
    chunk_digits,
    compute_sign_exponent,
    handle_specials,
    multiply_codesign_method1,
    multiply_dummy,
    multiply_software,
    run_mode,
)
from dfpcodesign.rocc import Funct


def enc(sign, coeff, exp, fmt=DECIMAL64):
    return decimal_encode(DecimalValue.finite(sign, coeff, exp), fmt)


QNAN = decimal_encode(DecimalValue.nan(), DECIMAL64)
SNAN = decimal_encode(DecimalValue.nan(0, 5, True), DECIMAL64)
INF = decimal_encode(DecimalValue.infinity(0), DECIMAL64)


def result(bits, fmt=DECIMAL64):
    return decimal_decode(bits, fmt)


# ---------------------------------------------------------------- shared steps

def test_handle_specials():
    two = DecimalValue.finite(0, 2, 0)
    out = handle_specials(DecimalValue.nan(), two, DECIMAL64)
    assert result(out.result_bits).kind is Kind.QNAN and out.flags == Flags.NONE
    out = handle_specials(DecimalValue.nan(1, 5, True), two, DECIMAL64)
    r = result(out.result_bits)
    assert (r.kind, r.sign, r.payload_int, out.flags) == (Kind.QNAN, 1, 5, Flags.INVALID)
    out = handle_specials(DecimalValue.infinity(0), DecimalValue.finite(1, 3, 0), DECIMAL64)
    r = result(out.result_bits)
    assert r.kind is Kind.INFINITY and r.sign == 1
    out = handle_specials(DecimalValue.infinity(0), DecimalValue.finite(0, 0, 0), DECIMAL64)
    assert result(out.result_bits).kind is Kind.QNAN and out.flags == Flags.INVALID
    assert handle_specials(two, two, DECIMAL64) is None


def test_compute_sign_exponent():
    f = DecimalValue.finite
    assert compute_sign_exponent(f(1, 1, 0), f(1, 1, 0))[0] == 0
    assert compute_sign_exponent(f(0, 1, 5), f(0, 1, -3))[1] == 2
    assert compute_sign_exponent(f(0, 1, 0), f(1, 1, 0)) == (1, 0)


def test_chunk_sizes():
    assert chunk_digits(DECIMAL64) == 16
    assert chunk_digits(DECIMAL128) == 14


# ---------------------------------------------------------------- software baseline

def test_software_exact_product():
    out, cyc = multiply_software(enc(0, 15, -1), enc(0, 2, 0), DECIMAL64)
    r = result(out.result_bits)
    assert (r.sign, r.coefficient_int, r.exponent) == (0, 30, -1)
    assert out.flags == Flags.NONE
    assert cyc.hw_cycles == 0 and cyc.total == cyc.sw_cycles > 0


def test_software_nan_operand():
    out, _ = multiply_software(enc(0, 7, 3), QNAN, DECIMAL64)
    assert result(out.result_bits).kind is Kind.QNAN


def test_software_max_times_max_rounds():
    m = enc(0, 10 ** 16 - 1, 0)
    out, _ = multiply_software(m, m, DECIMAL64)
    r = result(out.result_bits)
    want = round((10 ** 16 - 1) ** 2 / 10 ** 16)
    assert r.coefficient_int == want and r.exponent == 16
    assert out.flags == Flags.INEXACT


def test_software_width_check():
    with pytest.raises(FormatError):
        multiply_software(1 << 64, 0, DECIMAL64)


# ---------------------------------------------------------------- method1

def test_method1_small_product_trace():
    out, cyc, trace = multiply_codesign_method1(enc(0, 25, 0), enc(0, 13, 0), DECIMAL64)
    assert result(out.result_bits).coefficient_int == 325
    entries = list(trace)
    assert entries[0].command.funct is Funct.CLR_ALL
    assert entries[-1].command.funct is Funct.RD
    assert entries[-2].command.funct is Funct.RD and entries[-2].response.data == 0x325
    assert cyc.hw_cycles == trace.total_cycles


def test_method1_hardware_cycles_decimal64():
    _, cyc, trace = multiply_codesign_method1(enc(0, 3, 0), enc(0, 7, 0), DECIMAL64)
    # CLR_ALL, one WR, eight multiple adds, sixteen digit adds, two RDs
    assert len(trace) == 1 + 1 + 8 + 16 + 2
    assert cyc.hw_cycles == 3 + 3 + 8 * 5 + 16 * 5 + 2 * 5


def test_method1_special_issues_nothing():
    out, cyc, trace = multiply_codesign_method1(QNAN, enc(0, 2, 0), DECIMAL64)
    assert len(trace) == 0 and cyc.hw_cycles == 0
    assert result(out.result_bits).kind is Kind.QNAN


def test_method1_busy_accelerator():
    st = AcceleratorState()
    st.phase = Phase.EXECUTE
    with pytest.raises(AcceleratorBusyError):
        multiply_codesign_method1(enc(0, 1, 0), enc(0, 1, 0), DECIMAL64, state=st)


@pytest.mark.parametrize("fmt", [DECIMAL64, DECIMAL128], ids=lambda f: f.name)
def test_cross_mode_equivalence(fmt):
    rng = random.Random(21)
    state = AcceleratorState()
    modes = list(RoundingMode)
    for _ in range(400):
        a = enc(rng.getrandbits(1), rng.randrange(10 ** rng.randint(1, fmt.p)),
                rng.randint(fmt.q_min, fmt.q_max), fmt)
        b = enc(rng.getrandbits(1), rng.randrange(10 ** rng.randint(1, fmt.p)),
                rng.randint(fmt.q_min, fmt.q_max), fmt)
        mode = rng.choice(modes)
        sw, _ = multiply_software(a, b, fmt, mode)
        m1, _, _ = multiply_codesign_method1(a, b, fmt, mode, state)
        want, want_flags = oracle_multiply(result(a, fmt), result(b, fmt), fmt, mode)
        assert m1.result_bits == sw.result_bits
        assert m1.flags == sw.flags == want_flags
        assert result(sw.result_bits, fmt).key() == want.key()


def test_decimal128_full_width():
    m = enc(0, 10 ** 34 - 1, 0, DECIMAL128)
    sw, _ = multiply_software(m, m, DECIMAL128)
    m1, cyc, _ = multiply_codesign_method1(m, m, DECIMAL128)
    assert sw.result_bits == m1.result_bits
    assert cyc.sw_counts["bcd_merge"] > 0


# ---------------------------------------------------------------- dummy

def test_dummy_no_hardware():
    out, cyc = multiply_dummy(enc(0, 25, 0), enc(0, 13, 0), DECIMAL64)
    assert cyc.hw_cycles == 0
    assert not out.authoritative


def test_dummy_special_matches_method1():
    for a, b in ((QNAN, enc(0, 2, 0)), (SNAN, INF), (INF, enc(0, 0, 0))):
        d, _ = multiply_dummy(a, b, DECIMAL64)
        m1, _, _ = multiply_codesign_method1(a, b, DECIMAL64)
        assert (d.result_bits, d.flags, d.authoritative) == (m1.result_bits, m1.flags, True)


def test_run_mode_dispatch():
    a, b = enc(0, 12, 0), enc(0, 12, 0)
    for mode in Mode:
        out, cyc = run_mode(mode, a, b, DECIMAL64)
        assert cyc.mode is mode
    assert run_mode("software", a, b, DECIMAL64)[0].result_bits == enc(0, 144, 0)


def test_cycles_scale_with_costs():
    a, b = enc(0, 123456789, 0), enc(0, 987654321, 0)
    base = CostTable.default()
    _, c1 = multiply_software(a, b, DECIMAL64, costs=base)
    _, c2 = multiply_software(a, b, DECIMAL64,
                              costs=base.replace(**{"sw.limb_mul": base.sw("limb_mul") + 10}))
    assert c2.sw_cycles - c1.sw_cycles == 10 * c1.sw_counts["limb_mul"]
