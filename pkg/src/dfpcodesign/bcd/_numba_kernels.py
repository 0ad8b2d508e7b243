import numpy as np
from numba import njit

SIXES = np.uint64(0x6666666666666666)
BOUNDS = np.uint64(0x1111111111111110)
TOP_FIX = np.uint64(0x6000000000000000)
HI = np.uint64(0x8888888888888888)
MID = np.uint64(0x6666666666666666)
ZERO = np.uint64(0)
ONE = np.uint64(1)
FOUR = np.uint64(4)
SIXTY = np.uint64(60)
NIBBLE = np.uint64(0xF)


@njit(cache=True)
def _add_limb(a, b, cin):
    t1 = a + SIXES
    t2 = t1 + b
    cout = ONE if t2 < t1 else ZERO
    t3 = t2 + cin
    if t3 < t2:
        cout = ONE
    carries = t3 ^ t1 ^ b
    no_carry = ~carries & BOUNDS
    fix = (no_carry >> np.uint64(2)) | (no_carry >> np.uint64(3))
    if cout == ZERO:
        fix |= TOP_FIX
    return t3 - fix, cout


@njit(cache=True)
def _add_row(a, b, cin, out):
    c = cin
    for i in range(a.shape[0]):
        r, c = _add_limb(a[i], b[i], c)
        out[i] = r
    return c


@njit(cache=True)
def _shift1_row(w, out):
    carry = ZERO
    for i in range(w.shape[0]):
        limb = w[i]
        out[i] = (limb << FOUR) | carry
        carry = limb >> SIXTY


@njit(cache=True)
def cla_add(a, b, cin, out, cout):
    for n in range(a.shape[0]):
        cout[n] = _add_row(a[n], b[n], np.uint64(cin[n]), out[n])


@njit(cache=True)
def shift_digits(w, k, out):
    tmp = np.empty(w.shape[1], dtype=np.uint64)
    for n in range(w.shape[0]):
        out[n, :] = w[n, :]
        for _ in range(k):
            _shift1_row(out[n], tmp)
            out[n, :] = tmp


@njit(cache=True)
def validate(w, ok):
    for n in range(w.shape[0]):
        good = True
        for i in range(w.shape[1]):
            limb = w[n, i]
            mid = limb & MID
            if limb & HI & ((mid << ONE) | (mid << np.uint64(2))):
                good = False
        ok[n] = good


@njit(cache=True)
def multiply(x, y, digits, out):
    limbs = out.shape[1]
    mm = np.zeros((10, limbs), dtype=np.uint64)
    tmp = np.empty(limbs, dtype=np.uint64)
    for n in range(x.shape[0]):
        mm[:, :] = ZERO
        mm[1, 0] = x[n]
        for k in range(2, 10):
            _add_row(mm[k - 1], mm[1], ZERO, mm[k])
        prod = out[n]
        prod[:] = ZERO
        for j in range(digits - 1, -1, -1):
            _shift1_row(prod, tmp)
            d = (y[n] >> (FOUR * np.uint64(j))) & NIBBLE
            _add_row(tmp, mm[d], ZERO, prod)
