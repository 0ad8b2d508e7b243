"""Pure-numpy versions of the batch kernels, vectorised over rows."""

import numpy as np

SIXES = np.uint64(0x6666666666666666)
BOUNDS = np.uint64(0x1111111111111110)
TOP_FIX = np.uint64(0x6000000000000000)
HI = np.uint64(0x8888888888888888)
MID = np.uint64(0x6666666666666666)


def _add_limbs(a, b, cin):
    t1 = a + SIXES
    t2 = t1 + b
    t3 = t2 + cin
    cout = (t2 < t1) | (t3 < t2)
    carries = t3 ^ t1 ^ b
    no_carry = ~carries & BOUNDS
    fix = (no_carry >> np.uint64(2)) | (no_carry >> np.uint64(3))
    fix = np.where(cout, fix, fix | TOP_FIX)
    return t3 - fix, cout.astype(np.uint64)


def cla_add(a, b, cin, out, cout):
    c = cin.astype(np.uint64)
    for i in range(a.shape[1]):
        out[:, i], c = _add_limbs(a[:, i], b[:, i], c)
    cout[:] = c


def _shift1(w):
    out = w << np.uint64(4)
    out[:, 1:] |= w[:, :-1] >> np.uint64(60)
    return out


def shift_digits(w, k, out):
    cur = w.copy()
    for _ in range(k):
        cur = _shift1(cur)
    out[:] = cur


def validate(w, ok):
    mid = w & MID
    bad = w & HI & ((mid << np.uint64(1)) | (mid << np.uint64(2)))
    ok[:] = ~bad.any(axis=1)


def multiply(x, y, digits, out):
    n, limbs = out.shape
    zero_c = np.zeros(n, dtype=np.uint64)
    mm = np.zeros((10, n, limbs), dtype=np.uint64)
    mm[1, :, 0] = x
    scratch = np.empty(n, dtype=np.uint64)
    for k in range(2, 10):
        cla_add(mm[k - 1], mm[1], zero_c, mm[k], scratch)
    rows = np.arange(n)
    prod = np.zeros((n, limbs), dtype=np.uint64)
    for j in range(digits - 1, -1, -1):
        d = ((y >> np.uint64(4 * j)) & np.uint64(0xF)).astype(np.intp)
        cla_add(_shift1(prod), mm[d, rows], zero_c, prod, scratch)
    out[:] = prod
