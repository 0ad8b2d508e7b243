"""Batched BCD kernels over ``(n, limbs)`` uint64 arrays.

Two interchangeable backends implement the same nibble-parallel algorithms
as :mod:`dfpcodesign.bcd.scalar`: numba-compiled loops and vectorised numpy.
Numba is used when importable unless ``DFPCODESIGN_DISABLE_NUMBA`` is set to
a non-empty value other than ``0``.
"""

from __future__ import annotations

import os
from typing import Iterable, List, Optional, Tuple

import numpy as np

from . import _numpy_kernels
from .scalar import WIDE_LIMBS, WORD_DIGITS, InvalidOperandError, from_limbs, to_limbs

ENV_FLAG = "DFPCODESIGN_DISABLE_NUMBA"

try:
    from . import _numba_kernels
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba_kernels = None

BACKENDS = {"numpy": _numpy_kernels}
if _numba_kernels is not None:
    BACKENDS["numba"] = _numba_kernels


def _default_backend() -> str:
    disabled = os.environ.get(ENV_FLAG, "").strip() not in ("", "0")
    return "numpy" if disabled or "numba" not in BACKENDS else "numba"


DEFAULT_BACKEND = _default_backend()


def _kernels(backend: Optional[str]):
    name = backend or DEFAULT_BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError("unknown or unavailable kernel backend %r" % name) from None


def pack(values: Iterable[int], limbs: int = WIDE_LIMBS) -> np.ndarray:
    """Python BCD ints -> ``(n, limbs)`` uint64 array."""
    return np.array([to_limbs(v, limbs) for v in values], dtype=np.uint64).reshape(-1, limbs)


def unpack(arr: np.ndarray) -> List[int]:
    return [from_limbs(row) for row in arr.tolist()]


def validate_batch(w: np.ndarray, backend: Optional[str] = None) -> np.ndarray:
    w = np.ascontiguousarray(w, dtype=np.uint64)
    ok = np.empty(w.shape[0], dtype=np.bool_)
    _kernels(backend).validate(w, ok)
    return ok


def cla_add_batch(a: np.ndarray, b: np.ndarray, carry_in=0,
                  backend: Optional[str] = None) -> Tuple[np.ndarray, np.ndarray]:
    a = np.ascontiguousarray(a, dtype=np.uint64)
    b = np.ascontiguousarray(b, dtype=np.uint64)
    if a.shape != b.shape:
        raise ValueError("operand shapes differ: %s vs %s" % (a.shape, b.shape))
    if not (validate_batch(a, backend).all() and validate_batch(b, backend).all()):
        raise InvalidOperandError("batch contains invalid BCD")
    cin = np.broadcast_to(np.asarray(carry_in, dtype=np.uint64), (a.shape[0],)).copy()
    out = np.empty_like(a)
    cout = np.empty(a.shape[0], dtype=np.uint64)
    _kernels(backend).cla_add(a, b, cin, out, cout)
    return out, cout.astype(np.uint8)


def shift_digits_batch(w: np.ndarray, k: int, backend: Optional[str] = None) -> np.ndarray:
    if k < 0:
        raise ValueError("negative shift")
    w = np.ascontiguousarray(w, dtype=np.uint64)
    out = np.empty_like(w)
    _kernels(backend).shift_digits(w, k, out)
    return out


def multiply_batch(x: np.ndarray, y: np.ndarray, backend: Optional[str] = None) -> np.ndarray:
    """Full BCD products of 16-digit words ``x`` and ``y``; ``(n, 3)`` result."""
    x = np.ascontiguousarray(x, dtype=np.uint64).reshape(-1)
    y = np.ascontiguousarray(y, dtype=np.uint64).reshape(-1)
    if x.shape != y.shape:
        raise ValueError("operand shapes differ")
    if not (validate_batch(x[:, None], backend).all() and validate_batch(y[:, None], backend).all()):
        raise InvalidOperandError("batch contains invalid BCD")
    out = np.empty((x.shape[0], WIDE_LIMBS), dtype=np.uint64)
    _kernels(backend).multiply(x, y, WORD_DIGITS, out)
    return out
