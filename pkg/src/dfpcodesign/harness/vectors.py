"""Category-driven test-vector generation and the JSON-lines vector file."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Set, Tuple

from ..decnum import (
    DECIMAL64,
    DecimalValue,
    Flags,
    FormatParams,
    RoundingMode,
    decimal_decode,
    decimal_encode,
    format_for_hex,
    get_format,
)
from .oracle import oracle_multiply

CATEGORIES = ("normal", "rounding", "overflow", "underflow", "clamping", "special")
OUTPUT_PATTERNS = ("cycles", "time-proxy")
MAX_ATTEMPTS = 1000


class GenerationError(RuntimeError):
    pass


class VectorFileError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorConfig:
    format: FormatParams = DECIMAL64
    count: int = 8000
    seed: int = 0
    categories: Tuple[str, ...] = CATEGORIES
    repetitions: int = 1
    output_pattern: str = "cycles"

    def __post_init__(self):
        if isinstance(self.format, str):
            object.__setattr__(self, "format", get_format(self.format))
        object.__setattr__(self, "categories", tuple(self.categories))
        if self.count <= 0:
            raise ValueError("count must be positive")
        if not self.categories:
            raise ValueError("at least one category is required")
        unknown = set(self.categories) - set(CATEGORIES)
        if unknown:
            raise ValueError("unknown categories: %s" % ", ".join(sorted(unknown)))
        if self.repetitions <= 0:
            raise ValueError("repetitions must be positive")
        if self.output_pattern not in OUTPUT_PATTERNS:
            raise ValueError("output pattern must be one of %s" % (OUTPUT_PATTERNS,))
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class TestVector:
    id: int
    category: str
    a_bits: int
    b_bits: int
    format: FormatParams = DECIMAL64
    rounding: RoundingMode = RoundingMode.TIES_EVEN
    # optional expected result, for externally supplied conformance vectors
    expected_bits: Optional[int] = None
    expected_flags: Optional[Flags] = None

    __test__ = False  # not a pytest class

    @property
    def a(self) -> DecimalValue:
        return decimal_decode(self.a_bits, self.format)

    @property
    def b(self) -> DecimalValue:
        return decimal_decode(self.b_bits, self.format)

    def to_json(self) -> str:
        doc = {"id": self.id, "category": self.category,
               "a": self.format.to_hex(self.a_bits), "b": self.format.to_hex(self.b_bits)}
        if self.rounding is not RoundingMode.TIES_EVEN:
            doc["rounding"] = self.rounding.value
        if self.expected_bits is not None:
            doc["expected"] = self.format.to_hex(self.expected_bits)
        if self.expected_flags is not None:
            doc["flags"] = self.expected_flags.names()
        return json.dumps(doc)

    @classmethod
    def from_json(cls, line: str) -> "TestVector":
        try:
            doc = json.loads(line)
            fmt = format_for_hex(doc["a"])
            expected = doc.get("expected")
            flags = doc.get("flags")
            return cls(
                id=int(doc["id"]),
                category=str(doc["category"]),
                a_bits=fmt.from_hex(doc["a"]),
                b_bits=fmt.from_hex(doc["b"]),
                format=fmt,
                rounding=RoundingMode(doc.get("rounding", "ties_even")),
                expected_bits=fmt.from_hex(expected) if expected is not None else None,
                expected_flags=Flags.from_names(flags) if flags is not None else None,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise VectorFileError("bad vector line %r: %s" % (line.strip()[:80], exc)) from None


# ---------------------------------------------------------------- classification

def classify(a: DecimalValue, b: DecimalValue, fmt: FormatParams,
             rounding: RoundingMode = RoundingMode.TIES_EVEN) -> Set[str]:
    """Every category whose predicate the operand pair satisfies."""
    if not (a.is_finite and b.is_finite) or a.is_zero or b.is_zero:
        return {"special"}
    _, flags = oracle_multiply(a, b, fmt, rounding)
    out = set()
    if flags == Flags.NONE:
        out.add("normal")
    if flags == Flags.INEXACT:
        out.add("rounding")
    if Flags.OVERFLOW in flags:
        out.add("overflow")
    if Flags.UNDERFLOW in flags:
        out.add("underflow")
    if Flags.CLAMPED in flags and not flags & (Flags.OVERFLOW | Flags.UNDERFLOW):
        out.add("clamping")
    return out


def belongs(vec: TestVector) -> bool:
    return vec.category in classify(vec.a, vec.b, vec.format, vec.rounding)


# ---------------------------------------------------------------- generation

class _Sampler:
    def __init__(self, rng: random.Random, fmt: FormatParams):
        self.rng = rng
        self.fmt = fmt

    def coefficient(self, ndigits: int) -> int:
        return self.rng.randrange(10 ** (ndigits - 1), 10 ** ndigits)

    def sign(self) -> int:
        return self.rng.getrandbits(1)

    def split_exponent(self, q: int) -> Tuple[int, int]:
        f = self.fmt
        lo, hi = max(f.q_min, q - f.q_max), min(f.q_max, q - f.q_min)
        if lo > hi:
            raise GenerationError("exponent %d cannot be split" % q)
        qa = self.rng.randint(lo, hi)
        return qa, q - qa

    def pair(self, ca: int, cb: int, q: int) -> Tuple[DecimalValue, DecimalValue]:
        qa, qb = self.split_exponent(q)
        return (DecimalValue.finite(self.sign(), ca, qa),
                DecimalValue.finite(self.sign(), cb, qb))

    def normal(self):
        f = self.fmt
        la = self.rng.randint(1, f.p - 1)
        lb = self.rng.randint(1, f.p - la)
        return self.pair(self.coefficient(la), self.coefficient(lb),
                         self.rng.randint(f.emin, f.q_max))

    def rounding(self):
        f = self.fmt
        la = self.rng.randint(2, f.p)
        lb = self.rng.randint(max(1, f.p + 2 - la), f.p)
        return self.pair(self.coefficient(la), self.coefficient(lb),
                         self.rng.randint(f.emin, f.q_max - f.p))

    def overflow(self):
        f = self.fmt
        ca, cb = self.coefficient(self.rng.randint(1, f.p)), self.coefficient(self.rng.randint(1, f.p))
        digits = len(str(ca * cb))
        adjusted = f.emax + self.rng.randint(1, 3 * f.p)
        return self.pair(ca, cb, adjusted - digits + 1)

    def underflow(self):
        f = self.fmt
        ca, cb = self.coefficient(self.rng.randint(1, f.p)), self.coefficient(self.rng.randint(1, f.p))
        digits = len(str(ca * cb))
        return self.pair(ca, cb, f.q_min - self.rng.randint(1, digits + 2))

    def clamping(self):
        f = self.fmt
        la = self.rng.randint(1, f.p - 2)
        lb = self.rng.randint(1, f.p - 1 - la)
        ca, cb = self.coefficient(la), self.coefficient(lb)
        spare = f.p - len(str(ca * cb))
        return self.pair(ca, cb, f.q_max + self.rng.randint(1, spare))

    def special(self):
        f, rng = self.fmt, self.rng

        def finite():
            n = rng.randint(1, f.p)
            return DecimalValue.finite(self.sign(), self.coefficient(n),
                                       rng.randint(f.q_min, f.q_max))

        def zero():
            return DecimalValue.finite(self.sign(), 0, rng.randint(f.q_min, f.q_max))

        def nan(signaling):
            payload = rng.choice([0, rng.randrange(1, 10 ** min(6, f.p - 1))])
            return DecimalValue.nan(self.sign(), payload, signaling)

        def inf():
            return DecimalValue.infinity(self.sign())

        case = rng.randrange(8)
        if case == 0:
            a, b = nan(False), finite()
        elif case == 1:
            a, b = nan(True), finite()
        elif case == 2:
            a, b = inf(), finite()
        elif case == 3:
            a, b = inf(), zero()
        elif case == 4:
            a, b = inf(), inf()
        elif case == 5:
            a, b = zero(), finite()
        elif case == 6:
            a, b = zero(), zero()
        else:
            a, b = nan(rng.random() < 0.5), nan(rng.random() < 0.5)
        if rng.random() < 0.5:
            a, b = b, a
        return a, b


def generate_vectors(cfg: GeneratorConfig, rounding: RoundingMode = RoundingMode.TIES_EVEN
                     ) -> Iterator[TestVector]:
    """Deterministic vector stream; categories are assigned round-robin.

    Every vector is re-checked against the oracle classifier before it is
    emitted; a category that cannot be hit raises :class:`GenerationError`.
    """
    rng = random.Random(cfg.seed)
    sampler = _Sampler(rng, cfg.format)
    for i in range(cfg.count):
        category = cfg.categories[i % len(cfg.categories)]
        make = getattr(sampler, category)
        for _ in range(MAX_ATTEMPTS):
            try:
                a, b = make()
            except GenerationError:
                continue
            if category in classify(a, b, cfg.format, rounding):
                break
        else:
            raise GenerationError("could not generate a %s vector for %s"
                                  % (category, cfg.format.name))
        yield TestVector(i, category, decimal_encode(a, cfg.format), decimal_encode(b, cfg.format),
                         cfg.format, rounding)


def standard_vectors(count: int = 8000, seed: int = 2019, fmt: FormatParams = DECIMAL64
                     ) -> List[TestVector]:
    """The evaluation set: every category, decimal64 by default."""
    return list(generate_vectors(GeneratorConfig(fmt, count, seed)))


def write_vectors(vectors: Iterable[TestVector], path) -> int:
    n = 0
    with open(path, "w", newline="\n") as fh:
        for vec in vectors:
            fh.write(vec.to_json())
            fh.write("\n")
            n += 1
    return n


def read_vectors(path) -> List[TestVector]:
    try:
        with open(path) as fh:
            lines = [ln for ln in fh if ln.strip()]
    except OSError as exc:
        raise VectorFileError("cannot read %s: %s" % (path, exc)) from None
    return [TestVector.from_json(ln) for ln in lines]
