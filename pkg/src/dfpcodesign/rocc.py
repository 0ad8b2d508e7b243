"""RoCC custom-instruction word codec and the command/response messages.

Field layout of the 32-bit word, most significant bit first::

    funct7[31:25] rs2[24:20] rs1[19:15] xd[14] xs1[13] xs2[12] rd[11:7] opcode[6:0]
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union

# As printed in the published instruction table and embedded in 0x08A5F617.
DEFAULT_OPCODE = 0b0010111
# The conventional RISC-V custom-0 major opcode, selectable instead.
CUSTOM0_OPCODE = 0b0001011


class RoccError(ValueError):
    pass


class EncodingError(RoccError):
    pass


class ForeignInstructionError(RoccError):
    def __init__(self, opcode: int, expected: int):
        super().__init__("opcode %s is not the custom opcode %s" % (format(opcode, "07b"),
                                                                    format(expected, "07b")))
        self.opcode = opcode


class UnknownFunctionError(RoccError):
    def __init__(self, code: int):
        super().__init__("unknown funct7 code %s" % format(code, "07b"))
        self.code = code


class Funct(enum.IntEnum):
    WR = 0b0000000
    RD = 0b0000001
    LD = 0b0000010
    ACCUM = 0b0000011
    DEC_ADD = 0b0000100
    CLR_ALL = 0b0000101
    DEC_CNV = 0b0000110
    DEC_MUL = 0b0000111
    DEC_ACCUM = 0b0001000

    @property
    def description(self) -> str:
        return _DESCRIPTIONS[self]


_DESCRIPTIONS = {
    Funct.WR: "Write a value to a register",
    Funct.RD: "Read a value from a register",
    Funct.LD: "Load a value from a memory",
    Funct.ACCUM: "Accumulate a value into a register",
    Funct.DEC_ADD: "Add two BCD numbers",
    Funct.CLR_ALL: "Clear all registers",
    Funct.DEC_CNV: "Convert binary number to corresponding BCD",
    Funct.DEC_MUL: "Multiply two BCD numbers",
    Funct.DEC_ACCUM: "Accumulate BCD numbers stored in internal registers",
}


def funct_name(code: int) -> Funct:
    try:
        return Funct(code)
    except ValueError:
        raise UnknownFunctionError(code) from None


_FIELDS = (
    # name, shift, width
    ("funct7", 25, 7),
    ("rs2", 20, 5),
    ("rs1", 15, 5),
    ("xd", 14, 1),
    ("xs1", 13, 1),
    ("xs2", 12, 1),
    ("rd", 7, 5),
    ("opcode", 0, 7),
)


@dataclass(frozen=True)
class RoccInstruction:
    funct7: int
    rs2: int = 0
    rs1: int = 0
    xd: int = 0
    xs1: int = 0
    xs2: int = 0
    rd: int = 0
    opcode: int = DEFAULT_OPCODE

    @property
    def funct(self) -> Funct:
        return funct_name(self.funct7)

    def fields(self) -> dict:
        return {name: getattr(self, name) for name, _, _ in _FIELDS}

    def describe(self) -> str:
        try:
            name = self.funct.name
        except UnknownFunctionError:
            name = "?"
        parts = ["funct7=%s (%s)" % (format(self.funct7, "07b"), name)]
        parts += ["%s=%d" % (n, getattr(self, n)) for n in ("rs2", "rs1", "xd", "xs1", "xs2", "rd")]
        parts.append("opcode=%s" % format(self.opcode, "07b"))
        return " ".join(parts)


def encode(instr: RoccInstruction) -> int:
    word = 0
    for name, shift, width in _FIELDS:
        value = getattr(instr, name)
        if not 0 <= value < (1 << width):
            raise EncodingError("%s=%r does not fit %d bits" % (name, value, width))
        word |= value << shift
    return word


def decode(word: int, opcode: int = DEFAULT_OPCODE) -> RoccInstruction:
    if not 0 <= word < (1 << 32):
        raise EncodingError("instruction word must be 32 bits")
    values = {name: (word >> shift) & ((1 << width) - 1) for name, shift, width in _FIELDS}
    if values["opcode"] != opcode:
        raise ForeignInstructionError(values["opcode"], opcode)
    return RoccInstruction(**values)


def parse_word(text: str) -> int:
    text = text.strip().lower().removeprefix(".word").strip()
    return int(text, 16)


def format_word(word: int) -> str:
    return "0x%08X" % word


@dataclass(frozen=True)
class Command:
    """A decoded instruction as seen by the accelerator.

    ``rs1``/``rs2`` hold the transferred 64-bit core register values when the
    matching ``xs`` flag is set; otherwise they hold the 5-bit field, i.e. an
    accelerator register address.
    """

    funct: Union[Funct, int]
    rd: int = 0
    rs1: int = 0
    rs2: int = 0
    xd: int = 0
    xs1: int = 0
    xs2: int = 0

    @classmethod
    def from_instruction(cls, instr: RoccInstruction, rs1_value: Optional[int] = None,
                         rs2_value: Optional[int] = None) -> "Command":
        try:
            funct = funct_name(instr.funct7)
        except UnknownFunctionError:
            funct = instr.funct7
        rs1 = rs1_value if instr.xs1 else instr.rs1
        rs2 = rs2_value if instr.xs2 else instr.rs2
        if rs1 is None or rs2 is None:
            raise RoccError("xs flag set but no source value supplied")
        return cls(funct, instr.rd, rs1, rs2, instr.xd, instr.xs1, instr.xs2)


@dataclass(frozen=True)
class Response:
    rd: int
    data: int
