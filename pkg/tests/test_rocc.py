import random

import pytest

from dfpcodesign import rocc
from dfpcodesign.rocc import (
    Command,
    EncodingError,
    ForeignInstructionError,
    Funct,
    RoccInstruction,
    UnknownFunctionError,
    decode,
    encode,
    format_word,
    funct_name,
    parse_word,
)


def test_dec_add_word():
    instr = RoccInstruction(funct7=0b0000100, rs2=10, rs1=11, xd=1, xs1=1, xs2=1, rd=12)
    assert encode(instr) == 0x08A5F617


def test_clr_all_word():
    assert encode(RoccInstruction(funct7=int(Funct.CLR_ALL))) == 0x0A000017


def test_wr_word():
    assert encode(RoccInstruction(funct7=int(Funct.WR), rs1=0b01011, xd=1)) == 0x0005C017


def test_decode_dec_add():
    d = decode(0x08A5F617)
    assert d.funct is Funct.DEC_ADD
    assert (d.rs1, d.rs2, d.rd) == (11, 10, 12)
    assert (d.xd, d.xs1, d.xs2) == (1, 1, 1)
    assert d.opcode == 0b0010111


def test_round_trip_random_words():
    rng = random.Random(3)
    for _ in range(100_000):
        word = (rng.getrandbits(25) << 7) | rocc.DEFAULT_OPCODE
        assert encode(decode(word)) == word


def test_foreign_opcode():
    word = (0x08A5F617 & ~0x7F) | 0b0110011
    with pytest.raises(ForeignInstructionError) as err:
        decode(word)
    assert err.value.opcode == 0b0110011


def test_configurable_opcode():
    instr = RoccInstruction(funct7=4, rd=3, opcode=rocc.CUSTOM0_OPCODE)
    word = encode(instr)
    assert decode(word, opcode=rocc.CUSTOM0_OPCODE) == instr
    with pytest.raises(ForeignInstructionError):
        decode(word)


@pytest.mark.parametrize("field,value", [("funct7", 128), ("rs1", 32), ("xd", 2), ("opcode", 128),
                                         ("rd", -1)])
def test_field_overflow(field, value):
    kwargs = {"funct7": 4, field: value}
    with pytest.raises(EncodingError):
        encode(RoccInstruction(**kwargs))


def test_funct_names():
    assert funct_name(0b0000100) is Funct.DEC_ADD
    assert funct_name(0b0000100).description == "Add two BCD numbers"
    assert funct_name(0b0000111) is Funct.DEC_MUL
    assert funct_name(0b0000111).description == "Multiply two BCD numbers"
    with pytest.raises(UnknownFunctionError) as err:
        funct_name(0b1111111)
    assert err.value.code == 0b1111111


def test_unknown_funct_still_decodes():
    word = encode(RoccInstruction(funct7=0b1111111, rd=1))
    d = decode(word)
    assert d.funct7 == 0b1111111
    assert "?" in d.describe()
    with pytest.raises(UnknownFunctionError):
        d.funct


def test_funct_codes_unique():
    assert len({int(f) for f in Funct}) == len(Funct)


def test_word_text():
    assert parse_word(".word0x08A5F617") == 0x08A5F617
    assert parse_word("08a5f617") == 0x08A5F617
    assert format_word(0x0005C017) == "0x0005C017"


def test_command_from_instruction():
    instr = decode(0x08A5F617)
    cmd = Command.from_instruction(instr, 0x1234, 0x8766)
    assert (cmd.funct, cmd.rd, cmd.rs1, cmd.rs2) == (Funct.DEC_ADD, 12, 0x1234, 0x8766)
    reg = Command.from_instruction(RoccInstruction(funct7=4, rs1=3, rs2=4, rd=5))
    assert (reg.rs1, reg.rs2) == (3, 4)
    with pytest.raises(rocc.RoccError):
        Command.from_instruction(instr)
