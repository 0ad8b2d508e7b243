"""Functional and cycle model of the decimal RoCC accelerator.

The accelerator owns 32 wide BCD registers (48 digits, three 64-bit limbs)
and a small word-addressed memory for ``LD``.  Each command walks the
interface FSM ``IDLE -> DECODE -> EXECUTE -> [RESPOND] -> IDLE``; DECODE
lasts ``cmd_latency`` cycles (command transfer), EXECUTE lasts the function's
``exec_cycles`` entry and RESPOND lasts ``resp_latency`` and only happens when
``xd`` is set.  Architectural effects land at the end of EXECUTE.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import bcd
from .rocc import Command, Funct, Response, UnknownFunctionError

NUM_REGISTERS = 32
REG_MASK = (1 << (64 * bcd.WIDE_LIMBS)) - 1
WORD_MASK = (1 << 64) - 1


class AcceleratorError(RuntimeError):
    trace: Optional["CommandTrace"] = None


class AcceleratorBusyError(AcceleratorError):
    pass


class InvalidOperandError(AcceleratorError):
    pass


class MemoryFaultError(AcceleratorError):
    pass


class CostTableError(ValueError):
    pass


# Software primitives charged by the multiplication pipelines.  Defaults are
# calibrated on the standard decimal64 vector mix (see README, "Calibration").
DEFAULT_SW_OP_CYCLES = {
    "loop_overhead": 10,
    "special_rule": 40,
    "decode_dpd": 30,
    "sign_exponent": 18,
    "bin_convert": 425,
    "limb_mul": 312,
    "carry_pass": 113,
    "round_digit": 9,
    "exponent_adjust": 30,
    "encode_dpd": 50,
    "bcd_shift": 15,
    "bcd_merge": 14,
    "dummy_call": 15,
}

DEFAULT_EXEC_CYCLES = {
    Funct.WR: 1,
    Funct.RD: 1,
    Funct.LD: 4,
    Funct.ACCUM: 1,
    Funct.DEC_ADD: 1,
    Funct.CLR_ALL: 1,
    Funct.DEC_CNV: 4,
    Funct.DEC_MUL: 20,
    Funct.DEC_ACCUM: 1,
}


@dataclass(frozen=True)
class CostTable:
    cmd_latency: int = 2
    resp_latency: int = 2
    exec_cycles: Mapping[Funct, int] = field(default_factory=lambda: dict(DEFAULT_EXEC_CYCLES))
    sw_op_cycles: Mapping[str, int] = field(default_factory=lambda: dict(DEFAULT_SW_OP_CYCLES))

    def __post_init__(self):
        values = [self.cmd_latency, self.resp_latency, *self.exec_cycles.values(),
                  *self.sw_op_cycles.values()]
        if any(not isinstance(v, int) or isinstance(v, bool) or v < 0 for v in values):
            raise CostTableError("cycle costs must be non-negative integers")
        missing = set(Funct) - set(self.exec_cycles)
        if missing:
            raise CostTableError("no exec cost for %s" % sorted(f.name for f in missing))

    @classmethod
    def default(cls) -> "CostTable":
        return cls()

    def command_cycles(self, funct: Funct, xd: int) -> int:
        return self.cmd_latency + self.exec_cycles[funct] + (self.resp_latency if xd else 0)

    def sw(self, primitive: str) -> int:
        return self.sw_op_cycles[primitive]

    def to_mapping(self) -> Dict[str, int]:
        out = {"cmd_latency": self.cmd_latency, "resp_latency": self.resp_latency}
        for f in Funct:
            out["exec." + f.name] = self.exec_cycles[f]
        for name in sorted(self.sw_op_cycles):
            out["sw." + name] = self.sw_op_cycles[name]
        return out

    @classmethod
    def from_mapping(cls, data: Mapping[str, int], base: Optional["CostTable"] = None) -> "CostTable":
        """Overlay a flat ``key -> cycles`` mapping on ``base`` (defaults).

        Unknown keys are rejected, including ``sw.*`` names that no pipeline
        charges.
        """
        base = base or cls.default()
        cmd, resp = base.cmd_latency, base.resp_latency
        execs = dict(base.exec_cycles)
        sws = dict(base.sw_op_cycles)
        for key, value in data.items():
            if key == "cmd_latency":
                cmd = value
            elif key == "resp_latency":
                resp = value
            elif key.startswith("exec."):
                try:
                    execs[Funct[key[5:]]] = value
                except KeyError:
                    raise CostTableError("unknown function in key %r" % key) from None
            elif key.startswith("sw.") and key[3:] in sws:
                sws[key[3:]] = value
            else:
                raise CostTableError("unknown cost key %r" % key)
        return cls(cmd, resp, execs, sws)

    def replace(self, **entries: int) -> "CostTable":
        """Copy with flat-key overrides, e.g. ``replace(**{"sw.limb_mul": 90})``."""
        return CostTable.from_mapping(entries, base=self)

    @classmethod
    def load(cls, path) -> "CostTable":
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise CostTableError("cost file must hold a JSON object")
        return cls.from_mapping(data)

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_mapping(), fh, indent=2)
            fh.write("\n")


class Phase(enum.Enum):
    IDLE = "idle"
    DECODE = "decode"
    EXECUTE = "execute"
    RESPOND = "respond"


@dataclass
class AcceleratorState:
    regfile: List[int] = field(default_factory=lambda: [0] * NUM_REGISTERS)
    mem: Dict[int, int] = field(default_factory=dict)
    phase: Phase = Phase.IDLE
    cycle_counter: int = 0
    remaining: int = 0
    pending: Optional[Command] = None
    response: Optional[Response] = None
    phase_log: Optional[List[Phase]] = None

    @property
    def busy(self) -> bool:
        return self.phase is not Phase.IDLE


@dataclass(frozen=True)
class TraceEntry:
    command: Command
    cycles: int
    response: Optional[Response] = None


@dataclass
class CommandTrace:
    entries: List[TraceEntry] = field(default_factory=list)

    @property
    def total_cycles(self) -> int:
        return sum(e.cycles for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


# ---------------------------------------------------------------- FSM

def _resolve_funct(cmd: Command) -> Funct:
    if isinstance(cmd.funct, Funct):
        return cmd.funct
    try:
        return Funct(cmd.funct)
    except ValueError:
        raise UnknownFunctionError(cmd.funct) from None


def _set_phase(state: AcceleratorState, phase: Phase, cycles: int) -> None:
    state.phase = phase
    state.remaining = cycles
    if state.phase_log is not None:
        state.phase_log.append(phase)


def submit(state: AcceleratorState, cmd: Command, costs: CostTable) -> None:
    """Hand a command to the accelerator; it must be idle."""
    if state.phase is not Phase.IDLE:
        raise AcceleratorBusyError("command offered while accelerator is %s" % state.phase.value)
    _resolve_funct(cmd)
    state.pending = cmd
    state.response = None
    _set_phase(state, Phase.DECODE, costs.cmd_latency)


def _finish_phase(state: AcceleratorState, costs: CostTable) -> None:
    cmd = state.pending
    if state.phase is Phase.DECODE:
        _set_phase(state, Phase.EXECUTE, costs.exec_cycles[_resolve_funct(cmd)])
    elif state.phase is Phase.EXECUTE:
        try:
            data = _apply(state, cmd)
        except Exception:
            state.pending = None
            _set_phase(state, Phase.IDLE, 0)
            raise
        if cmd.xd:
            state.response = Response(cmd.rd, data & WORD_MASK)
            _set_phase(state, Phase.RESPOND, costs.resp_latency)
        else:
            state.pending = None
            _set_phase(state, Phase.IDLE, 0)
    elif state.phase is Phase.RESPOND:
        state.pending = None
        _set_phase(state, Phase.IDLE, 0)


def tick(state: AcceleratorState, costs: CostTable) -> None:
    """Advance the FSM by one clock cycle."""
    if state.phase is Phase.IDLE:
        return
    while state.phase is not Phase.IDLE and state.remaining == 0:
        _finish_phase(state, costs)
    if state.phase is Phase.IDLE:
        return
    state.cycle_counter += 1
    state.remaining -= 1
    while state.phase is not Phase.IDLE and state.remaining == 0:
        _finish_phase(state, costs)


def drain(state: AcceleratorState, costs: CostTable) -> int:
    """Run the current command to completion; returns cycles consumed."""
    start = state.cycle_counter
    while state.phase is not Phase.IDLE:
        state.cycle_counter += state.remaining
        state.remaining = 0
        _finish_phase(state, costs)
    return state.cycle_counter - start


def execute(state: AcceleratorState, cmd: Command, costs: CostTable) -> Tuple[Optional[Response], int]:
    """Run one command to completion.  Returns ``(response, cycles)``."""
    submit(state, cmd, costs)
    cycles = drain(state, costs)
    return state.response, cycles


def reset(state: AcceleratorState, costs: CostTable) -> int:
    """Issue ``CLR_ALL``; returns the cycles it took."""
    _, cycles = execute(state, Command(Funct.CLR_ALL), costs)
    return cycles


def run_trace(state: AcceleratorState, cmds: Sequence[Command], costs: CostTable) -> CommandTrace:
    trace = CommandTrace()
    for cmd in cmds:
        try:
            resp, cycles = execute(state, cmd, costs)
        except Exception as exc:
            exc.trace = trace
            raise
        trace.entries.append(TraceEntry(cmd, cycles, resp))
    return trace


def shift_register(state: AcceleratorState, addr: int, k: int = 1) -> None:
    """Core-side decimal shift of register ``addr`` by ``k`` digits.

    Not an accelerator function: it models the software ``product << 4``
    step, so it takes no accelerator cycles (callers charge ``sw.bcd_shift``).
    """
    if state.busy:
        raise AcceleratorBusyError("register access while accelerator is busy")
    state.regfile[addr] = bcd.bcd_shift_digits(state.regfile[addr], k)


# ---------------------------------------------------------------- semantics

def _operand(state: AcceleratorState, value: int, transferred: int) -> int:
    if transferred:
        return value & WORD_MASK
    return state.regfile[value & 0x1F]


def _check_bcd(value: int, what: str) -> None:
    if not bcd.bcd_validate(value):
        raise InvalidOperandError("%s operand 0x%X is not valid BCD" % (what, value))


def _limb_index(value: int) -> int:
    if not 0 <= value < bcd.WIDE_LIMBS:
        raise InvalidOperandError("limb index %d out of range" % value)
    return value


def _apply(state: AcceleratorState, cmd: Command) -> int:
    """Perform the architectural effect; returns the response data word."""
    funct = _resolve_funct(cmd)
    regs = state.regfile
    rd = cmd.rd & 0x1F

    if funct is Funct.CLR_ALL:
        regs[:] = [0] * NUM_REGISTERS
        return 0

    if funct is Funct.WR:
        value = _operand(state, cmd.rs1, cmd.xs1) & WORD_MASK
        limb = _limb_index(_operand(state, cmd.rs2, cmd.xs2) if cmd.xs2 else cmd.rs2)
        if limb == 0:
            regs[rd] = value
        else:
            shift = 64 * limb
            regs[rd] = (regs[rd] & ~(WORD_MASK << shift) & REG_MASK) | (value << shift)
        return value

    if funct is Funct.RD:
        # rs1 is always an accelerator address here; rs2 picks the limb
        limb = _limb_index(cmd.rs2 & WORD_MASK if cmd.xs2 else cmd.rs2)
        return (regs[cmd.rs1 & 0x1F] >> (64 * limb)) & WORD_MASK

    if funct is Funct.LD:
        addr = _operand(state, cmd.rs1, cmd.xs1)
        try:
            regs[rd] = state.mem[addr] & WORD_MASK
        except KeyError:
            raise MemoryFaultError("address 0x%X is not mapped" % addr) from None
        return regs[rd]

    if funct is Funct.ACCUM:
        regs[rd] = (regs[rd] + _operand(state, cmd.rs1, cmd.xs1)) & REG_MASK
        return regs[rd]

    if funct is Funct.DEC_CNV:
        value = _operand(state, cmd.rs1, cmd.xs1)
        try:
            regs[rd] = bcd.bin_to_bcd(value)
        except bcd.BcdRangeError as exc:
            raise InvalidOperandError(str(exc)) from None
        return regs[rd]

    if funct is Funct.DEC_ADD:
        a = _operand(state, cmd.rs1, cmd.xs1)
        b = _operand(state, cmd.rs2, cmd.xs2)
        _check_bcd(a, "rs1")
        _check_bcd(b, "rs2")
        regs[rd], _ = bcd.bcd_cla_add(a, b)
        return regs[rd]

    if funct is Funct.DEC_MUL:
        a = _operand(state, cmd.rs1, cmd.xs1)
        b = _operand(state, cmd.rs2, cmd.xs2)
        for v, what in ((a, "rs1"), (b, "rs2")):
            if not bcd.bcd_validate(v, bcd.WORD_DIGITS):
                raise InvalidOperandError("%s operand is not a 16-digit BCD word" % what)
        regs[rd] = bcd.accumulate_partials(b, bcd.gen_multiples(a))
        return regs[rd]

    if funct is Funct.DEC_ACCUM:
        b = _operand(state, cmd.rs1, cmd.xs1)
        _check_bcd(regs[rd], "rd")
        _check_bcd(b, "rs1")
        regs[rd], _ = bcd.bcd_cla_add(regs[rd], b)
        return regs[rd]

    raise UnknownFunctionError(int(funct))  # pragma: no cover
