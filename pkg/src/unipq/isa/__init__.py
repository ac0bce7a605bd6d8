"""Dual-lane ISA model: memory, instructions, programs, simulator."""

from .costs import CostTable, DEFAULT_COSTS, FIXED_COSTS
from .instructions import (Env, Instruction, OPCODES, Program, ProgramError,
                           instruction_ports, load_program)
from .machine import BANK_WORDS, Memory, N_BANKS, POLY_WORDS
from .programs import Asm, builtin_program
from .simulator import Trace, cycle_report, report_text, run

__all__ = [
    "Asm", "BANK_WORDS", "CostTable", "DEFAULT_COSTS", "Env", "FIXED_COSTS",
    "Instruction", "Memory", "N_BANKS", "OPCODES", "POLY_WORDS", "Program",
    "ProgramError", "Trace", "builtin_program", "cycle_report",
    "instruction_ports", "load_program", "report_text", "run", "run_builtin",
]


def run_builtin(program: Program, inputs: dict, mode: str = "serial",
                table: CostTable | None = None):
    """Execute a builtin program with named byte inputs.

    Returns (outputs, trace) where outputs maps each `out.*` region of
    the program's io table to its bytes.
    """
    io = program.meta["io"]
    mem = Memory()
    for name, (bank, word, nbytes) in io.items():
        if name.startswith("in."):
            data = inputs[name[3:]]
            if len(data) != nbytes:
                raise ValueError(f"{name}: expected {nbytes} bytes, "
                                 f"got {len(data)}")
            mem.store_bytes(bank, word, data)
        elif name.startswith("const."):
            mem.store_bytes(bank, word, (1).to_bytes(nbytes, "little"))
    mem, trace = run(program, mode=mode, memory=mem, table=table)
    outputs = {name[4:]: mem.load_bytes(bank, word, nbytes)
               for name, (bank, word, nbytes) in io.items()
               if name.startswith("out.")}
    return outputs, trace
