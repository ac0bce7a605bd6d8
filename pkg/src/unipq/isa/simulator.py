"""Dual-lane scheduler and cycle accounting.

Serial mode issues instructions back to back.  Parallel mode issues a
flagged Set-1/Set-2 pair together; the pair retires at the maximum of
the two costs plus a fixed sync overhead.  Execution semantics are
identical in both modes (scheduling only affects timing), which the
property suite checks by comparing final memories.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

from .costs import CostTable
from .instructions import (Env, Instruction, OPCODES, Program, ProgramError,
                           instruction_ports)
from .machine import Memory


@dataclass
class TraceEntry:
    index: int
    opcode: str
    lane: str
    issue: int
    retire: int


@dataclass
class Trace:
    mode: str
    entries: list[TraceEntry] = field(default_factory=list)

    @property
    def total_cycles(self) -> int:
        return max((e.retire for e in self.entries), default=0)

    def lane_busy(self, lane: str) -> int:
        return sum(e.retire - e.issue for e in self.entries if e.lane == lane)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("index,opcode,lane,issue,retire\n")
        for e in self.entries:
            out.write(f"{e.index},{e.opcode},{e.lane},{e.issue},{e.retire}\n")
        return out.getvalue()


def _check_bank_ports(a: Instruction, b: Instruction) -> None:
    clash = instruction_ports(a) & instruction_ports(b)
    if clash:
        bank, port = clash.pop()
        raise ProgramError(
            f"bank conflict: {a.opcode} and {b.opcode} both need bank "
            f"{bank} port '{port}' in the same cycle")


def run(program: Program, mode: str = "serial",
        memory: Memory | None = None,
        table: CostTable | None = None) -> tuple[Memory, Trace]:
    if mode not in ("serial", "parallel"):
        raise ValueError("mode must be 'serial' or 'parallel'")
    mem = memory if memory is not None else Memory()
    table = table or CostTable()
    env = Env(program.meta)
    trace = Trace(mode)
    mem.iram = list(program.instructions)

    t = 0
    i = 0
    instrs = program.instructions
    while i < len(instrs):
        ins = instrs[i]
        if mode == "parallel" and ins.par:
            pair = instrs[i + 1]
            _check_bank_ports(ins, pair)
            ca, cb = table.cost(ins.opcode), table.cost(pair.opcode)
            retire = t + max(ca, cb) + table.sync_overhead
            for j, p in ((i, ins), (i + 1, pair)):
                OPCODES[p.opcode].handler(mem, p, env)
                trace.entries.append(
                    TraceEntry(j, p.opcode, p.lane, t, retire))
            t = retire
            i += 2
        else:
            OPCODES[ins.opcode].handler(mem, ins, env)
            retire = t + table.cost(ins.opcode)
            trace.entries.append(
                TraceEntry(i, ins.opcode, ins.lane, t, retire))
            t = retire
            i += 1
    return mem, trace


def cycle_report(trace_serial: Trace, trace_parallel: Trace) -> dict:
    s = trace_serial.total_cycles
    p = trace_parallel.total_cycles
    return {
        "serial_cycles": s,
        "parallel_cycles": p,
        "reduction_pct": 0.0 if s == 0 else 100.0 * (s - p) / s,
        "set1_busy_serial": trace_serial.lane_busy("Set1"),
        "set2_busy_serial": trace_serial.lane_busy("Set2"),
        "set1_busy_parallel": trace_parallel.lane_busy("Set1"),
        "set2_busy_parallel": trace_parallel.lane_busy("Set2"),
    }


def report_text(report: dict) -> str:
    return "".join(f"{k} = {v}\n" for k, v in report.items())
