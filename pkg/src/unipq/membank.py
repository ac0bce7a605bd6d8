"""Two-bank memory-access schedule for the NTT loop.

Coefficients live two to a 64-bit word (word w holds coefficients 2w and
2w+1).  Each issue slot feeds both butterfly cores by reading one word
from each bank and, a pipeline depth later, writing one word back to
each bank.  The per-stage bank assignment keeps the two words of every
slot in different banks, and the slot order interleaves word groups so
the first reads of a stage avoid the words still being written at the
tail of the previous stage.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

N_WORDS = 128          # one polynomial, n = 256
SLOT_PERMUTE = (0, 2, 1, 3)


@dataclass(frozen=True)
class Access:
    slot: int           # global butterfly issue slot
    bank: int           # 0 or 1
    word: int           # logical word index within the polynomial
    rw: str             # "r" or "w"
    stage: int


@dataclass
class BankSchedule:
    n: int
    pipeline_depth: int
    accesses: list[Access] = field(default_factory=list)

    @property
    def slots(self) -> int:
        return 1 + max(a.slot for a in self.accesses)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("slot,bank,word,rw,stage\n")
        for a in self.accesses:
            out.write(f"{a.slot},{a.bank},{a.word},{a.rw},{a.stage}\n")
        return out.getvalue()


def _stage_word_pairs(words: int, stage: int) -> list[tuple[int, int]]:
    """Word pairs fed per slot, in issue order, for one stage.

    Stage s has butterfly span len = words / 2^s coefficients pairs; the
    word distance is d = max(len/2, 1).  Base words (those with even
    w // d) are issued in groups of four permuted by SLOT_PERMUTE.
    """
    length = words >> stage
    d = max(length // 2, 1)
    if d == 1:
        bases = list(range(0, words, 2))
    else:
        bases = [w for w in range(words) if (w // d) % 2 == 0]
    order = []
    for g in range(0, len(bases), 4):
        group = bases[g:g + 4]
        order.extend(group[p] for p in SLOT_PERMUTE if p < len(group))
    if d == 1:
        return [(w, w + 1) for w in order]
    return [(w, w + d) for w in order]


def _bank_of(word: int, stage: int, words: int) -> int:
    length = words >> stage
    d = max(length // 2, 1)
    return (word // d) % 2


def emit_bank_schedule(n: int = 256, pipeline_depth: int = 4) -> BankSchedule:
    """Full read/write trace for an in-place n-point NTT.

    n = 16 is the toy mode mirroring the worked figure; n = 256 is the
    real engine size (512 slots, 8 stages, 2 butterflies per slot).
    """
    if n not in (16, 256):
        raise ValueError("supported sizes: 16 (toy) and 256")
    words = n // 2
    stages = n.bit_length() - 1  # log2(n)
    sched = BankSchedule(n=n, pipeline_depth=pipeline_depth)
    slot = 0
    prev_writes: dict[int, int] = {}
    for s in range(stages):
        pairs = _stage_word_pairs(words, s)
        # Stall the stage start just enough that no read lands at or
        # before the previous stage's write of the same word.  For the
        # full-size engine the slot interleave makes the stall zero.
        for t, (wa, wb) in enumerate(pairs):
            for w in (wa, wb):
                if w in prev_writes:
                    slot = max(slot, prev_writes[w] - t + 1)
        writes: dict[int, int] = {}
        for wa, wb in pairs:
            for w in (wa, wb):
                sched.accesses.append(
                    Access(slot, _bank_of(w, s, words), w, "r", s))
            wslot = slot + pipeline_depth
            for w in (wa, wb):
                sched.accesses.append(
                    Access(wslot, _bank_of(w, s, words), w, "w", s))
                writes[w] = wslot
            slot += 1
        prev_writes = writes
    return sched


def scan_conflicts(sched: BankSchedule) -> list[str]:
    """Port and ordering violations in a schedule; empty list = clean.

    Checks per slot one read and one write per bank at most, and that no
    word is overwritten while a later read of it (in the same or the
    next stage) is still pending.
    """
    problems = []
    per_slot: dict[tuple[int, int, str], int] = {}
    for a in sched.accesses:
        key = (a.slot, a.bank, a.rw)
        per_slot[key] = per_slot.get(key, 0) + 1
        if per_slot[key] > 1:
            problems.append(f"slot {a.slot}: bank {a.bank} port overrun ({a.rw})")

    reads: dict[tuple[int, int], int] = {}
    writes: dict[tuple[int, int], int] = {}
    stages = sorted({a.stage for a in sched.accesses})
    for a in sched.accesses:
        (reads if a.rw == "r" else writes)[(a.stage, a.word)] = a.slot
    for s in stages:
        for (st, w), wslot in writes.items():
            if st != s:
                continue
            if wslot <= reads[(s, w)]:
                problems.append(f"stage {s} word {w}: write at/before its read")
            nxt = reads.get((s + 1, w))
            if nxt is not None and nxt <= wslot:
                problems.append(
                    f"stage {s + 1} word {w}: read at slot {nxt} before "
                    f"stage-{s} write lands at slot {wslot}")
    return problems
