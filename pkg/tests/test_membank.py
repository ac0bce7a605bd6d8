"""Bank assignment and slot schedule of the in-place NTT."""

import pytest

from unipq import membank


@pytest.fixture(scope="module")
def full():
    return membank.emit_bank_schedule(256)


def test_full_size_slot_count(full):
    # 8 stages x 64 issue slots, interleave removes every stall
    reads = [a for a in full.accesses if a.rw == "r"]
    assert max(a.slot for a in reads) + 1 == 512


def test_slot_reads_split_across_banks(full):
    by_slot = {}
    for a in full.accesses:
        if a.rw == "r":
            by_slot.setdefault(a.slot, []).append(a.bank)
    for banks in by_slot.values():
        assert sorted(banks) == [0, 1]


def test_every_word_touched_once_per_stage(full):
    for stage in range(8):
        words = sorted(a.word for a in full.accesses
                       if a.stage == stage and a.rw == "r")
        assert words == list(range(128))


def test_no_conflicts_full(full):
    assert membank.scan_conflicts(full) == []


def test_no_conflicts_toy():
    sched = membank.emit_bank_schedule(16)
    assert membank.scan_conflicts(sched) == []


def test_unsupported_size():
    with pytest.raises(ValueError):
        membank.emit_bank_schedule(64)


def test_slot_permute_and_csv(full):
    assert membank.SLOT_PERMUTE == (0, 2, 1, 3)
    csv = full.to_csv()
    assert csv.splitlines()[0] == "slot,bank,word,rw,stage"
    assert len(csv.splitlines()) == 1 + len(full.accesses)


def test_conflict_scanner_flags_port_overrun():
    sched = membank.emit_bank_schedule(16)
    bad = membank.BankSchedule(16, 4, list(sched.accesses))
    a = bad.accesses[0]
    bad.accesses.append(membank.Access(a.slot, a.bank, 99, a.rw, a.stage))
    assert any("port overrun" in p for p in membank.scan_conflicts(bad))
