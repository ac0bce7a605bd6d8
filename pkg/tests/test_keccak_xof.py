"""Keccak primitives against hashlib, plus the squeeze-stream wrapper."""

import hashlib

import pytest
from hypothesis import given, settings, strategies as st

from unipq import keccak, xof
from unipq.xof import LeftoverBuffer, ModeMismatchError, XofStream, naive_parse


@given(st.binary(max_size=300))
@settings(max_examples=40, deadline=None)
def test_hashes_match_hashlib(msg):
    assert keccak.sha3_256(msg) == hashlib.sha3_256(msg).digest()
    assert keccak.sha3_512(msg) == hashlib.sha3_512(msg).digest()
    assert keccak.shake128(msg, 77) == hashlib.shake_128(msg).digest(77)
    assert keccak.shake256(msg, 203) == hashlib.shake_256(msg).digest(203)


def test_builtin_sponge_cross_check():
    # the from-scratch permutation backs the hashlib-free path
    for seed in (b"", b"a", bytes(range(200))):
        stream = XofStream("shake128", seed, "coeff13", backend="builtin")
        ref = XofStream("shake128", seed, "coeff13", backend="hashlib")
        got = [stream.next_coeff13() for _ in range(512)]
        want = [ref.next_coeff13() for _ in range(512)]
        assert got == want


def test_sponge_block_sequence():
    sp = keccak.Sponge(168, 0x1F)
    sp.absorb(b"seed")
    blocks = b"".join(sp.squeeze_block() for _ in range(3))
    assert blocks == hashlib.shake_128(b"seed").digest(3 * 168)


@pytest.mark.parametrize("mode,width,extraction", [
    ("shake128", 13, "coeff13"),
    ("shake256", 18, "gamma18"),
    ("shake256", 20, "gamma20"),
])
def test_stream_equals_naive(mode, width, extraction, rng):
    for _ in range(20):
        seed = rng.integers(0, 256, 32, dtype="u1").tobytes()
        s = XofStream(mode, seed, extraction)
        if width == 13:
            got = [s.next_coeff13() for _ in range(300)]
        else:
            got = [s.next_bits(width) for _ in range(300)]
        assert got == naive_parse(mode, seed, width, 300)


def test_mid_buffer_widths(rng):
    seed = rng.integers(0, 256, 32, dtype="u1").tobytes()
    s = XofStream("shake256", seed, "mid192")
    raw = keccak.shake256(seed, 192 // 8)
    big = int.from_bytes(raw, "little")
    pos = 0
    for width in (4, 24, 64, 4, 64, 24):
        assert s.next_bits(width) == (big >> pos) & ((1 << width) - 1)
        pos += width


def test_extraction_mode_enforced():
    s = XofStream("shake128", b"x", "coeff13")
    with pytest.raises(ModeMismatchError):
        s.next_bits(18)
    with pytest.raises(ValueError):
        XofStream("shake128", b"x", "coeff7")


def test_leftover_buffer_limits():
    buf = LeftoverBuffer()
    buf.store(0b1011, 4)
    assert buf.take() == (0b1011, 4)
    with pytest.raises(ValueError):
        buf.store(0, 26)
    with pytest.raises(ValueError):
        buf.store(0, 3)          # odd counts never occur in hardware


def test_leftover_alignment_shifts_only_2_and_4():
    s = XofStream("shake128", b"seed", "coeff13")
    for _ in range(2000):
        s.next_coeff13()
    assert set(s.leftover.shift_log) <= {2, 4}
    # pair consumption keeps the carried tail even and short
    assert all(c % 2 == 0 and c <= 24 for c in s.leftover_counts)
