"""Incremental SHAKE squeeze stream with the output-buffer bookkeeping.

The stream hands out fixed-width little-endian bit groups from the
conceptually infinite squeeze output.  Three pieces of machinery mirror
the hardware wrapper:

* a leftover-bits buffer that carries the tail of one rate-sized block
  into the next for the 13/18/20-bit extraction modes (13-bit
  coefficients are consumed in pairs of 26 bits, so during public-matrix
  generation the leftover count is always even and at most 24);
* realignment of the leftover buffer done purely with shift-by-2 /
  shift-by-4 steps (the shift widths are recorded so tests can assert
  the structural restriction);
* a 192-bit intermediate buffer (lcm of 4, 24, 64) through which all
  4/24/64-bit reads drain.
"""

from __future__ import annotations

import hashlib

from .keccak import Sponge

RATE_BYTES = {"shake128": 168, "shake256": 136}


class ModeMismatchError(ValueError):
    pass


class _BlockSource:
    """Yields successive rate-sized squeeze blocks for a seed."""

    def __init__(self, mode: str, seed: bytes, backend: str = "hashlib"):
        self.rate = RATE_BYTES[mode]
        self.backend = backend
        if backend == "hashlib":
            self._h = (hashlib.shake_128 if mode == "shake128" else hashlib.shake_256)(seed)
            self._nblocks = 0
        else:
            self._sponge = Sponge(self.rate, 0x1F)
            self._sponge.absorb(seed)

    def next_block(self) -> bytes:
        if self.backend == "hashlib":
            self._nblocks += 1
            return self._h.digest(self._nblocks * self.rate)[-self.rate:]
        return self._sponge.squeeze_block()


class LeftoverBuffer:
    """Carries up to 24 tail bits between squeeze blocks.

    The hardware stores the last 24 bits unconditionally and then aligns
    the valid ones using only shift-by-2 / shift-by-4 operations; we
    model the alignment loop and log the shift widths used.
    """

    def __init__(self):
        self.bits = 0
        self.count = 0
        self.shift_log: list[int] = []

    def store(self, tail_bits: int, count: int) -> None:
        if count > 24:
            raise ValueError("leftover buffer holds at most 24 bits")
        # Written as the low bits of a fixed 24-bit window, then aligned
        # down from the top using 4- and 2-bit shifts only.
        window = tail_bits << (24 - count) if count else 0
        shift = 24 - count
        while shift >= 4:
            self.shift_log.append(4)
            shift -= 4
        while shift >= 2:
            self.shift_log.append(2)
            shift -= 2
        if shift:
            raise ValueError("leftover count must be even")
        self.bits = window >> (24 - count) if count else 0
        self.count = count

    def take(self) -> tuple[int, int]:
        bits, count = self.bits, self.count
        self.bits = 0
        self.count = 0
        return bits, count


class MidBuffer192:
    """192-bit staging buffer drained in 4/24/64-bit chunks."""

    CAPACITY = 192

    def __init__(self):
        self.value = 0
        self.fill = 0

    def drain(self, width: int) -> int:
        if width not in (4, 24, 64):
            raise ValueError("mid-buffer drains 4, 24 or 64 bits only")
        v = self.value & ((1 << width) - 1)
        self.value >>= width
        self.fill -= width
        return v

    def refill(self, bits192: int) -> None:
        self.value |= bits192 << self.fill
        self.fill += self.CAPACITY


class XofStream:
    """Squeeze stream with a fixed extraction mode.

    Modes: "coeff13" (paired 13-bit coefficients, SHAKE-128),
    "gamma18"/"gamma20" (mask sampling groups), "mid192" (4/24/64-bit
    reads through the intermediate buffer).
    """

    def __init__(self, mode: str, seed: bytes, extraction: str,
                 backend: str = "hashlib"):
        if extraction not in ("coeff13", "gamma18", "gamma20", "mid192"):
            raise ValueError(f"unknown extraction mode {extraction!r}")
        self.extraction = extraction
        self.mode = mode
        self._src = _BlockSource(mode, seed, backend)
        self._buf = 0          # pending squeeze bits, LSB = oldest
        self._buf_count = 0
        self.leftover = LeftoverBuffer()
        self.mid = MidBuffer192()
        self._pair_latch: list[int] = []
        self.bits_squeezed = 0
        self.bits_emitted = 0
        self.leftover_counts: list[int] = []  # after each block hand-off

    # -- raw block plumbing -------------------------------------------------

    def _fetch_block(self) -> None:
        """Append one squeeze block, routing the tail through the
        leftover buffer (models the concatenation in front of the fresh
        block)."""
        tail, count = self._buf, self._buf_count
        if count <= 24 and count % 2 == 0:
            self.leftover.store(tail, count)
            bits, cnt = self.leftover.take()
        else:
            bits, cnt = tail, count
        block = self._src.next_block()
        self.bits_squeezed += 8 * len(block)
        self._buf = bits | int.from_bytes(block, "little") << cnt
        self._buf_count = cnt + 8 * len(block)
        self.leftover_counts.append(count)

    def _take(self, width: int) -> int:
        while self._buf_count < width:
            self._fetch_block()
        v = self._buf & ((1 << width) - 1)
        self._buf >>= width
        self._buf_count -= width
        return v

    # -- public extraction API ----------------------------------------------

    def next_coeff13(self) -> int:
        if self.extraction != "coeff13" or self.mode != "shake128":
            raise ModeMismatchError("stream not configured for 13-bit pairs")
        if not self._pair_latch:
            pair = self._take(26)
            self._pair_latch = [(pair >> 13) & 0x1FFF, pair & 0x1FFF]
        self.bits_emitted += 13
        return self._pair_latch.pop()

    def next_bits(self, width: int) -> int:
        if width in (4, 24, 64):
            if self.extraction != "mid192":
                raise ModeMismatchError("4/24/64-bit reads need mid192 mode")
            if self.mid.fill < width:
                self.mid.refill(self._take(192))
            self.bits_emitted += width
            return self.mid.drain(width)
        if width == 18:
            if self.extraction != "gamma18":
                raise ModeMismatchError("18-bit reads need gamma18 mode")
            self.bits_emitted += 18
            return self._take(18)
        if width == 20:
            if self.extraction != "gamma20":
                raise ModeMismatchError("20-bit reads need gamma20 mode")
            self.bits_emitted += 20
            return self._take(20)
        raise ModeMismatchError(f"unsupported extraction width {width}")

    @property
    def bits_buffered(self) -> int:
        return self._buf_count + self.mid.fill + 13 * len(self._pair_latch)


def naive_parse(mode: str, seed: bytes, width: int, count: int) -> list[int]:
    """Whole-stream oracle: squeeze once, slice into `width`-bit groups."""
    from .keccak import shake128, shake256

    nbytes = (width * count + 7) // 8
    raw = (shake128 if mode == "shake128" else shake256)(seed, nbytes)
    big = int.from_bytes(raw, "little")
    return [(big >> (width * i)) & ((1 << width) - 1) for i in range(count)]
