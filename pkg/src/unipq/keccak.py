"""Keccak-f[1600] permutation and FIPS-202 sponge modes.

The permutation and sponge are implemented directly (lane-oriented,
64-bit words) and cross-checked against hashlib in the test suite.
Production squeezing goes through hashlib for speed whenever the mode is
one of the four standard ones; the builtin path computes identical bytes
and can be forced via backend="builtin".
"""

from __future__ import annotations

import hashlib

MASK64 = (1 << 64) - 1

_ROT = [
    [0, 36, 3, 41, 18],
    [1, 44, 10, 45, 2],
    [62, 6, 43, 15, 61],
    [28, 55, 25, 21, 56],
    [27, 20, 39, 8, 14],
]

_RC = [
    0x0000000000000001, 0x0000000000008082, 0x800000000000808A,
    0x8000000080008000, 0x000000000000808B, 0x0000000080000001,
    0x8000000080008081, 0x8000000000008009, 0x000000000000008A,
    0x0000000000000088, 0x0000000080008009, 0x000000008000000A,
    0x000000008000808B, 0x800000000000008B, 0x8000000000008089,
    0x8000000000008003, 0x8000000000008002, 0x8000000000000080,
    0x000000000000800A, 0x800000008000000A, 0x8000000080008081,
    0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
]


def _rotl(v: int, n: int) -> int:
    return ((v << n) | (v >> (64 - n))) & MASK64


def keccak_f1600(lanes: list[int]) -> list[int]:
    """One 24-round permutation over 25 lanes (x + 5y indexing)."""
    a = list(lanes)
    for rc in _RC:
        # theta
        c = [a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20] for x in range(5)]
        d = [c[(x - 1) % 5] ^ _rotl(c[(x + 1) % 5], 1) for x in range(5)]
        a = [a[i] ^ d[i % 5] for i in range(25)]
        # rho + pi
        b = [0] * 25
        for x in range(5):
            for y in range(5):
                b[y + 5 * ((2 * x + 3 * y) % 5)] = _rotl(a[x + 5 * y], _ROT[x][y])
        # chi
        a = [
            b[x + 5 * y] ^ ((~b[(x + 1) % 5 + 5 * y]) & b[(x + 2) % 5 + 5 * y] & MASK64)
            for y in range(5) for x in range(5)
        ]
        # iota
        a[0] ^= rc
    return a


def state_to_bytes(lanes: list[int]) -> bytes:
    return b"".join(l.to_bytes(8, "little") for l in lanes)


class Sponge:
    """Raw Keccak sponge; absorb then squeeze in rate-sized blocks."""

    def __init__(self, rate_bytes: int, domain_sep: int):
        self.rate = rate_bytes
        self.domain = domain_sep
        self.lanes = [0] * 25
        self._pending = bytearray()
        self.squeezing = False

    def absorb(self, data: bytes) -> None:
        if self.squeezing:
            raise RuntimeError("cannot absorb after squeezing started")
        self._pending.extend(data)
        while len(self._pending) >= self.rate:
            self._absorb_block(bytes(self._pending[: self.rate]))
            del self._pending[: self.rate]

    def _absorb_block(self, block: bytes) -> None:
        for i in range(self.rate // 8):
            self.lanes[i] ^= int.from_bytes(block[8 * i:8 * i + 8], "little")
        self.lanes = keccak_f1600(self.lanes)

    def _pad_and_switch(self) -> None:
        block = bytearray(self._pending)
        block.append(self.domain)
        block.extend(b"\x00" * (self.rate - len(block)))
        block[-1] ^= 0x80
        for i in range(self.rate // 8):
            self.lanes[i] ^= int.from_bytes(block[8 * i:8 * i + 8], "little")
        self.lanes = keccak_f1600(self.lanes)
        self._pending.clear()
        self.squeezing = True

    def squeeze_block(self) -> bytes:
        """Return the next rate-sized output block."""
        if not self.squeezing:
            self._pad_and_switch()
        out = state_to_bytes(self.lanes)[: self.rate]
        self.lanes = keccak_f1600(self.lanes)
        return out


# One-shot helpers.  hashlib is the default backend; the builtin sponge
# produces identical output and is exercised by the equivalence tests.

def _builtin_xof(rate: int, domain: int, msg: bytes, outlen: int) -> bytes:
    sp = Sponge(rate, domain)
    sp.absorb(msg)
    out = bytearray()
    while len(out) < outlen:
        out.extend(sp.squeeze_block())
    return bytes(out[:outlen])


def sha3_256(msg: bytes, backend: str = "hashlib") -> bytes:
    if backend == "hashlib":
        return hashlib.sha3_256(msg).digest()
    return _builtin_xof(136, 0x06, msg, 32)


def sha3_512(msg: bytes, backend: str = "hashlib") -> bytes:
    if backend == "hashlib":
        return hashlib.sha3_512(msg).digest()
    return _builtin_xof(72, 0x06, msg, 64)


def shake128(msg: bytes, outlen: int, backend: str = "hashlib") -> bytes:
    if backend == "hashlib":
        return hashlib.shake_128(msg).digest(outlen)
    return _builtin_xof(168, 0x1F, msg, outlen)


def shake256(msg: bytes, outlen: int, backend: str = "hashlib") -> bytes:
    if backend == "hashlib":
        return hashlib.shake_256(msg).digest(outlen)
    return _builtin_xof(136, 0x1F, msg, outlen)
