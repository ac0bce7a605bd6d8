"""Four-bank data memory for the cryptoprocessor model.

Each bank is an array of 64-bit words with one read and one write port.
A word holds either two 32-bit coefficient slots or eight bytes of blob
data.  Twiddle constants and the instruction stream live in dedicated
regions outside the four data banks.
"""

from __future__ import annotations

import numpy as np

N_BANKS = 4
BANK_WORDS = 8192
POLY_WORDS = 128
MASK64 = (1 << 64) - 1


class Memory:
    def __init__(self):
        self.banks = [[0] * BANK_WORDS for _ in range(N_BANKS)]
        self.constants: dict[str, object] = {}   # twiddle region
        self.iram: list = []                     # instruction region

    def snapshot(self) -> tuple:
        return tuple(tuple(b) for b in self.banks)

    # -- blob access --

    def store_bytes(self, bank: int, word: int, data: bytes) -> None:
        b = self.banks[bank]
        for i in range(0, len(data), 8):
            b[word + i // 8] = int.from_bytes(data[i:i + 8].ljust(8, b"\0"),
                                              "little")

    def load_bytes(self, bank: int, word: int, n: int) -> bytes:
        b = self.banks[bank]
        nwords = (n + 7) // 8
        raw = b"".join(b[word + i].to_bytes(8, "little") for i in range(nwords))
        return raw[:n]

    # -- coefficient access (two 32-bit two's-complement slots per word) --

    def store_poly(self, bank: int, word: int, coeffs) -> None:
        c = np.asarray(coeffs, dtype=np.int64) % (1 << 32)
        b = self.banks[bank]
        for i in range(POLY_WORDS):
            b[word + i] = int(c[2 * i]) | int(c[2 * i + 1]) << 32

    def load_poly(self, bank: int, word: int) -> np.ndarray:
        b = self.banks[bank]
        out = np.empty(2 * POLY_WORDS, dtype=np.int64)
        for i in range(POLY_WORDS):
            w = b[word + i]
            out[2 * i] = w & 0xFFFFFFFF
            out[2 * i + 1] = w >> 32
        return np.where(out >= 1 << 31, out - (1 << 32), out)
