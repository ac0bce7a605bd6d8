"""AES-256-CTR DRBG matching the NIST KAT harness (rng.c semantics).

Seed expansion and per-case randomness for .rsp generation.  Each
randombytes call ends with a key/V update, so call boundaries matter;
callers must split their requests exactly as the reference harness does.
"""

from __future__ import annotations

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes


def _aes256_ecb(key: bytes, block: bytes) -> bytes:
    enc = Cipher(algorithms.AES(key), modes.ECB()).encryptor()
    return enc.update(block) + enc.finalize()


class AesCtrDrbg:
    def __init__(self, entropy48: bytes):
        if len(entropy48) != 48:
            raise ValueError("DRBG seed must be 48 bytes")
        self.key = bytes(32)
        self.v = bytes(16)
        self._update(entropy48)

    def _inc_v(self) -> None:
        self.v = ((int.from_bytes(self.v, "big") + 1) % (1 << 128)).to_bytes(16, "big")

    def _update(self, provided: bytes | None) -> None:
        temp = b""
        for _ in range(3):
            self._inc_v()
            temp += _aes256_ecb(self.key, self.v)
        if provided is not None:
            temp = bytes(a ^ b for a, b in zip(temp, provided))
        self.key = temp[:32]
        self.v = temp[32:48]

    def random_bytes(self, n: int) -> bytes:
        out = bytearray()
        while len(out) < n:
            self._inc_v()
            out += _aes256_ecb(self.key, self.v)
        self._update(None)
        return bytes(out[:n])
