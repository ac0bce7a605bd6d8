"""Little-endian fixed-width bit packing helpers (numpy-backed).

Bit i of the byte stream is byte[i // 8] >> (i % 8) & 1; a w-bit field
starting at bit w*k is read as a little-endian integer.  This is the
convention shared by both schemes' byte codecs and the squeeze-stream
parsers.
"""

from __future__ import annotations

import numpy as np


def unpack_bits(buf: bytes, width: int, count: int | None = None) -> np.ndarray:
    """Split a byte string into consecutive width-bit little-endian values."""
    bits = np.unpackbits(np.frombuffer(buf, dtype=np.uint8), bitorder="little")
    if count is None:
        count = len(bits) // width
    bits = bits[: count * width].reshape(count, width).astype(np.int64)
    weights = (1 << np.arange(width, dtype=np.int64))
    return bits @ weights


def pack_bits(values, width: int) -> bytes:
    """Inverse of unpack_bits; total bit count must be a byte multiple."""
    values = np.asarray(values, dtype=np.int64)
    if np.any(values < 0) or np.any(values >= (1 << width)):
        raise ValueError("value out of range for field width")
    shifts = np.arange(width, dtype=np.int64)
    bits = ((values[:, None] >> shifts) & 1).astype(np.uint8).reshape(-1)
    if bits.size % 8:
        raise ValueError("packed size is not a whole number of bytes")
    return np.packbits(bits, bitorder="little").tobytes()
