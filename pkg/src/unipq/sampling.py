"""Samplers fed from the squeeze stream.

Two routes exist for every sampler: a streaming route driven by an
XofStream (mirroring the hardware data path, used by the wrapper tests)
and a bulk numpy route over a one-shot squeeze (used by the scheme
cores for speed).  The equivalence of the two routes is part of the
test suite.
"""

from __future__ import annotations

import numpy as np

from .bits import unpack_bits
from .keccak import shake128, shake256
from .xof import XofStream

DILITHIUM_Q = 8380417


# -- streaming route ------------------------------------------------------


class _BitCarver:
    """Carves arbitrary-width fields out of 64-bit stream reads."""

    def __init__(self, stream: XofStream):
        self.stream = stream
        self.acc = 0
        self.fill = 0

    def take(self, width: int) -> int:
        while self.fill < width:
            self.acc |= self.stream.next_bits(64) << self.fill
            self.fill += 64
        v = self.acc & ((1 << width) - 1)
        self.acc >>= width
        self.fill -= width
        return v


def sample_binomial(stream: XofStream, mu: int) -> int:
    """Centered binomial draw: HW(low mu/2 bits) - HW(high mu/2 bits)."""
    carver = getattr(stream, "_binomial_carver", None)
    if carver is None:
        carver = _BitCarver(stream)
        stream._binomial_carver = carver
    v = carver.take(mu)
    half = mu // 2
    lo = v & ((1 << half) - 1)
    hi = v >> half
    return bin(lo).count("1") - bin(hi).count("1")


def sample_uniform_q(stream: XofStream) -> int:
    """Rejection-sample a residue below the signature prime from 24-bit
    reads (low 23 bits of each candidate)."""
    while True:
        cand = stream.next_bits(24) & 0x7FFFFF
        if cand < DILITHIUM_Q:
            return cand


def sample_eta(stream: XofStream, eta: int) -> int:
    """Rejection-sample a signed coefficient in [-eta, eta] from nibbles."""
    while True:
        t = stream.next_bits(4)
        if eta == 2 and t < 15:
            return 2 - t % 5
        if eta == 4 and t < 9:
            return 4 - t
        if eta not in (2, 4):
            raise ValueError("eta must be 2 or 4")


def sample_gamma(stream: XofStream, gamma1: int) -> int:
    """Mask coefficient gamma1 - raw, raw being an 18- or 20-bit read."""
    width = 18 if gamma1 == 1 << 17 else 20
    return gamma1 - stream.next_bits(width)


def sample_in_ball(seed: bytes, tau: int) -> np.ndarray:
    """Challenge polynomial with tau entries of +-1 (Fisher-Yates walk).

    Returned coefficients are signed ints in {-1, 0, 1}.
    """
    stream = XofStream("shake256", seed, "mid192")
    carver = _BitCarver(stream)
    signs = carver.take(64)
    c = np.zeros(256, dtype=np.int64)
    for i in range(256 - tau, 256):
        while True:
            j = carver.take(8)
            if j <= i:
                break
        c[i] = c[j]
        c[j] = 1 - 2 * (signs & 1)
        signs >>= 1
    return c


# -- bulk route -----------------------------------------------------------


def matrix_poly_13bit(seed: bytes, count: int) -> np.ndarray:
    """First `count` 13-bit coefficients of the SHAKE-128 stream."""
    nbytes = (13 * count + 7) // 8
    return unpack_bits(shake128(seed, nbytes), 13, count)


def cbd_poly(buf: bytes, mu: int) -> np.ndarray:
    """Centered binomial polynomial from mu*256/8 bytes."""
    halves = unpack_bits(buf, mu // 2, 512)
    counts = np.zeros(512, dtype=np.int64)
    for b in range(mu // 2):
        counts += (halves >> b) & 1
    return counts[0::2] - counts[1::2]


def uniform_poly(seed: bytes, nonce: int) -> np.ndarray:
    """Rejection-sampled polynomial below the signature prime (coeffs as
    residues), from SHAKE-128(seed || nonce16le)."""
    msg = seed + bytes((nonce & 0xFF, nonce >> 8))
    out = np.empty(0, dtype=np.int64)
    nbytes = 5 * 168  # matches the reference implementation's first fill
    while out.size < 256:
        cands = unpack_bits(shake128(msg, nbytes), 24) & 0x7FFFFF
        out = cands[cands < DILITHIUM_Q][:256]
        nbytes += 2 * 168
    return out.astype(np.int64)


def eta_poly(seed: bytes, nonce: int, eta: int) -> np.ndarray:
    """Signed eta-bounded polynomial from SHAKE-256(seed || nonce16le)."""
    msg = seed + bytes((nonce & 0xFF, nonce >> 8))
    nbytes = 2 * 136
    while True:
        nib = unpack_bits(shake256(msg, nbytes), 4)
        if eta == 2:
            keep = nib[nib < 15]
            vals = 2 - keep % 5
        else:
            keep = nib[nib < 9]
            vals = 4 - keep
        if vals.size >= 256:
            return vals[:256].astype(np.int64)
        nbytes += 136


def gamma_poly(seed: bytes, nonce: int, gamma1: int) -> np.ndarray:
    """Signed mask polynomial, gamma1 - raw over 18/20-bit groups."""
    msg = seed + bytes((nonce & 0xFF, nonce >> 8))
    width = 18 if gamma1 == 1 << 17 else 20
    raw = unpack_bits(shake256(msg, 256 * width // 8), width, 256)
    return gamma1 - raw
