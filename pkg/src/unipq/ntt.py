"""Unified negacyclic NTT over the pseudo-Mersenne primes.

Forward transform uses Cooley-Tukey butterflies with twiddles in
bit-reversed order; the inverse uses Gentleman-Sande butterflies with
both outputs halved mod q at every stage, which absorbs the usual 1/n
post-scaling entirely (8 halving stages = multiplication by 1/256).

The transform layout matches the signature scheme's reference
convention: input in natural coefficient order, output in the
bit-reversed evaluation order induced by decimation-in-time, pointwise
operations index-aligned.  The smallest primitive 512-th root of unity
is used for every prime (1753 for the 23-bit prime).

Butterflies run on numpy int64 vectors; intermediate products stay below
2^50, so `% q` here is value-identical to the structural reduction in
`modmath` (property-tested).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .modmath import PrimeCtx
from .polyring import N, schoolbook_negacyclic

STAGES = 8              # log2(256)
BUTTERFLIES_PER_STAGE = 128
TRANSFORM_CYCLES = 512  # two butterfly cores, 1024 butterflies total
POST_PROCESSING_MULS = 0


def bitrev8(v: int) -> int:
    r = 0
    for _ in range(8):
        r = (r << 1) | (v & 1)
        v >>= 1
    return r


def smallest_512th_root(q: int) -> int:
    r = 2
    while pow(r, 256, q) != q - 1:
        r += 1
    return r


@dataclass(frozen=True)
class TwiddleTable:
    ctx: PrimeCtx
    psi: int
    forward: np.ndarray  # forward[k] = psi^bitrev8(k); entries 1..255 used


@lru_cache(maxsize=None)
def build_twiddles(ctx: PrimeCtx, psi: int | None = None) -> TwiddleTable:
    q = ctx.q
    if psi is None:
        psi = smallest_512th_root(q)
    if pow(psi, 256, q) != q - 1:
        raise ValueError("psi is not a primitive 512-th root of unity")
    fwd = np.array([pow(psi, bitrev8(k), q) for k in range(N)], dtype=np.int64)
    return TwiddleTable(ctx=ctx, psi=psi, forward=fwd)


def ntt_forward(p, t: TwiddleTable) -> np.ndarray:
    q = t.ctx.q
    a = np.asarray(p, dtype=np.int64).copy()
    for half in (128, 64, 32, 16, 8, 4, 2, 1):
        m = N // (2 * half)
        zetas = t.forward[m:2 * m]
        blocks = a.reshape(m, 2, half)
        lo = blocks[:, 0, :]
        hi = blocks[:, 1, :]
        v = zetas[:, None] * hi % q
        blocks[:, 1, :] = (lo - v) % q
        blocks[:, 0, :] = (lo + v) % q
    return a


def _div2(v: np.ndarray, ctx: PrimeCtx) -> np.ndarray:
    return (v >> 1) + (v & 1) * ctx.half_plus


def intt_inverse(p, t: TwiddleTable) -> np.ndarray:
    q = t.ctx.q
    a = np.asarray(p, dtype=np.int64).copy()
    for half in (1, 2, 4, 8, 16, 32, 64, 128):
        m = N // (2 * half)
        # Gentleman-Sande consumes the forward table backwards, negated.
        zetas = (q - t.forward[m:2 * m])[::-1]
        blocks = a.reshape(m, 2, half)
        lo = blocks[:, 0, :]
        hi = blocks[:, 1, :]
        s = (lo + hi) % q
        d = (lo - hi) % q * zetas[:, None] % q
        blocks[:, 0, :] = _div2(s, t.ctx)
        blocks[:, 1, :] = _div2(d, t.ctx)
    return a


def pointwise_mul(a, b, ctx: PrimeCtx) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) * np.asarray(b, dtype=np.int64) % ctx.q


def pointwise_mul_acc(acc, a, b, ctx: PrimeCtx) -> np.ndarray:
    prod = np.asarray(a, dtype=np.int64) * np.asarray(b, dtype=np.int64) % ctx.q
    return (np.asarray(acc, dtype=np.int64) + prod) % ctx.q


def negacyclic_mul(a, b, ctx: PrimeCtx) -> np.ndarray:
    t = build_twiddles(ctx)
    return intt_inverse(pointwise_mul(ntt_forward(a, t), ntt_forward(b, t), ctx), t)


def negacyclic_mul_schoolbook(a, b, ctx: PrimeCtx) -> np.ndarray:
    """Oracle twin of negacyclic_mul (exact wide-integer path)."""
    return schoolbook_negacyclic(a, b, ctx.q)
