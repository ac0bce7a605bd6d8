"""Module-LWR KEM (round-3 parameter sets, levels 1/3/5).

The power-of-two moduli (2^13 / 2^10) are handled by lifting centered
operands into one of the three pseudo-Mersenne prime fields and running
every polynomial product through the shared NTT engine.  With the 25-bit
prime the lifted arithmetic is exact; with the 23/24-bit primes a
wraparound is possible only with negligible probability (quantified in
the analysis module).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ntt
from .bits import pack_bits, unpack_bits
from .keccak import sha3_256, sha3_512, shake128
from .modmath import CTX25, PrimeCtx
from .sampling import cbd_poly

N = 256
EQ = 13
EP = 10
SEEDBYTES = 32
NOISE_SEEDBYTES = 32
KEYBYTES = 32
HASHBYTES = 32


@dataclass(frozen=True)
class SaberParams:
    name: str
    l: int
    et: int
    mu: int

    @property
    def h1(self) -> int:
        return 1 << (EQ - EP - 1)

    @property
    def h2(self) -> int:
        return (1 << (EP - 2)) - (1 << (EP - self.et - 1)) + (1 << (EQ - EP - 1))

    @property
    def polyvec_q_bytes(self) -> int:
        return self.l * N * EQ // 8

    @property
    def polyvec_p_bytes(self) -> int:
        return self.l * N * EP // 8

    @property
    def pk_bytes(self) -> int:
        return self.polyvec_p_bytes + SEEDBYTES

    @property
    def ct_bytes(self) -> int:
        return self.polyvec_p_bytes + N * self.et // 8

    @property
    def sk_bytes(self) -> int:
        """CCA secret key: CPA key, public key, pk hash, rejection value z."""
        return self.polyvec_q_bytes + self.pk_bytes + HASHBYTES + KEYBYTES


PARAMS = {
    1: SaberParams("lightsaber", l=2, et=3, mu=10),
    3: SaberParams("saber", l=3, et=4, mu=8),
    5: SaberParams("firesaber", l=4, et=6, mu=6),
}


# -- generation -----------------------------------------------------------


def gen_matrix(seed: bytes, params: SaberParams) -> list[list[np.ndarray]]:
    """Public matrix A (row-major), 13-bit coefficients from SHAKE-128."""
    l = params.l
    buf = shake128(seed, l * params.polyvec_q_bytes)
    step = N * EQ // 8
    return [[unpack_bits(buf[(i * l + j) * step:(i * l + j + 1) * step], EQ, N)
             for j in range(l)] for i in range(l)]


def gen_secret(seed: bytes, params: SaberParams) -> list[np.ndarray]:
    """Secret vector of centered binomial polynomials."""
    step = params.mu * N // 8
    buf = shake128(seed, params.l * step)
    return [cbd_poly(buf[i * step:(i + 1) * step], params.mu)
            for i in range(params.l)]


# -- lifted products ------------------------------------------------------


def _center_pow2(v: np.ndarray, logmod: int) -> np.ndarray:
    """Map residues mod 2^logmod into [-2^(logmod-1), 2^(logmod-1)), the
    two's-complement reading the reference arithmetic implies."""
    m = 1 << logmod
    v = np.asarray(v, dtype=np.int64) % m
    return np.where(v >= m // 2, v - m, v)


def _lift_hat(p_signed: np.ndarray, ctx: PrimeCtx, tw) -> np.ndarray:
    return ntt.ntt_forward(np.asarray(p_signed, dtype=np.int64) % ctx.q, tw)


def _unlift(acc_hat: np.ndarray, ctx: PrimeCtx, tw, logmod: int) -> np.ndarray:
    r = ntt.intt_inverse(acc_hat, tw)
    r = np.where(r > ctx.q // 2, r - ctx.q, r)
    return r % (1 << logmod)


def matrix_vector_mul(mat, vec, params: SaberParams, transpose: bool,
                      ctx: PrimeCtx = CTX25) -> list[np.ndarray]:
    """(A or A^T) * s with 13-bit public operands, result mod 2^13."""
    tw = ntt.build_twiddles(ctx)
    vec_hat = [_lift_hat(v, ctx, tw) for v in vec]
    out = []
    for i in range(params.l):
        acc = np.zeros(N, dtype=np.int64)
        for j in range(params.l):
            a = mat[j][i] if transpose else mat[i][j]
            a_hat = _lift_hat(_center_pow2(a, EQ), ctx, tw)
            acc = ntt.pointwise_mul_acc(acc, a_hat, vec_hat[j], ctx)
        out.append(_unlift(acc, ctx, tw, EQ))
    return out


def lifted_product(a: np.ndarray, s: np.ndarray, ctx: PrimeCtx = CTX25) -> np.ndarray:
    """Single polynomial product through the lifted pipeline, mod 2^13.

    The overflow demonstration runs this with the 23-bit prime, where an
    adversarial operand pair exceeds q'/2 and wraps.
    """
    tw = ntt.build_twiddles(ctx)
    a_hat = _lift_hat(_center_pow2(a, EQ), ctx, tw)
    s_hat = _lift_hat(s, ctx, tw)
    acc = ntt.pointwise_mul_acc(np.zeros(N, dtype=np.int64), a_hat, s_hat, ctx)
    return _unlift(acc, ctx, tw, EQ)


def inner_prod(b, s, params: SaberParams, ctx: PrimeCtx = CTX25) -> np.ndarray:
    """b . s with 10-bit public operands, result mod 2^10."""
    tw = ntt.build_twiddles(ctx)
    acc = np.zeros(N, dtype=np.int64)
    for j in range(params.l):
        b_hat = _lift_hat(_center_pow2(b[j], EP), ctx, tw)
        s_hat = _lift_hat(s[j], ctx, tw)
        acc = ntt.pointwise_mul_acc(acc, b_hat, s_hat, ctx)
    return _unlift(acc, ctx, tw, EP)


# -- byte codecs ----------------------------------------------------------


def pack_vec(vec, width: int) -> bytes:
    return b"".join(pack_bits(np.asarray(p, dtype=np.int64) % (1 << width), width)
                    for p in vec)


def unpack_vec(buf: bytes, width: int, l: int) -> list[np.ndarray]:
    step = N * width // 8
    return [unpack_bits(buf[i * step:(i + 1) * step], width, N) for i in range(l)]


def msg_to_poly(m: bytes) -> np.ndarray:
    return unpack_bits(m, 1, N)


def poly_to_msg(bits: np.ndarray) -> bytes:
    return pack_bits(np.asarray(bits, dtype=np.int64) & 1, 1)


# -- CPA core -------------------------------------------------------------


def indcpa_keygen(seed_a: bytes, seed_s: bytes, params: SaberParams,
                  ctx: PrimeCtx = CTX25):
    seed_a = shake128(seed_a, SEEDBYTES)
    mat = gen_matrix(seed_a, params)
    s = gen_secret(seed_s, params)
    b = matrix_vector_mul(mat, s, params, transpose=True, ctx=ctx)
    b = [((bi + params.h1) >> (EQ - EP)) & ((1 << EP) - 1) for bi in b]
    pk = pack_vec(b, EP) + seed_a
    sk = pack_vec(s, EQ)
    return pk, sk


def indcpa_encrypt(m: bytes, seed_sp: bytes, pk: bytes, params: SaberParams,
                   ctx: PrimeCtx = CTX25) -> bytes:
    mat = gen_matrix(pk[params.polyvec_p_bytes:], params)
    sp = gen_secret(seed_sp, params)
    bp = matrix_vector_mul(mat, sp, params, transpose=False, ctx=ctx)
    bp = [((v + params.h1) >> (EQ - EP)) & ((1 << EP) - 1) for v in bp]
    b = unpack_vec(pk[:params.polyvec_p_bytes], EP, params.l)
    vp = inner_prod(b, sp, params, ctx=ctx)
    mp = msg_to_poly(m)
    cm = ((vp - (mp << (EP - 1)) + params.h1) & ((1 << EP) - 1)) >> (EP - params.et)
    return pack_vec(bp, EP) + pack_bits(cm, params.et)


def indcpa_decrypt(ct: bytes, sk: bytes, params: SaberParams,
                   ctx: PrimeCtx = CTX25) -> bytes:
    s = [_center_pow2(p, EQ) for p in unpack_vec(sk, EQ, params.l)]
    bp = unpack_vec(ct[:params.polyvec_p_bytes], EP, params.l)
    cm = unpack_bits(ct[params.polyvec_p_bytes:], params.et, N)
    v = inner_prod(bp, s, params, ctx=ctx)
    v = (v + params.h2 - (cm << (EP - params.et))) & ((1 << EP) - 1)
    return poly_to_msg(v >> (EP - 1))


# -- CCA KEM --------------------------------------------------------------


def kem_keygen(coins: bytes, params: SaberParams, ctx: PrimeCtx = CTX25):
    """coins = seed_a(32) || seed_s(32) || z(32)."""
    seed_a, seed_s, z = coins[:32], coins[32:64], coins[64:96]
    pk, sk_cpa = indcpa_keygen(seed_a, seed_s, params, ctx=ctx)
    sk = sk_cpa + pk + sha3_256(pk) + z
    return pk, sk


def kem_encaps(m_coins: bytes, pk: bytes, params: SaberParams,
               ctx: PrimeCtx = CTX25):
    """Returns (ciphertext, shared_secret); m_coins is 32 random bytes."""
    buf = sha3_256(m_coins) + sha3_256(pk)
    kr = sha3_512(buf)
    ct = indcpa_encrypt(buf[:32], kr[32:64], pk, params, ctx=ctx)
    ss = sha3_256(kr[:32] + sha3_256(ct))
    return ct, ss


def kem_decaps(ct: bytes, sk: bytes, params: SaberParams,
               ctx: PrimeCtx = CTX25) -> bytes:
    off = params.polyvec_q_bytes
    sk_cpa = sk[:off]
    pk = sk[off:off + params.pk_bytes]
    hash_pk = sk[off + params.pk_bytes:off + params.pk_bytes + HASHBYTES]
    z = sk[off + params.pk_bytes + HASHBYTES:]

    m = indcpa_decrypt(ct, sk_cpa, params, ctx=ctx)
    kr = sha3_512(m + hash_pk)
    ct_cmp = indcpa_encrypt(m, kr[32:64], pk, params, ctx=ctx)
    k = kr[:32] if ct_cmp == ct else z
    return sha3_256(k + sha3_256(ct))
