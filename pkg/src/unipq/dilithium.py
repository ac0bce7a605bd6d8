"""Lattice signature scheme (round-3 parameter sets, levels 2/3/5).

Deterministic signing.  All polynomial products are routed through the
shared NTT engine over the 23-bit prime; a schoolbook multiplier switch
exists to demonstrate multiplier-independence of the signatures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ntt
from .bits import pack_bits, unpack_bits
from .keccak import shake256
from .modmath import CTX23
from .polyring import schoolbook_negacyclic
from .sampling import eta_poly, gamma_poly, sample_in_ball, uniform_poly

Q = 8380417
N = 256
D = 13
SEEDBYTES = 32
CRHBYTES = 48
CTILDEBYTES = 32

_T23 = ntt.build_twiddles(CTX23)


@dataclass(frozen=True)
class DilithiumParams:
    level: int
    k: int
    l: int
    eta: int
    tau: int
    gamma1: int
    gamma2: int
    omega: int

    @property
    def beta(self) -> int:
        return self.tau * self.eta

    @property
    def eta_bits(self) -> int:
        return 3 if self.eta == 2 else 4

    @property
    def z_bits(self) -> int:
        return 18 if self.gamma1 == 1 << 17 else 20

    @property
    def w1_bits(self) -> int:
        return 6 if self.gamma2 == (Q - 1) // 88 else 4

    @property
    def pk_bytes(self) -> int:
        return SEEDBYTES + self.k * 320

    @property
    def sk_bytes(self) -> int:
        return (2 * SEEDBYTES + CRHBYTES
                + (self.l + self.k) * 32 * self.eta_bits + self.k * 416)

    @property
    def sig_bytes(self) -> int:
        return CTILDEBYTES + self.l * 32 * self.z_bits + self.omega + self.k


PARAMS = {
    2: DilithiumParams(2, k=4, l=4, eta=2, tau=39, gamma1=1 << 17,
                       gamma2=(Q - 1) // 88, omega=80),
    3: DilithiumParams(3, k=6, l=5, eta=4, tau=49, gamma1=1 << 19,
                       gamma2=(Q - 1) // 32, omega=55),
    5: DilithiumParams(5, k=8, l=7, eta=2, tau=60, gamma1=1 << 19,
                       gamma2=(Q - 1) // 32, omega=75),
}


def crh(data: bytes) -> bytes:
    """48-byte collision-resistant hash (first 384 bits of SHAKE-256)."""
    return shake256(data, CRHBYTES)


# -- rounding -------------------------------------------------------------


def power2round(r):
    """Split residues r = r1*2^d + r0 with r0 in (-2^12, 2^12]."""
    r = np.asarray(r, dtype=np.int64)
    r1 = (r + (1 << (D - 1)) - 1) >> D
    return r1, r - (r1 << D)


def decompose(r, gamma2: int):
    """Split residues by alpha = 2*gamma2 with the q-1 boundary fix-up.

    Returns (r1, r0) with r0 centered.
    """
    r = np.asarray(r, dtype=np.int64)
    a1 = (r + 127) >> 7
    if gamma2 == (Q - 1) // 32:
        a1 = (a1 * 1025 + (1 << 21)) >> 22
        a1 &= 15
    elif gamma2 == (Q - 1) // 88:
        a1 = (a1 * 11275 + (1 << 23)) >> 24
        a1 ^= ((43 - a1) >> 31) & a1
    else:
        raise ValueError("unsupported gamma2")
    a0 = r - a1 * 2 * gamma2
    a0 -= (((Q - 1) // 2 - a0) >> 31) & Q
    return a1, a0


def highbits(r, gamma2):
    return decompose(r, gamma2)[0]


def lowbits(r, gamma2):
    return decompose(r, gamma2)[1]


def make_hint(a0, a1, gamma2: int):
    """Hint bits from the low part (signed) and the high part."""
    a0 = np.asarray(a0, dtype=np.int64)
    a1 = np.asarray(a1, dtype=np.int64)
    return ((a0 > gamma2) | (a0 < -gamma2)
            | ((a0 == -gamma2) & (a1 != 0))).astype(np.int64)


def use_hint(h, r, gamma2: int):
    """Recover the high bits of r given hint bits."""
    a1, a0 = decompose(r, gamma2)
    h = np.asarray(h, dtype=np.int64)
    if gamma2 == (Q - 1) // 32:
        up = (a1 + 1) & 15
        down = (a1 - 1) & 15
    else:
        up = np.where(a1 == 43, 0, a1 + 1)
        down = np.where(a1 == 0, 43, a1 - 1)
    return np.where(h == 0, a1, np.where(a0 > 0, up, down))


def _center(v):
    v = np.asarray(v, dtype=np.int64) % Q
    return np.where(v > (Q - 1) // 2, v - Q, v)


def _inf_norm(v) -> int:
    return int(np.max(np.abs(np.asarray(v, dtype=np.int64))))


# -- packing --------------------------------------------------------------


def pack_poly(kind: str, p, params: DilithiumParams) -> bytes:
    p = np.asarray(p, dtype=np.int64)
    if kind == "t1":
        return pack_bits(p, 10)
    if kind == "t0":
        return pack_bits((1 << (D - 1)) - p, D)
    if kind == "eta":
        return pack_bits(params.eta - p, params.eta_bits)
    if kind == "z":
        return pack_bits(params.gamma1 - p, params.z_bits)
    if kind == "w1":
        return pack_bits(p, params.w1_bits)
    raise ValueError(f"unknown packing kind {kind!r}")


def unpack_poly(kind: str, buf: bytes, params: DilithiumParams) -> np.ndarray:
    if kind == "t1":
        return unpack_bits(buf, 10, N)
    if kind == "t0":
        return (1 << (D - 1)) - unpack_bits(buf, D, N)
    if kind == "eta":
        return params.eta - unpack_bits(buf, params.eta_bits, N)
    if kind == "z":
        return params.gamma1 - unpack_bits(buf, params.z_bits, N)
    if kind == "w1":
        return unpack_bits(buf, params.w1_bits, N)
    raise ValueError(f"unknown packing kind {kind!r}")


def encode_hint(h_polys, params: DilithiumParams) -> bytes:
    buf = bytearray(params.omega + params.k)
    idx = 0
    for i, h in enumerate(h_polys):
        for j in np.nonzero(np.asarray(h))[0]:
            buf[idx] = int(j)
            idx += 1
        buf[params.omega + i] = idx
    return bytes(buf)


def decode_hint(buf: bytes, params: DilithiumParams):
    """Returns hint polynomials, or None on a malformed encoding."""
    hs = []
    idx = 0
    for i in range(params.k):
        end = buf[params.omega + i]
        if end < idx or end > params.omega:
            return None
        h = np.zeros(N, dtype=np.int64)
        for j in range(idx, end):
            if j > idx and buf[j] <= buf[j - 1]:
                return None
            h[buf[j]] = 1
        idx = end
        hs.append(h)
    if any(buf[j] != 0 for j in range(idx, params.omega)):
        return None
    return hs


# -- expansion ------------------------------------------------------------


def expand_a(rho: bytes, params: DilithiumParams):
    """Public matrix, defined directly in the NTT domain."""
    return [[uniform_poly(rho, (i << 8) + j) for j in range(params.l)]
            for i in range(params.k)]


def expand_s(sigma: bytes, params: DilithiumParams):
    s1 = [eta_poly(sigma, n, params.eta) for n in range(params.l)]
    s2 = [eta_poly(sigma, params.l + n, params.eta) for n in range(params.k)]
    return s1, s2


def expand_mask(rho_prime: bytes, kappa: int, params: DilithiumParams):
    return [gamma_poly(rho_prime, params.l * kappa + i, params.gamma1)
            for i in range(params.l)]


# -- multiplier routing ---------------------------------------------------


def _matvec_ntt(mat_hat, vec_hat, params):
    """Row sums of pointwise products, left in the NTT domain."""
    out = []
    for i in range(params.k):
        acc = np.zeros(N, dtype=np.int64)
        for j in range(params.l):
            acc = ntt.pointwise_mul_acc(acc, mat_hat[i][j], vec_hat[j], CTX23)
        out.append(acc)
    return out


def _mul(a_hat, b_hat, schoolbook: bool = False):
    """Product of two NTT-domain polys, returned in coefficient domain."""
    if schoolbook:
        a = ntt.intt_inverse(a_hat, _T23)
        b = ntt.intt_inverse(b_hat, _T23)
        return schoolbook_negacyclic(a, b, Q)
    return ntt.intt_inverse(ntt.pointwise_mul(a_hat, b_hat, CTX23), _T23)


def _to_hat(p):
    return ntt.ntt_forward(np.asarray(p, dtype=np.int64) % Q, _T23)


def _from_hat(p_hat):
    return ntt.intt_inverse(p_hat, _T23)


# -- key generation / sign / verify ---------------------------------------


def keygen(level: int, seed: bytes, schoolbook: bool = False):
    params = PARAMS[level]
    sb = shake256(seed, 2 * SEEDBYTES + CRHBYTES)
    rho, sigma, key = sb[:32], sb[32:80], sb[80:112]

    mat = expand_a(rho, params)
    s1, s2 = expand_s(sigma, params)
    s1_hat = [_to_hat(p) for p in s1]
    if schoolbook:
        t = [sum(schoolbook_negacyclic(_from_hat(mat[i][j]), s1[j] % Q, Q)
                 for j in range(params.l)) % Q for i in range(params.k)]
    else:
        t = [_from_hat(h) for h in _matvec_ntt(mat, s1_hat, params)]
    t = [(ti + s2[i]) % Q for i, ti in enumerate(t)]
    t1s, t0s = zip(*(power2round(ti) for ti in t))

    pk = rho + b"".join(pack_poly("t1", t1, params) for t1 in t1s)
    tr = crh(pk)
    sk = (rho + key + tr
          + b"".join(pack_poly("eta", p, params) for p in s1)
          + b"".join(pack_poly("eta", p, params) for p in s2)
          + b"".join(pack_poly("t0", p, params) for p in t0s))
    return pk, sk


def _unpack_sk(sk: bytes, params: DilithiumParams):
    off = 0
    rho = sk[off:off + 32]; off += 32
    key = sk[off:off + 32]; off += 32
    tr = sk[off:off + 48]; off += 48
    nb = 32 * params.eta_bits
    s1 = [unpack_poly("eta", sk[off + i * nb:off + (i + 1) * nb], params)
          for i in range(params.l)]
    off += params.l * nb
    s2 = [unpack_poly("eta", sk[off + i * nb:off + (i + 1) * nb], params)
          for i in range(params.k)]
    off += params.k * nb
    t0 = [unpack_poly("t0", sk[off + i * 416:off + (i + 1) * 416], params)
          for i in range(params.k)]
    return rho, key, tr, s1, s2, t0


def sign(level: int, sk: bytes, msg: bytes, schoolbook: bool = False):
    """Deterministic signature; returns (sig, attempts)."""
    params = PARAMS[level]
    rho, key, tr, s1, s2, t0 = _unpack_sk(sk, params)
    mu = crh(tr + msg)
    rho_prime = crh(key + mu)

    mat = expand_a(rho, params)
    s1_hat = [_to_hat(p) for p in s1]
    s2_hat = [_to_hat(p) for p in s2]
    t0_hat = [_to_hat(p) for p in t0]

    kappa = 0
    while True:
        y = expand_mask(rho_prime, kappa, params)
        kappa += 1
        y_hat = [_to_hat(p) for p in y]
        w = [_from_hat(h) for h in _matvec_ntt(mat, y_hat, params)]
        w1s, w0s = zip(*(decompose(wi, params.gamma2) for wi in w))

        w1_packed = b"".join(pack_poly("w1", w1, params) for w1 in w1s)
        ctilde = shake256(mu + w1_packed, CTILDEBYTES)
        cp = sample_in_ball(ctilde, params.tau)
        cp_hat = _to_hat(cp)

        z = [_center(y[i] + _center(_mul(cp_hat, s1_hat[i], schoolbook)))
             for i in range(params.l)]
        if max(_inf_norm(zi) for zi in z) >= params.gamma1 - params.beta:
            continue

        cs2 = [_center(_mul(cp_hat, s2_hat[i], schoolbook))
               for i in range(params.k)]
        w0_adj = [w0s[i] - cs2[i] for i in range(params.k)]
        if max(_inf_norm(v) for v in w0_adj) >= params.gamma2 - params.beta:
            continue

        ct0 = [_center(_mul(cp_hat, t0_hat[i], schoolbook))
               for i in range(params.k)]
        if max(_inf_norm(v) for v in ct0) >= params.gamma2:
            continue

        hints = [make_hint(w0_adj[i] + ct0[i], w1s[i], params.gamma2)
                 for i in range(params.k)]
        weight = int(sum(int(h.sum()) for h in hints))
        if weight > params.omega:
            continue

        sig = (ctilde
               + b"".join(pack_poly("z", zi, params) for zi in z)
               + encode_hint(hints, params))
        return sig, kappa


def verify(level: int, pk: bytes, msg: bytes, sig: bytes) -> bool:
    params = PARAMS[level]
    if len(sig) != params.sig_bytes or len(pk) != params.pk_bytes:
        return False
    rho = pk[:32]
    t1 = [unpack_poly("t1", pk[32 + i * 320:32 + (i + 1) * 320], params)
          for i in range(params.k)]
    ctilde = sig[:CTILDEBYTES]
    zb = 32 * params.z_bits
    z = [unpack_poly("z", sig[CTILDEBYTES + i * zb:CTILDEBYTES + (i + 1) * zb],
                     params) for i in range(params.l)]
    hints = decode_hint(sig[CTILDEBYTES + params.l * zb:], params)
    if hints is None:
        return False
    if max(_inf_norm(zi) for zi in z) >= params.gamma1 - params.beta:
        return False

    mu = crh(crh(pk) + msg)
    cp = sample_in_ball(ctilde, params.tau)
    mat = expand_a(rho, params)
    cp_hat = _to_hat(cp)
    z_hat = [_to_hat(zi) for zi in z]
    az = _matvec_ntt(mat, z_hat, params)
    w1s = []
    for i in range(params.k):
        t1_shift_hat = _to_hat(t1[i] << D)
        wi_hat = (az[i] - ntt.pointwise_mul(cp_hat, t1_shift_hat, CTX23)) % Q
        w1s.append(use_hint(hints[i], _from_hat(wi_hat), params.gamma2))
    w1_packed = b"".join(pack_poly("w1", w1, params) for w1 in w1s)
    return shake256(mu + w1_packed, CTILDEBYTES) == ctilde
