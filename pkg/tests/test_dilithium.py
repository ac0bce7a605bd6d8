"""Signature round trips, hint machinery, and the NTT/schoolbook
equivalence of the core arithmetic."""

import numpy as np
import pytest

from unipq import dilithium
from unipq.modmath import CTX23

Q = CTX23.q
LEVELS = [2, 3, 5]
SIZES = {2: (1312, 2544, 2420), 3: (1952, 4016, 3293), 5: (2592, 4880, 4595)}


@pytest.mark.parametrize("level", LEVELS)
def test_sizes_and_round_trip(level, rng):
    seed = rng.integers(0, 256, 32, dtype="u1").tobytes()
    pk, sk = dilithium.keygen(level, seed)
    assert (len(pk), len(sk)) == SIZES[level][:2]
    msg = b"message under test"
    sig, attempts = dilithium.sign(level, sk, msg)
    assert len(sig) == SIZES[level][2]
    assert attempts >= 1
    assert dilithium.verify(level, pk, msg, sig)


def test_rejects_wrong_message_key_and_garbage(rng):
    seed = rng.integers(0, 256, 32, dtype="u1").tobytes()
    pk, sk = dilithium.keygen(2, seed)
    pk2, _ = dilithium.keygen(2, b"\x01" * 32)
    sig, _ = dilithium.sign(2, sk, b"hello")
    assert not dilithium.verify(2, pk, b"hellp", sig)
    assert not dilithium.verify(2, pk2, b"hello", sig)
    assert not dilithium.verify(2, pk, b"hello", bytes(len(sig)))
    flipped = bytearray(sig)
    flipped[40] ^= 0x10              # inside the packed z region
    assert not dilithium.verify(2, pk, b"hello", bytes(flipped))


def test_signing_is_deterministic(rng):
    _, sk = dilithium.keygen(3, bytes(32))
    a, _ = dilithium.sign(3, sk, b"m")
    b, _ = dilithium.sign(3, sk, b"m")
    assert a == b


def test_schoolbook_path_matches_ntt_path():
    pk_n, sk_n = dilithium.keygen(2, bytes(32))
    pk_s, sk_s = dilithium.keygen(2, bytes(32), schoolbook=True)
    assert pk_n == pk_s and sk_n == sk_s
    sig_n, _ = dilithium.sign(2, sk_n, b"x")
    sig_s, _ = dilithium.sign(2, sk_n, b"x", schoolbook=True)
    assert sig_n == sig_s


def test_power2round_identity(rng):
    r = rng.integers(0, Q, 256, dtype=np.int64)
    r1, r0 = dilithium.power2round(r)
    assert np.array_equal((r1 * (1 << 13) + r0) % Q, r)
    assert np.abs(r0).max() <= 1 << 12


@pytest.mark.parametrize("gamma2", [95232, 261888])
def test_decompose_identity(gamma2, rng):
    r = rng.integers(0, Q, 256, dtype=np.int64)
    r1, r0 = dilithium.decompose(r, gamma2)
    assert np.array_equal((r1 * 2 * gamma2 + r0) % Q, r)
    assert np.abs(r0).max() <= gamma2


@pytest.mark.parametrize("gamma2", [95232, 261888])
def test_hint_recovers_high_bits(gamma2, rng):
    # the lemma the verifier relies on: hints built from the perturbed
    # low part let use_hint reconstruct the unperturbed high part
    for _ in range(10):
        w = rng.integers(0, Q, 256, dtype=np.int64)
        e = rng.integers(-gamma2 // 2, gamma2 // 2 + 1, 256, dtype=np.int64)
        w1, w0 = dilithium.decompose(w, gamma2)
        h = dilithium.make_hint(w0 - e, w1, gamma2)
        got = dilithium.use_hint(h, (w - e) % Q, gamma2)
        assert np.array_equal(got, w1)


def test_pack_unpack_polys(rng):
    p = dilithium.PARAMS[3]
    cases = {
        "t1": rng.integers(0, 1 << 10, 256, dtype=np.int64),
        "t0": rng.integers(-(1 << 12) + 1, (1 << 12) + 1, 256,
                           dtype=np.int64),
        "eta": rng.integers(-p.eta, p.eta + 1, 256, dtype=np.int64),
        "z": rng.integers(-p.gamma1 + 1, p.gamma1 + 1, 256, dtype=np.int64),
        "w1": rng.integers(0, 16, 256, dtype=np.int64),
    }
    for kind, poly in cases.items():
        buf = dilithium.pack_poly(kind, poly, p)
        assert np.array_equal(dilithium.unpack_poly(kind, buf, p), poly)


@pytest.mark.parametrize("level", LEVELS)
def test_hint_codec_round_trip(level, rng):
    p = dilithium.PARAMS[level]
    hs = [np.zeros(256, dtype=np.int64) for _ in range(p.k)]
    flat = rng.choice(256 * p.k, size=p.omega - 3, replace=False)
    for pos in flat:
        hs[pos // 256][pos % 256] = 1
    buf = dilithium.encode_hint(hs, p)
    assert len(buf) == p.omega + p.k
    back = dilithium.decode_hint(buf, p)
    for a, b in zip(hs, back):
        assert np.array_equal(a, b)


def test_malformed_hint_rejected(rng):
    p = dilithium.PARAMS[2]
    buf = bytearray(p.omega + p.k)
    buf[p.omega] = 2
    buf[0] = 5
    buf[1] = 3                     # indices not strictly increasing
    assert dilithium.decode_hint(bytes(buf), p) is None
