"""KEM round trips, codecs, and the lifted product against the exact
big-integer oracle."""

import numpy as np
import pytest

from unipq import saber
from unipq.modmath import CTX23, CTX24, CTX25
from unipq.polyring import negacyclic_product_exact, schoolbook_negacyclic

LEVELS = [1, 3, 5]


def test_sizes():
    # byte sizes of the round-3 parameter sets
    for level, (pk, sk, ct) in {1: (672, 1568, 736),
                                3: (992, 2304, 1088),
                                5: (1312, 3040, 1472)}.items():
        p = saber.PARAMS[level]
        coins = bytes(96)
        pkb, skb = saber.kem_keygen(coins, p)
        ctb, ss = saber.kem_encaps(bytes(32), pkb, p)
        assert (len(pkb), len(skb), len(ctb)) == (pk, sk, ct)
        assert len(ss) == 32


@pytest.mark.parametrize("level", LEVELS)
@pytest.mark.parametrize("ctx", [CTX23, CTX24, CTX25])
def test_kem_round_trip(level, ctx, rng):
    p = saber.PARAMS[level]
    for _ in range(3):
        coins = rng.integers(0, 256, 96, dtype="u1").tobytes()
        pk, sk = saber.kem_keygen(coins, p, ctx=ctx)
        m = rng.integers(0, 256, 32, dtype="u1").tobytes()
        ct, ss = saber.kem_encaps(m, pk, p, ctx=ctx)
        assert saber.kem_decaps(ct, sk, p, ctx=ctx) == ss


def test_implicit_rejection(rng):
    p = saber.PARAMS[3]
    pk, sk = saber.kem_keygen(bytes(96), p)
    ct, ss = saber.kem_encaps(bytes(32), pk, p)
    bad = bytearray(ct)
    bad[0] ^= 1
    ss_bad = saber.kem_decaps(bytes(bad), sk, p)
    assert ss_bad != ss
    # deterministic pseudo-random rejection, not an error
    assert saber.kem_decaps(bytes(bad), sk, p) == ss_bad


def test_cross_prime_interop(rng):
    # honest ciphertexts decapsulate identically whichever prime ran the
    # polynomial arithmetic
    p = saber.PARAMS[1]
    coins = rng.integers(0, 256, 96, dtype="u1").tobytes()
    pk25, sk25 = saber.kem_keygen(coins, p, ctx=CTX25)
    pk23, sk23 = saber.kem_keygen(coins, p, ctx=CTX23)
    assert pk25 == pk23 and sk25 == sk23
    ct, ss = saber.kem_encaps(bytes(32), pk25, p, ctx=CTX25)
    assert saber.kem_decaps(ct, sk23, p, ctx=CTX24) == ss


def test_pack_unpack_round_trip(rng):
    for width, l in ((13, 3), (10, 2), (1, 1)):
        vec = [rng.integers(0, 1 << width, 256, dtype=np.int64)
               for _ in range(l)]
        buf = saber.pack_vec(vec, width)
        assert len(buf) == l * 32 * width
        back = saber.unpack_vec(buf, width, l)
        for a, b in zip(vec, back):
            assert np.array_equal(a, b)


def test_msg_poly_round_trip(rng):
    m = rng.integers(0, 256, 32, dtype="u1").tobytes()
    assert saber.poly_to_msg(saber.msg_to_poly(m)) == m


def test_gen_matrix_is_stream_prefix(rng):
    seed = rng.integers(0, 256, 32, dtype="u1").tobytes()
    for level in LEVELS:
        p = saber.PARAMS[level]
        mat = saber.gen_matrix(seed, p)
        from unipq.sampling import matrix_poly_13bit
        flat = matrix_poly_13bit(seed, 256 * p.l * p.l)
        for i in range(p.l):
            for j in range(p.l):
                idx = i * p.l + j
                assert np.array_equal(mat[i][j],
                                      flat[256 * idx:256 * (idx + 1)])


@pytest.mark.parametrize("ctx", [CTX24, CTX25])
def test_lifted_product_exact_in_safe_range(ctx, rng):
    # honest operands: 13-bit publics, secrets from the binomial sampler
    p = saber.PARAMS[3]
    for _ in range(5):
        a = rng.integers(0, 1 << 13, 256, dtype=np.int64)
        s = rng.integers(-p.mu // 2, p.mu // 2 + 1, 256, dtype=np.int64)
        got = saber.lifted_product(a, s, ctx)
        want = schoolbook_negacyclic(saber._center_pow2(a, 13), s, 8192)
        assert np.array_equal(got, want)


def test_overflow_bound_values():
    # the adversarial single-product peak against the prime capacities
    peak = 5 * (1 << 12) * (1 << 8)
    assert peak == 5242880
    assert peak > CTX23.q // 2       # wraps under the narrow prime
    assert peak < CTX24.q // 2 and peak < CTX25.q // 2


def test_adversarial_product_wraps_under_narrow_prime():
    a = np.full(256, 4096, dtype=np.int64)      # lifts to -4096
    s = np.full(256, -5, dtype=np.int64)
    exact = negacyclic_product_exact(saber._center_pow2(a, 13), s)
    want = np.array([v % 8192 for v in exact], dtype=np.int64)
    ok = saber.lifted_product(a, s, CTX25)
    bad = saber.lifted_product(a, s, CTX23)
    assert np.array_equal(ok, want)
    assert ok[255] == 0 and bad[255] == 8191
