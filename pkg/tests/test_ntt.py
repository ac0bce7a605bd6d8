"""NTT engine against the exact schoolbook oracle."""

import numpy as np
import pytest

from unipq import ntt
from unipq.modmath import CTX23, CTX24, CTX25
from unipq.polyring import schoolbook_negacyclic

CTXS = [CTX23, CTX24, CTX25]


@pytest.mark.parametrize("ctx", CTXS)
def test_psi_is_primitive_512th_root(ctx):
    psi = ntt.smallest_512th_root(ctx.q)
    assert pow(psi, 512, ctx.q) == 1
    assert pow(psi, 256, ctx.q) == ctx.q - 1


def test_bitrev8_involution():
    perm = [ntt.bitrev8(i) for i in range(256)]
    assert sorted(perm) == list(range(256))
    assert all(ntt.bitrev8(ntt.bitrev8(i)) == i for i in range(256))


def test_cycle_structure_constants():
    assert ntt.STAGES == 8
    assert ntt.BUTTERFLIES_PER_STAGE == 128
    assert ntt.TRANSFORM_CYCLES == 512


@pytest.mark.parametrize("ctx", CTXS)
def test_round_trip(ctx, rng):
    tw = ntt.build_twiddles(ctx)
    p = rng.integers(0, ctx.q, 256, dtype=np.int64)
    assert np.array_equal(ntt.intt_inverse(ntt.ntt_forward(p, tw), tw), p)


@pytest.mark.parametrize("ctx", CTXS)
def test_mul_matches_schoolbook(ctx, rng):
    for _ in range(20):
        a = rng.integers(0, ctx.q, 256, dtype=np.int64)
        b = rng.integers(0, ctx.q, 256, dtype=np.int64)
        got = ntt.negacyclic_mul(a, b, ctx)
        assert np.array_equal(got, schoolbook_negacyclic(a, b, ctx))


def test_ntt_is_linear(rng):
    tw = ntt.build_twiddles(CTX25)
    q = CTX25.q
    a = rng.integers(0, q, 256, dtype=np.int64)
    b = rng.integers(0, q, 256, dtype=np.int64)
    lhs = ntt.ntt_forward((a + b) % q, tw)
    rhs = (ntt.ntt_forward(a, tw) + ntt.ntt_forward(b, tw)) % q
    assert np.array_equal(lhs, rhs)


def test_pointwise_acc_matches_sum_of_products(rng):
    ctx = CTX25
    tw = ntt.build_twiddles(ctx)
    polys = [(rng.integers(0, ctx.q, 256, dtype=np.int64),
              rng.integers(0, ctx.q, 256, dtype=np.int64)) for _ in range(3)]
    acc = np.zeros(256, dtype=np.int64)
    expect = np.zeros(256, dtype=np.int64)
    for a, b in polys:
        acc = ntt.pointwise_mul_acc(acc, ntt.ntt_forward(a, tw),
                                    ntt.ntt_forward(b, tw), ctx)
        expect = (expect + schoolbook_negacyclic(a, b, ctx)) % ctx.q
    assert np.array_equal(ntt.intt_inverse(acc, tw), expect)


def test_schoolbook_helper_agrees(rng):
    a = rng.integers(0, CTX23.q, 256, dtype=np.int64)
    b = rng.integers(0, CTX23.q, 256, dtype=np.int64)
    assert np.array_equal(ntt.negacyclic_mul_schoolbook(a, b, CTX23),
                          schoolbook_negacyclic(a, b, CTX23))
