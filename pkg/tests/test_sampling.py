"""Streaming samplers vs the bulk numpy route, plus range checks."""

import numpy as np
import pytest

from unipq import sampling
from unipq.bits import pack_bits, unpack_bits
from unipq.keccak import shake128, shake256
from unipq.xof import XofStream


def seeds(rng, n=10):
    return [rng.integers(0, 256, 32, dtype="u1").tobytes() for _ in range(n)]


def test_bits_pack_unpack_round_trip(rng):
    for width in (1, 3, 4, 10, 13, 18, 20, 23):
        vals = rng.integers(0, 1 << width, 256, dtype=np.int64)
        assert np.array_equal(unpack_bits(pack_bits(vals, width), width, 256),
                              vals)


def test_uniform_poly_matches_stream(rng):
    for seed in seeds(rng, 3):
        bulk = sampling.uniform_poly(seed, 7)
        msg = seed + bytes((7, 0))
        s = XofStream("shake128", msg, "mid192")
        got = [sampling.sample_uniform_q(s) for _ in range(256)]
        assert np.array_equal(bulk, got)
        assert bulk.max() < sampling.DILITHIUM_Q


@pytest.mark.parametrize("eta", [2, 4])
def test_eta_poly_matches_stream(eta, rng):
    seed = seeds(rng, 1)[0] + seeds(rng, 1)[0][:16]   # CRH-sized seed
    bulk = sampling.eta_poly(seed, 3, eta)
    s = XofStream("shake256", seed + bytes((3, 0)), "mid192")
    got = [sampling.sample_eta(s, eta) for _ in range(256)]
    assert np.array_equal(bulk, got)
    assert np.abs(bulk).max() <= eta


@pytest.mark.parametrize("gamma1", [1 << 17, 1 << 19])
def test_gamma_poly_matches_stream(gamma1, rng):
    seed = seeds(rng, 1)[0]
    bulk = sampling.gamma_poly(seed, 5, gamma1)
    ext = "gamma18" if gamma1 == 1 << 17 else "gamma20"
    s = XofStream("shake256", seed + bytes((5, 0)), ext)
    got = [sampling.sample_gamma(s, gamma1) for _ in range(256)]
    assert np.array_equal(bulk, got)
    assert bulk.min() > -gamma1 and bulk.max() <= gamma1


@pytest.mark.parametrize("mu", [6, 8, 10])
def test_cbd_poly_bit_count_oracle(mu, rng):
    buf = rng.integers(0, 256, mu * 32, dtype="u1").tobytes()
    got = sampling.cbd_poly(buf, mu)
    bits = unpack_bits(buf, 1, mu * 256)
    want = [int(bits[mu * i:mu * i + mu // 2].sum()
                - bits[mu * i + mu // 2:mu * (i + 1)].sum())
            for i in range(256)]
    assert np.array_equal(got, want)
    assert np.abs(got).max() <= mu // 2


@pytest.mark.parametrize("mu", [6, 8, 10])
def test_cbd_matches_stream(mu, rng):
    buf = rng.integers(0, 256, 64, dtype="u1").tobytes()
    s = XofStream("shake128", buf, "mid192")
    raw = shake128(buf, mu * 32)
    got = [sampling.sample_binomial(s, mu) for _ in range(256)]
    assert np.array_equal(sampling.cbd_poly(raw, mu), got)


@pytest.mark.parametrize("tau", [39, 49, 60])
def test_sample_in_ball_weight(tau, rng):
    for seed in seeds(rng, 5):
        c = sampling.sample_in_ball(seed, tau)
        assert int(np.abs(c).sum()) == tau
        assert set(np.unique(c)) <= {-1, 0, 1}


def test_matrix_poly_13bit_prefix_property(rng):
    seed = seeds(rng, 1)[0]
    long = sampling.matrix_poly_13bit(seed, 512)
    short = sampling.matrix_poly_13bit(seed, 256)
    assert np.array_equal(long[:256], short)
    assert long.max() < 1 << 13
