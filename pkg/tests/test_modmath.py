"""Modular arithmetic over the pseudo-Mersenne family, checked against
plain Python big-integer arithmetic."""

import pytest
from hypothesis import given, strategies as st

from unipq import modmath
from unipq.modmath import (CTX23, CTX24, CTX25, UnsupportedPrimeError,
                           make_prime_ctx)

CTXS = [CTX23, CTX24, CTX25]


@pytest.mark.parametrize("ctx", CTXS)
def test_prime_shape(ctx):
    assert ctx.q == (1 << ctx.x) - (1 << ctx.y) + 1
    assert ctx.q % 512 == 1
    assert pow(3, ctx.q - 1, ctx.q) == 1


def test_known_values():
    assert CTX23.q == 8380417
    assert CTX24.q == 16760833
    assert CTX25.q == 33538049


def test_unsupported_prime_rejected():
    with pytest.raises(UnsupportedPrimeError):
        make_prime_ctx(22, 13)


@pytest.mark.parametrize("ctx", CTXS)
def test_reduce_small_sweep(ctx):
    for v in range(0, 4 * ctx.q, ctx.q // 7):
        assert modmath.reduce(ctx, v) == v % ctx.q


@given(st.data())
def test_reduce_matches_mod(data):
    ctx = data.draw(st.sampled_from(CTXS))
    v = data.draw(st.integers(0, (1 << (2 * ctx.x)) - 1))
    assert modmath.reduce(ctx, v) == v % ctx.q


@given(st.data())
def test_partial_summands_congruent(data):
    ctx = data.draw(st.sampled_from(CTXS))
    v = data.draw(st.integers(0, (1 << (2 * ctx.x)) - 1))
    terms = modmath.partial_summands(ctx, v)
    assert sum(terms) % ctx.q == v % ctx.q
    # every summand fits the narrow adder
    assert all(abs(t) < 1 << (ctx.x + 1) for t in terms)


def test_reduce_rejects_wide_input():
    with pytest.raises(ValueError):
        modmath.reduce(CTX23, 1 << 46)


@given(st.data())
def test_mul_add_sub(data):
    ctx = data.draw(st.sampled_from(CTXS))
    a = data.draw(st.integers(0, ctx.q - 1))
    b = data.draw(st.integers(0, ctx.q - 1))
    assert modmath.mul_mod(ctx, a, b) == a * b % ctx.q
    assert modmath.add_mod(ctx, a, b) == (a + b) % ctx.q
    assert modmath.sub_mod(ctx, a, b) == (a - b) % ctx.q


@given(st.data())
def test_div2_is_inverse_of_doubling(data):
    ctx = data.draw(st.sampled_from(CTXS))
    a = data.draw(st.integers(0, ctx.q - 1))
    assert modmath.div2_mod(ctx, a) == a * pow(2, ctx.q - 2, ctx.q) % ctx.q
    assert 2 * modmath.div2_mod(ctx, a) % ctx.q == a
