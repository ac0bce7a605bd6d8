"""Ring laws for Z_m[x]/(x^256 + 1) containers and the schoolbook oracle."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from unipq import polyring
from unipq.modmath import CTX23
from unipq.polyring import N, schoolbook_negacyclic, negacyclic_product_exact


def small_poly(rng, m):
    return rng.integers(0, m, N, dtype=np.int64)


def test_negacyclic_wraparound_sign():
    # x^255 * x = x^256 = -1
    a = polyring.zero_poly()
    b = polyring.zero_poly()
    a[255] = 1
    b[1] = 1
    c = schoolbook_negacyclic(a, b, 8192)
    assert c[0] == 8191 and np.all(c[1:] == 0)


def test_exact_product_unreduced():
    a = [1] * N
    b = [1] * N
    c = negacyclic_product_exact(a, b)
    # coefficient k gets (k+1) positive and (255-k) wrapped negative terms
    assert c[0] == 1 - 255
    assert c[255] == 256


def test_ring_laws(rng):
    m = CTX23
    a, b, c = (small_poly(rng, m.q) for _ in range(3))
    ab = schoolbook_negacyclic(a, b, m)
    ba = schoolbook_negacyclic(b, a, m)
    assert np.array_equal(ab, ba)
    lhs = schoolbook_negacyclic(a, polyring.poly_add(b, c, m), m)
    rhs = polyring.poly_add(ab, schoolbook_negacyclic(a, c, m), m)
    assert np.array_equal(lhs, rhs)


def test_remap_centered_round_trip(rng):
    p = small_poly(rng, 8192)
    centered = polyring.remap_centered(p, 8192)
    assert centered.min() >= -4096 and centered.max() < 4096
    assert np.array_equal(centered % 8192, p)


@given(st.integers(0, 2 ** 32))
@settings(max_examples=25, deadline=None)
def test_hex_round_trip(seed):
    rng = np.random.default_rng(seed)
    for m in (1024, 8192, CTX23):
        p = small_poly(rng, polyring._mod_value(m))
        s = polyring.poly_to_hex(p, m)
        assert np.array_equal(polyring.poly_from_hex(s, m), p)


def test_check_poly_rejects_out_of_range():
    p = polyring.zero_poly()
    p[0] = 8192
    with pytest.raises(ValueError):
        polyring.check_poly(p, 8192)
    with pytest.raises(ValueError):
        polyring.check_poly(p[:100], 8192)


def test_polyvec_polymat_shapes():
    v = polyring.PolyVec.zeros(3, 8192)
    assert len(v) == 3 and np.all(v[0] == 0)
    m = polyring.PolyMat([[polyring.zero_poly()] * 2] * 2, 8192)
    assert m.shape == (2, 2)
    with pytest.raises(ValueError):
        polyring.PolyMat([[polyring.zero_poly()],
                          [polyring.zero_poly()] * 2], 8192)
