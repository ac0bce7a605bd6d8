"""Polynomial containers over Z_m[x]/(x^256 + 1) and the schoolbook oracle.

Polynomials are plain numpy int64 arrays of length 256 with unsigned
coefficients in [0, m).  The modulus is either a power-of-two integer
(8192 or 1024 for the KEM rings) or a PrimeCtx.  The schoolbook
negacyclic multiplication here is the ground-truth oracle used by the
NTT engine tests and the overflow demonstration; it always computes with
exact Python integers internally.
"""

from __future__ import annotations

import numpy as np

from .modmath import PrimeCtx

N = 256


class ModulusMismatchError(ValueError):
    pass


def _mod_value(modulus) -> int:
    return modulus.q if isinstance(modulus, PrimeCtx) else int(modulus)


def zero_poly() -> np.ndarray:
    return np.zeros(N, dtype=np.int64)


def check_poly(p: np.ndarray, modulus) -> None:
    m = _mod_value(modulus)
    if len(p) != N:
        raise ValueError(f"polynomial must have {N} coefficients")
    if np.any(p < 0) or np.any(p >= m):
        raise ValueError("coefficient out of range for modulus")


def remap_centered(p: np.ndarray, modulus: int = 8192) -> np.ndarray:
    """Map unsigned coefficients [0, m) to the centered view [-m/2, m/2)."""
    m = _mod_value(modulus)
    p = np.asarray(p, dtype=np.int64)
    return np.where(p >= m // 2, p - m, p)


def poly_add(a, b, modulus) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)) % _mod_value(modulus)


def poly_sub(a, b, modulus) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) - np.asarray(b, dtype=np.int64)) % _mod_value(modulus)


def poly_pointwise_mul(a, b, modulus) -> np.ndarray:
    m = _mod_value(modulus)
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    return np.array([int(x * y % m) for x, y in zip(a, b)], dtype=np.int64)


def negacyclic_product_exact(a, b) -> list[int]:
    """Exact negacyclic convolution over Z, no modulus applied."""
    a = [int(v) for v in a]
    b = [int(v) for v in b]
    t = [0] * (2 * N)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            t[i + j] += ai * bj
    return [t[k] - t[k + N] for k in range(N)]


def schoolbook_negacyclic(a, b, modulus) -> np.ndarray:
    """Brute-force product in Z_m[x]/(x^256+1), exact wide integers inside."""
    m = _mod_value(modulus)
    c = negacyclic_product_exact(a, b)
    return np.array([v % m for v in c], dtype=np.int64)


def poly_to_hex(p, modulus) -> str:
    """Fixed-width little-endian-coefficient hex serialization for fixtures."""
    m = _mod_value(modulus)
    width = (max(m - 1, 1).bit_length() + 3) // 4
    return "".join(f"{int(c):0{width}x}" for c in p)


def poly_from_hex(s: str, modulus) -> np.ndarray:
    m = _mod_value(modulus)
    width = (max(m - 1, 1).bit_length() + 3) // 4
    if len(s) != width * N:
        raise ValueError("hex string has wrong length for this modulus")
    vals = [int(s[i * width:(i + 1) * width], 16) for i in range(N)]
    p = np.array(vals, dtype=np.int64)
    check_poly(p, modulus)
    return p


class PolyVec:
    """Fixed-length vector of polynomials sharing one modulus."""

    def __init__(self, polys, modulus):
        self.polys = [np.asarray(p, dtype=np.int64) for p in polys]
        self.modulus = modulus

    def __len__(self):
        return len(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    @classmethod
    def zeros(cls, length, modulus):
        return cls([zero_poly() for _ in range(length)], modulus)


class PolyMat:
    """Rectangular grid of polynomials sharing one modulus."""

    def __init__(self, rows, modulus):
        self.rows = [[np.asarray(p, dtype=np.int64) for p in row] for row in rows]
        if len({len(r) for r in self.rows}) > 1:
            raise ValueError("matrix rows must have equal length")
        self.modulus = modulus

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]
