"""Modular arithmetic for the pseudo-Mersenne prime family 2^x - 2^y + 1.

Three primes are supported: the 23-bit signature-scheme prime and the
24/25-bit primes used to run the KEM's polynomial arithmetic through the
same multiplier.  Reduction follows the add-shift substitution
2^x = 2^y - 1 applied recursively to the high part of the product, which
produces a small set of partial summands followed by a final correction
into [0, q-1].
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

# (x, y) pairs for which 2^x - 2^y + 1 is prime and 1 mod 512.
SUPPORTED_PRIMES = {(23, 13), (24, 14), (25, 14)}


class UnsupportedPrimeError(ValueError):
    """Raised for (x, y) outside the supported pseudo-Mersenne family."""


def _is_prime(n: int) -> bool:
    # Deterministic Miller-Rabin; these witnesses are exact below 3.3e24.
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeCtx:
    """Immutable context for a prime q = 2^x - 2^y + 1."""

    x: int
    y: int
    q: int
    half_plus: int  # (q + 1) // 2, the inverse of 2 mod q

    @property
    def bits(self) -> int:
        return self.x


@lru_cache(maxsize=None)
def make_prime_ctx(x: int, y: int) -> PrimeCtx:
    """Build the context for q = 2^x - 2^y + 1.

    Only the three supported (x, y) pairs are constructible; anything else
    raises UnsupportedPrimeError.
    """
    if (x, y) not in SUPPORTED_PRIMES:
        raise UnsupportedPrimeError(f"unsupported prime 2^{x} - 2^{y} + 1")
    q = (1 << x) - (1 << y) + 1
    assert _is_prime(q)
    assert (q - 1) % 512 == 0
    return PrimeCtx(x=x, y=y, q=q, half_plus=(q + 1) // 2)


def partial_summands(ctx: PrimeCtx, v: int) -> list[int]:
    """Decompose v < 2^(2x) into summands congruent to v mod q.

    Each round rewrites the part above bit x using 2^x = 2^y - 1, i.e.
    hi*2^x + lo  ->  hi*2^y - hi + lo.  Negative terms are recorded as a
    subtraction summand.  The rounds stop once every remaining term fits
    in x + 1 bits, mirroring the fixed-depth hardware decomposition.
    """
    if v < 0 or v >= 1 << (2 * ctx.x):
        raise ValueError("input wider than the 2x-bit datapath")
    x, y = ctx.x, ctx.y
    mask = (1 << x) - 1
    terms = [v]
    out: list[int] = []
    while terms:
        t = terms.pop()
        a = abs(t)
        hi = a >> x
        if hi == 0:
            out.append(t)
            continue
        lo = a & mask
        sign = 1 if t >= 0 else -1
        if hi < 1 << (x - y):
            # hi*(2^y - 1) + lo fits in x+1 bits: emit as one summand.
            out.append(sign * (hi * ((1 << y) - 1) + lo))
        else:
            out.append(sign * lo)
            out.append(-sign * hi)
            terms.append(sign * (hi << y))
    return out


def reduce(ctx: PrimeCtx, v: int) -> int:
    """Reduce a 2x-bit-wide value into [0, q-1] via partial summands."""
    total = sum(partial_summands(ctx, v))
    # Correction: iterated conditional add/subtract until in range.
    q = ctx.q
    while total < 0:
        total += q
    while total >= q:
        total -= q
    return total


def add_mod(ctx: PrimeCtx, a: int, b: int) -> int:
    s = a + b
    return s - ctx.q if s >= ctx.q else s


def sub_mod(ctx: PrimeCtx, a: int, b: int) -> int:
    d = a - b
    return d + ctx.q if d < 0 else d


def mul_mod(ctx: PrimeCtx, a: int, b: int) -> int:
    return reduce(ctx, a * b)


def div2_mod(ctx: PrimeCtx, a: int) -> int:
    """Halve a residue: (a >> 1) + (a & 1) * (q+1)/2."""
    return (a >> 1) + (a & 1) * ctx.half_plus


CTX23 = make_prime_ctx(23, 13)
CTX24 = make_prime_ctx(24, 14)
CTX25 = make_prime_ctx(25, 14)
