"""Small exact integer helpers: factoring, valuations, symbols, orders."""

from __future__ import annotations

from functools import lru_cache
from math import gcd


def v_int(x: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if x == 0:
        raise ValueError("valuation of 0")
    x = abs(x)
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of |n| by trial division, as sorted (prime, exponent) pairs."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_divisors(n: int) -> list[int]:
    return [q for q, _ in factorize(n)]


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == ((n, 1),)


def is_squarefree(n: int) -> bool:
    return all(k == 1 for _, k in factorize(n))


def primes_below(n: int) -> list[int]:
    if n < 3:
        return []
    sieve = bytearray([1]) * n
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, n, i)))
    return [i for i in range(n) if sieve[i]]


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for a discriminant D and a prime n."""
    if n == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = D % n
    if r == 0:
        return 0
    return 1 if pow(r, (n - 1) // 2, n) == 1 else -1


def order_mod_pm1(x: int, k: int) -> int:
    """Order of x in (Z/2^k)^x / <-1>.

    The group has order 2^(k-2) for k >= 2, so the order is the least 2^j
    with x^(2^j) = +-1, found by repeated squaring.
    """
    M = 1 << k
    x %= M
    if x % 2 == 0:
        raise ValueError("x must be odd")
    y, o = x, 1
    while y not in (1, M - 1 if M > 2 else 1):
        y = y * y % M
        o *= 2
    return o


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b
