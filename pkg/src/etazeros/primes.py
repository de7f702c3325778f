"""Primality, factorization, and prime-basket utilities.

Everything here is deterministic. Miller-Rabin uses a fixed witness set that
is provably sufficient below 3.3 * 10^24, far beyond any modulus this package
constructs; Pollard rho (Brent variant) runs with a fixed iteration schedule.
"""

from __future__ import annotations

from math import gcd, isqrt

# Witnesses covering all n < 3_317_044_064_679_887_385_961_981 (Sorenson-Webster).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test for nonnegative integers."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime_below(n: int) -> int:
    """Largest prime strictly below n. Raises ValueError when none exists."""
    if n <= 2:
        raise ValueError("no prime below %d" % n)
    c = n - 1 if n % 2 == 0 else n - 2
    if c == 1:
        return 2 if n > 2 else None
    while c >= 2:
        if is_prime(c):
            return c
        c -= 2 if c > 3 else 1
    raise ValueError("no prime below %d" % n)


def descending_primes(start_below: int):
    """Yield primes < start_below in descending order, forever (down to 2)."""
    c = start_below
    while True:
        c = next_prime_below(c)
        yield c


def largest_primes_below(n: int, count: int) -> tuple[int, ...]:
    """The `count` largest primes below n, in descending order."""
    out = []
    gen = descending_primes(n)
    for _ in range(count):
        out.append(next(gen))
    return tuple(out)


def _pollard_rho(n: int, seed: int) -> int:
    """Brent-cycle Pollard rho; returns a nontrivial factor of composite odd n."""
    if n % 2 == 0:
        return 2
    c = seed
    while True:
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1  # rare cycle degeneracy: retry with a new polynomial


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    factors: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    d = 41
    while d * d <= n and d < 100_000:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        r = isqrt(m)
        if r * r == m:
            stack.extend((r, r))
            continue
        f = _pollard_rho(m, 1)
        stack.extend((f, m // f))
    return factors


def squarefree_part(n: int) -> int:
    """Squarefree kernel of n != 0 (sign preserved)."""
    if n == 0:
        raise ValueError("squarefree part of 0 is undefined")
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factorize(abs(n)).items():
        if e % 2:
            out *= p
    return sign * out
