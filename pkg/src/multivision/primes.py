"""Prime predicates and small-prime enumeration used to build game windows."""

from __future__ import annotations

import math

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Windows are materialized as explicit prime lists, so their upper end has to
# stay enumerable.  Desk-scale games never get anywhere near this.
MAX_WINDOW_PRIME = 10_000_000


def is_prime(n: int) -> bool:
    """Miller-Rabin with fixed bases; deterministic for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    """All primes p with lo <= p <= hi, ascending."""
    if hi < 2 or hi < lo:
        return []
    if hi > MAX_WINDOW_PRIME:
        raise ValueError(f"prime range up to {hi} is too large to enumerate")
    sieve = bytearray([1]) * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(hi) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(max(lo, 2), hi + 1) if sieve[p]]


def first_primes(count: int) -> list[int]:
    """The first ``count`` primes, ascending."""
    if count <= 0:
        return []
    bound = 24
    if count > 6:
        # overshoot of the n-th prime bound n(ln n + ln ln n)
        bound = int(count * (math.log(count) + math.log(math.log(count)))) + 10
    while True:
        found = primes_between(2, bound)
        if len(found) >= count:
            return found[:count]
        bound *= 2
