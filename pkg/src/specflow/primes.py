"""Prime tables, Moebius function and Chebyshev theta.

Primes come from a numpy sieve of Eratosthenes; tables are cached per
process and only ever grow, so concurrent readers see immutable arrays.
"""
from __future__ import annotations

import math
import threading

import numpy as np

from .errors import DomainError

DEFAULT_PRIME_BOUND = 10**6

_lock = threading.Lock()
_table: tuple[int, np.ndarray] = (0, np.zeros(0, dtype=np.int64))


def sieve(limit: int) -> np.ndarray:
    """All primes p <= limit as an int64 array."""
    limit = int(limit)
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def primes_up_to(limit: int = DEFAULT_PRIME_BOUND) -> np.ndarray:
    """Cached read-only prime table up to ``limit``."""
    global _table
    limit = int(limit)
    with _lock:
        bound, tab = _table
        if bound < limit:
            bound = max(limit, DEFAULT_PRIME_BOUND)
            tab = sieve(bound)
            tab.setflags(write=False)
            _table = (bound, tab)
    return tab[: np.searchsorted(tab, limit, side="right")]


def first_primes(count: int) -> np.ndarray:
    """The first ``count`` primes."""
    if count < 0:
        raise DomainError("count must be non-negative")
    if count == 0:
        return np.zeros(0, dtype=np.int64)
    # p_k < k (log k + log log k) for k >= 6
    k = max(count, 6)
    bound = int(k * (math.log(k) + math.log(math.log(k)))) + 10
    tab = primes_up_to(bound)
    return tab[:count]


def mobius(n: int) -> int:
    """Moebius mu(n) by trial division (small n only)."""
    n = int(n)
    if n < 1:
        raise DomainError("mobius requires n >= 1")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def chebyshev_theta(limit: int) -> float:
    """theta(x) = sum_{p <= x} log p."""
    return float(np.log(primes_up_to(limit).astype(float)).sum())
