"""Sieve tables and elementary arithmetic: factorization, divisors, lcm."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import ArgumentError, ConfigurationError, RangeError

# spf (int32) + mobius (int8) + mertens (int32)
BYTES_PER_ENTRY = 9
DEFAULT_MAX_MEMORY = 1 << 30


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ArgumentError(f"malformed factorization {self.factors!r}")
            prod *= p**e
            last = p
        if prod != self.value:
            raise ArgumentError(f"factors {self.factors!r} do not multiply to {self.value}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0


@dataclass(frozen=True, eq=False)
class SieveTables:
    """Smallest-prime-factor, Moebius and Mertens tables on 0..limit.

    Index 0 is padding; every array has ``limit + 1`` entries. The arrays are
    made read-only so the tables can be shared between workers.
    """

    limit: int
    smallest_prime_factor: np.ndarray = field(repr=False)
    mobius: np.ndarray = field(repr=False)
    mertens: np.ndarray = field(repr=False)

    def check_range(self, n: int, what: str = "argument") -> None:
        if not 1 <= n <= self.limit:
            raise RangeError(f"{what}={n} outside sieve range 1..{self.limit}")

    def is_prime(self, n: int) -> bool:
        return n >= 2 and int(self.smallest_prime_factor[n]) == n


def build_sieves(limit: int, max_memory: int = DEFAULT_MAX_MEMORY) -> SieveTables:
    """Build the sieve tables up to ``limit`` with a linear sieve."""
    if not isinstance(limit, (int, np.integer)) or limit < 1:
        raise ConfigurationError(f"sieve limit must be a positive integer, got {limit!r}")
    limit = int(limit)
    if (limit + 1) * BYTES_PER_ENTRY > max_memory:
        raise ConfigurationError(
            f"sieve limit {limit} needs ~{(limit + 1) * BYTES_PER_ENTRY} bytes, "
            f"ceiling is {max_memory}"
        )
    spf, mu = kernels.sieve(limit)
    mertens = np.cumsum(mu, dtype=np.int32)
    for arr in (spf, mu, mertens):
        arr.setflags(write=False)
    return SieveTables(limit, spf, mu, mertens)


def _trial_factor(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def factorize(n: int, tables: SieveTables | None = None) -> Factorization:
    """Factor ``n`` using the smallest-prime-factor table.

    Without tables (or for n beyond them when ``tables`` is None) trial
    division is used; with tables an out-of-range n raises RangeError.
    """
    n = int(n)
    if n < 1:
        raise ArgumentError(f"cannot factor {n}")
    if tables is None:
        return Factorization(n, tuple(_trial_factor(n)))
    tables.check_range(n, "n")
    spf = tables.smallest_prime_factor
    out = []
    m = n
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out.append((p, e))
    return Factorization(n, tuple(out))


def divisors_from_factorization(fac: Factorization) -> list[int]:
    divs = [1]
    for p, e in fac.factors:
        divs = [d * p**i for d in divs for i in range(e + 1)]
    divs.sort()
    return divs


def divisors(n: int, tables: SieveTables | None = None) -> list[int]:
    """Sorted divisors of n."""
    if tables is not None and n > tables.limit:
        tables = None
    return divisors_from_factorization(factorize(n, tables))


def lcm_tuple(d: Sequence[int]) -> int:
    if len(d) == 0:
        raise ArgumentError("lcm of an empty tuple")
    if any(v < 1 for v in d):
        raise ArgumentError(f"lcm arguments must be positive: {tuple(d)!r}")
    return reduce(math.lcm, (int(v) for v in d), 1)


def euler_phi(n: int, tables: SieveTables | None = None) -> int:
    result = n
    for p, _ in factorize(n, tables if tables is not None and n <= tables.limit else None).factors:
        result = result // p * (p - 1)
    return result


def mobius(n: int, tables: SieveTables | None = None) -> int:
    if tables is not None and 1 <= n <= tables.limit:
        return int(tables.mobius[n])
    fac = factorize(n)
    if any(e > 1 for _, e in fac.factors):
        return 0
    return -1 if len(fac.factors) % 2 else 1


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return _trial_factor(n) == [(n, 1)]


def prime_factors_union(values: Iterable[int], tables: SieveTables | None = None) -> list[int]:
    primes: set[int] = set()
    for v in values:
        primes.update(factorize(v, tables).primes)
    return sorted(primes)
