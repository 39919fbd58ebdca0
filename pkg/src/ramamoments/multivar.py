"""The k-variable function f = (mu x ... x mu) * g_beta and its evaluators.

``g_beta(d) = (d_1 ... d_k / lcm(d))**beta``. ``f_direct`` convolves over the
full divisor lattice; ``f_multiplicative`` multiplies prime-power values from
``f_prime_power``, which uses a closed form at beta = 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .arith import SieveTables, divisors, factorize, is_prime, lcm_tuple, mobius
from .errors import ArgumentError, ResourceError

DIRECT_BUDGET = 10**6


@dataclass(frozen=True)
class ExponentTuple:
    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.exponents) < 1 or any(v < 0 for v in self.exponents):
            raise ArgumentError(f"bad exponent tuple {self.exponents!r}")

    @property
    def k(self) -> int:
        return len(self.exponents)

    def normalized(self) -> tuple[int, ...]:
        """Sorted descending with zeros dropped."""
        return tuple(sorted((v for v in self.exponents if v), reverse=True))


def _check_tuple(n: Sequence[int], beta: int) -> tuple[int, ...]:
    n = tuple(int(v) for v in n)
    if not n or any(v < 1 for v in n):
        raise ArgumentError(f"tuple entries must be positive: {n!r}")
    if beta < 1:
        raise ArgumentError(f"beta must be >= 1, got {beta}")
    return n


def g_value(d: Sequence[int], beta: int = 1) -> int:
    d = _check_tuple(d, beta)
    return (math.prod(d) // lcm_tuple(d)) ** beta


def f_direct(
    n: Sequence[int],
    beta: int = 1,
    tables: SieveTables | None = None,
    budget: int = DIRECT_BUDGET,
) -> int:
    """f_beta(n) by summing mu(n_1/d_1)...mu(n_k/d_k) g_beta(d) over all d_i | n_i."""
    n = _check_tuple(n, beta)
    divs = [divisors(v, tables) for v in n]
    size = math.prod(len(ds) for ds in divs)
    if size > budget:
        raise ResourceError(f"{size} divisor tuples exceed budget {budget}; use f_multiplicative")
    weighted = [[(d, mobius(v // d, tables)) for d in ds] for v, ds in zip(n, divs)]
    weighted = [[(d, m) for d, m in ws if m] for ws in weighted]
    total = 0
    for combo in itertools.product(*weighted):
        sign = 1
        for _, m in combo:
            sign *= m
        total += sign * g_value([d for d, _ in combo], beta)
    return total


def tied_max_closed_form(p: int, k: int, ell: int, rest: int) -> int:
    """Value of f at a prime power with k positive exponents.

    ``ell`` counts how often the maximum exponent occurs, ``rest`` is the sum
    of the exponents minus one copy of the maximum. The expression
    p^rest (1-1/p)^k + (-1)^ell (1-1/p)^(k-ell) (p^(rest+1-ell) - p^(rest-ell))
    is multiplied through by p^k and divided back exactly; (p-1)^(ell-1) +
    (-1)^ell is always a multiple of p, and rest >= k - 1.
    """
    if ell == 1:
        return 0
    a = (p - 1) ** (ell - 1) + (-1) ** ell
    return p ** (rest - k + 1) * (p - 1) ** (k - ell + 1) * (a // p)


@lru_cache(maxsize=None)
def _local_value(p: int, shape: tuple[int, ...], beta: int) -> int:
    # shape is normalized: descending, no zeros
    if not shape:
        return 1
    if beta == 1:
        top = shape[0]
        ell = sum(1 for v in shape if v == top)
        return tied_max_closed_form(p, len(shape), ell, sum(shape) - top)
    return _lattice_local(p, shape, beta)


def _lattice_local(p: int, shape: tuple[int, ...], beta: int) -> int:
    # mu(p^v / p^e) is nonzero only for e in {v-1, v}
    total = 0
    for drop in itertools.product((0, 1), repeat=len(shape)):
        e = [v - b for v, b in zip(shape, drop)]
        sign = -1 if sum(drop) % 2 else 1
        total += sign * p ** (beta * (sum(e) - max(e)))
    return total


def f_prime_power(v: ExponentTuple | Sequence[int], p: int, beta: int = 1) -> int:
    """f_beta(p^v_1, ..., p^v_k)."""
    if not isinstance(v, ExponentTuple):
        v = ExponentTuple(tuple(v))
    if not is_prime(p):
        raise ArgumentError(f"{p} is not prime")
    if beta < 1:
        raise ArgumentError(f"beta must be >= 1, got {beta}")
    return _local_value(p, v.normalized(), beta)


def f_multiplicative(n: Sequence[int], beta: int = 1, tables: SieveTables | None = None) -> int:
    n = _check_tuple(n, beta)
    facs = [factorize(v, tables) for v in n]
    exps: dict[int, list[int]] = {}
    for fac in facs:
        for p, e in fac.factors:
            exps.setdefault(p, []).append(e)
    total = 1
    for p, es in exps.items():
        local = _local_value(p, tuple(sorted(es, reverse=True)), beta)
        if local == 0:
            return 0
        total *= local
    return total


def clear_cache() -> None:
    _local_value.cache_clear()


def nonnegativity_scan(tuples, beta: int = 1, tables: SieveTables | None = None) -> list[tuple[tuple[int, ...], int]]:
    """Return every (tuple, value) with a negative f value."""
    bad = []
    for t in tuples:
        v = f_multiplicative(t, beta, tables)
        if v < 0:
            bad.append((tuple(t), v))
    return bad
