"""Ramanujan sums, Cohen-Ramanujan sums and their partial sums over q."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import SieveTables, divisors, mobius
from .errors import ArgumentError, NumericalDriftError

EXP_ORACLE_MAX_Q = 10_000
EXP_ORACLE_TOLERANCE = 1e-6


def _check_positive(**kwargs) -> None:
    for name, value in kwargs.items():
        if not isinstance(value, (int, np.integer)) or value < 1:
            raise ArgumentError(f"{name} must be a positive integer, got {value!r}")


def ramanujan_sum(q: int, n: int, tables: SieveTables | None = None) -> int:
    """c_q(n) = sum over d | gcd(q, n) of d * mu(q/d)."""
    _check_positive(q=q, n=n)
    if tables is not None:
        tables.check_range(q, "q")
    g = math.gcd(q, n)
    return sum(d * mobius(q // d, tables) for d in divisors(g, tables))


@lru_cache(maxsize=256)
def _unit_circle(q: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    j = np.arange(1, q + 1, dtype=np.int64)
    coprime = j[np.gcd(j, q) == 1]
    angle = 2.0 * np.pi * np.arange(q) / q
    return coprime, np.cos(angle), np.sin(angle)


def ramanujan_sum_exp_oracle(q: int, n: int) -> int:
    """c_q(n) from the exponential sum over residues j in 1..q coprime to q.

    Arguments are reduced mod q before the trig lookup and both parts are
    summed with ``math.fsum``. Raises NumericalDriftError when the sum is
    further than 1e-6 from an integer.
    """
    _check_positive(q=q, n=n)
    if q > EXP_ORACLE_MAX_Q:
        raise ArgumentError(f"q={q} exceeds the exponential-oracle limit {EXP_ORACLE_MAX_Q}")
    residues, cos_t, sin_t = _unit_circle(q)
    idx = (residues * (n % q)) % q
    re = math.fsum(cos_t[idx])
    im = math.fsum(sin_t[idx])
    value = round(re)
    residual = math.hypot(re - value, im)
    if residual >= EXP_ORACLE_TOLERANCE:
        raise NumericalDriftError(f"exponential sum for q={q}, n={n} drifted by {residual:.3g}")
    return int(value)


def cohen_sum(q: int, n: int, beta: int, tables: SieveTables | None = None) -> int:
    """c_q^beta(n) = sum over d | q with d**beta | n of d**beta * mu(q/d)."""
    _check_positive(q=q, n=n, beta=beta)
    total = 0
    for d in divisors(q, tables):
        db = d**beta
        if n % db == 0:
            total += db * mobius(q // d, tables)
    return total


def column_sum(x: int, n: int, tables: SieveTables, beta: int = 1) -> int:
    """sum_{q <= x} c_q^beta(n), through sum over d | n, d <= x of d * M(x // d).

    For beta > 1 the divisor condition becomes d**beta | n.
    """
    _check_positive(x=x, n=n, beta=beta)
    tables.check_range(x, "x")
    mertens = tables.mertens
    if beta == 1:
        cands = divisors(n, tables)
    else:
        cands = [d for d in range(1, min(x, math.isqrt(n)) + 1) if n % d**beta == 0]
    return sum(d**beta * int(mertens[x // d]) for d in cands if d <= x)


@dataclass(frozen=True)
class GrowthRow:
    x: int
    sum: int
    normalized: float


def geometric_grid(lo: int, hi: int, points: int) -> list[int]:
    """Distinct integers spaced geometrically from lo to hi inclusive."""
    if lo < 1 or hi < lo or points < 1:
        raise ArgumentError(f"bad grid lo={lo} hi={hi} points={points}")
    if points == 1 or lo == hi:
        return [hi]
    raw = np.geomspace(lo, hi, points)
    return sorted({int(round(v)) for v in raw} | {lo, hi})


def rh_growth_report(
    n: int, x_max: int, epsilon: float, tables: SieveTables, points: int = 20
) -> list[GrowthRow]:
    """Partial sums over q of c_q(n) at geometric x, scaled by x**(1/2 + eps).

    Report only: nothing here is asserted about the growth.
    """
    _check_positive(n=n, x_max=x_max)
    if not 0 < epsilon <= 0.5:
        raise ArgumentError(f"epsilon must lie in (0, 1/2], got {epsilon}")
    tables.check_range(x_max, "x_max")
    rows = []
    for x in geometric_grid(1, x_max, points):
        s = column_sum(x, n, tables)
        rows.append(GrowthRow(x, s, s / x ** (0.5 + epsilon)))
    return rows


def growth_csv(rows: list[GrowthRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "sum", "normalized"])
    for r in rows:
        w.writerow([r.x, r.sum, f"{r.normalized:.12g}"])
    return buf.getvalue()

