"""Moments S_k(x, y) of partial sums of (Cohen-)Ramanujan sums, the box sum
T_k(x) of f, and the log-polynomial fit of T_k(x) / x^k."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .arith import SieveTables, lcm_tuple
from .errors import ArgumentError, FitError, ResourceError
from .multivar import f_multiplicative
from .ramanujan import geometric_grid

MOMENT_Y_BUDGET = 10**7
DEFAULT_BUDGET = 10**9


def enumeration_budget() -> int:
    """Enumeration cap, overridable through RAMA_BUDGET."""
    raw = os.environ.get("RAMA_BUDGET")
    if raw:
        try:
            value = int(float(raw))
        except ValueError:
            raise ArgumentError(f"RAMA_BUDGET must be an integer, got {raw!r}") from None
        if value < 1:
            raise ArgumentError("RAMA_BUDGET must be positive")
        return value
    return DEFAULT_BUDGET


@dataclass(frozen=True)
class MomentResult:
    x: int
    y: int
    k: int
    beta: int
    value: int
    route: str


@dataclass
class FitReport:
    model_degree: int
    coefficients: list[float]
    r_squared: float
    residuals: list[float]
    sample_points: list[tuple[int, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "model_degree": self.model_degree,
            "coefficients": list(self.coefficients),
            "r_squared": self.r_squared,
            "residuals": list(self.residuals),
            "sample_points": [[x, v] for x, v in self.sample_points],
        }


def _check_moment_args(x: int, y: int, k: int, beta: int, tables: SieveTables) -> None:
    for name, v in (("x", x), ("y", y), ("k", k), ("beta", beta)):
        if not isinstance(v, (int, np.integer)) or v < 1:
            raise ArgumentError(f"{name} must be a positive integer, got {v!r}")
    tables.check_range(x, "x")


def column_sums(x: int, y: int, tables: SieveTables, beta: int = 1) -> np.ndarray:
    """Array whose entry n (1 <= n <= y) is sum_{q <= x} c_q^beta(n)."""
    if y > MOMENT_Y_BUDGET:
        raise ResourceError(f"y={y} exceeds the moment budget {MOMENT_Y_BUDGET}")
    tables.check_range(x, "x")
    return kernels.column_sums(int(x), int(y), int(beta), tables.mertens)


def moment_direct(x: int, y: int, k: int, beta: int, tables: SieveTables) -> MomentResult:
    """S_k(x, y) = sum_{n <= y} (sum_{q <= x} c_q^beta(n))^k from per-n column sums."""
    _check_moment_args(x, y, k, beta, tables)
    col = column_sums(x, y, tables, beta)
    value = kernels.exact_power_sum(col[1:], k)
    return MomentResult(x, y, k, beta, value, "direct")


def divisor_weights(x: int, beta: int, tables: SieveTables) -> dict[int, int]:
    """w(d) = sum over q <= x with d | q of d^beta mu(q/d), summed term by term."""
    mu = tables.mobius
    out = {}
    for d in range(1, x + 1):
        s = sum(int(mu[m]) for m in range(1, x // d + 1))
        if s:
            out[d] = d**beta * s
    return out


def moment_via_divisor_identity(x: int, y: int, k: int, beta: int, tables: SieveTables) -> MomentResult:
    """S_k(x, y) = sum over d_1..d_k <= x of prod_i w(d_i) * floor(y / lcm(d)^beta).

    The q-sums are carried out first, so the floor is kept exact.
    """
    _check_moment_args(x, y, k, beta, tables)
    if x**k > enumeration_budget():
        raise ResourceError(f"x^k = {x**k} tuples exceed the enumeration budget")
    weights = sorted(divisor_weights(x, beta, tables).items())

    def rec(depth: int, lcm: int, weight: int) -> int:
        if depth == k:
            return weight * (y // lcm**beta)
        total = 0
        for d, w in weights:
            nl = lcm * d // math.gcd(lcm, d)
            if nl**beta > y:
                continue
            total += rec(depth + 1, nl, weight * w)
        return total

    return MomentResult(x, y, k, beta, rec(0, 1, 1), "divisor_identity")


def moment(x: int, y: int, k: int, beta: int, tables: SieveTables, route: str = "direct") -> MomentResult:
    if route == "direct":
        return moment_direct(x, y, k, beta, tables)
    if route in ("identity", "divisor_identity"):
        return moment_via_divisor_identity(x, y, k, beta, tables)
    raise ArgumentError(f"unknown route {route!r}")


def _sorted_box_python(x: int, k: int, beta: int, tables: SieveTables) -> int:
    total = 0
    fact = math.factorial(k)

    def rec(prefix: list[int], lo: int):
        nonlocal total
        if len(prefix) == k:
            v = f_multiplicative(prefix, beta, tables)
            if v:
                mult = fact
                for c in _run_lengths(prefix):
                    mult //= math.factorial(c)
                total += mult * v
            return
        for n in range(lo, x + 1):
            prefix.append(n)
            rec(prefix, n)
            prefix.pop()

    rec([], 1)
    return total


def _run_lengths(seq: Sequence[int]) -> list[int]:
    runs = []
    prev = None
    for v in seq:
        if v == prev:
            runs[-1] += 1
        else:
            runs.append(1)
            prev = v
    return runs


def t_average_many(xs: Iterable[int], k: int, tables: SieveTables, beta: int = 1, workers: int = 1) -> dict[int, int]:
    """T_k at every x in ``xs``; one kernel pass covers all of them."""
    xs = sorted(set(int(v) for v in xs))
    if not xs:
        return {}
    if k < 1 or beta < 1:
        raise ArgumentError("k and beta must be positive")
    top = xs[-1]
    if xs[0] < 1:
        raise ArgumentError("x must be positive")
    tables.check_range(top, "x")
    if top**k > enumeration_budget():
        raise ResourceError(f"x^k = {top**k} tuples exceed the enumeration budget")
    if beta == 1 and kernels.box_fits_int64(top, k):
        return kernels.box_sums(xs, k, tables.smallest_prime_factor, tables.mertens, workers)
    return {v: _sorted_box_python(v, k, beta, tables) for v in xs}


def t_average(x: int, k: int, beta: int, tables: SieveTables, workers: int = 1) -> int:
    """T_k(x) = sum of f_beta over the box [1, x]^k."""
    return t_average_many([x], k, tables, beta, workers)[x]


def predicted_degree(k: int) -> int:
    """Degree 2^k - 2k - 1 of the log-polynomial in the main term, k >= 3."""
    if k < 3:
        raise ArgumentError(f"degree formula needs k >= 3, got {k}")
    return 2**k - 2 * k - 1


def fit_log_poly(samples: Sequence[tuple[int, int | float]], normalize_power: int, degree: int) -> FitReport:
    """Least-squares fit of value / x^normalize_power by a polynomial in log x.

    Coefficients are returned constant term first.
    """
    if degree < 0:
        raise ArgumentError("degree must be non-negative")
    if len(samples) < degree + 2:
        raise ArgumentError(f"need at least {degree + 2} samples, got {len(samples)}")
    xs = [int(s[0]) for s in samples]
    if min(xs) < 2 or len(set(xs)) != len(xs):
        raise ArgumentError("sample abscissas must be distinct and >= 2")
    # divide in exact arithmetic first; values can exceed float range of ints
    try:
        ys = np.array([float(int(v) / x**normalize_power) if isinstance(v, (int, np.integer))
                       else float(v) / x**normalize_power for x, v in samples])
    except OverflowError:
        raise FitError("normalized values exceed float range") from None
    if not np.all(np.isfinite(ys)):
        raise FitError("normalized values are not finite")
    logs = np.log(np.array(xs, dtype=float))
    design = np.vander(logs, degree + 1, increasing=True)
    if np.linalg.matrix_rank(design) < degree + 1:
        raise FitError("rank-deficient design matrix")
    coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
    resid = ys - design @ coef
    # R^2 is scale free; rescaling keeps the squares inside float range
    scale = float(np.max(np.abs(ys))) or 1.0
    r = resid / scale
    ss_res = float(r @ r)
    centered = (ys - ys.mean()) / scale
    ss_tot = float(centered @ centered)
    # rounding noise of an exact fit to constant data counts as a perfect fit
    noise = len(ys) * (1e3 * np.finfo(float).eps) ** 2
    if ss_tot <= noise:
        r2 = 1.0 if ss_res <= noise else 0.0
    else:
        r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return FitReport(
        model_degree=degree,
        coefficients=[float(c) for c in coef],
        r_squared=r2,
        residuals=[float(r) for r in resid],
        sample_points=[(x, float(y)) for x, y in zip(xs, ys)],
    )


def sample_t_average(k: int, xmin: int, xmax: int, points: int, tables: SieveTables, workers: int = 1) -> list[tuple[int, int]]:
    xs = geometric_grid(xmin, xmax, points)
    values = t_average_many(xs, k, tables, 1, workers)
    return [(x, values[x]) for x in xs]


def cauchy_schwarz_check(x: int, y: int, tables: SieveTables) -> bool:
    """S_2(x, y)^2 <= y * S_4(x, y), in exact integers."""
    _check_moment_args(x, y, 1, 1, tables)
    col = column_sums(x, y, tables)[1:]
    s2 = kernels.exact_power_sum(col, 2)
    s4 = kernels.exact_power_sum(col, 4)
    return s2 * s2 <= y * s4
