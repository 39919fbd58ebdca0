"""Truncated multivariate Dirichlet series and single-prime Euler factors.

Subsets I of {1..k} are bitmasks (bit i-1 set for coordinate i) and are
always walked in increasing mask order so intermediate series are
reproducible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .arith import SieveTables, is_prime, mobius
from .errors import ArgumentError, ResourceError, VerificationError
from .multivar import f_multiplicative

SERIES_BUDGET = 10**6
DEFAULT_BOUNDS = {2: 64, 3: 12}


def subset_mask(indices: Iterable[int] | int, k: int) -> int:
    """Accept a bitmask or an iterable of 1-based coordinates."""
    if isinstance(indices, int):
        mask = indices
    else:
        mask = 0
        for i in indices:
            if not 1 <= i <= k:
                raise ArgumentError(f"coordinate {i} outside 1..{k}")
            mask |= 1 << (i - 1)
    if mask <= 0 or mask >= 1 << k:
        raise ArgumentError(f"subset mask {mask} is empty or outside [k]")
    return mask


def mask_size(mask: int) -> int:
    return bin(mask).count("1")


def nonempty_masks(k: int, min_size: int = 1) -> list[int]:
    return [m for m in range(1, 1 << k) if mask_size(m) >= min_size]


# ---------------------------------------------------------------------------
# truncated Dirichlet series in k variables
# ---------------------------------------------------------------------------

@dataclass
class TruncatedMultiSeries:
    """Coefficients on the box [1, bound]^k; missing keys are zero."""

    k: int
    bound: int
    coefficients: dict[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        if self.k < 1 or self.bound < 1:
            raise ArgumentError("k and bound must be positive")
        for key in self.coefficients:
            if len(key) != self.k or not all(1 <= v <= self.bound for v in key):
                raise ArgumentError(f"key {key} outside the truncation box")
        self.coefficients = {key: c for key, c in self.coefficients.items() if c}

    @classmethod
    def unit(cls, k: int, bound: int) -> TruncatedMultiSeries:
        return cls(k, bound, {(1,) * k: 1})

    def __getitem__(self, key: tuple[int, ...]) -> int:
        return self.coefficients.get(tuple(key), 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedMultiSeries):
            return NotImplemented
        return (self.k, self.bound, self.coefficients) == (other.k, other.bound, other.coefficients)

    def __len__(self) -> int:
        return len(self.coefficients)

    def keys_in_box(self):
        return itertools.product(range(1, self.bound + 1), repeat=self.k)

    def diff(self, other: TruncatedMultiSeries) -> dict[tuple[int, ...], int]:
        keys = set(self.coefficients) | set(other.coefficients)
        return {key: self[key] - other[key] for key in sorted(keys) if self[key] != other[key]}


def dirichlet_convolve(a: TruncatedMultiSeries, b: TruncatedMultiSeries) -> TruncatedMultiSeries:
    """Coefficientwise (A * B)(n) = sum over a_i b_i = n_i of A(a) B(b)."""
    if a.k != b.k or a.bound != b.bound:
        raise ArgumentError(f"dimension mismatch: ({a.k}, {a.bound}) vs ({b.k}, {b.bound})")
    n_max = a.bound
    out: dict[tuple[int, ...], int] = {}
    b_items = list(b.coefficients.items())
    for ka, ca in a.coefficients.items():
        limits = [n_max // v for v in ka]
        room = math.prod(limits)
        if room < len(b_items):
            pairs = ((kb, b.coefficients.get(kb, 0))
                     for kb in itertools.product(*(range(1, m + 1) for m in limits)))
        else:
            pairs = ((kb, cb) for kb, cb in b_items if all(v <= m for v, m in zip(kb, limits)))
        for kb, cb in pairs:
            if cb:
                key = tuple(x * y for x, y in zip(ka, kb))
                out[key] = out.get(key, 0) + ca * cb
    return TruncatedMultiSeries(a.k, n_max, out)


def convolve_all(series: list[TruncatedMultiSeries], k: int, bound: int) -> TruncatedMultiSeries:
    acc = TruncatedMultiSeries.unit(k, bound)
    for s in series:
        acc = dirichlet_convolve(acc, s)
    return acc


def zeta_factor_series(I, invert: bool, k: int, bound: int) -> TruncatedMultiSeries:
    """zeta(s_I - |I| + 1): coefficient m^(|I|-1) at the tuple holding m on I
    and 1 elsewhere; the inverse carries mu(m) m^(|I|-1)."""
    mask = subset_mask(I, k)
    size = mask_size(mask)
    coeffs = {}
    for m in range(1, bound + 1):
        c = m ** (size - 1)
        if invert:
            c *= mobius(m)
        key = tuple(m if mask >> i & 1 else 1 for i in range(k))
        coeffs[key] = c
    return TruncatedMultiSeries(k, bound, coeffs)


def _check_box(k: int, bound: int) -> None:
    if k < 1 or bound < 1:
        raise ArgumentError("k and bound must be positive")
    if bound**k > SERIES_BUDGET:
        raise ResourceError(f"bound^k = {bound**k} exceeds series budget {SERIES_BUDGET}")


def f_series(k: int, bound: int, beta: int = 1, tables: SieveTables | None = None) -> TruncatedMultiSeries:
    _check_box(k, bound)
    coeffs = {}
    for key in itertools.product(range(1, bound + 1), repeat=k):
        coeffs[key] = f_multiplicative(key, beta, tables)
    return TruncatedMultiSeries(k, bound, coeffs)


def zeta_factors(k: int, bound: int, invert: bool = False) -> list[TruncatedMultiSeries]:
    """Factors for every subset with |I| >= 2, in increasing mask order."""
    return [zeta_factor_series(m, invert, k, bound) for m in nonempty_masks(k, 2)]


def extract_E(k: int, bound: int, tables: SieveTables | None = None,
              f: TruncatedMultiSeries | None = None) -> TruncatedMultiSeries:
    """E = F * prod over |I| >= 2 of zeta(s_I - |I| + 1)^(-1)."""
    if f is None:
        f = f_series(k, bound, 1, tables)
    acc = f
    for inv in zeta_factors(k, bound, invert=True):
        acc = dirichlet_convolve(acc, inv)
    return acc


def reconstruct_f(e: TruncatedMultiSeries) -> TruncatedMultiSeries:
    acc = e
    for z in zeta_factors(e.k, e.bound):
        acc = dirichlet_convolve(acc, z)
    return acc


def multiplicativity_violations(s: TruncatedMultiSeries) -> list[tuple]:
    """Pairs (a, b) with gcd(prod a, prod b) = 1 and S(ab) != S(a) S(b)."""
    bad = []
    n_max = s.bound
    for a in s.keys_in_box():
        pa = math.prod(a)
        if pa == 1:
            continue
        for b in itertools.product(*(range(1, n_max // v + 1) for v in a)):
            pb = math.prod(b)
            if pb == 1 or math.gcd(pa, pb) != 1:
                continue
            ab = tuple(x * y for x, y in zip(a, b))
            if s[ab] != s[a] * s[b]:
                bad.append((a, b, s[ab], s[a] * s[b]))
    return bad


def verify_factorization(k: int, bound: int, tables: SieveTables | None = None) -> dict:
    """Extract E, then check E(1..1) = 1, multiplicativity and exact
    reconstruction of F. Raises VerificationError on any failure."""
    f = f_series(k, bound, 1, tables)
    e = extract_E(k, bound, tables, f)
    rebuilt = reconstruct_f(e)
    mismatch = f.diff(rebuilt)
    bad_mult = multiplicativity_violations(e)
    report = {
        "k": k,
        "bound": bound,
        "E_unit": e[(1,) * k],
        "E_terms": len(e),
        "reconstruction_mismatches": len(mismatch),
        "multiplicativity_violations": len(bad_mult),
    }
    if mismatch:
        report["first_mismatch"] = [list(next(iter(mismatch))), next(iter(mismatch.values()))]
    if bad_mult:
        report["first_violation"] = [list(bad_mult[0][0]), list(bad_mult[0][1])]
    if report["E_unit"] != 1 or mismatch or bad_mult:
        raise VerificationError("factorization check failed", report)
    return report


def e_absolute_partial_sums(k: int, bounds: Iterable[int], tables: SieveTables | None = None,
                            sigma: float | None = None) -> list[tuple[int, float]]:
    """Report-only: sum |E(n)| (n_1 ... n_k)^(-sigma) for growing truncation."""
    if sigma is None:
        sigma = 1 - 1 / k + 0.1
    rows = []
    for b in bounds:
        e = extract_E(k, b, tables)
        total = math.fsum(abs(c) * math.prod(key) ** (-sigma) for key, c in e.coefficients.items())
        rows.append((b, total))
    return rows


# ---------------------------------------------------------------------------
# single-prime Euler factors as power series in T_1..T_k, T_i = p^(-s_i)
# ---------------------------------------------------------------------------

@dataclass
class LocalPowerSeries:
    """Exact rational power series truncated to degree <= max_degree in every
    variable. Products and quotients stay exact because the truncation box
    is closed under taking smaller exponents."""

    k: int
    max_degree: int
    prime: int
    coefficients: dict[tuple[int, ...], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for key, c in self.coefficients.items():
            key = tuple(key)
            if len(key) != self.k or any(e < 0 for e in key):
                raise ArgumentError(f"bad exponent key {key}")
            if max(key, default=0) > self.max_degree:
                continue
            c = Fraction(c)
            if c:
                clean[key] = c
        self.coefficients = clean

    def _like(self, coeffs) -> LocalPowerSeries:
        return LocalPowerSeries(self.k, self.max_degree, self.prime, coeffs)

    def _check(self, other: LocalPowerSeries) -> None:
        if (self.k, self.max_degree, self.prime) != (other.k, other.max_degree, other.prime):
            raise ArgumentError("incompatible local series")

    def __getitem__(self, key) -> Fraction:
        return self.coefficients.get(tuple(key), Fraction(0))

    def __add__(self, other: LocalPowerSeries) -> LocalPowerSeries:
        self._check(other)
        out = dict(self.coefficients)
        for key, c in other.coefficients.items():
            out[key] = out.get(key, 0) + c
        return self._like(out)

    def __neg__(self) -> LocalPowerSeries:
        return self._like({key: -c for key, c in self.coefficients.items()})

    def __sub__(self, other: LocalPowerSeries) -> LocalPowerSeries:
        return self + (-other)

    def scale(self, c) -> LocalPowerSeries:
        return self._like({key: c * v for key, v in self.coefficients.items()})

    def __mul__(self, other: LocalPowerSeries) -> LocalPowerSeries:
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        top = self.max_degree
        for ka, ca in self.coefficients.items():
            for kb, cb in other.coefficients.items():
                key = tuple(x + y for x, y in zip(ka, kb))
                if max(key) <= top:
                    out[key] = out.get(key, 0) + ca * cb
        return self._like(out)

    def constant(self) -> Fraction:
        return self[(0,) * self.k]

    def inverse(self) -> LocalPowerSeries:
        """Reciprocal of a series with constant term 1, solved coefficient by
        coefficient in order of increasing total degree."""
        if self.constant() != 1:
            raise ArgumentError("inverse needs constant term 1")
        keys = sorted(itertools.product(range(self.max_degree + 1), repeat=self.k), key=lambda t: (sum(t), t))
        inv: dict[tuple[int, ...], Fraction] = {}
        terms = [(key, c) for key, c in self.coefficients.items() if any(key)]
        for key in keys:
            if not any(key):
                inv[key] = Fraction(1)
                continue
            acc = Fraction(0)
            for ka, ca in terms:
                rest = tuple(x - y for x, y in zip(key, ka))
                if min(rest) >= 0:
                    acc += ca * inv.get(rest, 0)
            if acc:
                inv[key] = -acc
        return self._like(inv)

    def __truediv__(self, other: LocalPowerSeries) -> LocalPowerSeries:
        return self * other.inverse()

    def max_abs_difference(self, other: LocalPowerSeries) -> Fraction:
        diff = self - other
        return max((abs(c) for c in diff.coefficients.values()), default=Fraction(0))


def _one(p: int, k: int, degree: int) -> LocalPowerSeries:
    return LocalPowerSeries(k, degree, p, {(0,) * k: 1})


def _monomial(p: int, k: int, degree: int, mask: int, power: int, coeff) -> LocalPowerSeries:
    key = tuple(power if mask >> i & 1 else 0 for i in range(k))
    return LocalPowerSeries(k, degree, p, {key: coeff})


def _check_local(p: int, k: int, degree: int) -> None:
    if not is_prime(p):
        raise ArgumentError(f"{p} is not prime")
    if not 1 <= k <= 4:
        raise ArgumentError(f"local factors support 1 <= k <= 4, got {k}")
    if degree < 1:
        raise ArgumentError("degree must be >= 1")


def local_g_factor(p: int, k: int, degree: int, method: str = "enumerate") -> LocalPowerSeries:
    """Euler factor at p of sum g(d) d^(-s), truncated per variable at ``degree``.

    ``enumerate`` groups the exponent tuples by their maximum n, weighting
    p^(v_1 + ... + v_k) T^v by p^(-n). ``geometric`` writes the max = n shell
    as a difference of products of truncated geometric series
    (1 - (p T_i)^(n+1)) / (1 - p T_i).
    """
    _check_local(p, k, degree)
    if method == "enumerate":
        coeffs = {}
        for n in range(degree + 1):
            for v in itertools.product(range(n + 1), repeat=k):
                if max(v, default=0) == n:
                    coeffs[v] = Fraction(p ** sum(v), p**n)
        return LocalPowerSeries(k, degree, p, coeffs)
    if method == "geometric":
        one = _one(p, k, degree)
        inv_den = [(one - _monomial(p, k, degree, 1 << i, 1, p)).inverse() for i in range(k)]
        total = LocalPowerSeries(k, degree, p)
        for n in range(degree + 1):
            upper = one
            lower = one
            for i in range(k):
                upper = upper * (one - _monomial(p, k, degree, 1 << i, n + 1, p ** (n + 1))) * inv_den[i]
                lower = lower * (one - _monomial(p, k, degree, 1 << i, n, p**n)) * inv_den[i]
            total = total + (upper - lower).scale(Fraction(1, p**n))
        return total
    raise ArgumentError(f"unknown method {method!r}")


def local_zeta(p: int, k: int, degree: int, mask: int) -> LocalPowerSeries:
    """Euler factor at p of zeta(s_I - |I| + 1), i.e. 1 / (1 - p^(|I|-1) T_I)."""
    c = p ** (mask_size(mask) - 1)
    coeffs = {}
    for j in range(degree + 1):
        coeffs[tuple(j if mask >> i & 1 else 0 for i in range(k))] = c**j
    return LocalPowerSeries(k, degree, p, coeffs)


def remark_E_local(p: int, k: int, degree: int) -> LocalPowerSeries:
    """The explicit local E factor as numerator / denominator, where

    numerator   = sum_I (-1)^|I| (p^|I| T_I - 1) prod_{J != I} (1 - p^(|J|-1) T_J)
    denominator = 1 + sum_I (-1)^|I| p^|I| T_I

    with I, J running over nonempty subsets of {1..k}.
    """
    _check_local(p, k, degree)
    one = _one(p, k, degree)
    masks = nonempty_masks(k)
    numerator = LocalPowerSeries(k, degree, p)
    for mi in masks:
        sign = -1 if mask_size(mi) % 2 else 1
        term = _monomial(p, k, degree, mi, 1, p ** mask_size(mi)) - one
        for mj in masks:
            if mj != mi:
                term = term * (one - _monomial(p, k, degree, mj, 1, p ** (mask_size(mj) - 1)))
        numerator = numerator + term.scale(sign)
    denominator = one
    for mi in masks:
        sign = -1 if mask_size(mi) % 2 else 1
        denominator = denominator + _monomial(p, k, degree, mi, 1, sign * p ** mask_size(mi))
    return numerator / denominator


def verify_remark_local(p: int, k: int, degree: int) -> dict:
    """Compare prod_I local_zeta(I) * remark_E_local with local_g_factor.

    Returns a report whose ``max_discrepancy`` is zero; raises
    VerificationError otherwise.
    """
    g_enum = local_g_factor(p, k, degree, "enumerate")
    g_geom = local_g_factor(p, k, degree, "geometric")
    product = remark_E_local(p, k, degree)
    for mask in nonempty_masks(k):
        product = product * local_zeta(p, k, degree, mask)
    disc = product.max_abs_difference(g_enum)
    methods = g_enum.max_abs_difference(g_geom)
    report = {
        "p": p,
        "k": k,
        "degree": degree,
        "max_discrepancy": str(disc),
        "method_discrepancy": str(methods),
        "coefficients_checked": (degree + 1) ** k,
    }
    if disc or methods:
        raise VerificationError("local Euler factor identity failed", report)
    return report


def local_from_series(s: TruncatedMultiSeries, p: int, degree: int) -> LocalPowerSeries:
    """Read the p-part of a multiplicative series: coefficient of T^v is S(p^v)."""
    coeffs = {}
    for v in itertools.product(range(degree + 1), repeat=s.k):
        key = tuple(p**e for e in v)
        if all(x <= s.bound for x in key):
            coeffs[v] = s[key]
    return LocalPowerSeries(s.k, degree, p, coeffs)
