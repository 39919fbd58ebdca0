"""Hot numeric kernels.

Every kernel exists twice: an ``@njit`` loop version (suffix ``_nb``) and a
vectorised numpy version (suffix ``_np``). The public dispatchers at the
bottom pick one according to :mod:`ramamoments._accel`. Both versions are
always importable so tests and benchmarks can compare them directly.
"""

from __future__ import annotations

import math

import numpy as np

from . import _accel
from ._accel import njit, prange

# f values inside the box kernel are bounded by g(n) <= x**(k-1) and the box
# holds x**k tuples; keep the product under int64.
INT64_SAFE = 2**62


# ---------------------------------------------------------------------------
# smallest prime factor and Moebius tables
# ---------------------------------------------------------------------------

@njit(cache=True)
def sieve_nb(limit):
    spf = np.zeros(limit + 1, np.int32)
    mu = np.zeros(limit + 1, np.int8)
    primes = np.empty(max(limit // 2 + 2, 16), np.int32)
    nprimes = 0
    if limit >= 1:
        spf[1] = 1
        mu[1] = 1
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
            mu[i] = -1
            primes[nprimes] = i
            nprimes += 1
        si = spf[i]
        for j in range(nprimes):
            p = primes[j]
            if p > si or p * i > limit:
                break
            spf[p * i] = p
            if p == si:
                mu[p * i] = 0
            else:
                mu[p * i] = -mu[i]
    return spf, mu


def sieve_np(limit):
    spf = np.zeros(limit + 1, np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.arange(limit + 1, dtype=np.int64)
    unset = spf == 0
    spf[unset] = idx[unset]
    spf[0] = 0
    if limit >= 1:
        spf[1] = 1

    mu = np.ones(limit + 1, np.int8)
    mu[0] = 0
    rem = idx.copy()
    active = np.nonzero(rem > 1)[0]
    while active.size:
        r = rem[active]
        p = spf[r].astype(np.int64)
        r2 = r // p
        square = (r2 % p) == 0
        mu[active] = np.where(square, 0, -mu[active])
        rem[active] = r2
        active = active[(r2 > 1) & ~square]
    return spf, mu


# ---------------------------------------------------------------------------
# column sums  sum_{q<=x} c_q^beta(n)  for every n <= y
# ---------------------------------------------------------------------------

@njit(cache=True)
def column_sums_nb(x, y, beta, mertens):
    col = np.zeros(y + 1, np.int64)
    for d in range(1, x + 1):
        m = mertens[x // d]
        if m == 0:
            continue
        step = d**beta
        if step > y:
            break
        w = step * m
        for n in range(step, y + 1, step):
            col[n] += w
    return col


def column_sums_np(x, y, beta, mertens):
    col = np.zeros(y + 1, np.int64)
    for d in range(1, x + 1):
        m = int(mertens[x // d])
        if m == 0:
            continue
        step = d**beta
        if step > y:
            break
        col[step::step] += step * m
    return col


# ---------------------------------------------------------------------------
# box sums  T_k(x) = sum_{n_i <= x} f(n_1, ..., n_k)
# ---------------------------------------------------------------------------

@njit(cache=True)
def factor_table_nb(x, spf):
    nf = np.zeros(x + 1, np.int64)
    for n in range(2, x + 1):
        m = n
        while m > 1:
            q = spf[m]
            while m % q == 0:
                m //= q
            nf[n] += 1
    width = max(1, nf.max())
    pf = np.zeros((x + 1, width), np.int64)
    for n in range(2, x + 1):
        m = n
        c = 0
        while m > 1:
            q = spf[m]
            while m % q == 0:
                m //= q
            pf[n, c] = q
            c += 1
    return pf, nf


@njit(cache=True)
def tied_max_local_nb(p, k, ell, rest):
    # prime-power value of f with k nonzero exponents, maximum attained ell
    # times and rest = (sum of exponents) - max; zero when ell == 1
    if ell == 1:
        return 0
    sign = 1 if ell % 2 == 0 else -1
    a = (p - 1) ** (ell - 1) + sign
    return p ** (rest - k + 1) * (p - 1) ** (k - ell + 1) * (a // p)


@njit(cache=True)
def f_tuple_nb(t, k, pf, nf):
    val = 1
    for i in range(k):
        ni = t[i]
        for j in range(nf[ni]):
            p = pf[ni, j]
            seen = False
            for i2 in range(i):
                if t[i2] % p == 0:
                    seen = True
                    break
            if seen:
                continue
            kk = 0
            mx = 0
            s = 0
            ell = 0
            for i3 in range(i, k):
                m = t[i3]
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                if e > 0:
                    kk += 1
                    s += e
                    if e > mx:
                        mx = e
                        ell = 1
                    elif e == mx:
                        ell += 1
            if ell == 1:
                return 0
            val *= tied_max_local_nb(p, kk, ell, s - mx)
    return val


@njit(cache=True, parallel=True)
def box_increments_nb(x, k, spf, nchunks):
    """Per-maximum contributions: out[m] = sum of f over the box tuples whose
    largest entry equals m. Prefix sums give T_k at every x' <= x."""
    pf, nf = factor_table_nb(x, spf)
    partial = np.zeros((nchunks, x + 1), np.int64)
    fact = np.ones(k + 1, np.int64)
    for i in range(2, k + 1):
        fact[i] = fact[i - 1] * i
    for c in prange(nchunks):
        t = np.empty(k, np.int64)
        row = partial[c]
        for a in range(c + 1, x + 1, nchunks):
            for i in range(k):
                t[i] = a
            while True:
                v = f_tuple_nb(t, k, pf, nf)
                if v != 0:
                    # permutations of a non-decreasing tuple
                    mult = fact[k]
                    run = 1
                    for i in range(1, k):
                        if t[i] == t[i - 1]:
                            run += 1
                        else:
                            mult //= fact[run]
                            run = 1
                    mult //= fact[run]
                    row[t[k - 1]] += mult * v
                i = k - 1
                while i >= 1 and t[i] == x:
                    i -= 1
                if i == 0:
                    break
                t[i] += 1
                for j in range(i + 1, k):
                    t[j] = t[i]
    return partial.sum(axis=0)


def box_sum_np(x, k, mertens):
    """T_k(x) through the Moebius-weighted form sum_d g(d) prod_i M(x // d_i),
    vectorised over the last coordinate."""
    d = np.arange(1, x + 1, dtype=np.int64)
    m = mertens[x // d].astype(np.int64)
    keep = m != 0
    dk = d[keep]
    mk = m[keep]
    if k == 1:
        return int(mk.sum())
    total = 0

    def rec(depth, lcm, prod, weight):
        nonlocal total
        if depth == k - 1:
            g = (prod * np.gcd(lcm, dk)) // lcm
            total += weight * int((g * mk).sum())
            return
        for di, mi in zip(dk.tolist(), mk.tolist()):
            rec(depth + 1, lcm * di // math.gcd(lcm, di), prod * di, weight * mi)

    rec(0, 1, 1, 1)
    return total


# ---------------------------------------------------------------------------
# dispatchers
# ---------------------------------------------------------------------------

def sieve(limit: int):
    if _accel.USE_NUMBA:
        return sieve_nb(limit)
    return sieve_np(limit)


def column_sums(x: int, y: int, beta: int, mertens: np.ndarray) -> np.ndarray:
    if _accel.USE_NUMBA:
        return column_sums_nb(x, y, beta, mertens)
    return column_sums_np(x, y, beta, mertens)


def box_fits_int64(x: int, k: int) -> bool:
    return x ** (2 * k) < INT64_SAFE


def box_sums(xs, k: int, spf: np.ndarray, mertens: np.ndarray, workers: int = 1) -> dict[int, int]:
    """Exact T_k(x) for every x in ``xs`` (beta = 1)."""
    xs = sorted(set(int(v) for v in xs))
    if not xs:
        return {}
    if _accel.USE_NUMBA:
        top = xs[-1]
        nchunks = max(1, int(workers)) * 4
        inc = box_increments_nb(top, k, spf, min(nchunks, top))
        prefix = np.cumsum(inc)
        return {v: int(prefix[v]) for v in xs}
    return {v: box_sum_np(v, k, mertens) for v in xs}


def exact_power_sum(values: np.ndarray, k: int) -> int:
    """sum(v**k) in arbitrary precision; int64 powers would overflow."""
    uniq, counts = np.unique(values, return_counts=True)
    return sum(int(c) * int(v) ** k for v, c in zip(uniq.tolist(), counts.tolist()))
