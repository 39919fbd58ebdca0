"""Verification suites shared by ``ramamoments selfcheck`` and the CLI
``verify-*`` subcommands. Each suite returns ``(passed, detail)``."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Callable

from . import multivar
from .arith import SieveTables, build_sieves
from .dirichlet import verify_factorization, verify_remark_local
from .errors import VerificationError
from .moments import (
    cauchy_schwarz_check,
    fit_log_poly,
    moment_direct,
    moment_via_divisor_identity,
    predicted_degree,
    sample_t_average,
    t_average_many,
)
from .multivar import f_direct, f_multiplicative, f_prime_power
from .ramanujan import cohen_sum, ramanujan_sum, ramanujan_sum_exp_oracle

PRIMES = (2, 3, 5, 7)


def oracle_equivalence(limit: int, tables: SieveTables) -> tuple[bool, str]:
    for q in range(1, limit + 1):
        for n in range(1, limit + 1):
            a = ramanujan_sum(q, n, tables)
            b = ramanujan_sum_exp_oracle(q, n)
            if a != b:
                return False, f"c_{q}({n}): divisor {a} vs exponential {b}"
    return True, f"{limit * limit} cases"


def nonnegativity(k: int, limit: int, tables: SieveTables, beta: int = 1) -> tuple[bool, str]:
    bad = multivar.nonnegativity_scan(
        itertools.product(range(1, limit + 1), repeat=k), beta, tables
    )
    if bad:
        return False, f"{len(bad)} negative values, first {bad[0]}"
    return True, f"k={k} n_i<={limit}"


def random_nonnegativity(k: int, limit: int, count: int, seed: int, tables: SieveTables) -> tuple[bool, str]:
    rng = random.Random(seed)
    tuples = [tuple(rng.randint(1, limit) for _ in range(k)) for _ in range(count)]
    bad = multivar.nonnegativity_scan(tuples, 1, tables)
    if bad:
        return False, f"{len(bad)} negative values, first {bad[0]}"
    return True, f"{count} random k={k} tuples"


def prime_power_tuples(max_exp: int, max_k: int):
    for k in range(1, max_k + 1):
        for p in PRIMES:
            for exps in itertools.product(range(max_exp + 1), repeat=k):
                yield p, exps


def closed_form_equivalence(max_exp: int, max_k: int, random_count: int, random_limit: int,
                            seed: int, tables: SieveTables) -> tuple[bool, str]:
    checked = 0
    for p, exps in prime_power_tuples(max_exp, max_k):
        n = tuple(p**e for e in exps)
        a = f_prime_power(exps, p)
        b = f_direct(n, 1, tables)
        if a != b:
            return False, f"prime power {n}: closed form {a} vs direct {b}"
        checked += 1
    rng = random.Random(seed)
    for _ in range(random_count):
        k = rng.randint(1, max_k)
        n = tuple(rng.randint(1, random_limit) for _ in range(k))
        a = f_multiplicative(n, 1, tables)
        b = f_direct(n, 1, tables)
        if a != b:
            return False, f"{n}: multiplicative {a} vs direct {b}"
        checked += 1
    return True, f"{checked} tuples"


def route_equivalence(max_x: int, ys, ks, betas, tables: SieveTables) -> tuple[bool, str]:
    count = 0
    for beta in betas:
        for y in ys:
            for k in ks:
                for x in range(1, max_x + 1):
                    a = moment_direct(x, y, k, beta, tables).value
                    b = moment_via_divisor_identity(x, y, k, beta, tables).value
                    if a != b:
                        return False, f"S_{k}({x},{y}) beta={beta}: {a} vs {b}"
                    count += 1
    return True, f"{count} (x, y, k, beta) cases"


def k2_constant(x: int, y: int, tol: float, tables: SieveTables) -> tuple[bool, str]:
    s2 = moment_direct(x, y, 2, 1, tables).value
    ratio = s2 * math.pi**2 / (3 * y * x * x)
    return abs(ratio - 1) < tol, f"ratio={ratio:.6f} tol={tol}"


def degree_formula() -> tuple[bool, str]:
    got = {k: predicted_degree(k) for k in (3, 4, 5)}
    return got == {3: 1, 4: 7, 5: 21}, str(got)


def t3_shape(xmin: int, xmax: int, points: int, tables: SieveTables) -> tuple[bool, str]:
    """Sign and stability of the log-linear fit; R^2 is reported, not gated."""
    samples = sample_t_average(3, xmin, xmax, points, tables)
    lin = fit_log_poly(samples, 3, 1)
    quad = fit_log_poly(samples, 3, 2)
    b = lin.coefficients[1]
    c2 = quad.coefficients[2]
    ok = b > 0 and abs(c2) < 0.2 * abs(b)
    return ok, f"b={b:.6g} c2={c2:.6g} r2={lin.r_squared:.4f}"


def t_monotone(xmax: int, k: int, tables: SieveTables) -> tuple[bool, str]:
    vals = t_average_many(range(1, xmax + 1), k, tables)
    seq = [vals[x] for x in range(1, xmax + 1)]
    ok = all(a <= b for a, b in zip(seq, seq[1:]))
    return ok, f"k={k} x<={xmax}"


def factorization(k: int, bound: int, tables: SieveTables) -> tuple[bool, str]:
    try:
        report = verify_factorization(k, bound, tables)
    except VerificationError as exc:
        return False, str(exc.report)
    return True, f"k={k} N={bound} E_terms={report['E_terms']}"


def remark_local(primes, ks, degree: int) -> tuple[bool, str]:
    for p in primes:
        for k in ks:
            try:
                verify_remark_local(p, k, degree)
            except VerificationError as exc:
                return False, str(exc.report)
    return True, f"p in {tuple(primes)}, k in {tuple(ks)}, D={degree}"


def cauchy_schwarz(xs, ys, tables: SieveTables) -> tuple[bool, str]:
    for x in xs:
        for y in ys:
            if not cauchy_schwarz_check(x, y, tables):
                return False, f"violated at x={x} y={y}"
    return True, f"{len(xs) * len(ys)} pairs"


def cohen_reduction(limit: int, tables: SieveTables) -> tuple[bool, str]:
    for q in range(1, limit + 1):
        for n in range(1, limit + 1):
            if cohen_sum(q, n, 1, tables) != ramanujan_sum(q, n, tables):
                return False, f"c_{q}^1({n}) != c_{q}({n})"
    for p in (2, 3, 5):
        for beta in (1, 2, 3):
            v = f_multiplicative((p, p), beta, tables)
            if v != p**beta - 1:
                return False, f"f_{beta}({p},{p}) = {v}"
    return True, f"q,n<={limit}"


@dataclass
class Suite:
    name: str
    run: Callable[[SieveTables], tuple[bool, str]]


def reduced_suites() -> list[Suite]:
    k2b, k3b = 24, 8
    return [
        Suite("oracle-equivalence", lambda t: oracle_equivalence(60, t)),
        Suite("nonnegativity-k2", lambda t: nonnegativity(2, 30, t)),
        Suite("nonnegativity-k3", lambda t: nonnegativity(3, 16, t)),
        Suite("nonnegativity-k4-random", lambda t: random_nonnegativity(4, 30, 100, 1, t)),
        Suite("closed-form-vs-convolution", lambda t: closed_form_equivalence(3, 3, 200, 60, 2, t)),
        Suite("moment-route-equivalence", lambda t: route_equivalence(12, (50, 101), (1, 2, 3), (1, 2), t)),
        Suite("k2-constant", lambda t: k2_constant(100, 10**6, 0.05, t)),
        Suite("degree-formula", lambda t: degree_formula()),
        Suite("t3-shape", lambda t: t3_shape(60, 240, 8, t)),
        Suite("t3-monotone", lambda t: t_monotone(60, 3, t)),
        Suite("factorization-k2", lambda t: factorization(2, k2b, t)),
        Suite("factorization-k3", lambda t: factorization(3, k3b, t)),
        Suite("remark-local", lambda t: remark_local((2, 3), (2, 3), 3)),
        Suite("cauchy-schwarz", lambda t: cauchy_schwarz((10, 50), (10**4,), t)),
        Suite("cohen-reduction", lambda t: cohen_reduction(60, t)),
    ]


def run_selfcheck(emit: Callable[[str], None] = print) -> bool:
    multivar.clear_cache()
    tables = build_sieves(10**6)
    all_ok = True
    for suite in reduced_suites():
        try:
            ok, detail = suite.run(tables)
        except Exception as exc:  # a crashing suite is a failing suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        all_ok &= ok
        emit(f"{'PASS' if ok else 'FAIL'} {suite.name}: {detail}")
    emit("selfcheck: " + ("all suites passed" if all_ok else "FAILED"))
    return all_ok

