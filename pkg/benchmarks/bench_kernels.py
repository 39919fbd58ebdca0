"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--sieve N] [--x X --y Y] [--box-x X --box-k K]

The first numba call of each kernel includes JIT compilation and is
reported separately. Both backends must agree exactly.
"""

import argparse
import time

import numpy as np

from ramamoments import _accel, kernels


def timed(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def first_call(fn, *args):
    t0 = time.perf_counter()
    fn(*args)
    return time.perf_counter() - t0


def box_nb(x, k, spf):
    return int(np.cumsum(kernels.box_increments_nb(x, k, spf, 4))[x])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sieve", type=int, default=2_000_000)
    ap.add_argument("--x", type=int, default=200)
    ap.add_argument("--y", type=int, default=2_000_000)
    ap.add_argument("--box-x", type=int, default=300)
    ap.add_argument("--box-k", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    spf, mu = kernels.sieve_np(args.sieve)
    mertens = np.cumsum(mu, dtype=np.int32)
    box = (args.box_x, args.box_k)
    cases = [
        ("sieve", f"limit={args.sieve}",
         kernels.sieve_nb, (args.sieve,), kernels.sieve_np, (args.sieve,)),
        ("column_sums", f"x={args.x} y={args.y}",
         kernels.column_sums_nb, (args.x, args.y, 1, mertens),
         kernels.column_sums_np, (args.x, args.y, 1, mertens)),
        ("box_sum", f"x={args.box_x} k={args.box_k}",
         box_nb, box + (spf,), kernels.box_sum_np, box + (mertens,)),
    ]
    if not kernels.box_fits_int64(*box):
        raise SystemExit("box size overflows the int64 kernels")
    print(f"{'kernel':<12} {'size':<22} {'jit s':>8} {'numba s':>9} {'numpy s':>9} {'speedup':>8}")
    for name, size, fnb, nb_args, fnp, np_args in cases:
        jit = first_call(fnb, *nb_args)
        t_nb, out_nb = timed(fnb, *nb_args, repeat=args.repeat)
        t_np, out_np = timed(fnp, *np_args, repeat=args.repeat)
        if isinstance(out_nb, tuple):
            same = all(np.array_equal(a, b) for a, b in zip(out_nb, out_np))
        elif isinstance(out_nb, np.ndarray):
            same = np.array_equal(out_nb, out_np)
        else:
            same = out_nb == out_np
        if not same:
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<12} {size:<22} {jit:8.3f} {t_nb:9.4f} {t_np:9.4f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
