"""Time the compiled and numpy backends of the F_q kernels against each other.

    python3 benchmarks/bench_kernels.py [--sizes 4,8,16,32,64] [--fields 3,9] [--repeat 5] [--json]

Each kernel is run on the same random matrices under both backends; the
outputs are compared before any timing is reported.  A last row times an
end-to-end workload (classifying conjugates of standard modules).
"""
import argparse
import json
import timeit

import numpy as np

from eo_theta import dieudonne as dd
from eo_theta import kernels
from eo_theta.config import parse_int_list
from eo_theta.field import GF


def field_for(q):
    for p in (2, 3, 5, 7, 11, 13):
        k, x = 0, 1
        while x < q:
            x *= p
            k += 1
        if x == q:
            return GF(p, k)
    raise SystemExit(f"q={q} is not a supported prime power")


def best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def bench_kernel(name, call, repeat):
    out = {}
    results = {}
    for backend in ("numba", "numpy"):
        kernels.set_backend(backend)
        results[backend] = call()
        number = max(1, int(0.05 / max(best(call, 1, 1), 1e-7)))
        out[backend] = best(call, repeat, number)
    a, b = results["numba"], results["numpy"]
    same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) else np.array_equal(a, b)
    if not same:
        raise SystemExit(f"{name}: backends disagree")
    return out


def end_to_end(repeat):
    F = GF(3)
    mods = [dd.standard_module(4, r, F) for r in range(1, 5)]

    def work():
        rng = np.random.default_rng(0)
        for D in mods:
            for _ in range(20):
                dd.eo_class(dd.random_conjugate(D, rng)[0])

    out = {}
    for backend in ("numba", "numpy"):
        kernels.set_backend(backend)
        out[backend] = best(work, repeat, 1)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="4,8,16,32,64")
    ap.add_argument("--fields", default="3,9")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    if not kernels._accel.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")
    kernels.set_backend("numba")
    kernels.warmup()

    rows = []
    rng = np.random.default_rng(1)
    for q in parse_int_list(args.fields):
        F = field_for(q)
        T = F.tables
        for n in parse_int_list(args.sizes):
            A = F.random_matrix(rng, n, n)
            B = F.random_matrix(rng, n, n)
            for name, call in (("rref", lambda: kernels.rref(A, T)),
                               ("matmul", lambda: kernels.matmul(A, B, T)),
                               ("det", lambda: kernels.det(A, T))):
                t = bench_kernel(name, call, args.repeat)
                rows.append({"kernel": name, "q": q, "n": n, **t})
    rows.append({"kernel": "classify x80", "q": 3, "n": 4, **end_to_end(args.repeat)})
    kernels.set_backend("numba" if kernels._accel.numba_requested() else "numpy")

    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'kernel':>14} {'q':>3} {'n':>4} {'numba (us)':>12} {'numpy (us)':>12} {'speedup':>8}")
    for r in rows:
        print(f"{r['kernel']:>14} {r['q']:>3} {r['n']:>4} {r['numba'] * 1e6:12.1f} "
              f"{r['numpy'] * 1e6:12.1f} {r['numpy'] / r['numba']:8.1f}x")


if __name__ == "__main__":
    main()
