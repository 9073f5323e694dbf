"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--out bench.csv]

Prints CSV: kernel, case, backend, best_seconds, speedup_vs_python.
"""

import argparse
import csv
import sys
import timeit

import numpy as np

from memqec import _pykernels
from memqec.codes import make_code
from memqec.fidelity import derived_fidelity
from memqec.recovery import cached_recovery

try:
    from memqec import _ckernels
except ImportError:
    _ckernels = None


def trace_case(family, n):
    code = make_code(family, n)
    rows = cached_recovery(family, n).code_rows()
    masks = np.arange(1 << n, dtype=np.int64)
    args = (
        np.ascontiguousarray(rows),
        np.ascontiguousarray(code.codewords),
        masks,
        np.zeros_like(masks),
    )
    return f"{family}{n}", args


def poly_case(family, n, points):
    rng = np.random.default_rng(0)
    coeffs = np.ascontiguousarray(derived_fidelity(family, n).poly.to_array(), dtype=float)
    return f"{family}{n}x{points}", (coeffs, rng.random(points), rng.random(points) / 2)


def best(fn, args, repeat):
    number = 1
    while timeit.timeit(lambda: fn(*args), number=number) < 0.05 and number < 10**6:
        number *= 4
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--out")
    args = ap.parse_args(argv)

    cases = [("restricted_traces", *trace_case(f, n)) for f, n in [("rc", 3), ("rc", 6), ("rc", 8), ("dfs", 8)]]
    cases += [("poly_eval_grid", *poly_case(f, n, m)) for f, n, m in [("rc", 3, 121), ("rc", 7, 10**5), ("dfs", 6, 10**6)]]

    rows = []
    for kernel, label, kargs in cases:
        py = best(getattr(_pykernels, kernel), kargs, args.repeat)
        rows.append([kernel, label, "python", f"{py:.3e}", "1.00"])
        if _ckernels is not None:
            cy = best(getattr(_ckernels, kernel), kargs, args.repeat)
            np.testing.assert_allclose(getattr(_ckernels, kernel)(*kargs), getattr(_pykernels, kernel)(*kargs), atol=1e-10)
            rows.append([kernel, label, "cython", f"{cy:.3e}", f"{py / cy:.2f}"])

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["kernel", "case", "backend", "best_seconds", "speedup_vs_python"])
    writer.writerows(rows)
    if args.out:
        out.close()
    if _ckernels is None:
        print("compiled extension not built; only the fallback was timed", file=sys.stderr)


if __name__ == "__main__":
    main()
