"""Time the two hot kernels under each backend.

    python3 benchmarks/bench_kernels.py [--limit 3000000] [--repeat 3]

The numba timings exclude the first (compiling) call.
"""

import argparse
import time

import numpy as np

from rosserlab import _kernels
from rosserlab.models import _base_problem


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def lexmin_case(n):
    prob = _base_problem(n, True, True, False)
    return len(prob.codes), (prob.clause_ptr, prob.clause_lits)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--limit", type=int, default=3_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = ["numpy"] + (["numba"] if _kernels.NUMBA_AVAILABLE else [])
    cases = [("classify", lambda: _kernels.classify(args.limit))]
    for n in (14600, 29871555):
        nvars, csr = lexmin_case(n)
        cases.append((f"lexmin F_{n} ({nvars} vars)",
                      lambda nvars=nvars, csr=csr: _kernels.lexmin_search(nvars, csr)))

    prev = _kernels.backend()
    results = {}
    try:
        for name in backends:
            _kernels.set_backend(name)
            for label, fn in cases:
                fn()  # warm-up, compiles under numba
                secs, out = best_of(fn, args.repeat)
                results[(label, name)] = (secs, out)
                print(f"{label:32s} {name:6s} {secs * 1e3:10.2f} ms")
    finally:
        _kernels.set_backend(prev)

    if len(backends) == 2:
        for label, _ in cases:
            a, b = results[(label, "numpy")], results[(label, "numba")]
            same = (a[1] is None and b[1] is None) or np.array_equal(a[1], b[1])
            print(f"{label:32s} speedup {a[0] / b[0]:6.1f}x  outputs equal: {same}")


if __name__ == "__main__":
    main()
