#!/usr/bin/env python3
"""Benchmark: pure-Python kernel vs the compiled extension.

Times the reduction of the rank-r relation (the dominant workload) and of
the single worst monomial I^(r+1) J^r on both kernels, and prints the
speedup.  Run from the repository root:

    python3 benchmarks/bench_reduce.py [--max-r 6] [--repeat 3]
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qonsager import _kernel_py  # noqa: E402
from qonsager.coeffs import c_recursive  # noqa: E402
from qonsager.freealg import monomial  # noqa: E402
from qonsager.reducer import _pack  # noqa: E402
from qonsager.verify import build_delta  # noqa: E402

try:
    from qonsager import _kernel_cy
except ImportError:
    _kernel_cy = None


def time_kernel(kernel, packed, repeat):
    best = None
    result = None
    for _ in range(repeat):
        work = {code: dict(coeff) for code, coeff in packed.items()}
        t0 = time.perf_counter()
        result = kernel.reduce_packed(work, False)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-r", type=int, default=6)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if _kernel_cy is None:
        print("compiled kernel not built; run: python3 setup.py build_ext --inplace")

    workloads = []
    for r in range(3, args.max_r + 1):
        workloads.append((f"delta_{r}", _pack(build_delta(r, c_recursive(r)))))
        workloads.append((f"I^{r + 1} J^{r}", _pack(monomial(r + 1, r, 0))))

    header = f"{'workload':<14} {'python':>10} {'cython':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, packed in workloads:
        t_py, out_py = time_kernel(_kernel_py, packed, args.repeat)
        if _kernel_cy is not None:
            t_cy, out_cy = time_kernel(_kernel_cy, packed, args.repeat)
            assert out_py == out_cy, f"kernel mismatch on {name}"
            print(f"{name:<14} {t_py * 1e3:>8.1f}ms {t_cy * 1e3:>8.1f}ms {t_py / t_cy:>7.2f}x")
        else:
            print(f"{name:<14} {t_py * 1e3:>8.1f}ms {'-':>10} {'-':>8}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
