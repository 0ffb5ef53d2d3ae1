"""Compare the compiled and pure-Python form kernels on class-group workloads.

    python3 benchmarks/bench_forms.py [--reps 3]
"""

import argparse
import random
import time

from iwasawa_lab import _forms_py
from iwasawa_lab.arith import factorize
from iwasawa_lab.quadratic import FundamentalDiscriminant
from iwasawa_lab.errors import DomainError

try:
    from iwasawa_lab import _forms as _forms_c
except ImportError:  # extension not built
    _forms_c = None


def discriminants(count, lo, hi, seed=0):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        D = -rng.randint(lo, hi)
        try:
            FundamentalDiscriminant(D)
        except DomainError:
            continue
        out.append(D)
    return out


def workload(kernel, Ds):
    total = 0
    for D in Ds:
        reps = kernel.reduced_forms(D)
        h = len(reps)
        primes = [q for q, _ in factorize(h)] if h > 1 else []
        total += sum(kernel.element_orders(reps, D, h, primes))
    return total


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=3)
    args = ap.parse_args()
    suites = {"|D| < 1e5 (50 fields)": discriminants(50, 3, 10**5),
              "|D| ~ 1e7 (3 fields)": discriminants(3, 9 * 10**6, 10**7)}
    kernels = {"python": _forms_py}
    if _forms_c is not None:
        kernels["cython"] = _forms_c
    print(f"{'suite':24s} {'kernel':8s} {'best s':>9s}")
    for name, Ds in suites.items():
        results = {}
        for kname, k in kernels.items():
            best = float("inf")
            for _ in range(args.reps):
                t = time.perf_counter()
                results[kname] = workload(k, Ds)
                best = min(best, time.perf_counter() - t)
            print(f"{name:24s} {kname:8s} {best:9.4f}")
        assert len(set(results.values())) == 1, "kernels disagree"


if __name__ == "__main__":
    main()
