"""Compare the compiled and pure-Python Schubert kernels on identical workloads.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--json]
"""

import argparse
import json
import time

from llskit.kernels import available_backends
from llskit.schubert import partitions_in_box


def pieri_power(mod, rows, cols, n):
    """Coefficients of sigma_1^n, expanded one horizontal strip at a time."""
    acc = {(): 1}
    for _ in range(n):
        nxt = {}
        for lam, c in acc.items():
            for nu in mod.horizontal_strips(lam, 1, rows, cols):
                nxt[nu] = nxt.get(nu, 0) + c
        acc = nxt
    return acc


def lr_table(mod, rows, cols):
    """All LR coefficients c^nu_{lam,mu} with lam, mu, nu in the box."""
    parts = [p.parts for p in partitions_in_box(rows, cols)]
    out = {}
    for nu in parts:
        for lam in parts:
            for mu in parts:
                if sum(lam) + sum(mu) == sum(nu):
                    c = mod.lr_coefficient(nu, lam, mu)
                    if c:
                        out[(nu, lam, mu)] = c
    return out


WORKLOADS = {
    "pieri sigma_1^16 in 2x8": lambda m: pieri_power(m, 2, 8, 16),
    "pieri sigma_1^12 in 3x4": lambda m: pieri_power(m, 3, 4, 12),
    "lr table 3x3": lambda m: lr_table(m, 3, 3),
    "lr table 2x5": lambda m: lr_table(m, 2, 5),
}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    backends = available_backends()
    rows = []
    for name, work in WORKLOADS.items():
        timings, results = {}, {}
        for backend, mod in backends.items():
            timings[backend], results[backend] = best_of(lambda: work(mod), args.repeat)
        if len({json.dumps(sorted(map(repr, r.items()))) for r in results.values()}) != 1:
            raise SystemExit(f"backends disagree on {name}")
        rows.append({"workload": name, **{f"{b}_s": round(t, 6) for b, t in timings.items()}})
    if args.json:
        print(json.dumps(rows, indent=1))
        return
    names = list(backends)
    print(f"{'workload':28}" + "".join(f"{b:>12}" for b in names) + ("     speedup" if "cython" in names else ""))
    for row in rows:
        line = f"{row['workload']:28}" + "".join(f"{row[b + '_s'] * 1e3:10.2f}ms" for b in names)
        if "cython" in names:
            line += f"{row['python_s'] / row['cython_s']:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
