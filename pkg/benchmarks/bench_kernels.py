"""Compare the compiled and pure-Python partition kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Workloads are the encoded Theta sets that quantifier elimination hands to the
kernels: plain partition enumeration, congruence-filtered enumeration, the
formula-filtered enumeration used by decomposition, and congruence closure.
"""

from __future__ import annotations

import argparse
import random
import statistics
import time

from ecl import kernels
from ecl._kernels_py import OP_AND, OP_EQ, OP_NOT, OP_OR, OP_REL


def chain(n: int):
    """x, F(x), F(F(x)), ...: a unary chain."""
    return n, [(i, 0, (i - 1,)) for i in range(1, n)]


def mixed(n: int, seed: int = 0):
    rng = random.Random(seed)
    apps = []
    for i in range(2, n):
        if rng.random() < 0.6:
            if rng.random() < 0.5:
                apps.append((i, 0, (rng.randrange(i),)))
            else:
                apps.append((i, 1, (rng.randrange(i), rng.randrange(i))))
    return n, apps


def workloads():
    out = []
    for n in (8, 9, 10):
        out.append((f"bell n={n}", "admissible", (n, [], 10**7)))
    for n in (10, 12):
        out.append((f"chain n={n}", "admissible", (*chain(n), 10**7)))
    out.append(("mixed n=11", "admissible", (*mixed(11), 10**7)))
    n, apps = mixed(10, seed=3)
    eqs = [(0, 4), (1, 5), (2, 7), (3, 9)]
    rels = [(0, (0,)), (0, (1,)), (0, (2,))]
    prog = [(OP_EQ, 0), (OP_NOT, 0), (OP_EQ, 1), (OP_REL, 0), (OP_AND, 2), (OP_EQ, 2), (OP_REL, 2), (OP_NOT, 0), (OP_OR, 2), (OP_OR, 3)]
    out.append(("filtered n=10", "filtered", (n, apps, eqs, rels, prog, 10**7, 16)))
    n, apps = mixed(400, seed=5)
    rng = random.Random(9)
    eqs = [(rng.randrange(n), rng.randrange(n)) for _ in range(60)]
    out.append(("closure n=400", "closure", (n, apps, eqs)))
    return out


def run_one(impl, kind, args):
    if kind == "admissible":
        return len(impl.admissible_partitions(*args))
    if kind == "filtered":
        return len(impl.filtered_partitions(*args))
    return len(set(impl.congruence_reps(*args)))


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    backends = kernels.backends()
    print(f"backends: {', '.join(backends)}  (default: {kernels.BACKEND})")
    header = f"{'workload':<16}{'size':>10}" + "".join(f"{name + ' s':>12}" for name in backends)
    if "cython" in backends:
        header += f"{'speedup':>10}"
    print(header)
    for label, kind, wargs in workloads():
        times = {}
        sizes = set()
        for name, impl in backends.items():
            samples = []
            for _ in range(args.repeat):
                t = time.perf_counter()
                sizes.add(run_one(impl, kind, wargs))
                samples.append(time.perf_counter() - t)
            times[name] = statistics.median(samples)
        if len(sizes) != 1:
            raise SystemExit(f"backends disagree on {label}: {sizes}")
        row = f"{label:<16}{sizes.pop():>10}" + "".join(f"{times[n]:>12.4f}" for n in backends)
        if "cython" in times:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
