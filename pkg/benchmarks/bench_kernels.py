"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py --sizes 20,40,60 --pattern cycle:4

Prints one row per (kernel, n) with the best-of-``repeat`` wall time of each
backend, their ratio, and whether the results agree.
"""

import argparse
import math
import time

import numpy as np

from graphlet_ldp import kernels
from graphlet_ldp.channel import debias, obfuscate
from graphlet_ldp.graph import generate_sbm2
from graphlet_ldp.patterns import parse_pattern


def best_of(fn, repeat):
    best, result = math.inf, None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="20,40,60,80")
    parser.add_argument("--pattern", default="cycle:4")
    parser.add_argument("--epsilon", type=float, default=1.0)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    backends = kernels.available()
    if "compiled" not in backends:
        print("compiled extension not built; only the python backend is available")
    pattern = parse_pattern(args.pattern)
    order, back = pattern.search_order
    header = f"{'kernel':<20}{'n':>5}" + "".join(f"{b + ' s':>14}" for b in backends) + f"{'speedup':>10}  agree"
    print(header)
    for n in (int(s) for s in args.sizes.split(",")):
        graph = generate_sbm2(n, 0.25, 0.05, args.seed)
        values = debias(obfuscate(graph, args.epsilon, args.seed)).matrix()
        jobs = {
            "subset_partial_sums": lambda impl: float(
                math.fsum(impl.subset_partial_sums(values, pattern.placement_array, pattern.k))
            ),
            "count_injective": lambda impl: impl.count_injective(graph, order, back),
        }
        for name, job in jobs.items():
            times, results = [], []
            for b in backends:
                t, r = best_of(lambda: job(kernels.get(b)), args.repeat)
                times.append(t)
                results.append(r)
            speedup = times[-1] / times[0] if len(times) > 1 and times[0] > 0 else float("nan")
            agree = all(np.isclose(r, results[0], rtol=1e-9) for r in results)
            print(f"{name:<20}{n:>5}" + "".join(f"{t:>14.4f}" for t in times) + f"{speedup:>10.1f}  {agree}")


if __name__ == "__main__":
    main()
