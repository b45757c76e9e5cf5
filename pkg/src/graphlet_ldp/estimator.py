"""Private graphlet-count estimation from randomized-response reports.

The estimate is the sum, over ordered ``k``-tuples of distinct nodes, of the
product of debiased adjacency values along the pattern's edges, divided by
the pattern's automorphism count. Orderings of one node set that differ by an
automorphism touch the same pairs, so the fast path sums each distinct
labelled placement once per ``k``-subset; this equals the tuple sum divided
by the automorphism count exactly, without performing the division.
"""

from __future__ import annotations

import itertools
import math
import time
import warnings
from dataclasses import dataclass

from . import kernels
from .channel import BudgetLike, NoisyAdjacency, UnbiasedAdjacency, as_budget, debias, obfuscate
from .graph import Graph
from .patterns import GraphletPattern, exact_count

__all__ = [
    "Estimate",
    "estimate_from_unbiased",
    "estimate_naive",
    "algorithm1",
    "baseline_rr_count",
]


@dataclass(frozen=True)
class Estimate:
    value: float
    pattern: str
    n: int
    epsilon: float
    master_seed: int | None = None
    seconds: float = 0.0


def estimate_from_unbiased(
    unbiased: UnbiasedAdjacency,
    pattern: GraphletPattern,
    *,
    backend: str | None = None,
    num_threads: int = 0,
    master_seed: int | None = None,
) -> Estimate:
    """Graphlet-count estimate over debiased adjacency values.

    Per-leading-node partial sums come from the selected kernel and are
    combined with ``math.fsum``, so the result does not depend on the number
    of worker threads.
    """
    start = time.perf_counter()
    if not isinstance(pattern, GraphletPattern):
        raise TypeError("pattern must be a GraphletPattern")
    n = unbiased.n
    if pattern.k > n:
        warnings.warn(f"pattern has {pattern.k} nodes but the graph only {n}; estimate is 0")
        value = 0.0
    else:
        impl = kernels.get(backend)
        partial = impl.subset_partial_sums(
            unbiased.matrix(), pattern.placement_array, pattern.k, num_threads
        )
        value = math.fsum(partial)
    return Estimate(
        value, str(pattern), n, unbiased.epsilon, master_seed, time.perf_counter() - start
    )


def estimate_naive(unbiased: UnbiasedAdjacency, pattern: GraphletPattern) -> float:
    """Reference: literal sum over all ordered tuples, divided by the automorphism count.

    Cost is ``n!/(n-k)!`` products; meant for tests on small graphs.
    """
    mat = unbiased.matrix().tolist()
    terms = []
    for tup in itertools.permutations(range(unbiased.n), pattern.k):
        prod = 1.0
        for a, b in pattern.edges:
            prod *= mat[tup[a]][tup[b]]
        terms.append(prod)
    return math.fsum(terms) / pattern.automorphism_count


def algorithm1(
    graph: Graph,
    pattern: GraphletPattern,
    budget: BudgetLike,
    master_seed: int,
    *,
    flips=None,
    backend: str | None = None,
    num_threads: int = 0,
) -> Estimate:
    """Randomized response, debiasing, then the tuple-product estimate."""
    start = time.perf_counter()
    b = as_budget(budget)
    noisy = obfuscate(graph, b, master_seed, flips=flips)
    est = estimate_from_unbiased(
        debias(noisy, b), pattern, backend=backend, num_threads=num_threads,
        master_seed=master_seed,
    )
    return Estimate(est.value, est.pattern, est.n, est.epsilon, master_seed,
                    time.perf_counter() - start)


def baseline_rr_count(noisy: NoisyAdjacency, pattern: GraphletPattern) -> Estimate:
    """Classical randomized-response benchmark: exact count on the noisy graph, no correction."""
    start = time.perf_counter()
    value = float(exact_count(noisy.to_graph(), pattern))
    return Estimate(value, str(pattern), noisy.n, noisy.epsilon, noisy.master_seed,
                    time.perf_counter() - start)
