"""Pure Python / numpy implementations of the counting kernels.

Same contracts as the compiled ``_kernels`` module; used when the extension
is unavailable or when ``GRAPHLET_LDP_PURE_PYTHON`` is set.
"""

from __future__ import annotations

import itertools

import numpy as np

NAME = "python"

_CHUNK_ROWS = 1 << 17


def count_injective(graph, order, back) -> int:
    """Injective maps of the pattern into ``graph`` (all pattern edges present).

    ``order`` is the vertex visiting order and ``back[t][s]`` flags a pattern
    edge between the ``t``-th and ``s``-th visited vertices (``s < t``).
    """
    masks = graph.neighbor_masks
    k = len(order)
    full = (1 << graph.n) - 1
    backs = [[s for s in range(t) if back[t][s]] for t in range(k)]
    mapped = [0] * k

    def descend(t: int, used: int) -> int:
        cand = full & ~used
        for s in backs[t]:
            cand &= masks[mapped[s]]
        if t == k - 1:
            return cand.bit_count()
        total = 0
        while cand:
            low = cand & -cand
            mapped[t] = low.bit_length() - 1
            total += descend(t + 1, used | low)
            cand ^= low
        return total

    return descend(0, 0)


def _subsets_led_by(i: int, n: int, k: int):
    tails = itertools.combinations(range(i + 1, n), k - 1)
    while True:
        flat = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(tails, _CHUNK_ROWS)), dtype=np.intp
        )
        if flat.size == 0:
            return
        rows = flat.reshape(-1, k - 1)
        sub = np.empty((rows.shape[0], k), dtype=np.intp)
        sub[:, 0] = i
        sub[:, 1:] = rows
        yield sub


def subset_partial_sums(values: np.ndarray, placements: np.ndarray, k: int, num_threads: int = 0) -> np.ndarray:
    """Per-leading-node sums of placement products over all ``k``-subsets.

    ``out[i]`` is the sum, over subsets whose smallest node is ``i`` and over
    every placement, of the product of ``values`` on the placement's edges.
    ``num_threads`` is accepted for signature parity and ignored.
    """
    n = values.shape[0]
    out = np.zeros(n, dtype=np.float64)
    if k > n:
        return out
    for i in range(n - k + 1):
        chunk_sums = []
        for sub in _subsets_led_by(i, n, k):
            acc = np.zeros(sub.shape[0], dtype=np.float64)
            for placement in placements:
                prod = np.ones(sub.shape[0], dtype=np.float64)
                for a, b in placement:
                    prod *= values[sub[:, a], sub[:, b]]
                acc += prod
            chunk_sums.append(acc.sum())
        out[i] = np.sum(chunk_sums)
    return out
