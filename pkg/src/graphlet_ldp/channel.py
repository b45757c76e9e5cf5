"""Randomized response over adjacency bits and its unbiased correction.

Each unordered pair ``{i, j}`` (``j < i``) is reported once, by user ``i``, so
every user spends exactly one epsilon-LDP query on its own bits. Flip noise
for pair ``p`` is the ``p``-th uniform of a Philox stream keyed by the master
seed; the noisy graph is therefore a pure function of (graph, epsilon, seed)
and does not depend on how the pairs are traversed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .graph import Graph, pair_count, pair_index

__all__ = [
    "PrivacyBudget",
    "NoisyAdjacency",
    "UnbiasedAdjacency",
    "flip_probability",
    "channel_values",
    "obfuscate",
    "debias",
    "write_noisy",
    "read_noisy",
]


@dataclass(frozen=True)
class PrivacyBudget:
    epsilon: float

    def __post_init__(self):
        eps = float(self.epsilon)
        if not math.isfinite(eps) or eps <= 0:
            raise ValueError(f"epsilon must be positive and finite, got {self.epsilon!r}")
        object.__setattr__(self, "epsilon", eps)

    @property
    def flip_probability(self) -> float:
        # 1 / (1 + e^eps), written to avoid overflow at large eps
        t = math.exp(-self.epsilon)
        return t / (1.0 + t)

    @property
    def keep_probability(self) -> float:
        return 1.0 / (1.0 + math.exp(-self.epsilon))

    @property
    def high(self) -> float:
        """Debiased value of a reported 1: ``e^eps / (e^eps - 1)``."""
        return 1.0 / -math.expm1(-self.epsilon)

    @property
    def low(self) -> float:
        """Debiased value of a reported 0: ``-1 / (e^eps - 1)``."""
        return -math.exp(-self.epsilon) / -math.expm1(-self.epsilon)


BudgetLike = Union[PrivacyBudget, float]


def as_budget(budget: BudgetLike) -> PrivacyBudget:
    return budget if isinstance(budget, PrivacyBudget) else PrivacyBudget(budget)


def flip_probability(budget: BudgetLike) -> float:
    """Probability that randomized response reports the opposite bit."""
    return as_budget(budget).flip_probability


def channel_values(budget: BudgetLike) -> tuple[float, float]:
    """``(low, high)``: the two values a debiased bit can take."""
    b = as_budget(budget)
    return b.low, b.high


@dataclass(frozen=True, eq=False)
class NoisyAdjacency:
    """Randomized-response reports, one bit per unordered pair in pair-index order."""

    n: int
    epsilon: float
    bits: np.ndarray = field(repr=False)
    master_seed: int | None = None

    def __post_init__(self):
        bits = np.ascontiguousarray(self.bits, dtype=bool)
        if bits.shape != (pair_count(self.n),):
            raise ValueError("noisy bit vector has the wrong length for n")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    def to_graph(self) -> Graph:
        """The obfuscated graph built from the reported bits."""
        return Graph.from_pair_bits(self.n, self.bits)

    def __eq__(self, other):
        if not isinstance(other, NoisyAdjacency):
            return NotImplemented
        return (
            self.n == other.n
            and self.epsilon == other.epsilon
            and self.master_seed == other.master_seed
            and np.array_equal(self.bits, other.bits)
        )


@dataclass(frozen=True, eq=False)
class UnbiasedAdjacency:
    """Real-valued per-pair adjacency estimates, in pair-index order.

    ``epsilon`` is ``math.inf`` for the noiseless channel built by
    :meth:`noiseless`, whose values are the true 0/1 bits.
    """

    n: int
    epsilon: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        if vals.shape != (pair_count(self.n),):
            raise ValueError("value vector has the wrong length for n")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def noiseless(cls, graph: Graph) -> "UnbiasedAdjacency":
        return cls(graph.n, math.inf, graph.pair_bits.astype(np.float64))

    def matrix(self) -> np.ndarray:
        """Symmetric ``n x n`` matrix of the values; the diagonal is zero and never read."""
        mat = np.zeros((self.n, self.n), dtype=np.float64)
        iu = np.triu_indices(self.n, 1)
        mat[iu] = self.values
        mat.T[iu] = self.values
        return mat

    def value(self, i: int, j: int) -> float:
        return float(self.values[pair_index(i, j, self.n)])


def obfuscate(
    graph: Graph,
    budget: BudgetLike,
    master_seed: int,
    *,
    flips: np.ndarray | Callable[[int], np.ndarray] | None = None,
) -> NoisyAdjacency:
    """Apply randomized response to every pair of ``graph``.

    ``flips`` overrides the random flip mask (an array, or a callable taking the
    pair count); pass all-False for a channel that reports the truth.
    """
    b = as_budget(budget)
    m = pair_count(graph.n)
    if flips is None:
        u = np.random.Generator(np.random.Philox(key=int(master_seed))).random(m)
        mask = u < b.flip_probability
    else:
        mask = np.asarray(flips(m) if callable(flips) else flips, dtype=bool)
        if mask.shape != (m,):
            raise ValueError(f"flip mask must have {m} entries")
    return NoisyAdjacency(graph.n, b.epsilon, graph.pair_bits ^ mask, master_seed)


def debias(noisy: NoisyAdjacency, budget: BudgetLike | None = None) -> UnbiasedAdjacency:
    """Map each reported bit to ``((e^eps + 1) * bit - 1) / (e^eps - 1)``."""
    b = as_budget(noisy.epsilon if budget is None else budget)
    if b.epsilon != noisy.epsilon:
        raise ValueError(
            f"budget epsilon {b.epsilon} does not match the reports' epsilon {noisy.epsilon}"
        )
    values = np.where(noisy.bits, b.high, b.low)
    return UnbiasedAdjacency(noisy.n, b.epsilon, values)


def write_noisy(noisy: NoisyAdjacency) -> str:
    """Text dump: ``n epsilon master_seed`` then one hex row per reporting user.

    Row ``i`` (for ``i = 1 .. n-1``) packs user ``i``'s bits for ``j = 0 .. i-1``
    most-significant-bit first.
    """
    n = noisy.n
    dense = np.zeros((n, n), dtype=bool)
    dense[np.triu_indices(n, 1)] = noisy.bits
    seed = "-" if noisy.master_seed is None else str(noisy.master_seed)
    lines = [f"{n} {noisy.epsilon!r} {seed}"]
    for i in range(1, n):
        lines.append(np.packbits(dense[:i, i]).tobytes().hex())
    return "\n".join(lines) + "\n"


def read_noisy(text: str) -> NoisyAdjacency:
    lines = text.splitlines()
    try:
        n_s, eps_s, seed_s = lines[0].split()
        n, eps = int(n_s), float(eps_s)
    except (IndexError, ValueError):
        raise ValueError("bad noisy-adjacency header") from None
    if len(lines) - 1 < max(n - 1, 0):
        raise ValueError("truncated noisy-adjacency dump")
    dense = np.zeros((n, n), dtype=bool)
    for i in range(1, n):
        raw = np.frombuffer(bytes.fromhex(lines[i]), dtype=np.uint8)
        dense[:i, i] = np.unpackbits(raw, count=i).astype(bool)
    seed = None if seed_s == "-" else int(seed_s)
    return NoisyAdjacency(n, eps, dense[np.triu_indices(n, 1)], seed)
