"""Undirected simple graphs with bit-packed adjacency, generators and edge-list I/O.

Adjacency is stored once per unordered pair ``{i, j}`` with ``i < j``, in
row-major upper-triangular order, so pair ``(i, j)`` lives at bit

    i*n - i*(i+1)/2 + (j - i - 1)

which is also the order produced by ``numpy.triu_indices(n, 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "Graph",
    "GeneratorSpec",
    "pair_count",
    "pair_index",
    "build_graph",
    "generate_sbm2",
    "generate_ba",
    "generate",
    "read_edge_list",
    "write_edge_list",
    "EdgeListError",
]


class EdgeListError(ValueError):
    """Raised for malformed edge-list text."""


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(i: int, j: int, n: int) -> int:
    """Bit position of the unordered pair ``{i, j}`` in an ``n``-node graph."""
    if i == j:
        raise ValueError(f"no pair index for self-loop ({i}, {i})")
    if i > j:
        i, j = j, i
    return i * n - i * (i + 1) // 2 + (j - i - 1)


class Graph:
    """Immutable undirected simple graph on nodes ``0 .. n-1``.

    Build instances with :func:`build_graph`, :meth:`from_pair_bits` or a
    generator; the constructor takes the packed representation directly.
    """

    def __init__(self, n: int, packed: np.ndarray):
        if n < 0:
            raise ValueError("node count must be non-negative")
        packed = np.ascontiguousarray(packed, dtype=np.uint8)
        if packed.shape != ((pair_count(n) + 7) // 8,):
            raise ValueError("packed adjacency has the wrong length for n")
        packed.setflags(write=False)
        self.n = n
        self._packed = packed

    @classmethod
    def from_pair_bits(cls, n: int, bits: np.ndarray) -> "Graph":
        bits = np.asarray(bits, dtype=bool)
        if bits.shape != (pair_count(n),):
            raise ValueError(f"expected {pair_count(n)} pair bits, got {bits.shape}")
        return cls(n, np.packbits(bits, bitorder="little"))

    @classmethod
    def from_dense(cls, adj: np.ndarray) -> "Graph":
        adj = np.asarray(adj, dtype=bool)
        n = adj.shape[0]
        if adj.shape != (n, n):
            raise ValueError("adjacency matrix must be square")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency matrix must be symmetric")
        if adj.diagonal().any():
            raise ValueError("self-loops are not allowed")
        iu = np.triu_indices(n, 1)
        return cls.from_pair_bits(n, adj[iu])

    @property
    def packed(self) -> np.ndarray:
        return self._packed

    @cached_property
    def pair_bits(self) -> np.ndarray:
        """One boolean per unordered pair, in pair-index order."""
        bits = np.unpackbits(self._packed, count=pair_count(self.n), bitorder="little").astype(bool)
        bits.setflags(write=False)
        return bits

    @cached_property
    def dense(self) -> np.ndarray:
        """Symmetric ``n x n`` boolean matrix with a false diagonal."""
        adj = np.zeros((self.n, self.n), dtype=bool)
        iu = np.triu_indices(self.n, 1)
        adj[iu] = self.pair_bits
        adj |= adj.T
        adj.setflags(write=False)
        return adj

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        """Neighbourhood of each node as a Python-int bitmask (bit j = node j)."""
        weights = [1 << j for j in range(self.n)]
        return tuple(sum(w for w, b in zip(weights, row) if b) for row in self.dense.tolist())

    @cached_property
    def bitset_rows(self) -> np.ndarray:
        """Neighbourhoods as ``(n, ceil(n/64))`` little-endian uint64 words."""
        words = max(1, (self.n + 63) // 64)
        padded = np.zeros((self.n, words * 64), dtype=bool)
        padded[:, : self.n] = self.dense
        rows = np.packbits(padded, axis=1, bitorder="little").view("<u8").astype(np.uint64)
        rows = np.ascontiguousarray(rows)
        rows.setflags(write=False)
        return rows

    def has_edge(self, i: int, j: int) -> bool:
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"node out of range for n={self.n}")
        if i == j:
            return False
        p = pair_index(i, j, self.n)
        return bool(self._packed[p >> 3] >> (p & 7) & 1)

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = self.dense.sum(axis=1).astype(np.int64)
        deg.setflags(write=False)
        return deg

    def degree(self, i: int) -> int:
        return int(self.degrees[i])

    @property
    def edge_count(self) -> int:
        return int(self.pair_bits.sum())

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges ``(i, j)`` with ``i < j`` in lexicographic order."""
        iu, ju = np.triu_indices(self.n, 1)
        mask = self.pair_bits
        yield from zip(iu[mask].tolist(), ju[mask].tolist())

    def relabel(self, perm: Iterable[int]) -> "Graph":
        """Graph with node ``v`` renamed to ``perm[v]``."""
        perm = np.asarray(list(perm), dtype=np.intp)
        if sorted(perm.tolist()) != list(range(self.n)):
            raise ValueError("perm must be a permutation of range(n)")
        adj = np.zeros_like(self.dense)
        adj[np.ix_(perm, perm)] = self.dense
        return Graph.from_dense(adj)

    def with_edge(self, i: int, j: int) -> "Graph":
        bits = self.pair_bits.copy()
        bits[pair_index(i, j, self.n)] = True
        return Graph.from_pair_bits(self.n, bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._packed, other._packed)

    def __hash__(self) -> int:
        return hash((self.n, self._packed.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Graph on ``n`` nodes with the given edges; duplicates and reversed pairs collapse."""
    if n < 0:
        raise ValueError("node count must be non-negative")
    bits = np.zeros(pair_count(n), dtype=bool)
    for e in edges:
        i, j = (int(v) for v in e)
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i}, {j}) has an endpoint outside [0, {n})")
        if i == j:
            raise ValueError(f"self-loop ({i}, {i}) is not allowed")
        bits[pair_index(i, j, n)] = True
    return Graph.from_pair_bits(n, bits)


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of a synthetic graph model.

    ``model`` is ``"sbm2"`` (two equal blocks) or ``"ba"`` (Barabasi-Albert).
    ``m=None`` for ``ba`` means ``max(1, n // 5)``.
    """

    model: str
    n: int
    seed: int = 0
    p_in: float = 0.25
    p_out: float = 0.05
    m: int | None = None

    def __post_init__(self):
        if self.model not in ("sbm2", "ba"):
            raise ValueError(f"unknown model {self.model!r}; expected 'sbm2' or 'ba'")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.model == "sbm2":
            if self.n % 2:
                raise ValueError("sbm2 requires an even node count")
            for p in (self.p_in, self.p_out):
                if not 0.0 <= p <= 1.0:
                    raise ValueError("block probabilities must lie in [0, 1]")
        else:
            m = self.attachment
            if not 1 <= m < self.n:
                raise ValueError(f"ba requires 1 <= m < n, got m={m}, n={self.n}")

    @property
    def attachment(self) -> int:
        return self.m if self.m is not None else max(1, self.n // 5)

    def with_n(self, n: int, seed: int) -> "GeneratorSpec":
        return GeneratorSpec(self.model, n, seed, self.p_in, self.p_out, self.m)


def generate_sbm2(n: int, p_in: float, p_out: float, seed: int) -> Graph:
    """Two-block stochastic block model; blocks are ``[0, n/2)`` and ``[n/2, n)``."""
    if n % 2:
        raise ValueError("sbm2 requires an even node count")
    if not (0.0 <= p_in <= 1.0 and 0.0 <= p_out <= 1.0):
        raise ValueError("block probabilities must lie in [0, 1]")
    iu, ju = np.triu_indices(n, 1)
    half = n // 2
    prob = np.where((iu < half) == (ju < half), p_in, p_out)
    u = np.random.default_rng(seed).random(pair_count(n))
    return Graph.from_pair_bits(n, u < prob)


def generate_ba(n: int, m: int, seed: int) -> Graph:
    """Barabasi-Albert preferential attachment.

    Starts from a complete graph on ``m`` nodes (a single node when ``m == 1``);
    every later node attaches to ``m`` distinct existing nodes drawn with
    probability proportional to their current degree, without replacement.
    When all existing degrees are zero the draw is uniform.
    """
    if not 1 <= m < n:
        raise ValueError(f"ba requires 1 <= m < n, got m={m}, n={n}")
    rng = np.random.default_rng(seed)
    adj = np.zeros((n, n), dtype=bool)
    deg = np.zeros(n, dtype=np.float64)
    adj[:m, :m] = True
    np.fill_diagonal(adj, False)
    deg[:m] = m - 1
    for v in range(m, n):
        weights = deg[:v]
        total = weights.sum()
        p = weights / total if total > 0 else None
        targets = rng.choice(v, size=m, replace=False, p=p)
        adj[v, targets] = adj[targets, v] = True
        deg[targets] += 1
        deg[v] = m
    return Graph.from_dense(adj)


def generate(spec: GeneratorSpec) -> Graph:
    if spec.model == "sbm2":
        return generate_sbm2(spec.n, spec.p_in, spec.p_out, spec.seed)
    return generate_ba(spec.n, spec.attachment, spec.seed)


def _parse_header(lines: list[tuple[int, str]], what: str) -> tuple[int, list[tuple[int, str]]]:
    if not lines:
        raise EdgeListError(f"empty input: expected a {what} header line")
    lineno, head = lines[0]
    try:
        count = int(head)
    except ValueError:
        raise EdgeListError(f"line {lineno}: expected {what}, got {head!r}") from None
    if count < 0:
        raise EdgeListError(f"line {lineno}: {what} must be non-negative")
    return count, lines[1:]


def parse_edge_list(text: str, what: str = "node count") -> tuple[int, list[tuple[int, int]]]:
    """Parse the header count and edge pairs, validating ranges."""
    lines = [
        (no, line.strip())
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    n, body = _parse_header(lines, what)
    edges = []
    for lineno, line in body:
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(f"line {lineno}: expected 'i j', got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(f"line {lineno}: non-integer endpoint in {line!r}") from None
        if not (0 <= i < n and 0 <= j < n):
            raise EdgeListError(f"line {lineno}: endpoint outside [0, {n}) in {line!r}")
        if i == j:
            raise EdgeListError(f"line {lineno}: self-loop {line!r}")
        edges.append((i, j))
    return n, edges


def read_edge_list(text: str) -> Graph:
    n, edges = parse_edge_list(text)
    return build_graph(n, edges)


def write_edge_list(graph: Graph) -> str:
    out = [str(graph.n)]
    out.extend(f"{i} {j}" for i, j in graph.edges())
    return "\n".join(out) + "\n"
