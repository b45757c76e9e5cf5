"""Graphlet patterns, automorphism counts and exact (non-private) copy counting.

Counts are of *non-induced* copies: a copy is a node set ``V'`` of size ``k``
together with an edge set ``E'`` inside ``G[V']`` isomorphic to the pattern.
Extra edges of ``G`` among ``V'`` do not disqualify a copy.

Two independent exact routes are provided:

* :func:`exact_count` enumerates ``k``-subsets and, per subset, the distinct
  labelled placements of the pattern whose edges are all present;
* :func:`tuple_count` counts ordered injective placements by backtracking,
  which is ``automorphism_count(pattern)`` times larger.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

import numpy as np

from . import kernels
from .graph import Graph, parse_edge_list

__all__ = [
    "MAX_K",
    "GraphletPattern",
    "automorphism_count",
    "preset_pattern",
    "parse_pattern",
    "read_pattern",
    "exact_count",
    "tuple_count",
    "iter_copies",
]

MAX_K = 8

# exact_count switches from subset enumeration to tuple search above this many subsets
SUBSET_ROUTE_LIMIT = 50_000


def automorphism_count(k: int, edges) -> int:
    """Number of permutations of ``range(k)`` mapping the edge set onto itself.

    Exhaustive over all ``k!`` permutations, so ``k`` is capped at :data:`MAX_K`.
    """
    if k > MAX_K:
        raise ValueError(f"k={k} exceeds the enumeration cap of {MAX_K}")
    edge_set = {frozenset(e) for e in edges}
    return sum(
        all(frozenset((perm[a], perm[b])) in edge_set for a, b in map(tuple, edge_set))
        for perm in itertools.permutations(range(k))
    )


@dataclass(frozen=True)
class GraphletPattern:
    """A ``k``-node pattern graph with no isolated vertices."""

    k: int
    edges: tuple[tuple[int, int], ...]
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        if not 2 <= self.k <= MAX_K:
            raise ValueError(f"pattern size k must be in [2, {MAX_K}], got {self.k}")
        canon = set()
        for e in self.edges:
            a, b = (int(v) for v in e)
            if not (0 <= a < self.k and 0 <= b < self.k):
                raise ValueError(f"pattern edge ({a}, {b}) outside [0, {self.k})")
            if a == b:
                raise ValueError("pattern self-loops are not allowed")
            canon.add((min(a, b), max(a, b)))
        if not canon:
            raise ValueError("pattern must have at least one edge")
        touched = {v for e in canon for v in e}
        if len(touched) != self.k:
            isolated = sorted(set(range(self.k)) - touched)
            raise ValueError(f"pattern has isolated vertices {isolated}")
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @cached_property
    def automorphism_count(self) -> int:
        return automorphism_count(self.k, self.edges)

    @cached_property
    def placements(self) -> tuple[frozenset, ...]:
        """Distinct labelled copies of the pattern on nodes ``0..k-1``.

        Each is a frozenset of ``(a, b)`` pairs with ``a < b``. There are
        ``k! / automorphism_count`` of them; orderings related by an
        automorphism give the same placement.
        """
        seen = {}
        for perm in itertools.permutations(range(self.k)):
            image = frozenset(
                (min(perm[a], perm[b]), max(perm[a], perm[b])) for a, b in self.edges
            )
            seen.setdefault(image, None)
        return tuple(seen)

    @cached_property
    def placement_array(self) -> np.ndarray:
        """``(M, E, 2)`` int32 placements, each edge list sorted by its larger endpoint."""
        arr = np.array(
            [sorted(p, key=lambda e: (e[1], e[0])) for p in self.placements], dtype=np.int32
        )
        return np.ascontiguousarray(arr.reshape(len(self.placements), len(self.edges), 2))

    @cached_property
    def search_order(self) -> tuple[tuple[int, ...], np.ndarray]:
        """Vertex order for backtracking plus the back-adjacency matrix.

        ``back[t, s]`` is 1 when the ``t``-th and ``s``-th vertices (``s < t``)
        share a pattern edge. The order greedily maximises back-edges so
        candidate sets shrink early.
        """
        adj = np.zeros((self.k, self.k), dtype=bool)
        for a, b in self.edges:
            adj[a, b] = adj[b, a] = True
        deg = adj.sum(axis=1)
        order = [int(np.argmax(deg))]
        while len(order) < self.k:
            rest = [v for v in range(self.k) if v not in order]
            order.append(max(rest, key=lambda v: (adj[v, order].sum(), deg[v], -v)))
        back = np.zeros((self.k, self.k), dtype=np.int8)
        for t in range(self.k):
            for s in range(t):
                back[t, s] = adj[order[t], order[s]]
        return tuple(order), back

    def relabel(self, perm) -> "GraphletPattern":
        return GraphletPattern(
            self.k, tuple((perm[a], perm[b]) for a, b in self.edges), name=self.name
        )

    def __str__(self) -> str:
        return self.name


def _path_edges(k):
    return [(i, i + 1) for i in range(k - 1)]


_PRESETS = {
    "cycle": (3, lambda k: _path_edges(k) + [(k - 1, 0)]),
    "clique": (2, lambda k: list(itertools.combinations(range(k), 2))),
    "star": (2, lambda k: [(0, i) for i in range(1, k)]),
    "path": (2, _path_edges),
}


def preset_pattern(name: str, k: int | None = None) -> GraphletPattern:
    """Canonical pattern: ``triangle``, ``cycle``, ``clique``, ``star`` or ``path``.

    ``star(k)`` is the ``k``-node star ``K(1, k-1)`` centred on node 0.
    """
    if name == "triangle":
        if k not in (None, 3):
            raise ValueError("triangle has exactly 3 nodes")
        return GraphletPattern(3, ((0, 1), (1, 2), (0, 2)), name="triangle")
    if name not in _PRESETS:
        raise ValueError(f"unknown pattern {name!r}")
    if k is None:
        raise ValueError(f"pattern {name!r} needs a size k")
    lo, make = _PRESETS[name]
    if not lo <= k <= MAX_K:
        raise ValueError(f"{name} needs {lo} <= k <= {MAX_K}, got {k}")
    return GraphletPattern(k, tuple(make(k)), name=f"{name}:{k}")


def read_pattern(text: str, name: str = "file") -> GraphletPattern:
    """Pattern from edge-list text whose header line is ``k``."""
    k, edges = parse_edge_list(text, what="pattern size k")
    return GraphletPattern(k, tuple(edges), name=name)


def parse_pattern(spec: str) -> GraphletPattern:
    """Parse ``triangle``, ``cycle:K``, ``clique:K``, ``star:K``, ``path:K`` or ``file:PATH``."""
    if spec.startswith("file:"):
        path = spec[5:]
        with open(path, encoding="utf-8") as fh:
            return read_pattern(fh.read(), name=spec)
    name, _, size = spec.partition(":")
    if not size:
        return preset_pattern(name)
    try:
        k = int(size)
    except ValueError:
        raise ValueError(f"bad pattern size in {spec!r}") from None
    return preset_pattern(name, k)


def iter_copies(graph: Graph, pattern: GraphletPattern) -> Iterator[frozenset]:
    """Yield every copy of ``pattern`` in ``graph`` as a frozenset of graph edges."""
    adj = graph.dense
    for nodes in itertools.combinations(range(graph.n), pattern.k):
        for placement in pattern.placements:
            if all(adj[nodes[a], nodes[b]] for a, b in placement):
                yield frozenset((nodes[a], nodes[b]) for a, b in placement)


def _count_by_subsets(graph: Graph, pattern: GraphletPattern) -> int:
    adj = graph.dense.tolist()
    placements = [tuple(p) for p in pattern.placements]
    total = 0
    for nodes in itertools.combinations(range(graph.n), pattern.k):
        for placement in placements:
            if all(adj[nodes[a]][nodes[b]] for a, b in placement):
                total += 1
    return total


def tuple_count(graph: Graph, pattern: GraphletPattern, *, backend: str | None = None) -> int:
    """Ordered ``k``-tuples of distinct nodes carrying every pattern edge.

    This is the quantity that, divided by the automorphism count, gives the
    copy count.
    """
    if pattern.k > graph.n:
        return 0
    order, back = pattern.search_order
    impl = kernels.get(backend)
    if impl.NAME == "compiled" and graph.n ** pattern.k >= 2**63:
        impl = kernels.get("python")
    return int(impl.count_injective(graph, order, back))


def exact_count(graph: Graph, pattern: GraphletPattern, *, method: str = "auto") -> int:
    """Number of (non-induced) copies of ``pattern`` in ``graph``.

    ``method="subsets"`` checks every ``k``-subset against every labelled
    placement; ``method="tuples"`` divides :func:`tuple_count` by the
    automorphism count. ``"auto"`` picks subsets for small inputs.
    """
    if method == "auto":
        method = "subsets" if math.comb(graph.n, pattern.k) <= SUBSET_ROUTE_LIMIT else "tuples"
    if pattern.k > graph.n:
        return 0
    if method == "subsets":
        return _count_by_subsets(graph, pattern)
    if method == "tuples":
        w = tuple_count(graph, pattern)
        count, rem = divmod(w, pattern.automorphism_count)
        if rem:
            raise AssertionError("tuple count not divisible by automorphism count")
        return count
    raise ValueError(f"unknown method {method!r}")
