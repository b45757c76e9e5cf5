"""Lower-bound graph families and oracle checks of their counting identities.

* Triangle gadget on ``U | Y | W`` (three blocks of ``n/3`` nodes): ``u_i - y_j``
  iff ``X[i, j]``; ``u_i`` joins all of ``W`` iff ``mu[i]``; ``y_i`` joins all of
  ``W`` iff ``upsilon[i]``.
* Clique gadget on ``U | Y | W_1 .. W_{k-2}``: as above with every ``W_p`` in
  place of ``W``, plus complete bipartite joins between distinct ``W_p, W_q``.
  Its ``k``-clique count is the triangle gadget's triangle count times
  ``(n/3)^(k-3)``.
* Cycle gadget ``G^x`` on ``n`` nodes: ``K_n`` minus the matching
  ``{2i, 2i+1}``, with matching edge ``i`` restored iff ``x[i]``. Its ``k``-cycle
  count depends only on the popcount of ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .patterns import exact_count, iter_copies, preset_pattern

__all__ = [
    "ScaleError",
    "build_triangle_gadget",
    "build_clique_gadget",
    "build_cycle_gadget",
    "clique_lemma_check",
    "cycle_structure_check",
    "CliqueLemmaReport",
    "CycleStructureReport",
    "random_clique_inputs",
]


class ScaleError(ValueError):
    """Input is beyond what the exhaustive oracle is allowed to handle."""


def _block_inputs(n, mu, upsilon, X):
    if n <= 0 or n % 3:
        raise ValueError(f"n must be a positive multiple of 3, got {n}")
    t = n // 3
    mu = np.asarray(mu, dtype=bool).reshape(-1)
    upsilon = np.asarray(upsilon, dtype=bool).reshape(-1)
    X = np.asarray(X, dtype=bool)
    if mu.shape != (t,) or upsilon.shape != (t,):
        raise ValueError(f"mu and upsilon must have length n/3 = {t}")
    if X.shape != (t, t):
        raise ValueError(f"X must be {t} x {t}")
    return t, mu, upsilon, X


def build_clique_gadget(k: int, n: int, mu, upsilon, X) -> Graph:
    """Clique gadget on ``k*n/3`` nodes; blocks in order ``U, Y, W_1, ..., W_{k-2}``."""
    if k < 3:
        raise ValueError("clique gadget needs k >= 3")
    t, mu, upsilon, X = _block_inputs(n, mu, upsilon, X)
    N = k * t
    adj = np.zeros((N, N), dtype=bool)
    U, Y = slice(0, t), slice(t, 2 * t)
    W = [slice((2 + p) * t, (3 + p) * t) for p in range(k - 2)]
    adj[U, Y] = X
    for p, wp in enumerate(W):
        adj[U, wp] = mu[:, None]
        adj[Y, wp] = upsilon[:, None]
        for wq in W[p + 1:]:
            adj[wp, wq] = True
    return Graph.from_dense(adj | adj.T)


def build_triangle_gadget(n: int, mu, upsilon, X) -> Graph:
    """Tripartite triangle gadget; ``U = [0, n/3)``, ``Y = [n/3, 2n/3)``, ``W = [2n/3, n)``."""
    return build_clique_gadget(3, n, mu, upsilon, X)


def random_clique_inputs(n: int, rng: np.random.Generator):
    t = n // 3
    return (
        rng.integers(0, 2, t).astype(bool),
        rng.integers(0, 2, t).astype(bool),
        rng.integers(0, 2, (t, t)).astype(bool),
    )


@dataclass(frozen=True)
class CliqueLemmaReport:
    k: int
    n: int
    clique_count: int
    triangle_count: int
    multiplier: int

    @property
    def holds(self) -> bool:
        return self.clique_count == self.triangle_count * self.multiplier


def clique_lemma_check(k: int, n: int, mu, upsilon, X) -> CliqueLemmaReport:
    """Compare the ``k``-clique count of the clique gadget with ``(n/3)^(k-3)`` triangles."""
    if k > 5 or n > 9:
        raise ScaleError(f"clique lemma oracle limited to k <= 5, n <= 9 (got k={k}, n={n})")
    big = build_clique_gadget(k, n, mu, upsilon, X)
    small = build_triangle_gadget(n, mu, upsilon, X)
    return CliqueLemmaReport(
        k,
        n,
        exact_count(big, preset_pattern("clique", k)),
        exact_count(small, preset_pattern("triangle")),
        (n // 3) ** (k - 3),
    )


def build_cycle_gadget(n: int, x) -> Graph:
    """``K_n`` without the matching ``{2i, 2i+1}``, except where ``x[i]`` is set."""
    if n % 2:
        raise ValueError("cycle gadget needs an even node count")
    x = np.asarray(x, dtype=bool).reshape(-1)
    if x.shape != (n // 2,):
        raise ValueError(f"x must have length n/2 = {n // 2}")
    adj = ~np.eye(n, dtype=bool)
    i = np.arange(n // 2)
    adj[2 * i, 2 * i + 1] = adj[2 * i + 1, 2 * i] = x
    return Graph.from_dense(adj)


@dataclass
class CycleStructureReport:
    n: int
    k: int
    base_count: int
    # coefficients[p-1] = k-cycles whose matching edges are exactly a fixed set of p
    coefficients: list[int]
    # (popcount, direct count, closed-form count)
    closed_form_rows: list[tuple[int, int, int]] = field(default_factory=list)
    popcount_invariant: bool = True
    difference_pairs: int = 0
    difference_violations: int = 0

    def closed_form(self, s: int) -> int:
        return self.base_count + sum(
            math.comb(s, p) * c for p, c in enumerate(self.coefficients, start=1)
        )

    @property
    def closed_form_holds(self) -> bool:
        return all(direct == formula for _, direct, formula in self.closed_form_rows)

    @property
    def difference_bound_holds(self) -> bool:
        return self.difference_violations == 0

    @property
    def holds(self) -> bool:
        return self.closed_form_holds and self.popcount_invariant and self.difference_bound_holds


def _matching_prefix(n: int, p: int) -> np.ndarray:
    x = np.zeros(n // 2, dtype=bool)
    x[:p] = True
    return x


def cycle_structure_check(n: int, k: int, *, pairs: int = 100, seed: int = 0) -> CycleStructureReport:
    """Verify the popcount decomposition of ``k``-cycle counts in the cycle gadget.

    The coefficient for ``p`` counts ``k``-cycles of ``G^x`` through a fixed set
    ``E_p`` of ``p`` matching edges, where ``x`` restores exactly ``E_p``, so the
    cycles use no other matching edge. ``C_k(G^x)`` is then compared with
    ``C_k(G^0) + sum_p comb(|x|, p) * coef_p`` for every popcount, and the
    difference bound ``C_k(G^x) - C_k(G^x') >= (|x| - |x'|) * coef_1`` is checked
    on ``pairs`` random pairs with ``|x| >= |x'|``.
    """
    if n % 2:
        raise ValueError("cycle gadget needs an even node count")
    if not 3 <= k <= n:
        raise ValueError(f"need 3 <= k <= n, got k={k}, n={n}")
    if n > 10 or k > 5:
        raise ScaleError(f"cycle structure oracle limited to n <= 10, k <= 5 (got n={n}, k={k})")
    cycle = preset_pattern("cycle", k)
    half = n // 2
    rng = np.random.default_rng(seed)
    cache: dict[bytes, int] = {}

    def count(x: np.ndarray) -> int:
        key = np.asarray(x, dtype=bool).tobytes()
        if key not in cache:
            cache[key] = exact_count(build_cycle_gadget(n, x), cycle)
        return cache[key]

    coefficients = []
    for p in range(1, min(k // 2, half) + 1):
        required = {(2 * i, 2 * i + 1) for i in range(p)}
        gadget = build_cycle_gadget(n, _matching_prefix(n, p))
        coefficients.append(sum(1 for c in iter_copies(gadget, cycle) if required <= c))

    report = CycleStructureReport(n, k, count(np.zeros(half, dtype=bool)), coefficients)
    for s in range(half + 1):
        direct = count(_matching_prefix(n, s))
        report.closed_form_rows.append((s, direct, report.closed_form(s)))
        shuffled = rng.permutation(_matching_prefix(n, s))
        if count(shuffled) != direct:
            report.popcount_invariant = False

    c1 = coefficients[0] if coefficients else 0
    for _ in range(pairs):
        x = rng.integers(0, 2, half).astype(bool)
        y = rng.integers(0, 2, half).astype(bool)
        if x.sum() < y.sum():
            x, y = y, x
        report.difference_pairs += 1
        if count(x) - count(y) < (int(x.sum()) - int(y.sum())) * c1:
            report.difference_violations += 1
    return report
