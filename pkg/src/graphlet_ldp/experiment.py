"""Accuracy sweeps comparing the private estimator with the randomized-response baseline.

For every ``n`` one graph is generated (its seed depends on ``n`` but not on
epsilon, so all epsilons share it), the exact count is computed once, and
each estimator is run ``trials`` times with independent noise. Every random
draw is seeded from ``(master_seed, n, epsilon, estimator, trial)``, so the
CSV depends only on the configuration.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channel import obfuscate
from .estimator import algorithm1, baseline_rr_count
from .graph import GeneratorSpec, generate
from .patterns import GraphletPattern, exact_count

log = logging.getLogger(__name__)

__all__ = [
    "ESTIMATORS",
    "CSV_COLUMNS",
    "ExperimentConfig",
    "CellResult",
    "ExperimentReport",
    "rmse_paper",
    "rmse_mean",
    "rel_rmse_paper",
    "derive_seed",
    "run_experiment",
]

ESTIMATORS = ("algorithm1", "rr_baseline")
ESTIMATOR_ALIASES = {"a1": "algorithm1", "algorithm1": "algorithm1", "rr": "rr_baseline", "rr_baseline": "rr_baseline"}

CSV_COLUMNS = (
    "model", "n", "epsilon", "pattern", "estimator", "trial_count", "truth",
    "estimate_mean", "rmse_paper", "rmse_mean", "rel_rmse_paper", "std_dev",
    "mean_trial_seconds", "seed",
)
TIMING_COLUMNS = ("mean_trial_seconds",)
RAW_COLUMNS = ("model", "n", "epsilon", "pattern", "estimator", "trial", "seed", "truth", "estimate", "seconds")

# default cap on k-subsets per estimator call; lifted by ``slow=True``
DEFAULT_MAX_SUBSETS = 2_000_000


def rmse_paper(estimates: Sequence[float], truth: float) -> float:
    """Root of the *summed* squared error over trials (no division by the trial count)."""
    if len(estimates) == 0:
        raise ValueError("need at least one estimate")
    return math.sqrt(math.fsum((float(e) - truth) ** 2 for e in estimates))


def rmse_mean(estimates: Sequence[float], truth: float) -> float:
    """Conventional RMSE: root of the mean squared error."""
    return rmse_paper(estimates, truth) / math.sqrt(len(estimates))


def rel_rmse_paper(estimates: Sequence[float], truth: float) -> float:
    """``rmse_paper / truth``; NaN when the truth is zero."""
    if truth == 0:
        return math.nan
    return rmse_paper(estimates, truth) / truth


def derive_seed(master_seed: int, *keys: int) -> int:
    """64-bit seed for the stream identified by ``keys`` under ``master_seed``."""
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(k) for k in keys))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(hi) << 32 | int(lo)


def _eps_key(eps: float) -> int:
    return int(np.float64(eps).view(np.uint64))


@dataclass(frozen=True)
class ExperimentConfig:
    generator: GeneratorSpec
    pattern: GraphletPattern
    epsilons: tuple[float, ...] = (1.0, 5.0)
    ns: tuple[int, ...] = tuple(range(10, 101, 10))
    trials: int = 10
    master_seed: int = 0
    estimators: tuple[str, ...] = ESTIMATORS
    redraw_graph: bool = False
    max_subsets: int | None = DEFAULT_MAX_SUBSETS
    backend: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.epsilons or not self.ns:
            raise ValueError("epsilon and n lists must be non-empty")
        for eps in self.epsilons:
            if not (math.isfinite(eps) and eps > 0):
                raise ValueError(f"epsilon must be positive and finite, got {eps}")
        bad = [n for n in self.ns if n < self.pattern.k]
        if bad:
            raise ValueError(f"every n must be at least the pattern size {self.pattern.k}: {bad}")
        ests = tuple(ESTIMATOR_ALIASES.get(e, e) for e in self.estimators)
        unknown = [e for e in ests if e not in ESTIMATORS]
        if unknown or not ests:
            raise ValueError(f"unknown estimators {unknown}; choose from {ESTIMATORS}")
        object.__setattr__(self, "estimators", tuple(e for e in ESTIMATORS if e in ests))

    def spec_for(self, n: int, seed: int) -> GeneratorSpec:
        return self.generator.with_n(n, seed)


@dataclass
class CellResult:
    model: str
    n: int
    epsilon: float
    pattern: str
    estimator: str
    truth: float
    estimates: list[float]
    seconds: list[float]
    seeds: list[int]
    master_seed: int
    # per-trial truths when the graph is redrawn every trial
    truths: list[int] | None = None

    def errors(self) -> np.ndarray:
        truths = self.truths if self.truths is not None else [self.truth] * len(self.estimates)
        return np.asarray(self.estimates, dtype=float) - np.asarray(truths, dtype=float)

    @property
    def trial_count(self) -> int:
        return len(self.estimates)

    @property
    def estimate_mean(self) -> float:
        return math.fsum(self.estimates) / len(self.estimates)

    @property
    def rmse_paper(self) -> float:
        return math.sqrt(math.fsum(self.errors() ** 2))

    @property
    def rmse_mean(self) -> float:
        return self.rmse_paper / math.sqrt(self.trial_count)

    @property
    def rel_rmse_paper(self) -> float:
        return math.nan if self.truth == 0 else self.rmse_paper / self.truth

    @property
    def rel_undefined(self) -> bool:
        return self.truth == 0

    @property
    def std_dev(self) -> float:
        if self.trial_count < 2:
            return math.nan
        return float(np.std(self.estimates, ddof=1))

    @property
    def mean_trial_seconds(self) -> float:
        return math.fsum(self.seconds) / len(self.seconds)

    def row(self) -> dict:
        return {
            "model": self.model,
            "n": self.n,
            "epsilon": repr(float(self.epsilon)),
            "pattern": self.pattern,
            "estimator": self.estimator,
            "trial_count": self.trial_count,
            "truth": _fmt(self.truth),
            "estimate_mean": _fmt(self.estimate_mean),
            "rmse_paper": _fmt(self.rmse_paper),
            "rmse_mean": _fmt(self.rmse_mean),
            "rel_rmse_paper": _fmt(self.rel_rmse_paper),
            "std_dev": _fmt(self.std_dev),
            "mean_trial_seconds": f"{self.mean_trial_seconds:.6f}",
            "seed": self.master_seed,
        }


def _fmt(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if x.is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(x)


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    cells: list[CellResult] = field(default_factory=list)
    skipped: list[tuple[int, float, str, str]] = field(default_factory=list)

    def cell(self, n: int, epsilon: float, estimator: str) -> CellResult:
        for c in self.cells:
            if c.n == n and c.epsilon == epsilon and c.estimator == estimator:
                return c
        raise KeyError((n, epsilon, estimator))

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for c in self.cells:
            w.writerow(c.row())
        return buf.getvalue()

    def raw_csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(RAW_COLUMNS)
        for c in self.cells:
            truths = c.truths if c.truths is not None else [c.truth] * c.trial_count
            for t, (est, sec, seed, tr) in enumerate(zip(c.estimates, c.seconds, c.seeds, truths)):
                w.writerow([c.model, c.n, repr(float(c.epsilon)), c.pattern, c.estimator, t, seed,
                            _fmt(tr), _fmt(est), f"{sec:.6f}"])
        return buf.getvalue()


def _run_once(estimator, graph, pattern, eps, seed, backend):
    if estimator == "algorithm1":
        return algorithm1(graph, pattern, eps, seed, backend=backend)
    return baseline_rr_count(obfuscate(graph, eps, seed), pattern)


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run the sweep; cells whose size exceeds ``config.max_subsets`` are skipped."""
    report = ExperimentReport(config)
    pattern = config.pattern
    model = config.generator.model
    est_tag = {name: i for i, name in enumerate(ESTIMATORS)}
    for n in sorted(set(config.ns)):
        work = math.comb(n, pattern.k)
        if config.max_subsets is not None and work > config.max_subsets:
            for eps in sorted(set(config.epsilons)):
                for est in config.estimators:
                    reason = f"{work} subsets exceeds the cap of {config.max_subsets}"
                    log.warning("skipping n=%d eps=%g %s: %s", n, eps, est, reason)
                    report.skipped.append((n, eps, est, reason))
            continue
        graph_seed = derive_seed(config.master_seed, 0, n)
        graph = generate(config.spec_for(n, graph_seed))
        truth = exact_count(graph, pattern)
        for eps in sorted(set(config.epsilons)):
            for est in config.estimators:
                estimates, seconds, seeds, truths = [], [], [], []
                for t in range(config.trials):
                    seed = derive_seed(config.master_seed, 1, n, _eps_key(eps), est_tag[est], t)
                    g = graph
                    if config.redraw_graph:
                        g = generate(config.spec_for(n, derive_seed(config.master_seed, 2, n, t)))
                        truths.append(exact_count(g, pattern))
                    start = time.perf_counter()
                    result = _run_once(est, g, pattern, eps, seed, config.backend)
                    seconds.append(time.perf_counter() - start)
                    estimates.append(result.value)
                    seeds.append(seed)
                cell_truth = float(np.mean(truths)) if truths else float(truth)
                cell = CellResult(model, n, eps, str(pattern), est, cell_truth, estimates,
                                  seconds, seeds, config.master_seed, truths or None)
                if cell.rel_undefined:
                    log.warning("n=%d eps=%g %s: truth is 0, relative error undefined", n, eps, est)
                report.cells.append(cell)
    return report
