"""Command-line entry point: ``graphlet-ldp <subcommand>``.

Exit codes: 0 success, 1 a gadget check failed, 2 invalid arguments,
3 infeasible scale.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys

import numpy as np

from . import kernels
from .channel import debias, obfuscate, write_noisy
from .estimator import baseline_rr_count, estimate_from_unbiased
from .experiment import DEFAULT_MAX_SUBSETS, ExperimentConfig, run_experiment
from .gadgets import (
    ScaleError,
    build_clique_gadget,
    build_cycle_gadget,
    build_triangle_gadget,
    clique_lemma_check,
    cycle_structure_check,
    random_clique_inputs,
)
from .graph import EdgeListError, GeneratorSpec, generate, read_edge_list, write_edge_list
from .patterns import exact_count, parse_pattern

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_SCALE = 0, 1, 2, 3

log = logging.getLogger("graphlet_ldp")


class UsageError(Exception):
    pass


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _read_graph(path: str):
    with open(path, encoding="utf-8") as fh:
        return read_edge_list(fh.read())


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            # start:stop:step, inclusive of stop
            try:
                a, b, *c = (int(x) for x in part.split(":"))
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad range {part!r}") from None
            out.extend(range(a, b + 1, c[0] if c else 1))
        else:
            try:
                out.append(int(part))
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad integer {part!r}") from None
    return out


def _bits(text: str | None, length: int, rng: np.random.Generator, name: str) -> np.ndarray:
    if text is None:
        return rng.integers(0, 2, length).astype(bool)
    cleaned = text.replace(",", "").replace(" ", "")
    if len(cleaned) != length or set(cleaned) - {"0", "1"}:
        raise UsageError(f"--{name} must be {length} bits of 0/1, got {text!r}")
    return np.array([c == "1" for c in cleaned], dtype=bool)


def cmd_generate(args) -> int:
    spec = GeneratorSpec(args.model, args.n, args.seed, args.p_in, args.p_out, args.m)
    _write(write_edge_list(generate(spec)), args.out)
    return EXIT_OK


def cmd_count(args) -> int:
    graph = _read_graph(args.graph)
    pattern = parse_pattern(args.pattern)
    print(exact_count(graph, pattern, method=args.method))
    return EXIT_OK


def cmd_estimate(args) -> int:
    graph = _read_graph(args.graph)
    pattern = parse_pattern(args.pattern)
    work = math.comb(graph.n, pattern.k)
    if not args.baseline and not args.slow and work > DEFAULT_MAX_SUBSETS:
        raise ScaleError(f"{work} node subsets exceeds {DEFAULT_MAX_SUBSETS}; pass --slow to run anyway")
    noisy = obfuscate(graph, args.epsilon, args.seed)
    if args.dump_noisy:
        _write(write_noisy(noisy), args.dump_noisy)
    if args.baseline:
        est = baseline_rr_count(noisy, pattern)
        name = "rr_baseline"
    else:
        est = estimate_from_unbiased(debias(noisy), pattern, backend=args.backend,
                                     master_seed=args.seed)
        name = "algorithm1"
    shown = max(est.value, 0.0) if args.clamp_at_zero else est.value
    print(json.dumps({
        "estimator": name,
        "pattern": est.pattern,
        "n": est.n,
        "epsilon": est.epsilon,
        "seed": args.seed,
        "value": shown,
        "raw_value": est.value,
        "seconds": round(est.seconds, 6),
    }))
    return EXIT_OK


def cmd_experiment(args) -> int:
    if not args.n_list:
        raise UsageError("--n-list is empty")
    gen = GeneratorSpec(args.model, args.n_list[0], 0, args.p_in, args.p_out, args.m)
    for n in args.n_list:
        gen.with_n(n, 0)  # validate every size before any work starts
    config = ExperimentConfig(
        generator=gen,
        pattern=parse_pattern(args.pattern),
        epsilons=tuple(args.epsilon_list),
        ns=tuple(args.n_list),
        trials=args.trials,
        master_seed=args.seed,
        estimators=tuple(e.strip() for e in args.estimators.split(",") if e.strip()),
        redraw_graph=args.redraw_graph,
        max_subsets=None if args.slow else DEFAULT_MAX_SUBSETS,
        backend=args.backend,
    )
    report = run_experiment(config)
    _write(report.csv_text(), args.out)
    if args.raw_out:
        _write(report.raw_csv_text(), args.raw_out)
    for c in report.cells:
        log.info("n=%d eps=%g %-11s truth=%s rmse_paper=%.4g rel=%.4g", c.n, c.epsilon,
                 c.estimator, c.truth, c.rmse_paper, c.rel_rmse_paper)
    if report.skipped:
        log.error("%d cells skipped as infeasible; rerun with --slow", len(report.skipped))
        return EXIT_SCALE
    return EXIT_OK


def cmd_gadget(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.kind == "cycle":
        if args.n % 2:
            raise UsageError("cycle gadget needs an even --n")
        graph = build_cycle_gadget(args.n, _bits(args.x, args.n // 2, rng, "x"))
    else:
        if args.n % 3:
            raise UsageError("triangle/clique gadgets need --n divisible by 3")
        t = args.n // 3
        mu = _bits(args.mu, t, rng, "mu")
        ups = _bits(args.upsilon, t, rng, "upsilon")
        X = _bits(args.X, t * t, rng, "X").reshape(t, t)
        if args.kind == "triangle":
            graph = build_triangle_gadget(args.n, mu, ups, X)
        else:
            graph = build_clique_gadget(args.k, args.n, mu, ups, X)
    _write(write_edge_list(graph), args.out)
    return EXIT_OK


def cmd_gadget_check(args) -> int:
    if args.kind == "clique-lemma":
        if args.n % 3:
            raise UsageError("--n must be divisible by 3")
        rng = np.random.default_rng(args.seed)
        failures = 0
        for _ in range(args.trials):
            r = clique_lemma_check(args.k, args.n, *random_clique_inputs(args.n, rng))
            failures += not r.holds
            print(f"K{args.k}={r.clique_count} K3={r.triangle_count} x{r.multiplier} "
                  f"{'ok' if r.holds else 'FAIL'}")
        print(f"clique-lemma k={args.k} n={args.n}: {args.trials - failures}/{args.trials} hold")
        return EXIT_OK if failures == 0 else EXIT_CHECK_FAILED
    r = cycle_structure_check(args.n, args.k, pairs=args.pairs, seed=args.seed)
    print(f"cycle-structure n={r.n} k={r.k}: base={r.base_count} coefficients={r.coefficients}")
    for s, direct, formula in r.closed_form_rows:
        print(f"  |x|={s}: direct={direct} closed_form={formula} {'ok' if direct == formula else 'FAIL'}")
    print(f"  popcount invariant: {r.popcount_invariant}")
    print(f"  difference bound: {r.difference_pairs - r.difference_violations}/{r.difference_pairs} pairs")
    return EXIT_OK if r.holds else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphlet-ldp", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic graph as an edge list")
    g.add_argument("--model", choices=["sbm2", "ba"], required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p-in", type=float, default=0.25)
    g.add_argument("--p-out", type=float, default=0.05)
    g.add_argument("--m", type=int, default=None, help="BA attachment count (default max(1, n//5))")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("count", help="exact (non-private) pattern count")
    c.add_argument("--graph", required=True)
    c.add_argument("--pattern", required=True)
    c.add_argument("--method", choices=["auto", "subsets", "tuples"], default="auto")
    c.set_defaults(func=cmd_count)

    e = sub.add_parser("estimate", help="private estimate of a pattern count")
    e.add_argument("--graph", required=True)
    e.add_argument("--pattern", required=True)
    e.add_argument("--epsilon", type=float, required=True)
    e.add_argument("--seed", type=int, required=True)
    e.add_argument("--baseline", action="store_true", help="count on the noisy graph instead")
    e.add_argument("--dump-noisy", metavar="PATH")
    e.add_argument("--clamp-at-zero", action="store_true", help="display max(value, 0)")
    e.add_argument("--backend", choices=["compiled", "python"], default=None)
    e.add_argument("--slow", action="store_true", help="allow large graphs")
    e.set_defaults(func=cmd_estimate)

    x = sub.add_parser("experiment", help="accuracy sweep to CSV")
    x.add_argument("--model", choices=["sbm2", "ba"], required=True)
    x.add_argument("--pattern", default="cycle:4")
    x.add_argument("--epsilon-list", type=_float_list, default=[1.0, 5.0])
    x.add_argument("--n-list", type=_int_list, default=list(range(10, 61, 10)),
                   help="comma list; a:b:step ranges allowed")
    x.add_argument("--trials", type=int, default=10)
    x.add_argument("--seed", type=int, required=True)
    x.add_argument("--out", required=True)
    x.add_argument("--raw-out")
    x.add_argument("--estimators", default="a1,rr")
    x.add_argument("--p-in", type=float, default=0.25)
    x.add_argument("--p-out", type=float, default=0.05)
    x.add_argument("--m", type=int, default=None)
    x.add_argument("--redraw-graph", action="store_true")
    x.add_argument("--slow", action="store_true", help="lift the per-cell size cap")
    x.add_argument("--backend", choices=["compiled", "python"], default=None)
    x.set_defaults(func=cmd_experiment)

    gd = sub.add_parser("gadget", help="write a lower-bound gadget graph")
    gd.add_argument("kind", choices=["triangle", "clique", "cycle"])
    gd.add_argument("--n", type=int, required=True)
    gd.add_argument("--k", type=int, default=4)
    gd.add_argument("--mu")
    gd.add_argument("--upsilon")
    gd.add_argument("--X", help="row-major bits of the n/3 x n/3 matrix")
    gd.add_argument("--x", help="bits of the cycle-gadget vector")
    gd.add_argument("--seed", type=int, default=0, help="fills unspecified bits at random")
    gd.add_argument("--out")
    gd.set_defaults(func=cmd_gadget)

    gc = sub.add_parser("gadget-check", help="verify gadget counting identities")
    gc.add_argument("kind", choices=["clique-lemma", "cycle-structure"])
    gc.add_argument("--n", type=int, required=True)
    gc.add_argument("--k", type=int, required=True)
    gc.add_argument("--trials", type=int, default=50)
    gc.add_argument("--pairs", type=int, default=100)
    gc.add_argument("--seed", type=int, default=0)
    gc.set_defaults(func=cmd_gadget_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    log.debug("kernel backend: %s", kernels.BACKEND)
    try:
        return args.func(args)
    except ScaleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except (UsageError, EdgeListError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
