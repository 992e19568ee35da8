"""Command-line front end.

Subcommands:

* ``generate`` - run the fast sampler (or the dart thrower) once and emit the
  pattern as CSV, structured text, or an SVG scatter.
* ``verify``   - check the hard guarantees of a pattern: pairwise minimum
  distance at least r, worst probe gap at most r/cos(pi/k).
* ``compare``  - many seeded runs of both samplers; chi-square on point
  counts and KS on nearest-neighbor distances decide equivalence.
* ``bench``    - Figure-style radius sweep (geometric, ratio 0.8) recording
  throughput and generation overhead, written as CSV plus a rendered figure.

Exit codes: 0 success, 1 verification or statistical failure, 2 usage or
malformed input, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

import numpy as np

from . import engine, naive
from .patternio import MalformedPattern, format_pattern, read_pattern
from .stats import (
    BenchRecord,
    _worst_gap,
    compute_stats,
    two_sample_count_test,
    two_sample_ks_test,
)

RADIUS_SWEEP_START = 0.64
RADIUS_SWEEP_RATIO = 0.8


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poissondisk",
        description="Maximal Poisson-disk patterns in the unit square.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument("--radius", "-r", type=float, required=True,
                       help="exclusion radius in unit-square units")
        p.add_argument("--k", type=int, default=64,
                       help="vertex count of the exclusion polygon (default 64)")
        p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")

    g = sub.add_parser("generate", help="generate one pattern")
    add_common(g)
    g.add_argument("--method", choices=("engine", "naive"), default="engine")
    g.add_argument("--cutoff", type=int, default=100_000,
                   help="naive: consecutive rejections before stopping")
    g.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    g.add_argument("--out", "-o", help="output file (default: stdout)")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="verify spacing and maximality")
    add_common(v)
    v.add_argument("--in", dest="in_path", help="pattern file (csv or json); "
                   "when omitted a pattern is generated in-process")
    v.add_argument("--method", choices=("engine", "naive"), default="engine")
    v.add_argument("--cutoff", type=int, default=100_000)
    v.add_argument("--probes", type=int, default=1000,
                   help="probe lattice resolution (default 1000)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("compare", help="distributional test against the dart thrower")
    add_common(c)
    c.add_argument("--runs", type=int, default=5000,
                   help="runs per method (minimum 1000)")
    c.add_argument("--cutoff", type=int, default=None,
                   help="use a fixed rejection cutoff for the reference "
                   "instead of running it to provable maximality")
    c.add_argument("--plot", help="write a histogram/ECDF figure to this file")
    c.set_defaults(func=cmd_compare)

    b = sub.add_parser("bench", help="radius sweep with throughput records")
    b.add_argument("--k", type=int, default=64,
                   help="vertex count of the exclusion polygon (default 64)")
    b.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    b.add_argument("--floor", type=float, default=0.01,
                   help="smallest radius of the sweep (default 0.01; "
                   "use 0.004 for the full range)")
    b.add_argument("--out", "-o", default="bench.csv", help="CSV output path")
    b.add_argument("--plot", default=None,
                   help="figure path (default: CSV path with .svg suffix)")
    b.add_argument("--no-plot", action="store_true", help="skip the figure")
    b.set_defaults(func=cmd_bench)
    return parser


def _make_pattern(args) -> engine.Pattern:
    if args.method == "naive":
        cfg = naive.NaiveConfig(r=args.radius, seed=args.seed,
                                stop_after_rejections=args.cutoff)
        return naive.naive_run(cfg)
    return engine.run(args.radius, k=args.k, seed=args.seed)


def cmd_generate(args) -> int:
    pattern = _make_pattern(args)
    text = format_pattern(pattern, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        report = sys.stdout
    else:
        sys.stdout.write(text)
        report = sys.stderr
    st = compute_stats(pattern)
    print(
        f"N={st.n_points} density_const={st.density_const:.6g} "
        f"generated_accepted_ratio={st.generated_over_accepted:.6g}",
        file=report,
    )
    return 0


def _closest_pair(points):
    pts = np.array([(x, y) for x, y, _ in points])
    best = (float("inf"), None, None)
    block = max(16, int(2_000_000 / max(len(pts), 1)))
    for s in range(0, len(pts), block):
        blk = pts[s : s + block]
        d2 = ((blk[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
        rows = np.arange(len(blk))
        d2[rows, s + rows] = np.inf
        flat = int(d2.argmin())
        a, b = divmod(flat, len(pts))
        if d2[a, b] < best[0]:
            best = (float(d2[a, b]), tuple(pts[s + a]), tuple(pts[b]))
    return math.sqrt(best[0]), best[1], best[2]


def cmd_verify(args) -> int:
    if args.in_path:
        pattern = read_pattern(args.in_path, r=args.radius)
    else:
        pattern = _make_pattern(args)
    if not pattern.points:
        print("pattern is empty", file=sys.stderr)
        return 2
    r = args.radius
    threshold = r / math.cos(math.pi / args.k)
    pts = np.array([(x, y) for x, y, _ in pattern.points])
    gap, probe = _worst_gap(pts, threshold, args.probes)
    if len(pattern.points) > 1:
        min_pair, pa, pb = _closest_pair(pattern.points)
        min_repr = f"{min_pair:.17g}"
    else:
        min_pair, pa, pb = float("inf"), None, None
        min_repr = "inf"
    print(f"n_points={len(pattern.points)} min_pair_dist={min_repr} "
          f"worst_gap={gap:.17g} (required: >= {r:.17g} and <= {threshold:.17g})")
    ok = True
    if min_pair < r:
        print(f"FAIL spacing: points {pa} and {pb} at distance {min_pair:.17g} < {r}",
              file=sys.stderr)
        ok = False
    if gap > threshold:
        print(f"FAIL maximality: probe {probe} at distance {gap:.17g} > {threshold:.17g}",
              file=sys.stderr)
        ok = False
    return 0 if ok else 1


def compare_patterns(r: float, runs: int, seed: int, cutoff: int | None = None,
                     k: int = 64, naive_r: float | None = None,
                     engine_debug: bool = False):
    """Seeded engine-vs-naive comparison.

    The reference runs to provable maximality by default (cutoff None); an
    explicit cutoff switches it to the consecutive-rejection stopping rule,
    which measurably under-fills tight patterns and is kept for study only.
    naive_r lets a deliberately biased reference be used for power checks.
    Returns (p_counts, p_ks, counts and pooled nn distances per side)."""
    from .stats import nearest_neighbor_distances

    eng_counts = np.empty(runs, dtype=int)
    nai_counts = np.empty(runs, dtype=int)
    eng_nn = []
    nai_nn = []
    for i in range(runs):
        pat = engine.run(r, k=k, seed=seed + i, debug=engine_debug)
        pts = np.array([(x, y) for x, y, _ in pat.points])
        eng_counts[i] = len(pts)
        eng_nn.append(nearest_neighbor_distances(pts))
    for i in range(runs):
        cfg = naive.NaiveConfig(r=naive_r if naive_r is not None else r,
                                seed=seed + runs + i,
                                stop_after_rejections=cutoff or 100_000)
        pat = naive.naive_run(cfg, until_maximal=cutoff is None)
        pts = np.array([(x, y) for x, y, _ in pat.points])
        nai_counts[i] = len(pts)
        nai_nn.append(nearest_neighbor_distances(pts))
    eng_nn = np.concatenate(eng_nn)
    nai_nn = np.concatenate(nai_nn)
    p_counts = two_sample_count_test(eng_counts, nai_counts)
    p_ks = two_sample_ks_test(eng_nn, nai_nn)
    return p_counts, p_ks, eng_counts, nai_counts, eng_nn, nai_nn


def cmd_compare(args) -> int:
    if args.runs < 1000:
        print(f"compare needs at least 1000 runs, got {args.runs}", file=sys.stderr)
        return 2
    p_counts, p_ks, ec, nc, enn, nnn = compare_patterns(
        args.radius, args.runs, args.seed, cutoff=args.cutoff, k=args.k)
    print(f"runs={args.runs} chi2_p_counts={p_counts:.6g} ks_p_nn={p_ks:.6g} "
          f"mean_count_engine={ec.mean():.4f} mean_count_naive={nc.mean():.4f}")
    if args.plot:
        _plot_compare(ec, nc, enn, nnn, args.plot)
    return 0 if (p_counts > 0.01 and p_ks > 0.01) else 1


def sweep_radii(floor: float, start: float = RADIUS_SWEEP_START,
                ratio: float = RADIUS_SWEEP_RATIO) -> list[float]:
    radii = []
    r = start
    while r >= floor:
        radii.append(r)
        r *= ratio
    return radii


def bench_sweep(floor: float, k: int, seed: int) -> list[BenchRecord]:
    """Time one run per radius, serially, coarsest radius first."""
    records = []
    for idx, r in enumerate(sweep_radii(floor)):
        t0 = time.perf_counter()
        pattern = engine.run(r, k=k, seed=seed + idx)
        wall = time.perf_counter() - t0
        n = len(pattern.points)
        records.append(BenchRecord(
            r=r,
            n_accepted=n,
            n_generated=pattern.generated_count,
            wall_seconds=wall,
            samples_per_second=n / wall if wall > 0 else float("inf"),
        ))
    return records


def format_bench_csv(records) -> str:
    rows = ["r,n_accepted,n_generated,wall_seconds,samples_per_second"]
    rows.extend(
        f"{b.r:.17g},{b.n_accepted},{b.n_generated},{b.wall_seconds:.6g},"
        f"{b.samples_per_second:.6g}"
        for b in records
    )
    return "\n".join(rows) + "\n"


def cmd_bench(args) -> int:
    records = bench_sweep(args.floor, args.k, args.seed)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(format_bench_csv(records))
    for b in records:
        print(f"r={b.r:.6g} N={b.n_accepted} generated={b.n_generated} "
              f"wall={b.wall_seconds:.3f}s rate={b.samples_per_second:.0f}/s")
    if not args.no_plot:
        plot_path = args.plot
        if plot_path is None:
            stem = args.out.rsplit(".", 1)[0] if "." in args.out else args.out
            plot_path = stem + ".svg"
        _plot_bench(records, plot_path)
        print(f"figure written to {plot_path}")
    return 0


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _plot_bench(records, path: str) -> None:
    plt = _pyplot()
    n = [b.n_accepted for b in records]
    rate = [b.samples_per_second for b in records]
    ratio = [b.n_generated / b.n_accepted for b in records]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax1.plot(n, rate, "o-")
    ax1.set_xscale("log")
    ax1.set_xlabel("accepted samples N")
    ax1.set_ylabel("samples per second")
    ax1.set_title("throughput across the radius sweep")
    ax2.plot(n, ratio, "s-", color="tab:orange")
    ax2.set_xscale("log")
    ax2.set_xlabel("accepted samples N")
    ax2.set_ylabel("generated / accepted")
    ax2.set_title("candidate generation overhead")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _plot_compare(eng_counts, nai_counts, eng_nn, nai_nn, path: str) -> None:
    plt = _pyplot()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    lo = int(min(eng_counts.min(), nai_counts.min()))
    hi = int(max(eng_counts.max(), nai_counts.max()))
    bins = np.arange(lo - 0.5, hi + 1.5)
    ax1.hist([eng_counts, nai_counts], bins=bins, label=["engine", "naive"],
             density=True)
    ax1.set_xlabel("points per pattern")
    ax1.set_ylabel("frequency")
    ax1.legend()
    for data, label in ((eng_nn, "engine"), (nai_nn, "naive")):
        xs = np.sort(data)
        ax2.plot(xs, np.arange(1, len(xs) + 1) / len(xs), label=label)
    ax2.set_xlabel("nearest-neighbor distance")
    ax2.set_ylabel("ECDF")
    ax2.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MalformedPattern as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
