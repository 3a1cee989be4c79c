"""Command-line front end: generation, coloring, cut evaluation, solvers,
and the closed-form verification harness.

Exit codes: 0 success / all checks passed, 1 usage or parameter error,
2 verification failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import analysis, coloring, graph, model

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_IO = 3

DEFAULT_VERIFY_KS = (5, 10, 20, 30)
DEFAULT_VERIFY_N = 200_000
DEFAULT_TRIALS = 1_000_000
DEFAULT_THRESHOLD = 0.01
DEFAULT_LEMMA1_XS = (0.1, 1 / 3, 0.5, 0.8)
DEFAULT_POV_LS = (1 / 3, 4 / 25)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; route through our exit-code scheme
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _resolve_length(spec_value: str, k: int) -> float:
    if spec_value == "paper":
        return model.default_length_rule(k)
    try:
        return float(spec_value)
    except ValueError:
        raise _UsageError(f"--L must be a number or 'paper', got {spec_value!r}")


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w") as fh:
            fh.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _read_instance(path: str) -> tuple[np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"center", "length"} <= set(reader.fieldnames):
            raise _UsageError(f"{path}: expected CSV with 'center,length' header")
        centers, lengths = [], []
        for row in reader:
            centers.append(float(row["center"]))
            lengths.append(float(row["length"]))
    return np.asarray(centers), np.asarray(lengths)


def _read_colored(path: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        needed = {"center", "length", "color"}
        if reader.fieldnames is None or not needed <= set(reader.fieldnames):
            raise _UsageError(f"{path}: expected CSV with 'center,length,color' header")
        centers, lengths, colors = [], [], []
        for row in reader:
            centers.append(float(row["center"]))
            lengths.append(float(row["length"]))
            colors.append(int(row["color"]))
    return np.asarray(centers), np.asarray(lengths), np.asarray(colors, dtype=np.int64)


# ---------------------------------------------------------------------------
# commands


def cmd_generate(args) -> int:
    if (args.L is None) == (args.density is None):
        raise _UsageError("provide exactly one of --L and --density")
    if args.density is not None:
        density = model.LengthDensity.from_json(args.density)
        L = density.max_length
    else:
        density = None
        L = _resolve_length(args.L, args.k)
    params = model.ModelParams(n=args.n, k=args.k, L=L, seed=args.seed)
    centers, lengths = model.sample_centers_lengths(params, density=density)
    rows = [(repr(float(c)), repr(float(l))) for c, l in zip(centers, lengths)]
    _emit(_csv_text(("center", "length"), rows), args.output)
    summary = f"generated n={params.n} k={params.k} L={params.L} seed={params.seed}\n"
    (sys.stderr if args.output is None else sys.stdout).write(summary)
    return EXIT_OK


def cmd_color(args) -> int:
    centers, lengths = _read_instance(args.instance)
    bad = np.flatnonzero(~((centers >= 0) & (centers <= 1)))
    if bad.size:
        raise ValueError(
            f"center must lie in [0, 1], got {centers[bad[0]]} at row {int(bad[0])}"
        )
    if args.strategy == "oblivious":
        if args.L is None:
            raise _UsageError("--L is required for the oblivious strategy")
        rule = coloring.ColorRule(k=args.k, L=_resolve_length(args.L, args.k))
        colors = coloring.assign_colors(centers, rule)
    else:
        colors = coloring.random_coloring(centers.size, args.k, rng=args.seed).colors
    rows = [
        (repr(float(c)), repr(float(l)), int(col))
        for c, l, col in zip(centers, lengths, colors)
    ]
    _emit(_csv_text(("center", "length", "color"), rows), args.output)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    centers, lengths, colors = _read_colored(args.colored)
    k = int(colors.max()) if colors.size else 1
    stats = graph.evaluate_cut(model.from_arrays(centers, lengths), coloring.Coloring(colors, k))
    ratio = stats.ratio
    if args.format == "json":
        payload = {
            "n": int(centers.size),
            "m": stats.m,
            "cut": stats.cut,
            "conflicts": stats.conflicts,
            "ratio": ratio,
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        lines = [
            f"n         {centers.size}",
            f"m         {stats.m}",
            f"cut       {stats.cut}",
            f"conflicts {stats.conflicts}",
            f"ratio     {'NA' if ratio is None else f'{ratio:.6f}'}",
        ]
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _verify_lemma2(args):
    ks = _int_list(args.k)
    rows, table = [], []
    all_pass = True
    for k in ks:
        L = _resolve_length(args.L, k)
        reference = analysis.p_sc_given_ov(k, L)
        params = model.ModelParams(n=args.n, k=k, L=L, seed=args.seed)
        rule = coloring.ColorRule(k=k, L=L)
        est = analysis.estimate_pair_probabilities(
            params,
            rule,
            mode=args.mode,
            trials=args.trials if args.mode == "independent-pairs" else None,
            workers=args.workers,
        )
        result = est.sc_given_ov.with_reference(reference)
        rel = result.relative_difference
        ok = abs(rel) <= args.threshold
        all_pass &= ok
        rows.append(analysis.result_csv_row(k, L, est.mode, est.size, est.seed, result))
        table.append(
            f"k={k:<3d} L={L:<10.6g} closed_form={reference:.6f} "
            f"estimate={result.estimate:.6f} rel_diff={rel:+.4%} "
            f"{'PASS' if ok else 'FAIL'}"
        )
    return rows, table, all_pass


def _verify_lemma1(args):
    xs = DEFAULT_LEMMA1_XS if args.x is None else _float_list(args.x)
    L = 0.2 if args.L == "paper" else float(args.L)  # curve is L-invariant in x units
    results = analysis.verify_lemma1_pointwise(xs, L, args.trials, rng=args.seed)
    rows, table = [], []
    all_pass = True
    for x, res in zip(xs, results):
        ok = res.within(3.0)
        all_pass &= ok
        rows.append(
            analysis.result_csv_row(None, L, f"lemma1@x={x:g}", res.trials, args.seed, res)
        )
        table.append(
            f"x={x:<8.4g} closed_form={res.reference:.6f} estimate={res.estimate:.6f} "
            f"stderr={res.standard_error:.2e} {'PASS' if ok else 'FAIL'}"
        )
    return rows, table, all_pass


def _verify_pov(args):
    Ls = DEFAULT_POV_LS if args.L == "paper" else [float(args.L)]
    rows, table = [], []
    all_pass = True
    for L in Ls:
        reference = analysis.p_ov(L)
        params = model.ModelParams(n=2, k=2, L=L, seed=args.seed)
        est = analysis.estimate_pair_probabilities(
            params, None, mode="independent-pairs", trials=args.trials, workers=args.workers
        )
        result = est.ov.with_reference(reference)
        ok = result.within(3.0)
        all_pass &= ok
        rows.append(analysis.result_csv_row(None, L, est.mode, est.size, est.seed, result))
        table.append(
            f"L={L:<10.6g} closed_form={reference:.6f} estimate={result.estimate:.6f} "
            f"stderr={result.standard_error:.2e} {'PASS' if ok else 'FAIL'}"
        )
    return rows, table, all_pass


def _verify_theory(args):
    table = []
    for k in _int_list(args.k):
        L = _resolve_length(args.L, k)
        table.append(
            f"k={k:<3d} L={L:.6f} p_ov={analysis.p_ov(L):.6f} "
            f"p_si_given_sc={analysis.p_si_given_sc(k, L):.6f} "
            f"p_ov_given_sc={analysis.p_ov_given_sc(k, L):.6f} "
            f"p_sc_given_ov={analysis.p_sc_given_ov(k, L):.6f} "
            f"expected_cut_ratio={analysis.expected_cut_ratio(k, L):.6f} "
            f"random_baseline={1 - 1 / k:.6f}"
        )
    return [], table, True


def cmd_verify(args) -> int:
    handler = {
        "lemma2": _verify_lemma2,
        "lemma1": _verify_lemma1,
        "pov": _verify_pov,
        "theory": _verify_theory,
    }[args.target]
    rows, table, all_pass = handler(args)
    if args.format == "csv":
        _emit(_csv_text(analysis.RESULT_CSV_HEADER, rows), args.output)
    elif args.format == "json":
        payload = {
            "target": args.target,
            "passed": all_pass,
            "rows": [dict(zip(analysis.RESULT_CSV_HEADER, row)) for row in rows],
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        _emit("\n".join(table) + "\n", args.output)
    return EXIT_OK if all_pass else EXIT_VERIFY


def cmd_maxcut(args) -> int:
    centers, lengths = _read_instance(args.instance)
    intervals = model.from_arrays(centers, lengths)
    g = graph.build_overlap_graph(intervals)
    report: dict = {"n": g.num_vertices, "m": g.num_edges, "k": args.k}
    greedy_cut, _ = graph.greedy_kcut(g, args.k)
    report["greedy_cut"] = greedy_cut
    if args.exact:
        if g.num_vertices > graph.EXACT_SOLVER_MAX_VERTICES:
            raise _UsageError(
                f"exact solver refuses n={g.num_vertices} > "
                f"{graph.EXACT_SOLVER_MAX_VERTICES} vertices; drop --exact"
            )
        exact_cut, _ = graph.max_kcut_exact(g, args.k)
        report["exact_cut"] = exact_cut
    if args.L is not None:
        if np.all((centers >= 0) & (centers <= 1)):
            rule = coloring.ColorRule(k=args.k, L=_resolve_length(args.L, args.k))
            stats = graph.evaluate_cut(intervals, coloring.color_instance(intervals, rule))
            report["oblivious_cut"] = stats.cut
        else:
            report["oblivious_cut"] = None  # centers outside [0, 1]
    if args.export_graph is not None:
        with open(args.export_graph, "w") as fh:
            fh.write(g.to_edge_list())
    if args.format == "json":
        _emit(json.dumps(report, indent=2) + "\n", args.output)
    else:
        lines = [f"{key} {value if value is not None else 'NA'}" for key, value in report.items()]
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stackcut", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="draw a random instance and write it as CSV")
    p.add_argument("--n", type=int, required=True, help="instance size")
    p.add_argument("--k", type=int, required=True, help="number of storage locations/colors")
    p.add_argument("--L", help="max interval length, a number or 'paper' for (k-1)/(5k)")
    p.add_argument("--density", help="JSON file with a piecewise-constant length density")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="output CSV path (default: stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("color", help="color an instance file")
    p.add_argument("instance", help="instance CSV (center,length)")
    p.add_argument("--strategy", choices=("oblivious", "random"), default="oblivious")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--L", help="max length for the oblivious rule (number or 'paper')")
    p.add_argument("--seed", type=int, default=0, help="seed for --strategy random")
    p.add_argument("--output", help="output CSV path (default: stdout)")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("evaluate", help="cut statistics of a colored instance")
    p.add_argument("colored", help="colored CSV (center,length,color)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("verify", help="check simulations against the closed forms")
    p.add_argument("--target", choices=("lemma2", "lemma1", "pov", "theory"), default="lemma2")
    p.add_argument("--k", default=",".join(str(k) for k in DEFAULT_VERIFY_KS),
                   help="comma-separated k values")
    p.add_argument("--L", default="paper", help="max length (number or 'paper')")
    p.add_argument("--n", type=int, default=DEFAULT_VERIFY_N, help="instance size (all-pairs)")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS,
                   help="pair count for independent-pairs / lemma1 / pov")
    p.add_argument("--mode", choices=("all-pairs", "independent-pairs"), default="all-pairs")
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD,
                   help="max |relative difference| for lemma2 (fraction, default 0.01)")
    p.add_argument("--x", help="comma-separated scaled distances for --target lemma1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("maxcut", help="solver cuts (and oblivious cut) for an instance")
    p.add_argument("instance", help="instance CSV (center,length)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--exact", action="store_true", help="run the exact solver (n <= 16)")
    p.add_argument("--L", help="include the oblivious rule's cut (number or 'paper')")
    p.add_argument("--export-graph", help="write the overlap graph as an edge-list file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output")
    p.set_defaults(func=cmd_maxcut)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
