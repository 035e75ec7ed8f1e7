"""Command-line interface: ``locograph <subcommand> [--flags]``.

Exit codes: 0 success, 2 usage or parameter error, 3 empty support,
4 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import asymptotics, census, counting, formats, sampler
from .errors import CensusRangeError, ConsistencyError, EmptySupportError, LocographError, ParameterError
from .quotient import failing_vertices

EXIT_OK, EXIT_PARAM, EXIT_EMPTY, EXIT_CONSISTENCY = 0, 2, 3, 4

# Flags that never change results; kept out of the embedded config.
_NON_CONFIG = {"out", "report", "resume", "threads", "func", "graph"}


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw) -> None:
        kw.setdefault("allow_abbrev", False)
        super().__init__(*a, **kw)


def _positive(name: str) -> Callable[[str], int]:
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be >= 1")
        return v

    return parse


def _nonneg(name: str) -> Callable[[str], int]:
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < 0:
            raise argparse.ArgumentTypeError(f"{name} must be >= 0")
        return v

    return parse


def run_config(args: argparse.Namespace) -> dict[str, Any]:
    return {k: v for k, v in sorted(vars(args).items()) if k not in _NON_CONFIG}


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)


def _print_json(obj: Any) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


# -- subcommands -------------------------------------------------------------


def cmd_census(args: argparse.Namespace) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cache = None
    if args.resume:
        cache = out / "shards"
    table = census.build_census(args.d, args.r, args.max_index, cache_dir=cache, threads=args.threads)
    cfg = run_config(args)
    with open(out / "census.jsonl", "w") as fh:
        formats.write_jsonl(fh, table.records(), cfg)
    rows = [(n, table.gamma[n]) for n in range(1, args.max_index + 1)]
    (out / "gamma.csv").write_text(formats.format_csv(["n", "gamma"], rows, cfg))
    _print_json({"d": args.d, "r": args.r, "max_index": args.max_index,
                 "total_orbits": sum(table.gamma), "outputs": ["census.jsonl", "gamma.csv"]})
    return EXIT_OK


def cmd_count(args: argparse.Namespace) -> int:
    table = counting.count_table(args.d, args.r, args.n_max, method=args.method)
    rows = [
        (n, str(v), f"{table.log_b(n):.15g}" if v else "")
        for n, v in enumerate(table.b)
    ]
    text = formats.format_csv(["n", "b", "log_b"], rows, run_config(args))
    _emit(text, str(Path(args.out) / "counts.csv") if args.out else None)
    return EXIT_OK


def _sample_record(g, report, d: int) -> dict[str, Any]:
    return {"report": report.to_json(), "edges": [list(e) for e in g.edges()]}


def cmd_sample(args: argparse.Namespace) -> int:
    spec = sampler.SampleSpec(args.d, args.r, args.n, seed=args.seed, method=args.method)
    radius = args.radius if args.radius is not None else args.r + 1
    cfg = run_config(args)
    if args.samples is None:
        g, report = sampler.sample_graph(spec, radius=radius)
        if args.format == "edges":
            _emit(formats.format_edge_list(g, args.d, cfg), args.out)
            report_path = args.report or (args.out + ".report.json" if args.out else None)
            if report_path:
                Path(report_path).write_text(formats.dump_json({"config": {"version": formats.VERSION, **cfg}, "report": report.to_json()}) + "\n")
        else:
            rec = {"config": {"version": formats.VERSION, **cfg}, **_sample_record(g, report, args.d)}
            _emit(formats.dump_json(rec) + "\n", args.out)
        return EXIT_OK
    gs = sampler.GraphSampler(args.d, args.r, args.n, method=args.method)
    idx = range(args.samples)
    ids = gs.orbit_ids_many(args.seed, idx)
    reports, records = [], []
    for i, sample_ids in zip(idx, ids):
        rep = gs.report(sample_ids, args.seed, i, radius)
        reports.append(rep)
        records.append(_sample_record(gs.realize(sample_ids), rep, args.d))
    records.append({"aggregate": sampler.aggregate_reports(reports, args.n)})
    buf = _StringSink()
    formats.write_jsonl(buf, records, cfg)
    _emit(buf.text(), args.out)
    return EXIT_OK


class _StringSink:
    def __init__(self) -> None:
        self.parts: list[str] = []

    def write(self, s: str) -> None:
        self.parts.append(s)

    def text(self) -> str:
        return "".join(self.parts)


def cmd_verify(args: argparse.Namespace) -> int:
    g, d_file = formats.read_edge_list(args.graph)
    d = args.d if args.d is not None else d_file
    bad = failing_vertices(g, d, args.r)
    _print_json({"vertices": g.n, "d": d, "r": args.r, "ok": not bad,
                 "failing_vertices": bad[:10], "num_failing": len(bad)})
    return EXIT_OK


def cmd_asymptotics(args: argparse.Namespace) -> int:
    d, r = args.d, args.r
    points = sorted(set(args.points)) if args.points else list(range(args.step, args.n_max + 1, args.step))
    top = max(points)
    if d == 1:
        gamma = [0] + [int(j >= 2 * r + 2) for j in range(1, top + 1)]
        model = asymptotics.SaddleModel.from_gamma(gamma, label=f"d=1 r={r}")
        lead = lambda n: asymptotics.leading_term(1.0, 1.0, n)  # noqa: E731
        lead_b = lead
    else:
        table_c = census.build_census(d, r, top, threads=args.threads)
        gamma = list(table_c.gamma)
        model = asymptotics.SaddleModel.from_census(table_c)
        lead = lambda n: asymptotics.k_constant(d) * n ** (d / (d + 1))  # noqa: E731
        lead_b = lambda n: asymptotics.leading_term(asymptotics.c_constant(d), d, n)  # noqa: E731
    counts = counting.euler_transform_recurrence(gamma, top)
    log_cum = asymptotics.exact_log_cumulative(counts)
    rows = []
    for n in points:
        est = asymptotics.saddle_estimate(model, n)
        lb = counts.log_b(n) if counts.b[n] else float("nan")
        if log_cum[n] > est.log_B_upper:
            raise ConsistencyError(f"certified bound violated at n={n}")
        rows.append((
            n, f"{lb:.15g}", f"{log_cum[n]:.15g}", f"{est.log_B_upper:.15g}", f"{est.s_star:.15g}",
            f"{lead(n):.15g}", f"{lead_b(n):.15g}",
            f"{lb / n ** (d / (d + 1)):.15g}", f"{lb / lead(n):.15g}", f"{lb / lead_b(n):.15g}",
        ))
    header = ["n", "log_b_exact", "log_B_exact", "saddle_upper", "s_star", "leading_term",
              "leading_term_brigham", "ratio_log_b_over_n_pow", "ratio_exact_leading", "ratio_exact_brigham"]
    text = formats.format_csv(header, rows, run_config(args))
    _emit(text, str(Path(args.out) / "asymptotics.csv") if args.out else None)
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    spec = sampler.SampleSpec(args.d, args.r, args.n, seed=args.seed, method=args.method)
    radius = args.radius if args.radius is not None else args.r + 1
    res = sampler.batch_experiment(spec, args.samples, radius)
    records = [r.to_json() for r in res.reports] + [{"aggregate": res.aggregate}]
    buf = _StringSink()
    formats.write_jsonl(buf, records, run_config(args))
    if args.out:
        _emit(buf.text(), args.out)
        _print_json(res.aggregate)
    else:
        _emit(buf.text(), None)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="locograph", description="Graphs that look locally like the integer lattice.")
    p.add_argument("--version", action="version", version=f"locograph {formats.VERSION}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, n_flag: str | None = None, n_default: int | None = None) -> None:
        sp.add_argument("--d", type=_positive("d"), required=True)
        sp.add_argument("--r", type=_positive("r"), required=True)
        if n_flag:
            sp.add_argument(f"--{n_flag}", type=_nonneg(n_flag), required=n_default is None,
                            default=n_default, dest=n_flag.replace("-", "_"))

    sp = sub.add_parser("census", help="connected-graph census gamma(n)")
    common(sp, "max-index", n_default=100)
    sp.add_argument("--out", default=".", help="output directory")
    sp.add_argument("--resume", action="store_true", help="reuse completed index shards")
    sp.add_argument("--threads", type=_positive("threads"), default=1)
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("count", help="exact counts b(0..n-max)")
    common(sp, "n-max")
    sp.add_argument("--method", choices=["recurrence", "per-type", "both"], default="both")
    sp.add_argument("--out", default=None, help="output directory for counts.csv (default stdout)")
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("sample", help="uniform random graph(s)")
    common(sp)
    sp.add_argument("--n", type=_positive("n"), required=True)
    sp.add_argument("--seed", type=_nonneg("seed"), default=0)
    sp.add_argument("--samples", type=_positive("samples"), default=None)
    sp.add_argument("--radius", type=_nonneg("radius"), default=None)
    sp.add_argument("--format", choices=["json", "edges"], default="json")
    sp.add_argument("--method", choices=["auto", "staged", "pointing"], default="auto")
    sp.add_argument("--out", default=None)
    sp.add_argument("--report", default=None, help="report path for --format edges")
    sp.add_argument("--threads", type=_positive("threads"), default=1)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("verify", help="check that a graph is r-locally L^d")
    sp.add_argument("--graph", required=True, help="edge-list file")
    sp.add_argument("--d", type=_positive("d"), default=None, help="defaults to the file header")
    sp.add_argument("--r", type=_nonneg("r"), required=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("asymptotics", help="exact counts against the saddle bound and leading terms")
    common(sp, "n-max")
    sp.add_argument("--step", type=_positive("step"), default=100)
    sp.add_argument("--points", type=_positive("points"), nargs="*", default=None)
    sp.add_argument("--out", default=None)
    sp.add_argument("--threads", type=_positive("threads"), default=1)
    sp.set_defaults(func=cmd_asymptotics)

    sp = sub.add_parser("experiment", help="Monte Carlo observables over many samples")
    common(sp)
    sp.add_argument("--n", type=_positive("n"), required=True)
    sp.add_argument("--samples", type=_nonneg("samples"), required=True)
    sp.add_argument("--seed", type=_nonneg("seed"), default=0)
    sp.add_argument("--radius", type=_nonneg("radius"), default=None)
    sp.add_argument("--method", choices=["auto", "staged", "pointing"], default="auto")
    sp.add_argument("--out", default=None)
    sp.add_argument("--threads", type=_positive("threads"), default=1)
    sp.set_defaults(func=cmd_experiment)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EmptySupportError as e:
        print(f"locograph: {e}", file=sys.stderr)
        return EXIT_EMPTY
    except ConsistencyError as e:
        print(f"locograph: internal consistency failure: {e}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (ParameterError, CensusRangeError, FileNotFoundError) as e:
        print(f"locograph: {e}", file=sys.stderr)
        return EXIT_PARAM
    except LocographError as e:
        print(f"locograph: {e}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
