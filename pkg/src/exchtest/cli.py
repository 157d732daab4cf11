"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 input (parse) error,
3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import ExchTestError, LengthError, SymbolError
from .markov_sim import GENERATOR_NAME

EXIT_OK, EXIT_VALIDATION, EXIT_INPUT, EXIT_USAGE = 0, 1, 2, 3

# Linear values are printed alongside logs only within this log10 range.
LINEAR_LOG10_LIMIT = 300.0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _header(seed=None, generator=None) -> dict:
    return {"version": __version__, "seed": seed, "generator": generator}


def _print_header(meta: dict) -> None:
    seed = "-" if meta["seed"] is None else meta["seed"]
    gen = meta["generator"] or "-"
    print(f"# exchtest {meta['version']} seed={seed} generator={gen}")


def _read_input(args):
    from .seqtypes import parse_sequence, read_binary_file

    if args.binary_file:
        return read_binary_file(args.binary_file)
    if args.file:
        text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text()
        return parse_sequence(text)
    if args.sequence is None or args.sequence == "-":
        return parse_sequence(sys.stdin.read())
    return parse_sequence(args.sequence)


def _add_input(p):
    p.add_argument("sequence", nargs="?", help="0/1 string; '-' or omitted reads standard input")
    p.add_argument("--file", help="text file holding the sequence ('-' for stdin)")
    p.add_argument("--binary-file", help="raw file, one observation per byte (0x00/0x01)")


def _value_entry(log10: float) -> dict:
    entry = {"log10": log10}
    if abs(log10) <= LINEAR_LOG10_LIMIT:
        entry["value"] = 10.0**log10
    return entry


def _stationary_arg(args):
    if args.ub_pi0 is None:
        return None
    pi0 = args.ub_pi0
    if not 0 < pi0 < 1:
        raise UsageError("--ub-pi0 must lie in (0, 1)")
    return (pi0, 1.0 - pi0)


def cmd_evalue(args) -> int:
    from .evalues import evaluate

    stats = [s.strip().lower() for s in args.stats.split(",") if s.strip()]
    unknown = set(stats) - {"umm", "elb", "lb", "ub"}
    if unknown:
        raise UsageError(f"unknown statistics {sorted(unknown)}")
    st = _stationary_arg(args)
    if "ub" in stats and st is None:
        raise UsageError("the ub statistic needs --ub-pi0")
    z = _read_input(args)
    report = evaluate(z, stationary=st)
    values = {s: _value_entry(getattr(report, f"log10_{s}")) for s in stats}
    meta = _header()
    if args.format == "json":
        doc = {
            "metadata": meta,
            "N": z.N,
            "exch_type": {"N0": report.exch.N0, "N1": report.exch.N1},
            "markov_type": {k: getattr(report.markov, k) for k in ("F", "N00", "N01", "N10", "N11", "L")},
            "degenerate": report.degenerate,
            "values": values,
        }
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    _print_header(meta)
    mt = report.markov
    print(f"N={z.N} N0={report.exch.N0} N1={report.exch.N1} "
          f"markov_type=(F={mt.F}, N00={mt.N00}, N01={mt.N01}, N10={mt.N10}, N11={mt.N11}, L={mt.L})")
    for s in stats:
        v = values[s]
        lin = f"  value={v['value']:.10g}" if "value" in v else ""
        print(f"{s.upper():>4}  log10={v['log10']:.10g}{lin}")
    if report.degenerate and "lb" in stats:
        print("note: constant sequence; LB uses the 0^0 = 1 convention")
    return EXIT_OK


def _generator_spec(args):
    from .markov_sim import GeneratorSpec, MarkovParams

    if args.gen == "markov":
        if args.pi01 is None or args.pi10 is None:
            raise UsageError("--gen markov needs --pi01 and --pi10")
        return GeneratorSpec("markov", args.n, args.seed, params=MarkovParams(args.pi01, args.pi10))
    if args.pi01 is not None or args.pi10 is not None:
        raise UsageError("--pi01/--pi10 only apply to --gen markov")
    if args.gen == "iid":
        if args.p is None:
            raise UsageError("--gen iid needs --p")
        return GeneratorSpec("iid", args.n, args.seed, p=args.p)
    return GeneratorSpec("umm", args.n, args.seed)


def _add_generator(p):
    p.add_argument("--gen", choices=["markov", "umm", "iid"], required=True)
    p.add_argument("--n", type=int, required=True, help="horizon N")
    p.add_argument("--pi01", type=float)
    p.add_argument("--pi10", type=float)
    p.add_argument("--p", type=float, help="success probability for --gen iid")
    p.add_argument("--seed", type=int, default=0)


def cmd_simulate(args) -> int:
    from .markov_sim import generate_batch

    spec = _generator_spec(args)
    if args.count < 1:
        raise UsageError("--count must be positive")
    _print_header(_header(spec.seed, GENERATOR_NAME))
    batch = generate_batch(spec, args.index, args.count)
    for row in batch.bits:
        print("".join("1" if b else "0" for b in row.tolist()))
    return EXIT_OK


def cmd_experiment(args) -> int:
    from . import experiments as ex

    gen = _generator_spec(args)
    stats = tuple(s.strip() for s in args.stats.split(",") if s.strip())
    st = _stationary_arg(args)
    if st is None and "ub" in stats and gen.kind.value == "umm":
        st = (0.5, 0.5)
    spec = ex.ExperimentSpec(gen, args.k, stats, ub_stationary=st)
    result = ex.run(spec, workers=args.workers)
    out = Path(args.out)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True)
    csv_path = out.with_name(out.name + ".csv")
    json_path = out.with_name(out.name + ".json")
    ex.write_csv(csv_path, result.records)
    ex.write_json(json_path, result)
    meta = ex.metadata(spec)
    if args.format == "json":
        print(json.dumps({"metadata": meta, "spec": spec.to_dict(), "summary": result.summary.to_dict(),
                          "files": [str(csv_path), str(json_path)]}, indent=2))
    else:
        _print_header({"version": meta["version"], "seed": meta["seed"], "generator": meta["generator_algorithm"]})
        print(ex.format_rows(result.summary, spec))
        print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK


def cmd_changepoint(args) -> int:
    from .changepoint import cp_confidence_region, cp_evalue

    if not 0 < args.alpha <= 1:
        raise UsageError("--alpha must lie in (0, 1]")
    z = _read_input(args)
    meta = _header()
    if args.mode == "evalue":
        v = cp_evalue(z)
        entry = _value_entry(v.log10)
        if args.format == "json":
            print(json.dumps({"metadata": meta, "N": z.N, "cp_evalue": entry}, indent=2))
        else:
            _print_header(meta)
            lin = f"  value={entry['value']:.10g}" if "value" in entry else ""
            print(f"CP  log10={entry['log10']:.10g}{lin}")
        return EXIT_OK
    region = cp_confidence_region(z, args.alpha)
    if args.format == "json":
        print(json.dumps({
            "metadata": meta, "N": z.N, "alpha": args.alpha,
            "members": list(region.members),
            "log10_evalues": {str(t): v for t, v in region.evalues.items()},
        }, indent=2))
        return EXIT_OK
    _print_header(meta)
    print(f"{'tau':>6} {'log10 E_tau':>14} member")
    for t, v in region.evalues.items():
        print(f"{t:>6} {v:>14.6f} {'*' if t in region.members else ''}")
    print(f"region at alpha={args.alpha:g}: {list(region.members)}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracle import UMM_MAX_N, run_suite

    if not 2 <= args.max_n <= UMM_MAX_N:
        raise UsageError(f"--max-n must lie in 2..{UMM_MAX_N}")
    report = run_suite(args.max_n)
    _print_header(_header())
    for c in report.checks:
        status = "PASS" if c.passed else "FAIL"
        extra = f" at {c.detail}" if c.detail else ""
        print(f"{status}  {c.name:<34} worst={c.worst:.3e}{extra}")
    return EXIT_OK if report.passed else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="exchtest", description="E-values for exchangeability of binary sequences")
    parser.add_argument("--version", action="version", version=f"exchtest {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("evalue", help="UMM e-value and benchmarks for one sequence")
    _add_input(p)
    p.add_argument("--stats", default="umm,elb,lb", help="comma list from umm,elb,lb,ub")
    p.add_argument("--ub-pi0", type=float, help="stationary P(0) for the upper benchmark")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_evalue)

    p = sub.add_parser("simulate", help="print generated sequences")
    _add_generator(p)
    p.add_argument("--index", type=int, default=0, help="first replication index")
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("experiment", help="Monte Carlo summary of the four e-values")
    _add_generator(p)
    p.add_argument("--k", type=int, required=True, help="number of replications")
    p.add_argument("--stats", default="elb,lb,ub,umm")
    p.add_argument("--ub-pi0", type=float, help="override the stationary P(0) used by UB")
    p.add_argument("--out", default="exchtest_experiment", help="output prefix for .csv and .json")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--workers", type=int, default=None, help="worker processes (default $EXCHTEST_WORKERS or 1)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("changepoint", help="changepoint e-value or e-confidence region")
    _add_input(p)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--mode", choices=["evalue", "region"], default="region")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_changepoint)

    p = sub.add_parser("oracle", help="validate closed forms against enumeration")
    p.add_argument("--max-n", type=int, default=10)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SymbolError, LengthError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UsageError, ExchTestError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
