"""Command-line front end: ``discretegof {test,power,null-uniformity,fixtures}``.

Exit codes: 0 on success, 1 for usage errors, 2 for runtime errors.
Every output carries the seed, simulation counts, family and library
version needed to reproduce it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace

import numpy as np

from discretegof import __version__
from discretegof.datasets import FIXTURES, ParseError, fixture, load_counts
from discretegof.engine import exact_test, null_pvalue_distribution, uniformity_verdict, write_null_csv
from discretegof.families import FitError, Parameter, family_from_id, pad_counts
from discretegof.power import (
    CSV_COLUMNS,
    EXPERIMENTS,
    PowerConfig,
    catalog_experiment,
    minimal_m,
    power_at,
    power_rows,
)
from discretegof.rng import THREADS_ENV
from discretegof.statistics import ALL_STATISTICS, StatisticKind

DEFAULT_SIMS = 40_000
POWER_SIMS = 4_000
POWER_SIMS_FULL = 40_000

# fixture -> (family id, simulations used for the published levels, desk-scale count)
PRESETS = {
    "rutherford": ("poisson", 40_000, 40_000),
    "yeast": ("poisson:trunc", 4_000_000, 100_000),
    "rhesus": ("hw:9", 4_000_000, 100_000),
    "antigen": ("hw:4", 4_000_000, 400_000),
    "health": ("symmetry:5", 4_000_000, 400_000),
    "health-var1": ("symmetry:5", 4_000_000, 400_000),
    "health-var2": ("symmetry:5", 64_000_000, 400_000),
}

MINIMAL_M_COLUMNS = (
    "experiment_id", "statistic", "n", "t", "level", "required_fraction",
    "minimal_m", "exceeds_bound", "power", "sims",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _stats(text):
    try:
        kinds = [StatisticKind.parse(s.strip()) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not kinds:
        raise argparse.ArgumentTypeError("no statistics given")
    return tuple(dict.fromkeys(kinds))


def _add_common(p, sims_help):
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--sims", type=int, default=None, help=sims_help)
    p.add_argument("--stats", type=_stats, default=ALL_STATISTICS, help="comma-separated statistics: rms,chi2,g2,ft,nll")
    p.add_argument("--threads", type=int, default=None, help=f"worker threads (default from ${THREADS_ENV} or 1)")
    p.add_argument("--format", choices=("table", "json", "csv"), default="table", help="output format")
    p.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")


def _add_data(p, required=True):
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--fixture", choices=sorted(FIXTURES), help="embedded data set")
    src.add_argument("--data", help="count file (whitespace-separated integers or JSON)")
    p.add_argument("--data-format", choices=("text", "json"), default=None, help="count file format (guessed by default)")


def build_parser():
    parser = _Parser(prog="discretegof", description="Exact Monte-Carlo goodness-of-fit tests for discrete distributions.")
    parser.add_argument("--version", action="version", version=f"discretegof {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("test", help="significance levels of observed counts under a model family")
    _add_data(t)
    t.add_argument("--family", help="family id, e.g. poisson:trunc, hw:9, zipf:free (default: the fixture's preset)")
    _add_common(t, f"Monte-Carlo simulations (default {DEFAULT_SIMS:,}; with --preset, the published count)")
    t.add_argument("--preset", action="store_true", help="use the simulation count behind the published levels")
    t.add_argument("--desk", action="store_true", help="with --preset, use a reduced desk-scale count")
    t.add_argument("--dump-null", metavar="PATH", help="write every simulated statistic to a CSV file")

    pw = sub.add_parser("power", help="rejection fractions or minimal m for a catalog experiment")
    pw.add_argument("--experiment", required=True, help=f"experiment id ({', '.join(EXPERIMENTS)}) or its slug")
    pw.add_argument("--n", type=_int_list, default=None, help="comma-separated bin counts (n-indexed experiments)")
    pw.add_argument("--t", type=_float_list, default=None, help="comma-separated shape values (t-indexed experiments)")
    pw.add_argument("--m", type=_int_list, default=[200], help="comma-separated draws per data set (default 200)")
    pw.add_argument("--level", type=float, default=0.01, help="significance level: 0.01 or 0.05 for the 95%% protocol")
    pw.add_argument("--fraction", type=float, default=None, help="required rejection fraction (default 1 - level)")
    pw.add_argument("--find-m", action="store_true", help="search for the minimal distinguishing m")
    pw.add_argument("--m-min", type=int, default=10)
    pw.add_argument("--m-max", type=int, default=100_000)
    pw.add_argument("--full", action="store_true", help=f"{POWER_SIMS_FULL:,} simulations per side instead of {POWER_SIMS:,}")
    pw.add_argument("--exact", action="store_true", help="refit the null for every alternative data set (slow)")
    pw.add_argument("--calibration", type=int, default=1_000_000, help="draws used to fit the null parameter once")
    _add_common(pw, f"simulations per side (default {POWER_SIMS:,})")
    pw.set_defaults(format="csv")

    nu = sub.add_parser("null-uniformity", help="p-values of data drawn from the model itself, with a DKW verdict")
    nu.add_argument("--family", required=True, help="family id")
    nu.add_argument("--n", type=int, default=None, help="number of bins (when the id does not imply it)")
    nu.add_argument("--theta", type=_float_list, default=None, help="real parameter values (permutations default to the identity)")
    nu.add_argument("--m", type=int, required=True, help="draws per experiment")
    nu.add_argument("--outer", type=int, default=2000, help="number of experiments")
    nu.add_argument("--confidence", type=float, default=0.99, help="DKW band confidence")
    _add_common(nu, "simulations per experiment (default 2,000)")
    nu.set_defaults(format="csv")

    fx = sub.add_parser("fixtures", help="list the embedded data sets or print one")
    fx.add_argument("ident", nargs="?", help="fixture id to print")
    fx.add_argument("--format", choices=("table", "json", "csv"), default="table")
    fx.add_argument("--output", "-o", default=None)
    return parser


def _metadata(args, **extra):
    meta = {"tool": "discretegof", "version": __version__, "command": args.command}
    meta.update({k: v for k, v in extra.items() if v is not None})
    return meta


def _comment_block(meta):
    return "".join(f"# {k}={v}\n" for k, v in meta.items())


def _table(header, rows):
    cells = [list(map(str, header))] + [[_fmt(v) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _render(fmt, meta, header, rows, payload=None):
    if fmt == "json":
        body = dict(meta)
        body.update(payload if payload is not None else {"rows": [dict(zip(header, r)) for r in rows]})
        return json.dumps(body, indent=2, default=_json_default) + "\n"
    if fmt == "csv":
        return _comment_block(meta) + _csv(header, rows)
    return _comment_block(meta) + _table(header, rows)


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _load(args):
    if args.fixture:
        return fixture(args.fixture).counts, f"fixture:{args.fixture}"
    counts = np.asarray(load_counts(args.data, args.data_format))
    return counts.ravel(), f"file:{args.data}"


def cmd_test(args):
    counts, source = _load(args)
    preset = PRESETS.get(args.fixture) if args.fixture else None
    family_id = args.family or (preset[0] if preset else None)
    if family_id is None:
        raise UsageError("--family is required unless --fixture has a preset")
    if args.desk and not args.preset:
        raise UsageError("--desk only applies together with --preset")
    sims = args.sims
    if sims is None:
        if args.preset:
            if preset is None:
                raise UsageError("--preset needs a --fixture with a published simulation count")
            sims = preset[2] if args.desk else preset[1]
        else:
            sims = DEFAULT_SIMS
    family = family_from_id(family_id, counts.size)
    if family.n > counts.size:
        counts = pad_counts(counts, family.n)
    report = exact_test(counts, family, args.stats, sims=sims, seed=args.seed, workers=args.threads, keep_null=bool(args.dump_null))
    if args.dump_null:
        write_null_csv(report, args.dump_null)
    meta = _metadata(args, source=source, family=family_id, n=report.n, m=report.m, sims=sims, seed=args.seed)
    header = ("statistic", "observed", "significance", "confidence", "std_error", "simulations")
    rows = [(r.kind.value, r.observed, r.significance, r.confidence, r.std_error, r.simulations) for r in report.results.values()]
    if args.format != "json":
        fitted = json.dumps(report.fit.parameter.to_dict(), default=_json_default)
        meta["fitted_parameter"] = fitted
    return _render(args.format, meta, header, rows, payload={"report": report.to_dict()})


def _grid(exp, args):
    if exp.grid == "n":
        if args.t is not None:
            raise UsageError(f"experiment {exp.id} is indexed by n; use --n")
        return args.n or list(exp.default_grid)
    if args.n is not None:
        raise UsageError(f"experiment {exp.id} is indexed by t; use --t")
    return args.t or list(exp.default_grid)


def cmd_power(args):
    try:
        exp = catalog_experiment(args.experiment)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    if args.level not in (0.01, 0.05):
        print(f"note: level {args.level} is outside the 1% and 5% protocols", file=sys.stderr)
    fraction = 1.0 - args.level if args.fraction is None else args.fraction
    sims = args.sims or (POWER_SIMS_FULL if args.full else POWER_SIMS)
    rows, header = [], CSV_COLUMNS
    meta = _metadata(
        args, experiment=exp.id, description=exp.description, level=args.level,
        required_fraction=fraction, sims_alt=sims, sims_null=sims, seed=args.seed,
        fixed_theta_mode=not args.exact,
    )
    for value in _grid(exp, args):
        setup = exp.build(value)  # divisibility errors surface here
        meta.setdefault("family", setup.family.name)
        base = PowerConfig(
            setup.family, setup.actual, m=args.m[0], level=args.level, required_fraction=fraction,
            sims_alt=sims, sims_null=sims, fixed_theta_mode=not args.exact,
            calibration=args.calibration, stats=args.stats, seed=args.seed, workers=args.threads,
        )
        t = setup.t
        if args.find_m:
            header = MINIMAL_M_COLUMNS
            for k, res in minimal_m(base, (args.m_min, args.m_max)).items():
                rows.append({
                    "experiment_id": exp.id, "statistic": k.value, "n": setup.n, "t": "" if t is None else t,
                    "level": args.level, "required_fraction": fraction,
                    "minimal_m": "" if res.exceeds_bound else res.m, "exceeds_bound": res.exceeds_bound,
                    "power": "" if res.power is None else res.power, "sims": sims,
                })
        else:
            for m in args.m:
                rows.extend(power_rows(exp.id, power_at(replace(base, m=m)), t))
    table = [tuple(r[c] for c in header) for r in rows]
    return _render(args.format, meta, header, table)


def _null_parameter(family, theta):
    kind = family.param_kind
    ranks = np.arange(family.n) if kind in ("permutation", "composite") or getattr(family, "permute", False) else None
    if theta is None:
        if kind not in ("none", "permutation"):
            raise UsageError(f"{family.name} needs --theta")
        theta = []
    return Parameter(kind, np.asarray(theta, dtype=np.float64), ranks)


def cmd_null_uniformity(args):
    family = family_from_id(args.family, args.n)
    theta = _null_parameter(family, args.theta)
    inner = args.sims or 2000
    levels = null_pvalue_distribution(family, theta, args.m, args.outer, inner, seed=args.seed, stats=args.stats, workers=args.threads)
    verdicts = {k.value: uniformity_verdict(v, args.confidence) for k, v in levels.items()}
    meta = _metadata(args, family=args.family, n=family.n, m=args.m, outer=args.outer, sims=inner, seed=args.seed)
    if args.format == "table":
        header = ("statistic", "sup_distance", "band", "allowance", "verdict")
        rows = [(k, v.sup_distance, v.band, v.discreteness, v.label) for k, v in verdicts.items()]
        return _comment_block(meta) + _table(header, rows)
    kinds = [k.value for k in levels]
    cols = list(levels.values())
    rows = [(i, *(float(c[i]) for c in cols)) for i in range(args.outer)]
    if args.format == "json":
        payload = {
            "levels": {k: c.tolist() for k, c in zip(kinds, cols)},
            "verdicts": {k: {"sup_distance": v.sup_distance, "band": v.band, "allowance": v.discreteness, "verdict": v.label} for k, v in verdicts.items()},
        }
        return _render("json", meta, (), (), payload)
    for k, v in verdicts.items():
        meta[f"verdict_{k}"] = f"{v.label} sup={v.sup_distance:.4g} band={v.band:.4g}"
    return _render("csv", meta, ("run", *kinds), rows)


def cmd_fixtures(args):
    meta = _metadata(args)
    if args.ident is None:
        header = ("id", "shape", "n", "m", "provenance")
        rows = [(f.id, f.shape, f.n, f.m, f.provenance) for f in FIXTURES.values()]
        return _render(args.format, meta, header, rows)
    f = fixture(args.ident)
    meta.update(id=f.id, shape=f.shape, m=f.m, provenance=f.provenance)
    if args.format == "json":
        data = f.as_array().tolist() if f.shape == "square" else (list(map(list, f.table)) if f.table else f.counts.tolist())
        key = "bins" if f.shape == "bins" else "table"
        return _render("json", meta, (), (), {key: data})
    if f.shape == "bins":
        header, rows = ("bin", "count"), [(i + 1, int(c)) for i, c in enumerate(f.counts)]
    else:
        grid = f.as_array() if f.shape == "square" else f.table
        width = max(len(r) for r in grid)
        header = ("row", *range(1, width + 1))
        rows = [(i + 1, *map(int, r), *[""] * (width - len(r))) for i, r in enumerate(grid)]
    return _render(args.format, meta, header, rows)


COMMANDS = {
    "test": cmd_test,
    "power": cmd_power,
    "null-uniformity": cmd_null_uniformity,
    "fixtures": cmd_fixtures,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "threads", None) is not None and args.threads < 1:
            parser.error("--threads must be positive")
        if getattr(args, "sims", None) is not None and args.sims < 1:
            parser.error("--sims must be positive")
    except SystemExit as exc:  # usage errors and --help/--version
        return exc.code
    try:
        text = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"discretegof: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, FitError, ParseError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"discretegof: error: {msg}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
