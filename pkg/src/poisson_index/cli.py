"""Command-line interface.

Subcommands: ``index``, ``pvalue``, ``duality``, ``tables``, ``figures``,
``selftest``.  Exit status is 0 on success, 2 for invalid input (including
an improper posterior) and 1 for numerical failures or failed checks.
"""

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from .conditional_test import check_duality, grid_compare, p_value, p_value_expressions
from .index import ComparisonQuery, index
from .mc_oracle import DEFAULT_SEED
from .model import ImproperPosteriorError, Observation, parse_prior, posterior
from .selftest import run_all
from .special_functions import ConvergenceError
from .tables import TABLE_TOLERANCE, reproduce_tables

SEED_ENV = "POISSON_SUP_SEED"
FIGURE_HEADER = ("k1", "k2", "rate_diff", "theta", "one_minus_p", "theta_shifted")
DEFAULT_GRIDS = (10, 20, 50, 100)


class UsageError(ValueError):
    pass


def _fmt(v):
    return v if isinstance(v, str) else repr(float(v)) if isinstance(v, float) else str(v)


def _write_csv(rows, out):
    writer = csv.writer(out, lineterminator="\n")
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def _emit(data, fmt, out, plain_lines):
    if fmt == "json":
        json.dump(data, out, indent=2)
        out.write("\n")
    elif fmt == "csv":
        _write_csv([("field", "value")] + _flatten(data), out)
    else:
        for line in plain_lines:
            out.write(line + "\n")


def _flatten(data, prefix=""):
    rows = []
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            rows.extend(_flatten(value, name + "."))
        else:
            rows.append((name, value))
    return rows


def _arms(args):
    return Observation(args.k1, args.n1), Observation(args.k2, args.n2)


def _query(args):
    return ComparisonQuery(args.direction, args.ratio)


def cmd_index(args, out):
    obs1, obs2 = _arms(args)
    prior1 = parse_prior(args.prior1 or args.prior)
    prior2 = parse_prior(args.prior2 or args.prior)
    report = index(posterior(prior1, obs1), posterior(prior2, obs2), _query(args))
    data = report.to_dict()
    sign = "<" if report.query.direction.value == "less" else ">"
    lines = [
        f"theta = P(lam1/lam2 {sign} {report.query.threshold:g} | data) = {report.theta:.6f}",
        f"posterior 1: Ga({report.posterior1.a:g}, {report.posterior1.b:g})",
        f"posterior 2: Ga({report.posterior2.a:g}, {report.posterior2.b:g})",
    ]
    for name, value in report.by_expression.items():
        lines.append(f"  {name:<18} {value if isinstance(value, str) else format(value, '.15f')}")
    lines.append(f"max disagreement: {report.max_disagreement:.3e}")
    _emit(data, args.format, out, lines)
    return 0


def cmd_pvalue(args, out):
    obs1, obs2 = _arms(args)
    query = _query(args)
    result = p_value(obs1, obs2, query)
    data = result.to_dict()
    lines = [
        f"p = {result.p_value:.6f}",
        f"conditioning total: {result.conditioning_total}",
        f"success probability: {result.success_prob:.10g}",
    ]
    if args.expressions:
        fav = obs2.k if query.direction.value == "less" else obs1.k
        if fav > 0:
            forms = p_value_expressions(obs1, obs2, query)
            data["by_expression"] = forms
            lines += [f"  {k:<18} {v:.15f}" for k, v in forms.items()]
    _emit(data, args.format, out, lines)
    return 0


def cmd_duality(args, out):
    obs1, obs2 = _arms(args)
    if obs2.k == 0:
        raise UsageError("duality requires k2 > 0")
    chk = check_duality(obs1, obs2, args.ratio)
    lines = [
        f"theta (k1+1, k2) = {chk.theta_shifted:.15f}",
        f"1 - p (k1, k2)   = {chk.one_minus_p:.15f}",
        f"gap              = {chk.gap:.3e}",
    ]
    _emit(chk.to_dict(), args.format, out, lines)
    return 0


def cmd_tables(args, out):
    entries = reproduce_tables()
    ok = all(e.ok for e in entries)
    if args.format == "json":
        json.dump({"entries": [e.to_dict() for e in entries], "tolerance": TABLE_TOLERANCE, "ok": ok},
                  out, indent=2)
        out.write("\n")
    elif args.format == "csv":
        _write_csv([("table", "quantity", "published", "computed", "gap", "ok")]
                   + [(e.table, e.quantity, e.published, e.computed, e.gap, e.ok) for e in entries], out)
    else:
        out.write(f"{'table':<6}{'quantity':<30}{'published':>10}{'computed':>12}{'gap':>11}\n")
        for e in entries:
            flag = "" if e.ok else "  MISMATCH"
            out.write(f"{e.table:<6}{e.quantity:<30}{e.published:>10.3f}{e.computed:>12.6f}"
                      f"{e.gap:>11.2e}{flag}\n")
    return 0 if ok else 1


def figure_paths(out_dir, n1, n2, c):
    stem = f"n1-{n1:g}_n2-{n2:g}_c-{c:g}"
    return [Path(out_dir) / f"figure{i}_{stem}.csv" for i in (1, 2, 3)]


def write_grid_csv(records, path):
    buf = io.StringIO()
    _write_csv([FIGURE_HEADER] + [tuple(r) for r in records], buf)
    try:
        with open(path, "w", newline="", encoding="ascii") as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def cmd_figures(args, out):
    if (args.n1 is None) != (args.n2 is None):
        raise UsageError("give both --n1 and --n2, or neither for the default grids")
    grids = [(args.n1, args.n2)] if args.n1 is not None else [(n, n) for n in DEFAULT_GRIDS]
    Path(args.out).mkdir(parents=True, exist_ok=True)
    for n1, n2 in grids:
        records = grid_compare(n1, n2, args.ratio, workers=args.workers)
        for path in figure_paths(args.out, n1, n2, args.ratio):
            write_grid_csv(records, path)
            out.write(f"wrote {path} ({len(records)} rows)\n")
    return 0


def cmd_selftest(args, out):
    results = run_all(args.draws, args.seed, perturb=args.perturb_duality)
    if args.format == "json":
        json.dump([r.to_dict() for r in results], out, indent=2)
        out.write("\n")
    else:
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            extra = f" ({r.detail})" if r.detail else ""
            out.write(f"{status} {r.name}: worst {r.worst:.3e} vs bound {r.bound:.1e} "
                      f"over {r.cases} cases{extra}\n")
    return 0 if all(r.passed for r in results) else 1


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _add_arms(p):
    p.add_argument("--k1", type=int, required=True, help="events in arm 1")
    p.add_argument("--n1", type=float, required=True, help="exposure of arm 1")
    p.add_argument("--k2", type=int, required=True, help="events in arm 2")
    p.add_argument("--n2", type=float, required=True, help="exposure of arm 2")


def _add_query(p):
    p.add_argument("--direction", choices=("less", "greater"), default="less")
    p.add_argument("--ratio", type=float, default=1.0, help="rate-ratio threshold c")


def _add_format(p):
    p.add_argument("--format", choices=("plain", "json", "csv"), default="plain")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="poisson-index",
        description="Bayesian index and conditional exact test for two Poisson rates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="Bayesian index P(lam1/lam2 < c | data)")
    _add_arms(p)
    _add_query(p)
    p.add_argument("--prior", default="noninformative",
                   help="noninformative | jeffreys | gamma:ALPHA,BETA | power:X0,M,A")
    p.add_argument("--prior1", help="override the prior of arm 1")
    p.add_argument("--prior2", help="override the prior of arm 2")
    _add_format(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("pvalue", help="one-sided conditional test p-value")
    _add_arms(p)
    _add_query(p)
    p.add_argument("--expressions", action="store_true", help="also print every closed form")
    _add_format(p)
    p.set_defaults(func=cmd_pvalue)

    p = sub.add_parser("duality", help="compare theta(k1+1, k2) with 1 - p(k1, k2)")
    _add_arms(p)
    p.add_argument("--ratio", type=float, default=1.0)
    _add_format(p)
    p.set_defaults(func=cmd_duality)

    p = sub.add_parser("tables", help="recompute the published tables")
    _add_format(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("figures", help="write the grid comparison CSVs")
    p.add_argument("--n1", type=float)
    p.add_argument("--n2", type=float)
    p.add_argument("--ratio", type=float, default=1.0)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("selftest", help="run the invariant suites")
    p.add_argument("--draws", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--perturb-duality", type=float, default=0.0, help=argparse.SUPPRESS)
    _add_format(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        return args.func(args, out)
    except ImproperPosteriorError as exc:
        print(f"error: improper posterior: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, ArithmeticError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MemoryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
