# -*- coding: utf-8 -*-
"""
Command line interface.

    pyanthropic list
    pyanthropic run <entry|file> [--rule R] [--class C] [--param k=v]...
    pyanthropic check
    pyanthropic fermi --V 1 --samples 200000 --seed 1 [--factor p|f] [--emit-plot PATH]
    pyanthropic table marochnik [--regime few|many] [--f 0.1]

Global options go before the command: -v, --format text|csv, --config PATH.

Exit codes: 0 success, 1 internal error (or failed check), 2 invalid input.
"""

import argparse
import logging
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import polars as pl

from pyanthropic import catalog, fermi, settings
from pyanthropic.errors import AnthropicError, DomainError
from pyanthropic.inference import RULES, apply_rule
from pyanthropic.numerics import Magnitude, to_float
from pyanthropic.scenario_io import parse_number, read_scenario
from pyanthropic.settings import DEFAULTS

logger = logging.getLogger(__name__)

###############################################################################


def fmt_value(x, digits: Optional[int] = None) -> str:
    """
    Report a result: exact numbers as 'a/b (decimal)', Magnitudes as '10^k'
    when k is an integer, floats to the configured significant digits.
    """
    digits = DEFAULTS["report"]["significant_digits"] if digits is None else digits
    if isinstance(x, bool):
        return str(x)
    if isinstance(x, (int, Fraction)):
        return f"{x} ({float(x):.{digits}g})"
    if isinstance(x, Magnitude):
        if x.is_zero():
            return "0"
        k = round(x.log10)
        if abs(x.log10 - k) < 1e-9:
            return f"10^{k}"
        if abs(x.log10) < 300:
            return f"{x.to_float():.{digits}g}"
        return f"10^{x.log10:.{digits + 2}g}"
    if isinstance(x, float):
        return f"{x:.{digits}g}"
    if isinstance(x, tuple):
        return " ".join(s or "-" for s in x)
    return str(x)


def _print_table(header: Sequence[str], rows: list[Sequence], fmt: str):
    rows = [[str(v) for v in r] for r in rows]
    if fmt == "csv":
        df = pl.DataFrame(rows, schema=list(header), orient="row")
        sys.stdout.write(df.write_csv())
        return
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    for r in rows:
        print("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())


def parse_param(text: str) -> tuple[str, object]:
    """'k=v' with v a number literal, a yes/no flag or a plain string."""
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise DomainError(f"--param expects k=v, got '{text}'")
    if value.lower() in ("true", "yes"):
        return key, True
    if value.lower() in ("false", "no"):
        return key, False
    try:
        return key, parse_number(value)
    except DomainError:
        return key, value


###############################################################################


def cmd_list(args) -> int:
    rows = []
    for name, entry in catalog.CATALOG.items():
        params = " ".join(f"{k}={fmt_value(v, 4).split(' ')[0]}" for k, v in entry.params.items())
        rows.append((name, entry.quantity, params))
    _print_table(("entry", "quantity", "parameters"), rows, args.format)
    return 0


def _run_file(args, path: Path) -> int:
    doc = read_scenario(path)
    rule = args.rule or doc.rule
    class_name = args.class_name or doc.class_name
    if rule is None:
        raise DomainError("no rule given; use --rule or a 'rule' line in the document")
    if class_name is None:
        raise DomainError("no reference class given; use --class or a 'refclass' line")
    post = apply_rule(doc.scenario, rule, class_name, first_order=args.first_order)

    if args.format == "csv":
        rows = [("posterior", "", h, fmt_value(p)) for h, p in post.probs.items()]
        rows.extend(("prior", "", h, fmt_value(p)) for h, p in post.prior.items())
        for stage in post.ledger:
            rows.extend(("stage", stage.label, h, fmt_value(v)) for h, v in stage.multipliers.items())
        _print_table(("kind", "label", "hypothesis", "value"), rows, "csv")
        return 0

    s = doc.scenario
    print(f"scenario: {s.name}  rule: {rule}  class: {class_name}  mode: {post.mode}")
    for h, p in post.probs.items():
        value = p if post.mode == "exact" else post.magnitudes[h]
        print(f"P({h}) = {fmt_value(value)}")
    print("ledger:")
    print("  prior: " + " ".join(f"{h}={fmt_value(v)}" for h, v in post.prior.items()))
    for stage in post.ledger:
        mult = " ".join(f"{h}={fmt_value(v)}" for h, v in stage.multipliers.items())
        note = f"  [{stage.note}]" if stage.note else ""
        print(f"  {stage.label}: {mult}{note}")
    if len(s.names) == 2:
        a, b = s.names
        print(f"cumulative odds {a}:{b}")
        for label, odds in post.cumulative_odds(a, b):
            shown = fmt_value(odds) if odds is not None else f"undefined (P({b}) = 0)"
            print(f"  {label}: {shown}")
    return 0


def cmd_run(args) -> int:
    path = Path(args.target)
    if path.is_file():
        return _run_file(args, path)
    if args.target not in catalog.CATALOG:
        raise DomainError(f"'{args.target}' is neither a catalog entry nor a file")

    entry = catalog.CATALOG[args.target]
    overrides = dict(parse_param(p) for p in args.param)
    if args.rule is not None:
        overrides["rule"] = args.rule
    if args.class_name is not None:
        overrides["ref_class"] = args.class_name
    result = catalog.run_entry(args.target, **overrides)
    if args.format == "csv":
        _print_table(("entry", "quantity", "value"), [(entry.name, entry.quantity, fmt_value(result))], "csv")
    else:
        print(f"{entry.quantity} = {fmt_value(result)}")
    return 0


def cmd_check(args) -> int:
    outcomes = catalog.check_catalog()
    rows = []
    for o in outcomes:
        kwargs = " ".join(f"{k}={v}" for k, v in o.kwargs.items()) or "-"
        rows.append(
            (o.entry, kwargs, "PASS" if o.passed else "FAIL", fmt_value(o.got), fmt_value(o.expected), o.source)
        )
    _print_table(("entry", "parameters", "result", "got", "expected", "source"), rows, args.format)
    n_fail = sum(not o.passed for o in outcomes)
    if args.format == "text":
        print(f"{len(outcomes) - n_fail} passed, {n_fail} failed")
    return 0 if n_fail == 0 else 1


def cmd_fermi(args) -> int:
    prior = fermi.FermiPrior.from_settings()
    params = fermi.FermiParams(V=args.V)
    spec = fermi.FactorSpec.from_settings(parent=args.factor)
    samples = fermi.sample_posterior(
        prior, params, args.samples, args.seed, workers=args.workers, algorithm=args.algorithm
    )
    summary = fermi.summarize(samples)
    fp = fermi.factor_posterior(prior, spec, samples)
    lower, upper = fermi.posterior_interval(fp)

    rows = [
        ("V", f"{args.V:g}"),
        ("seed", str(args.seed)),
        ("accepted", str(samples.accepted_count)),
        ("proposals", str(samples.proposal_count)),
        ("acceptance_rate", f"{summary.acceptance_rate:.6g}"),
        ("mean10_p", f"{summary.mean10_p:.4f} +- {summary.mean10_p_se:.4f}"),
        ("sd10_p", f"{summary.sd10_p:.4f}"),
        ("mean10_f", f"{summary.mean10_f:.4f} +- {summary.mean10_f_se:.4f}"),
        ("sd10_f", f"{summary.sd10_f:.4f}"),
        (f"{args.factor}1 mean10", f"log10({10.0 ** fp.mean10:.4g})"),
        (f"{args.factor}1 sd10", f"{fp.sd10:.4g}"),
        (f"{args.factor}1 interval", f"{lower:.3g} to {upper:.3g}"),
        (f"{args.factor}1 mean", f"{fp.mean_value:.4g} +- {fp.mean_value_se:.2g}"),
    ]
    if args.V == 0:
        fa = fermi.factor_posterior_analytic(prior, spec)
        rows.append(
            (
                f"{args.factor}1 analytic",
                f"mean10 = log10({10.0 ** fa.mean10:.4g}), sd10 = {fa.sd10:.4g}, mean = {fa.mean_value:.4g}",
            )
        )
    if args.emit_plot is not None:
        out = fermi.write_plot_csv(fermi.emit_plot_points(samples), args.emit_plot)
        logger.info("plot data written to %s", out)
    if args.format == "csv":
        _print_table(("quantity", "value"), rows, "csv")
    else:
        for key, value in rows:
            print(f"{key}: {value}")
    return 0


def cmd_table(args) -> int:
    if not (math.isfinite(args.f) and 0 < args.f <= 1):
        raise DomainError(f"--f must be in (0, 1], got {args.f}")
    regimes = [args.regime] if args.regime else list(catalog.MAROCHNIK_REGIMES)
    combos = [(rule, cls) for cls in ("own", "combined") for rule in ("ssa", "ssa+sia")]
    for regime in regimes:
        header, columns = ["stage"], []
        for rule, cls in combos:
            table = catalog.marochnik_table(regime, rule, cls, args.f)
            for observer in ("planet", "star"):
                header.append(f"{rule}/{cls}/{observer}")
                columns.append(table[observer])
        rows = []
        for i, stage in enumerate(catalog.MAROCHNIK_ROWS):
            cells = []
            for col in columns:
                odds = col.odds[i]
                cells.append("-" if odds is None else f"{col.symbols[i]} ({to_float(odds):.4g})")
            rows.append([stage, *cells])
        if args.format == "text":
            print(f"regime: {regime}, f = {args.f:g}")
        else:
            header = ["regime", *header]
            rows = [[regime, *r] for r in rows]
        _print_table(header, rows, args.format)
    return 0


###############################################################################


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pyanthropic", description="Posterior beliefs under observer-selection update rules."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")
    parser.add_argument("--format", choices=("text", "csv"), default="text")
    parser.add_argument(
        "--config", type=Path, metavar="PATH", help="TOML file overlaid on the packaged settings"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="list catalog entries")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("run", help="run a catalog entry or a scenario document")
    p.add_argument("target", help="catalog entry name or path to a scenario document")
    p.add_argument("--rule", choices=RULES)
    p.add_argument("--class", dest="class_name", metavar="NAME")
    p.add_argument("--param", action="append", default=[], metavar="K=V")
    p.add_argument("--first-order", action="store_true", help="FNC likelihood eps*|C|")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="compare every catalog entry with its expected results")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fermi", help="sample the Fermi interference posterior")
    p.add_argument("--V", type=float, required=True)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--factor", choices=("p", "f"), default="p")
    p.add_argument("--emit-plot", type=Path, metavar="PATH")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--algorithm", choices=("philox", "pcg64"), default="philox")
    p.set_defaults(func=cmd_fermi)

    p = sub.add_parser("table", help="print a table of worked odds")
    p.add_argument("which", choices=("marochnik",))
    p.add_argument("--regime", choices=tuple(catalog.MAROCHNIK_REGIMES))
    p.add_argument("--f", type=float, default=0.1)
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        settings.use_settings(args.config)
        return args.func(args)
    except AnthropicError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.debug("internal error", exc_info=True)
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
