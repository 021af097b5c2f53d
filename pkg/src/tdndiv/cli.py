"""Command-line interface.

Exit codes: 0 on success, 1 for runtime and data errors, 2 for usage
errors (bad flags, invalid simulation specs).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from tdndiv import __version__
from tdndiv.errors import InvalidSpec, TdnError
from tdndiv.freqtable import Mode
from tdndiv.ingest import IngestConfig, OnMalformed, dump_table, ingest_path, load_table, save_table
from tdndiv.report import (
    DEFAULT_FRACTIONS,
    METRIC_FIELDS,
    build_report,
    load_report,
    pooled_observations,
    to_csv,
    to_json,
    to_table,
)
from tdndiv.simulate import Model, PopulationSpec, generate
from tdndiv.stats import correlate_metric_vs_richness

log = logging.getLogger("tdndiv")

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2

_MALFORMED = {"skip": OnMalformed.SKIP_AND_COUNT, "abort": OnMalformed.ABORT}


def _fractions(text: str) -> list[Fraction]:
    try:
        fracs = [Fraction(part.strip()) for part in text.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a list of fractions: {text!r}") from None
    if not fracs:
        raise argparse.ArgumentTypeError("at least one fraction is required")
    for f in fracs:
        if not 0 < f <= 1:
            raise argparse.ArgumentTypeError(f"fraction {f} outside (0, 1]")
    if len(set(fracs)) != len(fracs):
        raise argparse.ArgumentTypeError(f"duplicate fractions in {text!r}")
    return fracs


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="")


def cmd_ingest(args) -> int:
    cfg = IngestConfig(args.id_path, _MALFORMED[args.on_malformed])
    rep = ingest_path(args.input, cfg, workers=args.workers)
    save_table(rep.table, args.out)
    print(
        f"records_read={rep.records_read} records_counted={rep.records_counted} "
        f"records_skipped={rep.records_skipped} contributors={rep.table.richness}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_analyze(args) -> int:
    table = load_table(args.freq)
    name = args.name if args.name is not None else Path(args.freq).stem
    report = build_report(table, args.fractions, Mode(args.mode), name)
    render = {"json": to_json, "csv": to_csv, "table": to_table}[args.format]
    _write(render(report), args.out)
    return EXIT_OK


def cmd_correlate(args) -> int:
    reports = [load_report(Path(p).read_text(encoding="utf-8")) for p in args.reports]
    obs = pooled_observations(reports, args.y)
    res = correlate_metric_vs_richness(obs)
    out = {"x": args.x, "y": args.y, **res.as_dict()}
    _write(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        spec = PopulationSpec(args.model, args.richness, args.individuals, args.param, args.seed)
    except InvalidSpec as exc:
        print(f"tdndiv simulate: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    table = generate(spec)
    if args.out in (None, "-"):
        dump_table(table, sys.stdout)
    else:
        save_table(table, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tdndiv",
        description="Diversity and evenness metrics for contributor frequency distributions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log debug output to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="count contributions per contributor in a JSON-lines archive")
    p.add_argument("--input", required=True, help="JSON-lines file, optionally gzip-compressed")
    p.add_argument("--id-path", required=True, help="dotted path to the contributor id, e.g. user.id_str")
    p.add_argument("--on-malformed", choices=sorted(_MALFORMED), default="skip")
    p.add_argument("--workers", type=int, default=1, help="worker processes (default: 1)")
    p.add_argument("--out", required=True, help="frequency CSV to write")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("analyze", help="metric suite per subsample fraction")
    p.add_argument("--freq", required=True, help="frequency CSV")
    p.add_argument(
        "--fractions",
        type=_fractions,
        default=list(DEFAULT_FRACTIONS),
        help="comma-separated top-contributor fractions (default: 1.0,0.2,0.1)",
    )
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.TRUNCATED.value)
    p.add_argument("--format", choices=("json", "csv", "table"), default="json")
    p.add_argument("--name", help="dataset name (default: file stem)")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("correlate", help="Pearson r of a metric against richness across reports")
    p.add_argument("--reports", nargs="+", required=True, help="JSON reports from analyze")
    p.add_argument("--x", choices=("richness",), default="richness")
    p.add_argument("--y", choices=METRIC_FIELDS, required=True)
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("simulate", help="write a seeded synthetic frequency table")
    p.add_argument("--model", choices=[m.value for m in Model], required=True)
    p.add_argument("--richness", type=int, required=True)
    p.add_argument("--individuals", type=int, required=True)
    p.add_argument("--param", type=float, help="geometric ratio, Zipf exponent or lognormal sigma")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="frequency CSV to write (default: stdout)")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (TdnError, OSError, ValueError) as exc:
        print(f"tdndiv {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
