"""Command-line entry point.

::

    holoball suite list
    holoball suite run <name> --config <path> --out <path> [--csv <path>] [--seed N] [--jobs N]
    holoball gallery list

Exit statuses: 0 pass (or negative control confirmed), 1 assertion failure
(the report is still written), 2 usage or configuration error.
"""

import argparse
import sys

from .config import ConfigError, load_file
from .gallery import list_gallery
from .report import table_csv
from .suites import REGISTRY, list_suites, make_config, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="holoball", description="Boundary open-mapping verification suites.")
    top = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    suite = top.add_parser("suite", help="list or run verification suites")
    sub = suite.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sub.add_parser("list", help="list registered suites")
    run = sub.add_parser("run", help="run one suite")
    run.add_argument("name", help="suite name (see 'suite list')")
    run.add_argument("--config", required=True, help="flat key = value config file")
    run.add_argument("--out", required=True, help="JSON report path")
    run.add_argument("--csv", help="per-sample table path")
    run.add_argument("--seed", type=int, help="override the config seed")
    run.add_argument("--jobs", type=int, default=1, help="worker threads (default 1)")

    gallery = top.add_parser("gallery", help="list gallery maps")
    gsub = gallery.add_subparsers(dest="action", required=True, parser_class=_Parser)
    gsub.add_parser("list", help="list map ids")
    return parser


def _suite_list(out):
    for entry in list_suites():
        out.write(f"{entry['name']}\t{entry['anchor']}\n    {entry['description']}\n")
    return EXIT_PASS


def _gallery_list(out):
    for gid, desc in list_gallery().items():
        out.write(f"{gid}\t{desc}\n")
    return EXIT_PASS


def _suite_run(args, out, err):
    if args.name not in REGISTRY:
        err.write(f"holoball: unknown suite {args.name!r}; try 'holoball suite list'\n")
        return EXIT_USAGE
    if args.jobs < 1:
        err.write("holoball: --jobs must be at least 1\n")
        return EXIT_USAGE
    try:
        cfg = make_config(args.name, load_file(args.config), seed=args.seed)
    except ConfigError as exc:
        err.write(f"holoball: config error: {exc}\n")
        return EXIT_USAGE
    record = run_suite(args.name, cfg, jobs=args.jobs)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(record.to_json())
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(table_csv(record.table))
    for a in record.assertions:
        out.write(f"[{'PASS' if a.verdict else 'FAIL'}] {a.name}\n")
    out.write(f"{args.name}: {record.verdict} ({record.mode}, {record.duration:.2f} s)\n")
    return record.status


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if args.group == "gallery":
        return _gallery_list(out)
    if args.action == "list":
        return _suite_list(out)
    return _suite_run(args, out, err)


if __name__ == "__main__":
    sys.exit(main())
