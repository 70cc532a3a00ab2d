"""Command-line driver for the verification suites.

Exit codes: 0 all checks pass, 1 some check failed, 2 input error,
3 resource limit (the report written so far is kept).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Iterable, TextIO

import yaml

from .arcjet import ResourceLimit
from .liedata import PresentationError
from .suites import SUITES, InputError, SuiteConfig, run_items
from .vacore import CheckRecord

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

log = logging.getLogger("vertexdescent")


def _window(text: str) -> tuple[int, int]:
    """'3' -> (-3, 3); 'LO:HI' -> (LO, HI)."""
    try:
        if ":" in text:
            lo, hi = (int(x) for x in text.split(":"))
        else:
            hi = int(text)
            lo = -hi
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be N or LO:HI, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty window {text!r}")
    return lo, hi


def _assignment(text: str) -> tuple[str, str]:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected VAR=VALUE, got {text!r}")
    return name.strip(), value.strip()


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lie", help="Lie algebra presentation (.lie)")
    p.add_argument("--aut", help="finite-order automorphism (.aut)")
    p.add_argument("--level", default="1", help="level l (default 1)")
    p.add_argument("--ring", default="S2", help="commutative vertex ring R or S<m> (default S2)")
    p.add_argument("--degree", type=int, default=3, help="degree bound (default 3)")
    p.add_argument("--window", type=_window, default=(-3, 3), help="mode window N or LO:HI (default 3)")
    p.add_argument("--exponents", type=_window, default=(-2, 2),
                   help="exponent window of loop slices (default -2:2)")
    p.add_argument("--order", type=int, default=None, help="truncation order N (default: file, else 2)")
    p.add_argument("--conductor", type=int, default=None,
                   help="ambient conductor (default: lcm of automorphism orders)")
    p.add_argument("--cocycle", help="cocycle file (.coc) for descent")
    p.add_argument("--map", dest="maps", action="append", default=[], help="loop map file (.map), repeatable")
    p.add_argument("--jet", help="jet presentation (.jet)")
    p.add_argument("--image", type=_assignment, action="append", default=[],
                   help="VAR=LAURENT image for adjunction_extend, repeatable")
    p.add_argument("--base-map", default=None, help="image of t for adjunction_extend (default t)")
    p.add_argument("--report", help="also write JSON-lines records to this path")
    p.add_argument("--format", choices=("text", "records"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vertexdescent", description="Exact checks for vertex algebras over "
                                     "differential rings, loop algebras, descent and arc algebras.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a named suite")
    v.add_argument("suite", choices=sorted(SUITES))
    _common(v)
    for name in ("loop", "descent", "arc", "pullback"):
        _common(sub.add_parser(name, help=f"shorthand for 'verify {name}'"))
    r = sub.add_parser("report", help="summarize a JSON-lines report")
    r.add_argument("path")
    r.add_argument("--format", choices=("text", "records"), default="text")
    return parser


def config_from_args(args: argparse.Namespace) -> SuiteConfig:
    suite = args.suite if args.command == "verify" else args.command
    return SuiteConfig(
        suite=suite, lie=args.lie, aut=args.aut, cocycle=args.cocycle, jet=args.jet, maps=list(args.maps),
        ring=args.ring, level=args.level, degree=args.degree, window=args.window, exponents=args.exponents,
        order=args.order, conductor=args.conductor, image=dict(args.image), base_map=args.base_map,
    )


class Reporter:
    """Serializes records to stdout (text or records) and optionally to a JSON-lines file."""

    def __init__(self, fmt: str, out: TextIO, report: TextIO | None = None):
        self.fmt = fmt
        self.out = out
        self.report = report
        self.total = 0
        self.failed = 0

    def emit(self, item: CheckRecord | str) -> None:
        if isinstance(item, str):
            if self.fmt == "text":
                print(item, file=self.out)
            return
        self.total += 1
        self.failed += not item.passed
        print(item.to_text() if self.fmt == "text" else item.to_json(), file=self.out)
        if self.report:
            print(item.to_json(), file=self.report)
            self.report.flush()

    def summary(self, status: str = "") -> None:
        if self.fmt == "text":
            extra = f" ({status})" if status else ""
            print(f"{self.total - self.failed}/{self.total} checks passed{extra}", file=self.out)


def run_suite(cfg: SuiteConfig, fmt: str = "text", out: TextIO | None = None,
              report_path: str | None = None) -> int:
    out = out or sys.stdout
    report = open(report_path, "w") if report_path else None
    rep = Reporter(fmt, out, report)
    try:
        for item in run_items(cfg):
            rep.emit(item)
    except ResourceLimit as exc:
        rep.summary("stopped")
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InputError, PresentationError, FileNotFoundError, yaml.YAMLError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        if report:
            report.close()
    rep.summary()
    return EXIT_FAIL if rep.failed else EXIT_PASS


def read_records(lines: Iterable[str]) -> list[CheckRecord]:
    out = []
    for k, line in enumerate(lines, 1):
        if line.strip():
            try:
                out.append(CheckRecord.from_json(line))
            except (json.JSONDecodeError, TypeError) as exc:
                raise InputError(f"line {k}: not a check record ({exc})") from None
    return out


def summarize(path: str, fmt: str = "text", out: TextIO | None = None) -> int:
    out = out or sys.stdout
    try:
        with open(path) as fh:
            records = read_records(fh)
    except (OSError, InputError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rep = Reporter(fmt, out)
    for r in records:
        rep.emit(r)
    rep.summary()
    return EXIT_FAIL if rep.failed else EXIT_PASS


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "report":
        return summarize(args.path, args.format)
    try:
        cfg = config_from_args(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run_suite(cfg, args.format, report_path=args.report)


if __name__ == "__main__":
    sys.exit(main())
