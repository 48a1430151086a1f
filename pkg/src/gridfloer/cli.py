"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 a computed result broke an
expected identity (the engine, not the input, is at fault).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from .braid import BraidWord, parse_braid
from .complex import FLAVOR_NAMES, TILDE
from .errors import GridFloerError, SizeLimitExceeded
from .filtration import axis_report
from .grid import from_braid, load_grid, validate, with_axis
from .homology import Window, homology_ranks, parse_window
from .invariants import theta_report

EXIT_OK, EXIT_USAGE, EXIT_CONTRACT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    max_grid: int = 9
    window: Optional[Window] = None
    flavor: str = TILDE
    workers: int = 1
    fmt: str = "json"
    timing: bool = False

    def __post_init__(self):
        if self.max_grid < 2:
            raise UsageError("--max-grid must be at least 2")
        if self.workers < 1:
            raise UsageError("--workers must be positive")
        if self.fmt not in ("json", "text"):
            raise UsageError("--format must be json or text")


def _check_size(size: int, cfg: RunConfig):
    if size > cfg.max_grid:
        raise SizeLimitExceeded(f"grid size {size} exceeds --max-grid {cfg.max_grid}")


def _emit(obj: dict, cfg: RunConfig, out):
    if cfg.fmt == "json":
        out.write(json.dumps(obj, sort_keys=True) + "\n")
    else:
        for key in sorted(obj):
            out.write(f"{key}: {obj[key]}\n")


def theta_json(b: BraidWord, cfg: RunConfig):
    G = from_braid(b)
    _check_size(G.size, cfg)
    rep = theta_report(b, G)
    ok = rep.minus_nonzero and rep.identities_hold and all(rep.is_cycle.values())
    return rep.to_json(cfg.timing), ok


def axis_json(b: BraidWord, cfg: RunConfig):
    _check_size(with_axis(b).size, cfg)
    rep = axis_report(b)
    return rep, rep["ok"]


def cmd_theta(word: str, cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    obj, ok = theta_json(parse_braid(word), cfg)
    _emit(obj, cfg, out)
    return EXIT_OK if ok else EXIT_CONTRACT


def cmd_axis(word: str, cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    obj, ok = axis_json(parse_braid(word), cfg)
    _emit(obj, cfg, out)
    return EXIT_OK if ok else EXIT_CONTRACT


def cmd_homology(path: str, cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    G = load_grid(path)
    validate(G)
    _check_size(G.size, cfg)
    table = homology_ranks(G, cfg.flavor, cfg.window, cfg.workers)
    if cfg.fmt == "json":
        out.write(json.dumps(table.to_json(), sort_keys=True) + "\n")
    else:
        for row in table.to_json()["ranks"]:
            out.write(f"A={row['A']} M={row['M']} rank={row['rank']}\n")
    return EXIT_OK


def cmd_batch(path: str, cfg: RunConfig, out=None) -> int:
    """One JSON line per braid word; per-line failures become error records."""
    out = out or sys.stdout
    with open(path) as fh:
        lines = [ln.strip() for ln in fh]
    for ln in lines:
        if not ln or ln.startswith("#"):
            continue
        try:
            obj, ok = theta_json(parse_braid(ln), cfg)
            obj["contract_ok"] = ok
        except GridFloerError as exc:
            obj = {"input": ln, "error": type(exc).__name__, "message": str(exc)}
        out.write(json.dumps(obj, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gridfloer", description="Grid homology of braid closures.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--flavor", choices=FLAVOR_NAMES, default=TILDE)
    common.add_argument("--window", help="A_min:A_max,M_min:M_max")
    common.add_argument("--max-grid", type=int, default=9)
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--timing", action="store_true",
                        help="include wall-clock timings (output is then not reproducible)")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sub.add_parser("theta", parents=[common], help="report on the theta class").add_argument("word")
    sub.add_parser("axis", parents=[common], help="bottom filtration level report").add_argument("word")
    sub.add_parser("homology", parents=[common], help="rank table of a grid file").add_argument("grid_file")
    sub.add_parser("batch", parents=[common], help="theta reports, one per line").add_argument("file")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            max_grid=args.max_grid,
            window=parse_window(args.window) if args.window else None,
            flavor=args.flavor,
            workers=args.workers,
            fmt=args.format,
            timing=args.timing,
        )
        if args.cmd == "theta":
            return cmd_theta(args.word, cfg)
        if args.cmd == "axis":
            return cmd_axis(args.word, cfg)
        if args.cmd == "homology":
            return cmd_homology(args.grid_file, cfg)
        return cmd_batch(args.file, cfg)
    except (UsageError, GridFloerError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
