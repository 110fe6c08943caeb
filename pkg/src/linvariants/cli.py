"""Command line driver.  All input and output is JSON.

    linvariants compute --config run.json [--output report.json]
    linvariants verify  --config run.json [--group NAME ...] [--no-stability]
    linvariants explore tree|graph|cocycles --config run.json [--depth D]

Exit codes: 0 when every invariant checked during the run held, 1 when some
invariant failed, 2 for invalid input or a module error.  The environment
variable LINVARIANTS_THREADS is accepted for compatibility; the computation
itself is serial.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .linv import LInvariantError
from .padic import PrecisionError
from .pipeline import cocycles_dump, compute, graph_dump, tree_dump
from .schottky import SchottkyError
from .verify import GROUPS, run_suite

_HINTS = {
    PrecisionError: "raise N (working precision) or lower the depth",
    LInvariantError: "raise N or the depth D",
    SchottkyError: "check the generators or the fixture file",
    ConfigError: "fix the configuration file",
}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(obj, path=None):
    text = dumps(obj)
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _error(exc: Exception, operation: str) -> int:
    mod = type(exc).__module__.rsplit(".", 1)[-1]
    hint = next((h for cls, h in _HINTS.items() if isinstance(exc, cls)), "raise N or D")
    _emit({"error": str(exc), "type": type(exc).__name__, "module": mod, "operation": operation, "hint": hint})
    return 2


def cmd_compute(args) -> int:
    cfg = load_config(args.config)
    report = compute(cfg)
    _emit(report, args.output or (str(Path(cfg.base_dir) / cfg.output) if cfg.output else None))
    return 0 if report["ok"] else 1


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    groups = tuple(args.group) if args.group else GROUPS
    unknown = [g for g in groups if g not in GROUPS]
    if unknown:
        raise ConfigError(f"unknown verification group(s) {unknown}; choose from {list(GROUPS)}")
    report = run_suite(cfg, groups, seed=args.seed, stability=not args.no_stability)
    summary = {name: f"{g['passed']}/{g['total']}" for name, g in report["groups"].items()}
    report["summary"] = summary
    _emit(report, args.output)
    return 0 if report["ok"] else 1


def cmd_explore(args) -> int:
    cfg = load_config(args.config)
    if args.what == "tree":
        out = tree_dump(cfg, args.depth if args.depth is not None else 1)
    elif args.what == "graph":
        out = graph_dump(cfg)
    else:
        if args.depth is not None:
            cfg = cfg.with_changes(depth=args.depth)
        out = cocycles_dump(cfg)
    _emit(out, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="linvariants", description="L-invariants from harmonic cocycles and monodromy modules")
    sub = ap.add_subparsers(dest="command", required=True)
    c = sub.add_parser("compute", help="run the pipeline and write the L-invariant report")
    c.add_argument("--config", required=True)
    c.add_argument("--output", help="report path (default: the config's output field, else stdout)")
    c.set_defaults(func=cmd_compute)
    v = sub.add_parser("verify", help="run the verification suite")
    v.add_argument("--config", required=True)
    v.add_argument("--group", action="append", help=f"restrict to a group (repeatable): {', '.join(GROUPS)}")
    v.add_argument("--no-stability", action="store_true", help="skip the (N+4, D+2) recomputation")
    v.add_argument("--seed", type=int, default=0, help="seed for the random evaluation points")
    v.add_argument("--output")
    v.set_defaults(func=cmd_verify)
    e = sub.add_parser("explore", help="dump the tree covering, the quotient graph or the harmonic basis")
    e.add_argument("what", choices=["tree", "graph", "cocycles"])
    e.add_argument("--config", required=True)
    e.add_argument("--depth", type=int)
    e.add_argument("--output")
    e.set_defaults(func=cmd_explore)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, SchottkyError, LInvariantError, PrecisionError, ArithmeticError, ValueError, OSError) as exc:
        return _error(exc, args.command)


if __name__ == "__main__":
    sys.exit(main())
