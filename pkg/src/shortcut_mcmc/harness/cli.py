"""Command line entry point: ``run``, ``reproduce`` and ``list-presets``."""

from __future__ import annotations

import argparse
import json
import sys

from .config import ConfigError, load_config
from .experiment import reproduce, run_experiment
from .output import OutputError
from .presets import DEFAULT_SEED, method_labels, preset_names


def _error(kind: str, message: str, field: str | None = None) -> int:
    err = {"error": kind, "message": message}
    if field is not None:
        err["field"] = field
    print(json.dumps(err), file=sys.stderr)
    return 2 if kind == "config" else 1


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shortcut-mcmc")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run one experiment from a JSON config")
    r.add_argument("--config", required=True)
    r.add_argument("--out-dir", default=".")
    r.add_argument("--scale", type=float, default=None)
    r.add_argument("--seed", type=int, default=None)
    rp = sub.add_parser("reproduce", help="run every method of a preset")
    rp.add_argument("--preset", required=True)
    rp.add_argument("--scale", type=float, default=0.1)
    rp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    rp.add_argument("--out-dir", default=".")
    sub.add_parser("list-presets", help="list presets and their methods")
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "list-presets":
            for name in preset_names():
                print(name)
                for method, label in method_labels(name).items():
                    print(f"  {method}: {label}")
        elif args.command == "run":
            cfg = load_config(args.config)
            changes = {k: v for k, v in (("scale", args.scale), ("seed", args.seed))
                       if v is not None}
            if changes:
                cfg = cfg.with_overrides(**changes)
            report = run_experiment(cfg, args.out_dir)
            print(json.dumps(report.table_row))
        else:
            if args.preset not in preset_names():
                return _error("config", f"unknown preset {args.preset!r}", "preset")
            if not 0 < args.scale <= 1:
                return _error("config", f"scale must be in (0, 1], got {args.scale}", "scale")
            rep = reproduce(args.preset, args.scale, args.seed, args.out_dir)
            for row in rep.table():
                print(json.dumps({k: row[k] for k in ("method", "states", "rejection_rate",
                                                      "autocorrelation_time",
                                                      "estimated_mean", "standard_error")}))
    except ConfigError as exc:
        return _error("config", exc.message, exc.field)
    except OutputError as exc:
        return _error("output", str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
