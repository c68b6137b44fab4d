"""``costelm`` command line: train, bsa-bench and cumscore subcommands."""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import bsa
from .config import RunConfig, load_config
from .dataset import load_dataset
from .errors import ConfigError, CostElmError
from .numerics import Rng
from .pipeline import cumscore_curve, run_experiment


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def cmd_train(args) -> int:
    overrides = {}
    for field in dataclasses.fields(RunConfig):
        value = getattr(args, f"cfg_{field.name}", None)
        if value is not None:
            overrides[field.name] = value
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value
    cfg = load_config(args.config, overrides, defaults=args.config is None)
    data = load_dataset(args.data, cfg.mode)
    report = run_experiment(cfg, data, Path(args.data).name)
    _write(dump_report(report), args.out)
    return 0


def bench_table(result: bsa.BsaResult) -> str:
    buf = io.StringIO()
    buf.write(f"# best_fitness={result.best_fitness!r}\n")
    buf.write("# solution=" + ",".join(repr(float(v)) for v in result.best_solution) + "\n")
    buf.write("epoch,best\n")
    for epoch, value in enumerate(result.history):
        buf.write(f"{epoch},{value!r}\n")
    return buf.getvalue()


def cmd_bsa_bench(args) -> int:
    if args.fn not in bsa.BENCHMARKS:
        raise ConfigError(f"unknown benchmark function {args.fn!r}")
    if args.dim < 1:
        raise ConfigError("dim must be at least 1")
    fn, low, high = bsa.BENCHMARKS[args.fn]
    config = bsa.BsaConfig(
        population_size=args.pop, dim=args.dim,
        low=low if args.low is None else args.low,
        high=high if args.high is None else args.high,
        epochs=args.epochs, mixrate=args.mixrate,
    )
    result = bsa.optimize(fn, config, Rng(args.seed))
    _write(bench_table(result), args.out)
    return 0


def cmd_cumscore(args) -> int:
    try:
        report = json.loads(Path(args.report).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read report {args.report}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"report {args.report} is not valid JSON: {exc.msg}") from None
    try:
        curve = cumscore_curve(report, args.grid_index)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    lines = ["level,percent"] + [f"{lv},{pct!r}" for lv, pct in curve]
    _write("\n".join(lines) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="costelm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="run repeated train/evaluate over the C x L grid")
    train.add_argument("--data", required=True, help="comma-delimited file, label/target in last column")
    train.add_argument("--config", help="key = value config file (default: shipped defaults)")
    train.add_argument("--out", help="report path (default: stdout)")
    train.add_argument("--set", action="append", metavar="KEY=VALUE", help="override any config key")
    for field in dataclasses.fields(RunConfig):
        flags = [f"--{field.name}"]
        if "_" in field.name:
            flags.append(f"--{field.name.replace('_', '-')}")
        train.add_argument(*flags, dest=f"cfg_{field.name}", metavar="VALUE", help=argparse.SUPPRESS)
    train.set_defaults(func=cmd_train)

    bench = sub.add_parser("bsa-bench", help="run BSA on a benchmark function")
    bench.add_argument("--fn", default="sphere", help="sphere, rosenbrock or rastrigin")
    bench.add_argument("--dim", type=int, default=10)
    bench.add_argument("--pop", type=int, default=30)
    bench.add_argument("--epochs", type=int, default=500)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--mixrate", type=float, default=1.0)
    bench.add_argument("--low", type=float)
    bench.add_argument("--high", type=float)
    bench.add_argument("--out", help="output path (default: stdout)")
    bench.set_defaults(func=cmd_bsa_bench)

    cum = sub.add_parser("cumscore", help="emit the CumScore curve stored in a report")
    cum.add_argument("--report", required=True)
    cum.add_argument("--out", help="output path (default: stdout)")
    cum.add_argument("--grid-index", type=int, default=0)
    cum.set_defaults(func=cmd_cumscore)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CostElmError, ValueError, OSError) as exc:
        message = " ".join(str(exc).split())
        print(f"costelm: error: {type(exc).__name__}: {message}", file=sys.stderr)
        return 1
    except np.linalg.LinAlgError as exc:
        print(f"costelm: error: LinAlgError: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
