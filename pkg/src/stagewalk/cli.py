"""Command-line entry point.

Subcommands: gen-tree, synth, replay, compare, bench-depth. All flags are
long-form with defaults; exit codes: 0 success, 2 config error, 3 IO error,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from .errors import ConfigError, ContractViolation, EngineError, SpecInvalid, TraceMalformed
from .workload import (
    BENCH_POOL_SIZES,
    STRATEGIES,
    TreeSpec,
    bench_depth_grid,
    gen_tree,
    grid_csv,
    read_trace,
    replay,
    replay_stress,
    report,
    synth_trace,
    write_trace,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_INTERNAL = 4


@dataclass(slots=True)
class RunConfig:
    strategy: str = "stage"
    pool_size: int = 16
    components: int = 8
    heat_threshold: int = 4
    heat_capacity: int = 64
    period_ms: int = 2000
    seed: int = 0
    manual_tick: bool = False
    tick_every: int = 1000
    workers: int = 0

    def validate(self) -> None:
        if self.pool_size < 0:
            raise ConfigError(f"--pool-size must be >= 0, got {self.pool_size}")
        if self.components < 1:
            raise ConfigError(f"--components must be >= 1, got {self.components}")
        if self.period_ms <= 0:
            raise ConfigError(f"--period-ms must be > 0, got {self.period_ms}")
        if self.heat_capacity < 0 or self.heat_threshold < 0:
            raise ConfigError("heat capacity/threshold must be >= 0")
        if self.tick_every < 1:
            raise ConfigError(f"--tick-every must be >= 1, got {self.tick_every}")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--strategy", choices=STRATEGIES, default="stage")
    p.add_argument("--pool-size", type=int, default=16)
    p.add_argument("--components", type=int, default=8, help="pivot component array capacity")
    p.add_argument("--heat-threshold", type=int, default=4)
    p.add_argument("--heat-capacity", type=int, default=64)
    p.add_argument("--period-ms", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--manual-tick", action="store_true", help="tick every --tick-every events instead of by trace time")
    p.add_argument("--tick-every", type=int, default=1000)
    p.add_argument("--workers", type=int, default=0, help="reader worker threads (stress mode)")


def _config_from(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        strategy=getattr(args, "strategy", "stage"),
        pool_size=args.pool_size,
        components=args.components,
        heat_threshold=args.heat_threshold,
        heat_capacity=args.heat_capacity,
        period_ms=args.period_ms,
        seed=args.seed,
        manual_tick=args.manual_tick,
        tick_every=args.tick_every,
        workers=args.workers,
    )
    cfg.validate()
    return cfg


def _load_spec(path: str) -> TreeSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return TreeSpec.from_json(fh.read())


def cmd_gen_tree(args: argparse.Namespace) -> int:
    levels = [int(x) for x in args.levels.split(",")] if args.levels else list(TreeSpec(levels=[10] * 5).levels)
    lo, _, hi = args.file_size.partition(":")
    spec = TreeSpec(levels=levels, file_size_range=(int(lo), int(hi or lo)), seed=args.seed)
    spec.validate()
    tree = gen_tree(spec)
    with open(f"{args.out}.spec.json", "w", encoding="utf-8") as fh:
        fh.write(spec.to_json() + "\n")
    with open(f"{args.out}.tree.txt", "w", encoding="utf-8") as fh:
        fh.write(tree.canonical_dump())
    print(f"tree: {tree.node_count} nodes -> {args.out}.spec.json, {args.out}.tree.txt")
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    spec = _load_spec(args.tree)
    tree = gen_tree(spec)
    params = {
        "n_events": args.events,
        "p_rename": args.p_rename,
        "p_chmod": args.p_chmod,
        "p_create": args.p_create,
        "hot_dirs": args.hot_dirs,
        "zipf_s": args.zipf_s,
    }
    events = synth_trace(tree, args.model, params, seed=args.seed)
    write_trace(events, args.out)
    print(f"trace: {len(events)} events -> {args.out}")
    return EXIT_OK


def _run_one(args: argparse.Namespace, cfg: RunConfig, strategy: str):
    spec = _load_spec(args.tree)
    trace = read_trace(args.trace)
    knobs = dict(
        period_ms=cfg.period_ms,
        pool_size=cfg.pool_size,
        component_capacity=cfg.components,
        heat_threshold=cfg.heat_threshold,
        heat_capacity=cfg.heat_capacity,
    )
    if cfg.workers > 0:
        tree = gen_tree(spec, threadsafe=True)
        return replay_stress(trace, strategy, tree, workers=cfg.workers, **knobs)
    tree = gen_tree(spec)
    return replay(
        trace,
        strategy,
        tree,
        manual_tick=cfg.manual_tick,
        tick_every=cfg.tick_every,
        **knobs,
    )


def cmd_replay(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    result = _run_one(args, cfg, cfg.strategy)
    table, csv_text = report([(cfg.strategy, result.metrics)])
    print(table, end="")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
        print(f"metrics -> {args.out}")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    runs = []
    for strategy in STRATEGIES:
        result = _run_one(args, cfg, strategy)
        runs.append((strategy, result.metrics))
    table, csv_text = report(runs)
    print(table, end="")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
        print(f"metrics -> {args.out}")
    return EXIT_OK


def cmd_bench_depth(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    rows = bench_depth_grid(pool_sizes=BENCH_POOL_SIZES, reps=args.reps)
    text = grid_csv(rows)
    print(text, end="")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"grid -> {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stagewalk", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-tree", help="generate a directory tree spec + dump")
    p.add_argument("--levels", default="10,10,10,10,10", help="comma-separated fanout per level")
    p.add_argument("--file-size", default="4096:4096", help="lo:hi leaf file size bytes")
    p.add_argument("--out", default="tree", help="output path prefix")
    _add_common(p)
    p.set_defaults(fn=cmd_gen_tree)

    p = sub.add_parser("synth", help="synthesize a trace over a tree spec")
    p.add_argument("--tree", required=True, help="tree spec JSON file")
    p.add_argument("--model", choices=("uniform", "hotdir-zipf", "replay-like"), default="hotdir-zipf")
    p.add_argument("--events", type=int, default=10_000)
    p.add_argument("--hot-dirs", type=int, default=8)
    p.add_argument("--zipf-s", type=float, default=1.0)
    p.add_argument("--p-rename", type=float, default=0.0)
    p.add_argument("--p-chmod", type=float, default=0.0)
    p.add_argument("--p-create", type=float, default=0.0)
    p.add_argument("--out", default="trace.jsonl")
    _add_common(p)
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("replay", help="replay a trace with one strategy")
    p.add_argument("--tree", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--out", default="", help="metrics CSV output path")
    _add_common(p)
    p.set_defaults(fn=cmd_replay)

    p = sub.add_parser("compare", help="replay the same inputs under every strategy")
    p.add_argument("--tree", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--out", default="")
    _add_common(p)
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("bench-depth", help="stage-two length x pool size counter grid")
    p.add_argument("--reps", type=int, default=50)
    p.add_argument("--out", default="")
    _add_common(p)
    p.set_defaults(fn=cmd_bench_depth)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (ConfigError, SpecInvalid) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, TraceMalformed) as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ContractViolation, EngineError) as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
