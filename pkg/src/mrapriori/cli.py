"""Command-line entry point.

    mrapriori mine --input FILE --min-support N [options]
    mrapriori experiment {speculation,placement,split,nodes,structures} [options]

Exit status: 0 success, 1 runtime failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__, experiments
from .dataset import ParseError, read_transactions
from .itemset import ItemsetError
from .jobs import MiningConfig, format_frequent_itemsets, run_apriori
from .oracle import UniverseTooLarge, brute_force_frequent, flatten
from .reports import RunManifest, dumps, file_digest, mining_report, tasks_csv
from .runtime import (
    LAB_BLOCK_DISTRIBUTIONS,
    ClusterFile,
    ConfigError,
    JobError,
    SchedulingError,
    cluster_to_dict,
    load_cluster_file,
    load_placement_file,
    paper_cluster,
    uniform_replication,
)
from .stores import StoreVariant
from .synth import synthetic_database

log = logging.getLogger("mrapriori")

DEFAULT_BLOCK_LINES = 12000
DEFAULT_MAP_TASKS = 12
DEFAULT_REDUCERS = 4


class UsageError(Exception):
    pass


def _min_support(text):
    try:
        if any(c in text for c in ".eE"):
            value = float(text)
        else:
            value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a count or fraction: {text!r}") from None
    if isinstance(value, float) and not 0 < value <= 1:
        raise argparse.ArgumentTypeError("fractional min-support must lie in (0, 1]")
    if isinstance(value, int) and value < 1:
        raise argparse.ArgumentTypeError("min-support count must be >= 1")
    return value


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _on_off(text):
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected on or off")
    return text == "on"


def _common(p):
    p.add_argument("--min-support", type=_min_support, help="absolute count (e.g. 2) or fraction (e.g. 0.01)")
    p.add_argument("--variant", default="trie", choices=[v.value for v in StoreVariant])
    p.add_argument("--filtered-transactions", type=_on_off, default=False, metavar="{on,off}")
    p.add_argument("--cluster", type=Path, help="cluster spec JSON (default: the 4-DataNode lab cluster)")
    p.add_argument("--placement", type=Path, help="explicit block -> nodes JSON")
    p.add_argument("--block-lines", type=_positive)
    p.add_argument("--split-lines", type=_positive)
    p.add_argument("--reducers", type=_positive)
    p.add_argument("--speculation", type=_on_off, metavar="{on,off}")
    p.add_argument("--seed", type=int)
    p.add_argument("--report", type=Path, default=Path("report.json"))
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(prog="mrapriori", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    mine = sub.add_parser("mine", help="mine frequent itemsets on the simulated cluster")
    _common(mine)
    mine.add_argument("--input", type=Path, required=True)
    mine.add_argument("--output", type=Path, default=Path("frequent_itemsets.txt"),
                      help="frequent-itemset file (items TAB support)")
    mine.add_argument("--oracle-check", action="store_true", help="compare against the brute-force miner")

    exp = sub.add_parser("experiment", help="compare cluster configurations")
    exp.add_argument("name", choices=experiments.EXPERIMENTS)
    _common(exp)
    exp.add_argument("--input", type=Path, help="transaction file (default: seeded synthetic data)")
    exp.add_argument("--synthetic-lines", type=_positive, default=3000)
    exp.add_argument("--synthetic-items", type=_positive, default=40)
    exp.add_argument("--placements", help="comma-separated placement JSON files (default: BD1, BD2, BD3 of the lab cluster)")
    exp.add_argument("--straggler-speed", type=float, default=0.2)
    return parser


def _resolve(args, line_count):
    """Merge flags, cluster file and defaults into (config, cluster, placement, seed)."""
    if args.cluster:
        cf = load_cluster_file(args.cluster)
    else:
        cf = ClusterFile(paper_cluster())
    cluster, placement = cf.cluster, cf.placement

    if args.seed is not None:
        seed = args.seed
    elif cf.seed is not None:
        seed = int(cf.seed)
    else:
        seed = int(os.environ.get("APRIORI_MR_SEED", "0"))
    cluster = replace(cluster, seed=seed)
    if args.speculation is not None:
        cluster = replace(cluster, speculation_enabled=args.speculation)

    if args.placement:
        placement = load_placement_file(args.placement)
    if placement is not None:
        cluster = replace(cluster, replication_factor=uniform_replication(placement))

    block_lines = args.block_lines or cf.block_lines
    split_lines = args.split_lines or cf.split_lines
    num_splits = None
    if block_lines is None and split_lines is None:
        num_splits = DEFAULT_MAP_TASKS
    config = MiningConfig(
        min_support=args.min_support if args.min_support is not None else 2,
        variant=args.variant,
        use_filtered_transactions=args.filtered_transactions,
        block_lines=block_lines or DEFAULT_BLOCK_LINES,
        split_lines=split_lines,
        num_splits=num_splits,
        reducers=args.reducers or DEFAULT_REDUCERS,
    )
    return config, cluster, placement


def _manifest(config, cluster, placement, digest, line_count, extra=None):
    return RunManifest(
        config={
            "mining": {
                "min_support": config.min_support,
                "min_count": config.min_count(line_count),
                "variant": config.variant.value,
                "filtered_transactions": config.use_filtered_transactions,
                "block_lines": config.block_lines,
                "split_lines": config.split_lines,
                "num_splits": config.num_splits,
                "reducers": config.reducers,
            },
            "cluster": cluster_to_dict(cluster),
            "placement": None if placement is None else {str(b): list(h) for b, h in sorted(placement.items())},
            "transactions": line_count,
        },
        input_digest=digest,
        tool_version=__version__,
        extra=extra or {},
    )


def _write(path, text):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise RuntimeError(f"cannot write {path}: {exc}") from None


def cmd_mine(args) -> int:
    if args.min_support is None:
        raise UsageError("mine: --min-support is required")
    if not args.input.exists():
        raise UsageError(f"mine: input file {args.input} does not exist")
    db = read_transactions(args.input)
    if db.blank_lines or db.duplicate_items:
        log.warning("%s: skipped %d blank line(s), dropped %d duplicate item(s)",
                    args.input, db.blank_lines, db.duplicate_items)
    config, cluster, placement = _resolve(args, len(db))
    result = run_apriori(db, config, cluster, placement)

    manifest = _manifest(config, cluster, placement, file_digest(args.input), len(db))
    report = mining_report(result, manifest)
    _write(args.output, format_frequent_itemsets(result))
    _write(args.report, dumps(report) if args.format == "json" else tasks_csv(result.jobs))

    print(f"min support count: {result.min_count}")
    for level in result.levels:
        print(f"L{level.k}: {len(level)} itemsets")
    for job in result.jobs:
        print(f"{job.name}: makespan {job.makespan:.2f}")
    print(f"total makespan: {result.total_makespan:.2f}")

    if args.oracle_check:
        expected = flatten(brute_force_frequent(db, result.min_count))
        if expected == result.frequent_itemsets():
            print("oracle: MATCH")
        else:
            print("oracle: MISMATCH")
            return 1
    return 0


def cmd_experiment(args) -> int:
    if args.input:
        if not args.input.exists():
            raise UsageError(f"experiment: input file {args.input} does not exist")
        db = read_transactions(args.input)
        digest = file_digest(args.input)
    else:
        db = synthetic_database(args.synthetic_lines, args.synthetic_items, seed=args.seed or 0)
        digest = None
    if args.min_support is None:
        args.min_support = 0.02
    config, cluster, placement = _resolve(args, len(db))
    extra = {"experiment": args.name}

    if args.name == "speculation":
        res = experiments.speculation(db, config, cluster, args.straggler_speed, placement)
        extra["straggler_speed"] = args.straggler_speed
    elif args.name == "placement":
        if args.placements:
            table = {Path(p).stem: load_placement_file(p) for p in args.placements.split(",")}
        else:
            table = LAB_BLOCK_DISTRIBUTIONS
        cluster_names = set(cluster.names)
        for label, holders in table.items():
            unknown = {n for hs in holders.values() for n in hs} - cluster_names
            if unknown:
                raise ConfigError(f"placement {label}: nodes {sorted(unknown)} not in the cluster")
        res = experiments.placement(db, config, cluster, table)
        extra["placements"] = {k: {str(b): list(h) for b, h in v.items()} for k, v in table.items()}
    elif args.name == "split":
        # without explicit sizes mirror the lab run: 5 blocks against 12 line splits
        if args.block_lines is None and args.split_lines is None:
            config = replace(config, block_lines=math.ceil(len(db) / 5), num_splits=None)
            split_lines = math.ceil(len(db) / DEFAULT_MAP_TASKS)
        else:
            split_lines = args.split_lines or 5000
        res = experiments.split(db, config, cluster, split_lines, placement)
    elif args.name == "nodes":
        res = experiments.nodes(db, config, cluster)
    else:
        res = experiments.structures(db, config, cluster, placement)

    if not args.input:
        extra["synthetic"] = {"lines": args.synthetic_lines, "items": args.synthetic_items}
    manifest = _manifest(config, cluster, placement, digest, len(db), extra)
    report = experiments.experiment_report(res, manifest)
    if args.format == "json":
        _write(args.report, dumps(report))
    else:
        jobs = [replace(j, name=f"{arm.label}/{j.name}") for arm in res.arms for j in arm.result.jobs]
        _write(args.report, tasks_csv(jobs))

    width = max(len(a.label) for a in res.arms)
    for arm in res.arms:
        flags = []
        if arm is res.best:
            flags.append("best")
        if arm is res.worst:
            flags.append("worst")
        mark = f"  <- {', '.join(flags)}" if flags else ""
        print(f"{arm.label:<{width}}  makespan {arm.makespan:10.2f}{mark}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "mine":
            return cmd_mine(args)
        return cmd_experiment(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, ItemsetError, ConfigError, JobError, SchedulingError,
            UniverseTooLarge, RuntimeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
