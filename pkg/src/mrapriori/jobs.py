"""Apriori as a chain of MapReduce jobs.

Job1 counts single items, the optional JobFT collapses every transaction to
its frequent items with an occurrence count, and Job2 is resubmitted for
k = 2, 3, ... until a level comes back empty.  Candidates for a level are
generated once per map task from the previous level held in the task cache.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from typing import Sequence

from . import itemset as _itemset
from .dataset import (
    TransactionDatabase,
    WeightedTransaction,
    decode_weighted_transaction,
    make_line_splits,
    parse_transaction_line,
    partition_into_blocks,
    splits_for_count,
)
from .itemset import FrequentLevel, Itemset
from .runtime import (
    BlockPlacement,
    ClusterSpec,
    JobMetrics,
    PhaseWeights,
    PlacementMode,
    TaskContext,
    JobSpec,
    place_blocks,
    run_job,
)
from .stores import CandidateStore, StoreVariant, build_store

# Relative per-candidate matching cost of each store in the duration model.
VARIANT_BETA = {
    StoreVariant.TRIE: 1.0,
    StoreVariant.HASH_TREE: 1.5,
    StoreVariant.HASH_TABLE_TRIE: 0.6,
}
# A reduce record is one integer addition; a map record is a parsed, matched transaction.
REDUCE_WEIGHTS = PhaseWeights(alpha=0.1)


# -- map / combine / reduce functions --------------------------------------


def one_itemset_map(lines: Sequence[str], cache=None, context: TaskContext | None = None):
    first = context.first_line if context else 0
    for offset, line in enumerate(lines):
        wt = parse_transaction_line(line, first + offset + 1)
        if wt is None:
            continue
        for item in wt.items:
            yield (item,), 1


def sum_reduce(key, values, min_count: int | None = None):
    """Sum the values; with ``min_count`` drop keys whose sum falls short."""
    total = sum(values)
    if min_count is not None and total < min_count:
        return None
    return key, total


def filter_transaction(frequent_items: CandidateStore, t: Itemset) -> Itemset:
    return tuple(i for i in t if frequent_items.contains((i,)))


def ft_map(lines: Sequence[str], cache: CandidateStore, context: TaskContext | None = None):
    first = context.first_line if context else 0
    if context is not None:
        context.counters["candidates"] = len(cache)
    for offset, line in enumerate(lines):
        wt = parse_transaction_line(line, first + offset + 1)
        if wt is None:
            continue
        kept = filter_transaction(cache, wt.items)
        if kept:
            yield kept, 1


@dataclass(frozen=True)
class LevelCache:
    """What a Job2 map task reads from the distributed cache."""

    prev: tuple  # frequent (k-1)-itemsets, sorted
    k: int
    variant: StoreVariant = StoreVariant.TRIE
    weighted: bool = False


def k_itemset_map(lines: Sequence[str], cache: LevelCache, context: TaskContext | None = None):
    context = context or TaskContext("local")
    candidates = _itemset.apriori_gen(cache.prev)
    context.counters["apriori_gen_calls"] += 1
    context.counters["candidates"] = len(candidates)
    if not candidates:
        return
    ck = build_store(candidates, cache.variant, k=cache.k)
    for offset, line in enumerate(lines):
        number = context.first_line + offset + 1
        if cache.weighted:
            wt = decode_weighted_transaction(line, number)
        else:
            wt = parse_transaction_line(line, number)
            if wt is None:
                continue
        for c in ck.subset_match(wt.items):
            yield c, wt.weight


# -- driver ------------------------------------------------------------------


@dataclass
class MiningConfig:
    """``min_support`` is an absolute count (int >= 1) or a fraction in (0, 1].

    ``split_lines`` fixes lines per map task; ``num_splits`` instead targets a
    task count per input file; with neither, blocks are the splits.
    """

    min_support: int | float = 2
    variant: StoreVariant = StoreVariant.TRIE
    use_filtered_transactions: bool = False
    block_lines: int = 12000
    split_lines: int | None = None
    num_splits: int | None = None
    reducers: int = 4
    use_combiner: bool = True

    def __post_init__(self):
        self.variant = StoreVariant.parse(self.variant)
        if isinstance(self.min_support, bool):
            raise ValueError("min_support must be a number")
        if isinstance(self.min_support, float):
            if not 0 < self.min_support <= 1:
                raise ValueError("fractional min_support must lie in (0, 1]")
        elif self.min_support < 1:
            raise ValueError("absolute min_support must be >= 1")

    def min_count(self, transaction_count: int) -> int:
        if isinstance(self.min_support, float):
            return max(1, math.ceil(self.min_support * transaction_count))
        return int(self.min_support)


@dataclass
class MiningResult:
    levels: list  # FrequentLevel for k = 1..K, the last one possibly empty
    jobs: list  # JobMetrics in submission order
    min_count: int
    weighted_transactions: list | None = None

    @property
    def total_makespan(self) -> float:
        return sum(j.makespan for j in self.jobs)

    def frequent_itemsets(self) -> dict:
        return {key: n for level in self.levels for key, n in level.as_dict().items()}

    def level(self, k) -> FrequentLevel:
        for lv in self.levels:
            if lv.k == k:
                return lv
        return FrequentLevel(k, {})


@dataclass
class _InputFile:
    lines: tuple
    splits: list
    placement: BlockPlacement


def _stage_input(lines, config, cluster, placement, salt, derived=False):
    blocks = partition_into_blocks(len(lines), config.block_lines)
    split_lines = config.split_lines
    if split_lines is None and config.num_splits is not None:
        split_lines = splits_for_count(len(lines), config.num_splits)
    splits = make_line_splits(len(lines), split_lines, blocks)
    if placement is None:
        pl = place_blocks(blocks, cluster, PlacementMode.SEEDED_RANDOM, salt=salt)
    elif derived:
        if all(b.block_id in placement for b in blocks):
            pl = BlockPlacement({b.block_id: placement[b.block_id] for b in blocks})
        else:
            pl = place_blocks(blocks, cluster, PlacementMode.SEEDED_RANDOM, salt=salt)
    else:
        holders = placement.holders if isinstance(placement, BlockPlacement) else placement
        pl = place_blocks(blocks, cluster, PlacementMode.EXPLICIT, explicit=holders)
    return _InputFile(tuple(lines), splits, pl)


def run_apriori(
    db: TransactionDatabase,
    config: MiningConfig,
    cluster: ClusterSpec,
    placement: BlockPlacement | dict | None = None,
) -> MiningResult:
    """Mine all frequent itemsets of ``db`` on the simulated cluster.

    ``placement`` places the input's blocks (block id -> holders); missing,
    they are drawn with the cluster seed.  A derived file (the filtered
    transactions) reuses the input's holders block by block where it can.
    """
    if not len(db):
        raise ValueError("cannot mine an empty database")
    min_count = config.min_count(len(db))
    jobs: list[JobMetrics] = []
    variant = config.variant
    combine = sum_reduce if config.use_combiner else None
    threshold = partial(sum_reduce, min_count=min_count)

    raw = _stage_input(db.lines, config, cluster, placement, "input")

    out, metrics = run_job(
        JobSpec("job1", one_itemset_map, threshold, raw.lines, raw.splits, combine, config.reducers,
                reduce_weights=REDUCE_WEIGHTS),
        raw.placement,
        cluster,
    )
    jobs.append(metrics)
    levels = [FrequentLevel(1, dict(out))]
    if not out:
        return MiningResult(levels, jobs, min_count)

    job2_input, weighted, ft_rows = raw, False, None
    if config.use_filtered_transactions:
        l1_store = build_store(levels[0].itemsets(), variant, k=1)
        out, metrics = run_job(
            JobSpec(
                "job_ft", ft_map, sum_reduce, raw.lines, raw.splits, combine, config.reducers,
                cache=l1_store, map_weights=PhaseWeights(beta=VARIANT_BETA[variant]),
                reduce_weights=REDUCE_WEIGHTS,
            ),
            raw.placement,
            cluster,
        )
        jobs.append(metrics)
        ft_rows = [WeightedTransaction(items, n) for items, n in out]
        ft_db = TransactionDatabase.from_weighted(ft_rows)
        job2_input = _stage_input(ft_db.lines, config, cluster, raw.placement, "filtered", derived=True)
        weighted = True

    k = 2
    while levels[-1]:
        cache = LevelCache(tuple(levels[-1].itemsets()), k, variant, weighted)
        if job2_input.lines:
            out, metrics = run_job(
                JobSpec(
                    f"job2_k{k}", k_itemset_map, threshold, job2_input.lines, job2_input.splits,
                    combine, config.reducers, cache=cache,
                    map_weights=PhaseWeights(beta=VARIANT_BETA[variant]),
                    reduce_weights=REDUCE_WEIGHTS,
                ),
                job2_input.placement,
                cluster,
            )
            jobs.append(metrics)
        else:
            out = []
        levels.append(FrequentLevel(k, dict(out)))
        k += 1
    return MiningResult(levels, jobs, min_count, ft_rows)


def format_frequent_itemsets(result: MiningResult) -> str:
    """One line per itemset: items, TAB, support; levels in increasing k."""
    lines = []
    for level in result.levels:
        for key, n in level.as_dict().items():
            lines.append(" ".join(map(str, key)) + "\t" + str(n))
    return "".join(line + "\n" for line in lines)
