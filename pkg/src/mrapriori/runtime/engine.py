"""Map -> combine -> shuffle -> reduce execution on the simulated cluster.

The user functions run exactly once per logical task; the scheduler only
decides where and when.  Backup attempts would recompute the same pure
output, so results never depend on placement, splits or speculation.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import groupby
from typing import Any, Callable, Iterable, Sequence

from .cluster import BlockPlacement, ClusterSpec, PhaseWeights
from .metrics import JobMetrics
from .schedule import TaskKind, TaskSpec, plan_schedule

log = logging.getLogger(__name__)


class JobError(RuntimeError):
    def __init__(self, job, task_id, phase, exc):
        super().__init__(f"job {job!r}: {phase} task {task_id} failed: {exc}")
        self.job = job
        self.task_id = task_id
        self.phase = phase


def partition_key(key, reducers: int) -> int:
    """Byte sum of the key's space-separated decimal rendering, mod ``reducers``."""
    if reducers < 1:
        raise ValueError("reducers must be >= 1")
    if isinstance(key, int):
        key = (key,)
    text = " ".join(map(str, key))
    return sum(text.encode("ascii")) % reducers


@dataclass
class TaskContext:
    """Handed to map functions: task identity plus Hadoop-style counters.

    A map function may set ``counters["candidates"]`` to tell the cost
    model how many candidates each record was matched against.
    """

    task_id: str
    first_line: int = 0
    counters: dict = field(default_factory=lambda: defaultdict(int))


MapFn = Callable[[Sequence[str], Any, TaskContext], Iterable[tuple]]
ReduceFn = Callable[[Any, list], "tuple | None"]


@dataclass
class JobSpec:
    name: str
    map_fn: MapFn
    reduce_fn: ReduceFn
    lines: Sequence[str]
    splits: Sequence  # dataset.Split
    combine_fn: ReduceFn | None = None
    reducers: int = 4
    cache: Any = None
    map_weights: PhaseWeights = field(default_factory=PhaseWeights)
    reduce_weights: PhaseWeights = field(default_factory=PhaseWeights)

    def __post_init__(self):
        if self.reducers < 1:
            raise ValueError("reducers must be >= 1")


def _group_apply(pairs, fn):
    out = []
    for key, group in groupby(pairs, key=lambda kv: kv[0]):
        res = fn(key, [v for _, v in group])
        if res is not None:
            out.append(res)
    return out


def run_job(job: JobSpec, placement: BlockPlacement, cluster: ClusterSpec):
    """Execute ``job`` and return ``(output pairs sorted by key, JobMetrics)``."""
    width = max(6, len(str(max(len(job.splits), job.reducers))))
    map_specs, partitions = [], defaultdict(list)
    counters = {}

    for split in job.splits:
        tid = f"m_{split.split_id:0{width}d}"
        ctx = TaskContext(tid, split.start)
        lines = job.lines[split.start:split.end]
        try:
            pairs = sorted(job.map_fn(lines, job.cache, ctx))
            ctx.counters["map_output_records"] = len(pairs)
            if job.combine_fn is not None:
                pairs = _group_apply(pairs, job.combine_fn)
        except Exception as exc:
            raise JobError(job.name, tid, "map", exc) from exc
        ctx.counters["spilled_records"] = len(pairs)
        for key, value in pairs:
            partitions[partition_key(key, job.reducers)].append((key, value))
        counters[tid] = dict(ctx.counters)
        map_specs.append(
            TaskSpec(tid, TaskKind.MAP, len(lines), ctx.counters.get("candidates", 0), split.block_id, job.map_weights)
        )

    output, reduce_specs = [], []
    for r in range(job.reducers):
        tid = f"r_{r:0{width}d}"
        pairs = sorted(partitions.get(r, ()))
        try:
            output.extend(_group_apply(pairs, job.reduce_fn))
        except Exception as exc:
            raise JobError(job.name, tid, "reduce", exc) from exc
        counters[tid] = {"input_records": len(pairs)}
        reduce_specs.append(TaskSpec(tid, TaskKind.REDUCE, len(pairs), 0, None, job.reduce_weights))

    schedule = plan_schedule(map_specs + reduce_specs, placement, cluster)
    metrics = JobMetrics(
        name=job.name,
        records=schedule.records,
        node_kinds={n.name: n.kind for n in cluster.nodes},
        counters=counters,
    )
    log.debug("job %s: %d map, %d reduce tasks, makespan %.2f",
              job.name, len(map_specs), len(reduce_specs), metrics.makespan)
    output.sort(key=lambda kv: kv[0])
    return output, metrics
