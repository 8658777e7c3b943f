"""Per-job task records and the per-node aggregates derived from them."""
from __future__ import annotations

from dataclasses import dataclass, field

from .cluster import NodeKind
from .schedule import TaskKind, TaskRecord


@dataclass(frozen=True)
class NodeAggregate:
    name: str
    kind: NodeKind
    map_tasks: int
    mean_map_duration: float | None
    busy_time: float


@dataclass
class JobMetrics:
    name: str
    records: list
    node_kinds: dict  # node name -> NodeKind, declaration order
    counters: dict = field(default_factory=dict)  # task id -> {counter: value}

    @property
    def committed(self) -> list[TaskRecord]:
        return [r for r in self.records if not r.was_killed]

    @property
    def makespan(self) -> float:
        done = self.committed
        if not done:
            return 0.0
        return max(r.end for r in done) - min(r.start for r in self.records)

    def map_records(self, committed_only=True):
        rs = self.committed if committed_only else self.records
        return [r for r in rs if r.kind is TaskKind.MAP]

    def reduce_records(self, committed_only=True):
        rs = self.committed if committed_only else self.records
        return [r for r in rs if r.kind is TaskKind.REDUCE]

    @property
    def speculative_launches(self) -> int:
        return sum(r.is_speculative for r in self.records)

    def per_node(self) -> list[NodeAggregate]:
        out = []
        for name, kind in self.node_kinds.items():
            mine = [r for r in self.records if r.node == name]
            maps = [r.duration for r in mine if r.kind is TaskKind.MAP and not r.was_killed]
            out.append(
                NodeAggregate(
                    name=name,
                    kind=kind,
                    map_tasks=len(maps),
                    mean_map_duration=sum(maps) / len(maps) if maps else None,
                    busy_time=sum(r.duration for r in mine),
                )
            )
        return out


@dataclass(frozen=True)
class NodeSpeed:
    name: str
    kind: NodeKind
    map_tasks: int
    mean_map_duration: float


def summarize_node_speeds(metrics: JobMetrics | list) -> list[NodeSpeed]:
    """Slowest nodes first, by mean committed map-task duration.

    Accepts one job's metrics or a list of them; nodes that ran no committed
    map task are left out.
    """
    jobs = metrics if isinstance(metrics, list) else [metrics]
    durations: dict = {}
    kinds: dict = {}
    for job in jobs:
        kinds.update(job.node_kinds)
        for r in job.map_records():
            durations.setdefault(r.node, []).append(r.duration)
    rows = [
        NodeSpeed(name, kinds[name], len(ds), sum(ds) / len(ds))
        for name, ds in durations.items()
    ]
    rows.sort(key=lambda r: (-r.mean_map_duration, r.name))
    return rows
