"""Event-driven task scheduling over heterogeneous nodes in simulated time.

Map tasks go to a free slot on a node holding their block when one exists,
otherwise to any free slot with the remote penalty.  When every node holds
every block, all map tasks pile onto the first node, which is what the lab
cluster did with replication factor 4.  Reduce tasks wait for the last map
task.  Backup copies of stragglers are launched once every task has started.
"""
from __future__ import annotations

import enum
import statistics
from dataclasses import dataclass, field
from typing import Sequence

from .cluster import BlockPlacement, ClusterSpec, NodeSpec, PhaseWeights, CostModel


class SchedulingError(RuntimeError):
    pass


class TaskKind(enum.Enum):
    MAP = "map"
    REDUCE = "reduce"


@dataclass(frozen=True)
class TaskSpec:
    """Work description of one logical task, independent of where it runs."""

    task_id: str
    kind: TaskKind = TaskKind.MAP
    records: int = 0
    candidates: int = 0
    block_id: int | None = None
    weights: PhaseWeights = field(default_factory=PhaseWeights)


@dataclass(frozen=True)
class TaskRecord:
    task_id: str
    kind: TaskKind
    node: str
    start: float
    end: float
    is_speculative: bool = False
    was_killed: bool = False
    was_local: bool = False

    @property
    def duration(self):
        return self.end - self.start


def estimate_task_duration(
    records: int,
    candidates: int,
    node: NodeSpec,
    is_local: bool = True,
    cost: CostModel | None = None,
    weights: PhaseWeights | None = None,
) -> float:
    """(startup + alpha*records + beta*records*candidates) / speed, times the
    remote penalty when the input is not local."""
    if records < 0:
        raise ValueError("records must be >= 0")
    cost = cost or CostModel()
    w = weights or PhaseWeights()
    work = (
        cost.startup * w.startup
        + cost.alpha * w.alpha * records
        + cost.beta * w.beta * records * candidates
    )
    duration = work / node.speed_factor
    if not is_local:
        duration *= cost.remote_penalty
    return duration


@dataclass
class _Attempt:
    task: TaskSpec
    node: str
    start: float
    end: float
    local: bool
    speculative: bool = False


@dataclass
class Schedule:
    records: list
    assignment: dict  # task id -> node of the committed attempt
    pinned_node: str | None = None

    @property
    def committed(self):
        return [r for r in self.records if not r.was_killed]

    @property
    def makespan(self):
        done = self.committed
        if not done:
            return 0.0
        return max(r.end for r in done) - min(r.start for r in self.records)


class _PhaseSimulator:
    def __init__(self, tasks, placement, cluster, start, pinned=None):
        self.tasks = sorted(tasks, key=lambda t: t.task_id)
        self.placement = placement
        self.cluster = cluster
        self.nodes = cluster.nodes
        self.order = {n.name: i for i, n in enumerate(self.nodes)}
        self.free = {n.name: n.cores for n in self.nodes}
        self.pinned = pinned
        self.t = start
        self.pending = list(self.tasks)
        self.running: list[_Attempt] = []
        self.records: list[TaskRecord] = []
        self.committed: dict[str, _Attempt] = {}
        self.backed_up: set[str] = set()

    def holders(self, task):
        if task.block_id is None:
            return ()
        return self.placement[task.block_id]

    def _duration(self, task, node, local):
        # reduce input arrives over the shuffle wherever the reducer runs
        remote = task.block_id is not None and not local
        return estimate_task_duration(
            task.records, task.candidates, node, not remote, self.cluster.cost, task.weights
        )

    def _launch(self, task, node_name, speculative=False):
        node = self.cluster.node(node_name)
        local = node_name in self.holders(task)
        d = self._duration(task, node, local)
        self.running.append(_Attempt(task, node_name, self.t, self.t + d, local, speculative))
        self.free[node_name] -= 1
        if speculative:
            self.backed_up.add(task.task_id)

    def _record(self, a, end, killed):
        self.records.append(
            TaskRecord(a.task.task_id, a.task.kind, a.node, a.start, end, a.speculative, killed, a.local)
        )

    def _finish_due(self):
        due = sorted(
            (a for a in self.running if a.end <= self.t),
            key=lambda a: (a.end, a.task.task_id, a.speculative),
        )
        for a in due:
            if a not in self.running:
                continue  # killed by a sibling finishing at the same instant
            self.running.remove(a)
            self.free[a.node] += 1
            self.committed[a.task.task_id] = a
            self._record(a, a.end, killed=False)
            for sib in [s for s in self.running if s.task.task_id == a.task.task_id]:
                self.running.remove(sib)
                self.free[sib.node] += 1
                self._record(sib, a.end, killed=True)

    def _assign(self):
        if not self.pending:
            return
        if self.pinned is not None:
            while self.pending and self.free[self.pinned] > 0:
                self._launch(self.pending.pop(0), self.pinned)
            return
        # data-local pass: nodes in declaration order take their lowest-id local tasks
        for node in self.nodes:
            name = node.name
            i = 0
            while self.free[name] > 0 and i < len(self.pending):
                task = self.pending[i]
                if name in self.holders(task):
                    self._launch(self.pending.pop(i), name)
                else:
                    i += 1
        # whatever is left has every replica holder busy: hand it out round-robin
        while self.pending:
            open_nodes = [n.name for n in self.nodes if self.free[n.name] > 0]
            if not open_nodes:
                break
            for name in open_nodes:
                if not self.pending:
                    break
                self._launch(self.pending.pop(0), name)

    def _median_done(self):
        return statistics.median(a.end - a.start for a in self.committed.values())

    def _stragglers(self):
        if not self.cluster.speculation_enabled or self.pending or not self.committed:
            return [], None
        threshold = self.cluster.speculation_ratio * self._median_done()
        eligible = [
            a for a in self.running if not a.speculative and a.task.task_id not in self.backed_up
        ]
        return sorted(eligible, key=lambda a: a.task.task_id), threshold

    def _speculate(self):
        eligible, threshold = self._stragglers()
        for a in eligible:
            if self.t - a.start < threshold:
                continue
            idle = [n for n in self.nodes if self.free[n.name] > 0 and n.name != a.node]
            if not idle:
                continue
            holders = self.holders(a.task)
            best = min(
                idle,
                key=lambda n: (-n.speed_factor, n.name not in holders, self.order[n.name]),
            )
            self._launch(a.task, best.name, speculative=True)

    def _next_time(self):
        times = [a.end for a in self.running]
        eligible, threshold = self._stragglers()
        for a in eligible:
            crossing = a.start + threshold
            if crossing > self.t:
                times.append(crossing)
        return min(times) if times else None

    def run(self):
        while self.pending or self.running:
            self._finish_due()
            self._assign()
            self._speculate()
            if not self.pending and not self.running:
                break
            nxt = self._next_time()
            if nxt is None:
                raise SchedulingError(
                    f"{len(self.pending)} task(s) cannot be placed: no node has a free slot"
                )
            self.t = nxt
        return self


def plan_schedule(
    tasks: Sequence[TaskSpec],
    placement: BlockPlacement,
    cluster: ClusterSpec,
    start: float = 0.0,
) -> Schedule:
    """Simulate map tasks, then reduce tasks after the last map commits."""
    maps = [t for t in tasks if t.kind is TaskKind.MAP]
    reduces = [t for t in tasks if t.kind is TaskKind.REDUCE]
    for t in maps:
        if t.block_id is None or t.block_id not in placement or not placement[t.block_id]:
            raise SchedulingError(f"map task {t.task_id} has no placed block (block {t.block_id})")

    pinned = None
    blocks = {t.block_id for t in maps}
    if maps and placement.holds_everything(cluster.names, blocks):
        pinned = cluster.nodes[0].name

    map_phase = _PhaseSimulator(maps, placement, cluster, start, pinned).run()
    records = list(map_phase.records)
    barrier = max((a.end for a in map_phase.committed.values()), default=start)
    assignment = {tid: a.node for tid, a in map_phase.committed.items()}

    if reduces:
        red_phase = _PhaseSimulator(reduces, placement, cluster, barrier).run()
        records.extend(red_phase.records)
        assignment.update({tid: a.node for tid, a in red_phase.committed.items()})

    records.sort(key=lambda r: (r.start, r.kind.value, r.task_id, r.is_speculative))
    return Schedule(records, assignment, pinned)
