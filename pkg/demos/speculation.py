"""
Speculative execution against a straggler
=========================================

Four map tasks of ten records on four single-slot nodes, one of which runs
at a fifth of the speed.  With speculation the slow task gets a backup copy
once it has run 1.5 times longer than the median finished task.
"""
from mrapriori.runtime import (
    BlockPlacement, ClusterSpec, CostModel, NodeSpec, TaskKind, TaskSpec, plan_schedule,
)

flat = CostModel(startup=0.0, alpha=1.0, beta=0.0)
nodes = [NodeSpec("N1", 1, 1.0), NodeSpec("N2", 1, 1.0), NodeSpec("N3", 1, 1.0), NodeSpec("N4", 1, 0.2)]
placement = BlockPlacement({0: ("N1", "N2"), 1: ("N2", "N3"), 2: ("N3", "N1"), 3: ("N4", "N1")})
tasks = [TaskSpec(f"m_{i}", TaskKind.MAP, 10, 0, i) for i in range(4)]

for enabled in (False, True):
    cluster = ClusterSpec(nodes, replication_factor=2, speculation_enabled=enabled, cost=flat)
    schedule = plan_schedule(tasks, placement, cluster)
    print(f"speculation {'on' if enabled else 'off'}: makespan {schedule.makespan:.2f}")
    for r in schedule.records:
        flags = " backup" * r.is_speculative + " killed" * r.was_killed
        print(f"  {r.task_id} on {r.node} {r.start:6.2f} -> {r.end:6.2f}{flags}")

# %%
# Equal tasks never cross the threshold, so nothing is duplicated.
even = ClusterSpec([NodeSpec(f"N{i}", 1, 1.0) for i in range(4)], replication_factor=1, cost=flat)
schedule = plan_schedule(tasks, BlockPlacement({i: (f"N{i}",) for i in range(4)}), even)
print("backups with equal tasks:", sum(r.is_speculative for r in schedule.records))
