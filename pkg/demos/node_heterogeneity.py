"""
Slow nodes and node removal
===========================

Two physical nodes and two virtual machines at 0.67 of their speed.  The
per-node report exposes the VMs; removing them halves the slots, so twelve
tasks need a second wave.
"""
from mrapriori import experiments
from mrapriori.jobs import MiningConfig
from mrapriori.runtime import (
    BlockPlacement, CostModel, JobMetrics, TaskKind, TaskSpec, paper_cluster, plan_schedule,
    summarize_node_speeds,
)
from mrapriori.synth import synthetic_database

cluster = paper_cluster(replication_factor=1, cost=CostModel(startup=0.0, alpha=1.0, beta=0.0))
tasks = [TaskSpec(f"m_{i:02d}", TaskKind.MAP, 20, 0, i) for i in range(12)]


def run(c):
    placement = BlockPlacement({b: (c.names[b % len(c.names)],) for b in range(12)})
    s = plan_schedule(tasks, placement, c)
    return s, JobMetrics("maps", s.records, {n.name: n.kind for n in c.nodes})


schedule, metrics = run(cluster)
for row in summarize_node_speeds(metrics):
    print(f"{row.name} {row.kind.value:8s} mean map time {row.mean_map_duration:6.2f}")
print(f"all nodes:     makespan {schedule.makespan:6.2f}")

physical = cluster.without("DN3", "DN4")
schedule, _ = run(physical)
print(f"physical only: makespan {schedule.makespan:6.2f}, waves start at {sorted({r.start for r in schedule.records})}")

# %%
# The nodes experiment on mined data.  Dropping a single VM leaves three
# nodes with three replicas each, so every block is everywhere and the first
# node takes all map tasks.
db = synthetic_database(3000, items=40, seed=0)
for arm in experiments.nodes(db, MiningConfig(0.02, num_splits=12), paper_cluster()).arms:
    print(f"{arm.label:14s} total makespan {arm.makespan:9.2f}")
