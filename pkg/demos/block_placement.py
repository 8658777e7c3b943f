"""
Where the blocks live
=====================

The same five-block file placed three ways on the lab cluster.  BD1 and BD2
use one replica per block; BD3 keeps a replica on every node, and in that
case all map tasks end up on the first node.
"""
from dataclasses import replace

from mrapriori.jobs import MiningConfig
from mrapriori import experiments
from mrapriori.runtime import (
    LAB_BLOCK_DISTRIBUTIONS, BlockPlacement, CostModel, NodeKind, TaskKind, TaskSpec,
    paper_cluster, plan_schedule, uniform_replication,
)
from mrapriori.synth import synthetic_database

cluster = paper_cluster(cost=CostModel(startup=0.0, alpha=1.0, beta=0.0))
tasks = [TaskSpec(f"m_{b}", TaskKind.MAP, 20, 0, b) for b in range(5)]
virtual = {n.name for n in cluster.nodes if n.kind is NodeKind.VIRTUAL}

for label, holders in LAB_BLOCK_DISTRIBUTIONS.items():
    c = replace(cluster, replication_factor=uniform_replication(holders))
    s = plan_schedule(tasks, BlockPlacement(holders), c)
    on_vm = sum(r.node in virtual for r in s.records)
    pinned = f", pinned to {s.pinned_node}" if s.pinned_node else ""
    print(f"{label}: makespan {s.makespan:6.2f}, map tasks on VMs {on_vm}{pinned}")

# %%
# The same comparison through the full mining pipeline.
db = synthetic_database(3000, items=40, seed=0)
result = experiments.placement(db, MiningConfig(0.02), paper_cluster())
for arm in result.arms:
    print(f"{arm.label}: total makespan {arm.makespan:9.2f}")
print("worst:", result.worst.label)
