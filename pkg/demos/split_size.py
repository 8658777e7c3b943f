"""
Controlling parallelism with the split size
===========================================

Five 12000-line blocks on four nodes give five map tasks, and one node runs
two of them.  Cutting the input into 5000-line splits gives twelve smaller
tasks and spreads them over all sixteen slots.
"""
from mrapriori.dataset import make_line_splits, partition_into_blocks
from mrapriori.jobs import one_itemset_map, sum_reduce
from mrapriori.runtime import BlockPlacement, CostModel, JobSpec, paper_cluster, run_job, summarize_node_speeds
from mrapriori.synth import synthetic_database

db = synthetic_database(60000, items=60, seed=8)
cluster = paper_cluster(replication_factor=1, cost=CostModel(startup=0.0, alpha=1.0, beta=0.0))
blocks = partition_into_blocks(db, 12000)
placement = BlockPlacement({b.block_id: (cluster.names[b.block_id % 4],) for b in blocks})

makespans = {}
for split_lines in (None, 5000):
    splits = make_line_splits(db, split_lines, blocks)
    job = JobSpec("count", one_itemset_map, sum_reduce, db.lines, splits, sum_reduce, 4)
    _, metrics = run_job(job, placement, cluster)
    makespans[split_lines] = metrics.makespan
    print(f"split_lines={split_lines}: {len(splits)} map tasks, makespan {metrics.makespan:9.2f}")
    for row in summarize_node_speeds(metrics):
        print(f"    {row.name} ({row.kind.value}) {row.map_tasks} tasks, mean {row.mean_map_duration:8.2f}")

print(f"ratio {makespans[None] / makespans[5000]:.2f} (line ratio {12000 / 5000:.2f})")
