"""Deterministic simulated MapReduce runtime."""
from .cluster import (
    LAB_BLOCK_DISTRIBUTIONS,
    BlockPlacement,
    ClusterFile,
    ClusterSpec,
    ConfigError,
    CostModel,
    NodeKind,
    NodeSpec,
    PhaseWeights,
    PlacementError,
    PlacementMode,
    cluster_from_dict,
    cluster_to_dict,
    load_cluster_file,
    load_placement_file,
    paper_cluster,
    place_blocks,
    placement_from_node_map,
    uniform_replication,
)
from .engine import JobError, JobSpec, TaskContext, partition_key, run_job
from .metrics import JobMetrics, NodeAggregate, NodeSpeed, summarize_node_speeds
from .schedule import (
    Schedule,
    SchedulingError,
    TaskKind,
    TaskRecord,
    TaskSpec,
    estimate_task_duration,
    plan_schedule,
)
