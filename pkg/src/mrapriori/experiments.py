"""Configuration sweeps over the cluster-tuning factors.

Each sweep mines the same database under several configurations and reports
per-configuration makespans.  The frequent itemsets must not change between
configurations; every sweep checks that and raises if they do.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .jobs import MiningConfig, MiningResult, run_apriori
from .reports import job_to_json, round_time
from .runtime import LAB_BLOCK_DISTRIBUTIONS, ClusterSpec, NodeKind, uniform_replication
from .stores import StoreVariant

EXPERIMENTS = ("speculation", "placement", "split", "nodes", "structures")


class OutputMismatch(AssertionError):
    pass


@dataclass
class Arm:
    label: str
    result: MiningResult
    settings: dict

    @property
    def makespan(self):
        return self.result.total_makespan


@dataclass
class ExperimentResult:
    name: str
    arms: list

    @property
    def best(self) -> Arm:
        return min(self.arms, key=lambda a: (a.makespan, a.label))

    @property
    def worst(self) -> Arm:
        return max(self.arms, key=lambda a: (a.makespan, a.label))


def _checked(name, arms):
    reference = arms[0].result.frequent_itemsets()
    for arm in arms[1:]:
        if arm.result.frequent_itemsets() != reference:
            raise OutputMismatch(f"{name}: arm {arm.label!r} mined different itemsets")
    return ExperimentResult(name, arms)


def speculation(db, config: MiningConfig, cluster: ClusterSpec, straggler_speed=0.2, placement=None):
    """Last node slowed to ``straggler_speed``; speculation on versus off."""
    slow = cluster.nodes[-1]
    nodes = cluster.nodes[:-1] + (replace(slow, speed_factor=straggler_speed),)
    arms = []
    for enabled in (True, False):
        c = replace(cluster, nodes=nodes, speculation_enabled=enabled)
        arms.append(Arm(f"speculation-{'on' if enabled else 'off'}", run_apriori(db, config, c, placement),
                        {"speculation": enabled, "straggler": slow.name, "straggler_speed": straggler_speed}))
    return _checked("speculation", arms)


def placement(db, config: MiningConfig, cluster: ClusterSpec, placements: dict | None = None):
    """One arm per block distribution; blocks are the splits."""
    placements = placements or LAB_BLOCK_DISTRIBUTIONS
    arms = []
    for label, holders in placements.items():
        n_blocks = max(holders) + 1
        cfg = replace(config, block_lines=math.ceil(len(db) / n_blocks), split_lines=None, num_splits=None)
        c = replace(cluster, replication_factor=uniform_replication(holders))
        arms.append(Arm(label, run_apriori(db, cfg, c, holders),
                        {"replication": c.replication_factor, "blocks": n_blocks}))
    return _checked("placement", arms)


def split(db, config: MiningConfig, cluster: ClusterSpec, split_lines=5000, placement=None):
    """Blocks as splits versus fixed-size line splits."""
    arms = [
        Arm("block-splits", run_apriori(db, replace(config, split_lines=None, num_splits=None), cluster, placement),
            {"split_lines": None, "block_lines": config.block_lines}),
        Arm(f"split-{split_lines}", run_apriori(db, replace(config, split_lines=split_lines, num_splits=None),
                                                cluster, placement),
            {"split_lines": split_lines, "block_lines": config.block_lines}),
    ]
    return _checked("split", arms)


def nodes(db, config: MiningConfig, cluster: ClusterSpec):
    """Full cluster, each virtual node removed alone, and all virtual nodes removed."""
    virtual = [n.name for n in cluster.nodes if n.kind is NodeKind.VIRTUAL]
    variants = [("all-nodes", ())]
    variants += [(f"without-{v}", (v,)) for v in virtual]
    if len(virtual) > 1:
        variants.append(("physical-only", tuple(virtual)))
    arms = []
    for label, removed in variants:
        c = cluster.without(*removed)
        arms.append(Arm(label, run_apriori(db, config, c), {"removed": list(removed)}))
    return _checked("nodes", arms)


def structures(db, config: MiningConfig, cluster: ClusterSpec, placement=None):
    arms = [
        Arm(v.value, run_apriori(db, replace(config, variant=v), cluster, placement), {"variant": v.value})
        for v in StoreVariant
    ]
    return _checked("structures", arms)


def experiment_report(result: ExperimentResult, manifest) -> dict:
    return {
        "manifest": manifest.to_json(),
        "experiment": result.name,
        "configurations": [
            {
                "label": arm.label,
                "settings": arm.settings,
                "makespan": round_time(arm.makespan),
                "levels": [{"k": lv.k, "count": len(lv)} for lv in arm.result.levels],
                "jobs": [job_to_json(j) for j in arm.result.jobs],
            }
            for arm in result.arms
        ],
        "best": result.best.label,
        "worst": result.worst.label,
    }
