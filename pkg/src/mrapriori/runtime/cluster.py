"""Cluster description, cost constants and HDFS-style block placement."""
from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence


class ConfigError(ValueError):
    pass


class PlacementError(ConfigError):
    pass


class NodeKind(enum.Enum):
    PHYSICAL = "physical"
    VIRTUAL = "virtual"


@dataclass(frozen=True)
class NodeSpec:
    name: str
    cores: int = 4
    speed_factor: float = 1.0
    kind: NodeKind = NodeKind.PHYSICAL

    def __post_init__(self):
        if self.cores < 1:
            raise ConfigError(f"node {self.name}: cores must be >= 1")
        if not self.speed_factor > 0:
            raise ConfigError(f"node {self.name}: speed_factor must be > 0")
        if not isinstance(self.kind, NodeKind):
            object.__setattr__(self, "kind", NodeKind(str(self.kind).lower()))


@dataclass(frozen=True)
class CostModel:
    """Constants of the task duration model (abstract time units)."""

    startup: float = 2.0
    alpha: float = 1.0
    beta: float = 0.001
    remote_penalty: float = 1.1


@dataclass(frozen=True)
class PhaseWeights:
    """Per-job multipliers applied to the cost model's terms."""

    startup: float = 1.0
    alpha: float = 1.0
    beta: float = 1.0


@dataclass(frozen=True)
class ClusterSpec:
    nodes: tuple
    replication_factor: int = 3
    speculation_enabled: bool = True
    speculation_ratio: float = 1.5
    cost: CostModel = field(default_factory=CostModel)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if not self.nodes:
            raise ConfigError("cluster needs at least one node")
        names = [n.name for n in self.nodes]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate node names in {names}")
        if self.replication_factor < 1:
            raise ConfigError("replication_factor must be >= 1")
        if self.replication_factor > len(self.nodes):
            raise ConfigError(
                f"replication_factor {self.replication_factor} exceeds node count {len(self.nodes)}"
            )
        if not self.speculation_ratio > 0:
            raise ConfigError("speculation_ratio must be > 0")

    def node(self, name) -> NodeSpec:
        for n in self.nodes:
            if n.name == name:
                return n
        raise KeyError(name)

    @property
    def names(self):
        return [n.name for n in self.nodes]

    def without(self, *names) -> ClusterSpec:
        """Copy with the named nodes removed; replication clipped to what fits."""
        keep = tuple(n for n in self.nodes if n.name not in names)
        return replace(self, nodes=keep, replication_factor=min(self.replication_factor, len(keep) or 1))

    def with_options(self, **changes) -> ClusterSpec:
        return replace(self, **changes)


def paper_cluster(**options) -> ClusterSpec:
    """The four-DataNode lab cluster: two physical nodes and two slower VMs."""
    nodes = (
        NodeSpec("DN1", 4, 1.0, NodeKind.PHYSICAL),
        NodeSpec("DN2", 4, 1.0, NodeKind.PHYSICAL),
        NodeSpec("DN3", 4, 0.67, NodeKind.VIRTUAL),
        NodeSpec("DN4", 4, 0.67, NodeKind.VIRTUAL),
    )
    return ClusterSpec(nodes, **options)


@dataclass(frozen=True)
class BlockPlacement:
    """Replica holders per block id, in holder order."""

    holders: Mapping[int, tuple]

    def __getitem__(self, block_id):
        return self.holders[block_id]

    def __contains__(self, block_id):
        return block_id in self.holders

    def blocks_on(self, node) -> list[int]:
        return sorted(b for b, hs in self.holders.items() if node in hs)

    def holds_everything(self, nodes: Iterable[str], blocks: Iterable[int] | None = None) -> bool:
        nodes = set(nodes)
        ids = self.holders if blocks is None else blocks
        return all(nodes <= set(self.holders.get(b, ())) for b in ids)

    def to_json(self) -> dict:
        return {str(b): list(self.holders[b]) for b in sorted(self.holders)}


class PlacementMode(enum.Enum):
    EXPLICIT = "explicit"
    SEEDED_RANDOM = "seeded_random"


def place_blocks(
    blocks,
    cluster: ClusterSpec,
    mode=PlacementMode.SEEDED_RANDOM,
    explicit: Mapping | None = None,
    salt: str = "",
) -> BlockPlacement:
    """Assign replica holders to every block.

    EXPLICIT validates and returns ``explicit`` (block id -> node names).
    SEEDED_RANDOM draws ``replication_factor`` distinct holders per block,
    uniformly, from a generator seeded by ``cluster.seed`` and ``salt``.
    """
    mode = PlacementMode(mode) if not isinstance(mode, PlacementMode) else mode
    rf = cluster.replication_factor
    if rf > len(cluster.nodes):
        raise PlacementError(f"replication factor {rf} exceeds node count {len(cluster.nodes)}")
    ids = [b if isinstance(b, int) else b.block_id for b in blocks]
    names = cluster.names

    if mode is PlacementMode.SEEDED_RANDOM:
        rng = random.Random(f"{cluster.seed}:{salt}")
        return BlockPlacement({b: tuple(rng.sample(names, rf)) for b in ids})

    if explicit is None:
        raise PlacementError("explicit placement requested without a placement map")
    holders = {int(b): tuple(hs) for b, hs in explicit.items()}
    known = set(names)
    for b in ids:
        if b not in holders:
            raise PlacementError(f"block {b} has no replica holders")
    for b, hs in holders.items():
        if len(set(hs)) != len(hs):
            raise PlacementError(f"block {b}: replica holders not distinct: {list(hs)}")
        unknown = [h for h in hs if h not in known]
        if unknown:
            raise PlacementError(f"block {b}: unknown node(s) {unknown}")
        if len(hs) != rf:
            raise PlacementError(f"block {b}: {len(hs)} replicas, replication factor is {rf}")
    return BlockPlacement({b: holders[b] for b in sorted(holders)})


def placement_from_node_map(node_blocks: Mapping[str, Sequence[int]]) -> dict:
    """Turn a node -> blocks table into a block -> holders map, nodes in table order."""
    out = {}
    for node, blocks in node_blocks.items():
        for b in blocks:
            out.setdefault(int(b), []).append(node)
    return {b: tuple(out[b]) for b in sorted(out)}


def uniform_replication(explicit: Mapping) -> int:
    counts = {len(hs) for hs in explicit.values()}
    if len(counts) != 1:
        raise PlacementError(f"placement mixes replica counts {sorted(counts)}")
    return counts.pop()


# The same 5-block file put into HDFS three times on the lab cluster (BD3 has replication 4).
LAB_BLOCK_DISTRIBUTIONS = {
    "BD1": placement_from_node_map({"DN1": [1, 2], "DN2": [0, 3], "DN3": [], "DN4": [4]}),
    "BD2": placement_from_node_map({"DN1": [0, 3], "DN2": [2], "DN3": [4], "DN4": [1]}),
    "BD3": placement_from_node_map({dn: range(5) for dn in ("DN1", "DN2", "DN3", "DN4")}),
}


def _node_from_json(obj) -> NodeSpec:
    try:
        return NodeSpec(
            name=str(obj["name"]),
            cores=int(obj.get("cores", 4)),
            speed_factor=float(obj.get("speed", obj.get("speed_factor", 1.0))),
            kind=NodeKind(str(obj.get("kind", "physical")).lower()),
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad node entry {obj!r}: {exc}") from None


@dataclass(frozen=True)
class ClusterFile:
    """Everything a cluster JSON file can carry."""

    cluster: ClusterSpec
    block_lines: int | None = None
    split_lines: int | None = None
    placement: dict | None = None
    seed: int | None = None  # as written in the file, None when absent


def cluster_from_dict(data: Mapping) -> ClusterFile:
    if "nodes" not in data:
        raise ConfigError("cluster file needs a 'nodes' list")
    nodes = tuple(_node_from_json(n) for n in data["nodes"])
    spec = data.get("speculation", {})
    cost = data.get("cost", {})
    placement = data.get("placement")
    if placement is not None:
        placement = {int(b): tuple(hs) for b, hs in placement.items()}
    rf = data.get("replication")
    if rf is None:
        rf = uniform_replication(placement) if placement else min(3, len(nodes))
    cluster = ClusterSpec(
        nodes=nodes,
        replication_factor=int(rf),
        speculation_enabled=bool(spec.get("enabled", True)),
        speculation_ratio=float(spec.get("ratio", 1.5)),
        cost=CostModel(
            startup=float(cost.get("startup", 2.0)),
            alpha=float(cost.get("alpha", 1.0)),
            beta=float(cost.get("beta", 0.001)),
            remote_penalty=float(data.get("remote_penalty", 1.1)),
        ),
        seed=int(data.get("seed", 0)),
    )
    return ClusterFile(
        cluster=cluster,
        block_lines=data.get("block_lines"),
        split_lines=data.get("split_lines"),
        placement=placement,
        seed=data.get("seed"),
    )


def load_cluster_file(path) -> ClusterFile:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    return cluster_from_dict(data)


def cluster_to_dict(cluster: ClusterSpec) -> dict:
    return {
        "nodes": [
            {"name": n.name, "cores": n.cores, "speed": n.speed_factor, "kind": n.kind.value}
            for n in cluster.nodes
        ],
        "replication": cluster.replication_factor,
        "speculation": {"enabled": cluster.speculation_enabled, "ratio": cluster.speculation_ratio},
        "remote_penalty": cluster.cost.remote_penalty,
        "cost": {"startup": cluster.cost.startup, "alpha": cluster.cost.alpha, "beta": cluster.cost.beta},
        "seed": cluster.seed,
    }


def load_placement_file(path) -> dict:
    """Read a block -> holders map; accepts a bare map or ``{"placement": {...}}``."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "placement" in data:
        data = data["placement"]
    return {int(b): tuple(hs) for b, hs in data.items()}
