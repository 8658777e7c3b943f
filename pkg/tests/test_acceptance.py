"""Acceptance gate: one test per criterion, each reporting PASS or FAIL.

The lines are collected into the terminal summary ("acceptance criteria")
and also printed, so ``pytest -s tests/test_acceptance.py`` shows them inline.
"""
import math
import time
from contextlib import contextmanager
from dataclasses import replace
from itertools import combinations

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, FLAT, flat_cluster
from mrapriori.cli import main
from mrapriori.dataset import make_line_splits, partition_into_blocks
from mrapriori.jobs import MiningConfig, one_itemset_map, run_apriori, sum_reduce
from mrapriori.oracle import brute_force_frequent, flatten, support_of
from mrapriori.runtime import (
    LAB_BLOCK_DISTRIBUTIONS,
    BlockPlacement,
    JobMetrics,
    JobSpec,
    NodeKind,
    TaskKind,
    TaskSpec,
    paper_cluster,
    plan_schedule,
    run_job,
    summarize_node_speeds,
)
from mrapriori.stores import StoreVariant, build_store
from mrapriori.synth import random_small_database, synthetic_database

CONFIGS = [(v, ft) for v in StoreVariant for ft in (False, True)]


@contextmanager
def criterion(number, title):
    try:
        yield
    except BaseException as exc:
        line = f"criterion {number:2d} FAIL  {title}: {type(exc).__name__}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    line = f"criterion {number:2d} PASS  {title}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def equal_maps(n, records=20, blocks=None):
    blocks = list(range(n)) if blocks is None else blocks
    return [TaskSpec(f"m_{i:06d}", TaskKind.MAP, records, 0, b) for i, b in enumerate(blocks)]


def metrics_of(schedule, cluster):
    return JobMetrics("maps", schedule.records, {n.name: n.kind for n in cluster.nodes})


def test_01_oracle_equivalence():
    with criterion(1, "oracle equivalence, 50 databases x {2,3,5} x 6 configurations, < 30 s"):
        started = time.perf_counter()
        cluster = paper_cluster()
        cases = 0
        for seed in range(50):
            db = random_small_database(np.random.default_rng(seed), max_transactions=200, max_items=15)
            for min_count in (2, 3, 5):
                expected = brute_force_frequent(db, min_count)
                for variant, ft in CONFIGS:
                    # five blocks, each its own split: several map tasks and reducers per job
                    config = MiningConfig(min_count, variant, ft, block_lines=math.ceil(len(db) / 5))
                    result = run_apriori(db, config, cluster)
                    got = {lv.k: lv.as_dict() for lv in result.levels if len(lv)}
                    assert got == expected, (seed, min_count, variant, ft)
                    cases += 1
        elapsed = time.perf_counter() - started
        print(f"  {cases} runs in {elapsed:.1f} s")
        assert cases == 900
        assert elapsed < 30.0


def test_02_db4_fixture(db4):
    with criterion(2, "DB4 at min count 2"):
        assert flatten(brute_force_frequent(db4, 2)) == {
            (1,): 3, (2,): 3, (3,): 2, (4,): 2, (1, 2): 2, (1, 3): 2, (2, 4): 2}
        for variant, ft in CONFIGS:
            res = run_apriori(db4, MiningConfig(2, variant, ft, block_lines=2), paper_cluster())
            assert res.level(1).as_dict() == {(1,): 3, (2,): 3, (3,): 2, (4,): 2}
            assert res.level(2).as_dict() == {(1, 2): 2, (1, 3): 2, (2, 4): 2}
            assert res.levels[-1].k == 3 and len(res.levels[-1]) == 0


def test_03_store_agreement():
    with criterion(3, "store agreement over 1000 random cases"):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            k = int(rng.integers(1, 5))
            size = int(rng.integers(0, 501))
            sets = [tuple(sorted(rng.choice(50, k, replace=False).tolist())) for _ in range(size)]
            t = tuple(sorted(rng.choice(50, int(rng.integers(0, 25)), replace=False).tolist()))
            expected = sorted({c for c in sets if set(c) <= set(t)})
            for variant in StoreVariant:
                assert build_store(sets, variant, k=k).subset_match(t) == expected


def test_04_determinism_and_combiner(tmp_path, db4_file):
    with criterion(4, "byte-identical reports; combiner on/off gives identical itemsets"):
        for fmt in ("json", "csv"):
            outputs = []
            for run in range(2):
                report = tmp_path / f"{fmt}{run}"
                argv = ["mine", "--input", str(db4_file), "--min-support", "2", "--seed", "9",
                        "--filtered-transactions", "on", "--output", str(tmp_path / f"items{run}"),
                        "--report", str(report), "--format", fmt]
                assert main(argv) == 0
                outputs.append((report.read_bytes(), (tmp_path / f"items{run}").read_bytes()))
            assert outputs[0] == outputs[1]

        db = synthetic_database(2000, items=30, seed=5)
        for variant, ft in CONFIGS:
            config = MiningConfig(0.02, variant, ft, block_lines=400, split_lines=150)
            on = run_apriori(db, config, paper_cluster())
            off = run_apriori(db, replace(config, use_combiner=False), paper_cluster())
            assert on.frequent_itemsets() == off.frequent_itemsets()
            assert len(on.frequent_itemsets()) > 30


def heterogeneous_cluster(slots=4):
    return flat_cluster([("P1", slots, 1.0), ("P2", slots, 1.0),
                         ("V1", slots, 0.67, NodeKind.VIRTUAL), ("V2", slots, 0.67, NodeKind.VIRTUAL)])


def test_05_heterogeneity():
    with criterion(5, "VM tasks take 29.85 vs 20.0; VMs ranked slowest"):
        started = time.perf_counter()
        cluster = heterogeneous_cluster()
        placement = BlockPlacement({b: (cluster.names[b % 4],) for b in range(12)})
        schedule = plan_schedule(equal_maps(12), placement, cluster)
        for r in schedule.records:
            expected = 20.0 if r.node.startswith("P") else 29.85
            assert r.duration == pytest.approx(expected, abs=0.01)
        rows = summarize_node_speeds(metrics_of(schedule, cluster))
        assert [r.kind for r in rows] == [NodeKind.VIRTUAL] * 2 + [NodeKind.PHYSICAL] * 2
        assert rows[0].mean_map_duration / rows[-1].mean_map_duration == pytest.approx(1.49, abs=0.01)
        assert time.perf_counter() - started < 1.0


def test_06_speculation():
    with criterion(6, "speculation halves the straggler makespan; none for equal tasks"):
        nodes = [("N1", 1, 1.0), ("N2", 1, 1.0), ("N3", 1, 1.0), ("N4", 1, 0.2)]
        placement = BlockPlacement({0: ("N1", "N2"), 1: ("N2", "N3"), 2: ("N3", "N1"), 3: ("N4", "N1")})
        tasks = equal_maps(4, records=10)
        on = plan_schedule(tasks, placement, flat_cluster(nodes, rf=2, speculation=True, ratio=1.5))
        off = plan_schedule(tasks, placement, flat_cluster(nodes, rf=2, speculation=False))
        # By hand: three tasks end at 10, the N4 task needs 10 / 0.2 = 50.  Median of
        # completed durations is 10, so it straggles at 1.5 x 10 = 15; the backup goes to
        # N1 (idle, speed 1, holds block 3) and ends at 15 + 10 = 25.
        assert off.makespan == pytest.approx(50.0, abs=0.01)
        assert on.makespan == pytest.approx(25.0, abs=0.01)
        assert on.makespan <= 0.5 * off.makespan
        backups = [r for r in on.records if r.is_speculative]
        assert len(backups) == 1
        assert (backups[0].node, backups[0].start, backups[0].end) == ("N1", 15.0, 25.0)
        assert sum(r.was_killed for r in on.records) == 1

        same = flat_cluster([(f"N{i}", 1, 1.0) for i in range(1, 5)], rf=2)
        equal = plan_schedule(tasks, BlockPlacement({b: (f"N{b + 1}",) for b in range(4)}),
                              replace(same, replication_factor=1))
        assert sum(r.is_speculative for r in equal.records) == 0


def test_07_placement():
    with criterion(7, "BD3 slowest under the pathology rule; VM-local tasks BD1=1, BD2=2"):
        cluster = paper_cluster(cost=FLAT)
        vms = {n.name for n in cluster.nodes if n.kind is NodeKind.VIRTUAL}
        makespans, vm_local = {}, {}
        for label, holders in LAB_BLOCK_DISTRIBUTIONS.items():
            rf = len(next(iter(holders.values())))
            c = replace(cluster, replication_factor=rf)
            s = plan_schedule(equal_maps(5), BlockPlacement(holders), c)
            makespans[label] = s.makespan
            vm_local[label] = sum(r.was_local and r.node in vms for r in s.records if not r.was_killed)
        print(f"  makespans {makespans}")
        assert makespans["BD3"] > makespans["BD1"]
        assert makespans["BD3"] > makespans["BD2"]
        assert vm_local["BD1"] == 1 and vm_local["BD2"] == 2


def test_08_split_control():
    with criterion(8, "5 block-splits vs 12 line splits: makespan ratio 12000/5000 within 10%"):
        db = synthetic_database(60000, items=60, seed=8)
        cluster = paper_cluster(replication_factor=1, cost=FLAT)
        blocks = partition_into_blocks(db, 12000)
        placement = BlockPlacement({b.block_id: (cluster.names[b.block_id % 4],) for b in blocks})
        makespans = {}
        for label, split_lines in (("blocks", None), ("split-5000", 5000)):
            splits = make_line_splits(db, split_lines, blocks)
            job = JobSpec("count", one_itemset_map, sum_reduce, db.lines, splits, sum_reduce, 4)
            _, metrics = run_job(job, placement, cluster)
            assert len(metrics.map_records()) == (5 if split_lines is None else 12)
            makespans[label] = metrics.makespan
        ratio = makespans["blocks"] / makespans["split-5000"]
        print(f"  makespans {makespans}, ratio {ratio:.3f}")
        assert ratio == pytest.approx(12000 / 5000, rel=0.10)


def test_09_node_removal():
    with criterion(9, "12 tasks: one wave on 4 nodes, two waves on the 2 physical nodes"):
        full = heterogeneous_cluster()
        physical = full.without("V1", "V2")
        one_wave = plan_schedule(equal_maps(12), BlockPlacement({b: (full.names[b % 4],) for b in range(12)}), full)
        two_waves = plan_schedule(equal_maps(12), BlockPlacement({b: (physical.names[b % 2],) for b in range(12)}),
                                  physical)
        assert {r.start for r in one_wave.records} == {0.0}
        assert one_wave.makespan == pytest.approx(20 / 0.67, abs=0.01)
        assert sorted({r.start for r in two_waves.records}) == [0.0, 20.0]
        assert two_waves.makespan == pytest.approx(40.0, abs=0.01)
        assert two_waves.makespan > one_wave.makespan


def test_10_filtered_transactions(db4):
    with criterion(10, "DB4 filtered transactions and L2 agree with the raw pipeline"):
        for variant in StoreVariant:
            ft = run_apriori(db4, MiningConfig(3, variant, True, block_lines=2), paper_cluster())
            raw = run_apriori(db4, MiningConfig(3, variant, False, block_lines=2), paper_cluster())
            assert {w.items: w.weight for w in ft.weighted_transactions} == {(1, 2): 2, (1,): 1, (2,): 1}
            assert ft.level(2).as_dict() == raw.level(2).as_dict()
            l1 = [i for (i,) in ft.level(1).itemsets()]
            for c in combinations(l1, 2):
                weighted = sum(w.weight for w in ft.weighted_transactions if set(c) <= set(w.items))
                assert weighted == support_of(c, db4)
            ft2 = run_apriori(db4, MiningConfig(2, variant, True, block_lines=2), paper_cluster())
            assert ft2.level(2).as_dict() == {(1, 2): 2, (1, 3): 2, (2, 4): 2}


def test_11_generation_once_per_task():
    with criterion(11, "apriori_gen runs once per Job2 map task for any split size"):
        db = synthetic_database(300, items=12, seed=11)
        for split_lines in (1, 4, 37, 300):
            res = run_apriori(db, MiningConfig(6, split_lines=split_lines, block_lines=100), paper_cluster())
            job2 = [j for j in res.jobs if j.name.startswith("job2")]
            assert len(job2) >= 2
            for job in job2:
                maps = job.map_records()
                assert len(maps) == math.ceil(300 / split_lines)
                assert all(job.counters[r.task_id]["apriori_gen_calls"] == 1 for r in maps)
