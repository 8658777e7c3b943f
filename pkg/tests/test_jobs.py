from collections import Counter
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mrapriori.dataset import TransactionDatabase
from mrapriori.itemset import is_subset
from mrapriori.jobs import (
    LevelCache,
    MiningConfig,
    filter_transaction,
    format_frequent_itemsets,
    ft_map,
    k_itemset_map,
    one_itemset_map,
    run_apriori,
    sum_reduce,
)
from mrapriori.oracle import support_of
from mrapriori.runtime import TaskContext, paper_cluster
from mrapriori.stores import StoreVariant, build_store
from mrapriori.synth import random_small_database, synthetic_database

L1_DB4 = {(1,): 3, (2,): 3, (3,): 2, (4,): 2}
L2_DB4 = {(1, 2): 2, (1, 3): 2, (2, 4): 2}


def db_strategy():
    row = st.frozensets(st.integers(0, 9), min_size=1, max_size=6).map(sorted)
    return st.lists(row, min_size=1, max_size=50).map(TransactionDatabase.from_itemsets)


class TestMapReduceFunctions:
    def test_one_itemset_map(self):
        assert list(one_itemset_map(["1 2 3"])) == [((1,), 1), ((2,), 1), ((3,), 1)]
        assert list(one_itemset_map([""])) == []
        assert list(one_itemset_map(["1 2", "2"])) == [((1,), 1), ((2,), 1), ((2,), 1)]

    def test_sum_reduce(self):
        assert sum_reduce((1,), [1, 1, 1], 2) == ((1,), 3)
        assert sum_reduce((3,), [1], 2) is None
        assert sum_reduce((1, 2), [2, 1]) == ((1, 2), 3)

    def test_filter_transaction(self):
        assert filter_transaction(build_store([(1,), (2,), (4,)]), (1, 3, 4, 9)) == (1, 4)
        assert filter_transaction(build_store([(1,), (2,)]), (3, 4)) == ()
        assert filter_transaction(build_store([(1,), (3,)]), (1, 3)) == (1, 3)

    def test_ft_map_db4(self, db4):
        l1 = build_store([(1,), (2,)])
        assert list(ft_map(db4.lines, l1)) == [((1, 2), 1), ((1, 2), 1), ((1,), 1), ((2,), 1)]
        assert list(ft_map(["3 4"], l1)) == []
        assert list(ft_map(db4.lines, build_store([], k=1))) == []

    def test_k_itemset_map_weighted(self):
        cache = LevelCache(((1,), (2,)), 2, weighted=True)
        assert list(k_itemset_map(["1 2 2"], cache)) == [((1, 2), 2)]
        assert list(k_itemset_map(["3 5 1"], cache)) == []

    def test_k_itemset_map_db4_pairs(self, db4):
        cache = LevelCache(tuple(L1_DB4), 2)
        got = Counter()
        for key, w in k_itemset_map(db4.lines, cache):
            got[key] += w
        pairs = [(a, b) for a in range(1, 5) for b in range(a + 1, 5)]
        expected = {p: support_of(p, db4) for p in pairs if support_of(p, db4)}
        assert dict(got) == expected == {(1, 2): 2, (1, 3): 2, (1, 4): 1, (2, 3): 1, (2, 4): 2}

    def test_k_itemset_map_counts_generation(self, db4):
        ctx = TaskContext("m_0")
        list(k_itemset_map(db4.lines, LevelCache(tuple(L1_DB4), 2), ctx))
        assert ctx.counters["apriori_gen_calls"] == 1
        assert ctx.counters["candidates"] == 6

    def test_empty_candidates_emit_nothing(self):
        assert list(k_itemset_map(["1 2 3"], LevelCache(((1, 2), (2, 3)), 3))) == []


class TestMiningConfig:
    def test_fraction_ceiling(self):
        assert MiningConfig(0.5).min_count(4) == 2
        assert MiningConfig(0.3).min_count(4) == 2
        assert MiningConfig(0.001).min_count(4) == 1

    @pytest.mark.parametrize("bad", [0, 1.5, -1, 0.0, True])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            MiningConfig(bad)


class TestRunApriori:
    def run(self, db, **kw):
        config = MiningConfig(**{"block_lines": 2, **kw})
        return run_apriori(db, config, paper_cluster())

    @pytest.mark.parametrize("variant", list(StoreVariant))
    @pytest.mark.parametrize("ft", [False, True])
    def test_db4(self, db4, variant, ft):
        res = self.run(db4, min_support=2, variant=variant, use_filtered_transactions=ft)
        assert res.level(1).as_dict() == L1_DB4
        assert res.level(2).as_dict() == L2_DB4
        assert len(res.level(3)) == 0
        assert [lv.k for lv in res.levels] == [1, 2, 3]

    def test_threshold_above_db(self, db4):
        res = self.run(db4, min_support=5, use_filtered_transactions=True)
        assert len(res.levels) == 1 and not res.levels[0]
        assert [j.name for j in res.jobs] == ["job1"]

    def test_job_names(self, db4):
        res = self.run(db4, min_support=2, use_filtered_transactions=True)
        assert [j.name for j in res.jobs] == ["job1", "job_ft", "job2_k2", "job2_k3"]

    def test_empty_db_rejected(self):
        with pytest.raises(ValueError):
            self.run(TransactionDatabase((), ()))

    def test_output_file_format(self, db4):
        text = format_frequent_itemsets(self.run(db4, min_support=2))
        assert text == "1\t3\n2\t3\n3\t2\n4\t2\n1 2\t2\n1 3\t2\n2 4\t2\n"

    def test_ft_weighted_db4(self, db4):
        res = self.run(db4, min_support=3, use_filtered_transactions=True)
        assert {w.items: w.weight for w in res.weighted_transactions} == {(1, 2): 2, (1,): 1, (2,): 1}

    @given(db_strategy(), st.integers(1, 5))
    def test_ft_soundness_and_compaction(self, db, min_count):
        res = self.run(db, min_support=min_count, use_filtered_transactions=True)
        l1 = {i for (i,) in res.level(1).itemsets()}
        if not l1:
            return
        ft = res.weighted_transactions
        kept = [t for t in db.transactions if l1 & set(t.items)]
        assert len(ft) <= len(kept)
        assert sum(w.weight for w in ft) == len(kept)
        frequent = sorted(l1)
        rng = np.random.default_rng(min_count)
        for _ in range(10):
            size = int(rng.integers(1, min(4, len(frequent)) + 1))
            c = tuple(sorted(rng.choice(frequent, size, replace=False).tolist()))
            assert sum(w.weight for w in ft if is_subset(c, w.items)) == support_of(c, db)

    @given(db_strategy(), st.integers(1, 4))
    def test_downward_closure(self, db, min_count):
        res = self.run(db, min_support=min_count)
        for prev, level in zip(res.levels, res.levels[1:]):
            for key in level.itemsets():
                for j in range(len(key)):
                    assert key[:j] + key[j + 1:] in prev

    @pytest.mark.parametrize("split_lines", [1, 3, 7, 50])
    def test_generation_once_per_task(self, split_lines):
        db = synthetic_database(60, items=8, seed=1)
        res = self.run(db, min_support=3, split_lines=split_lines)
        for job in res.jobs[1:]:
            maps = job.map_records()
            assert maps
            assert [job.counters[r.task_id]["apriori_gen_calls"] for r in maps] == [1] * len(maps)

    def test_combiner_toggle(self):
        db = random_small_database(np.random.default_rng(4))
        config = MiningConfig(2, block_lines=20)
        on = run_apriori(db, config, paper_cluster())
        off = run_apriori(db, replace(config, use_combiner=False), paper_cluster())
        assert on.frequent_itemsets() == off.frequent_itemsets()
