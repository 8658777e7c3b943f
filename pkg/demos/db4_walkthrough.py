"""
Mining a four-transaction database by hand
==========================================

Follows the four transactions (1 2 3), (1 2 4), (1 3), (2 4) through every
stage: candidate generation, subset matching, the filtered-transaction job
and the full chain of simulated MapReduce jobs.
"""
from mrapriori import DB4, apriori_gen, brute_force_frequent, build_store
from mrapriori.jobs import MiningConfig, ft_map, run_apriori
from mrapriori.oracle import flatten
from mrapriori.runtime import paper_cluster

# %%
# Level one: every item appears at least twice, so all four survive min count 2.
l1 = [(1,), (2,), (3,), (4,)]
c2 = apriori_gen(l1)
print("C2:", c2)

# %%
# Counting is subset matching of each transaction against the candidate store.
store = build_store(c2, "trie")
for t in DB4.transactions:
    print(t.items, "->", store.subset_match(t.items))

# %%
# (2, 3) and (1, 4) fall below the threshold, so (1, 2, 3) is pruned at level three.
l2 = [(1, 2), (1, 3), (2, 4)]
print("C3:", apriori_gen(l2))

# %%
# With min count 3 only items 1 and 2 are frequent; filtering collapses the
# database to three weighted lines.
print(list(ft_map(DB4.lines, build_store([(1,), (2,)]))))

# %%
# The whole chain on the four-node lab cluster, checked against brute force.
result = run_apriori(DB4, MiningConfig(2, use_filtered_transactions=True, block_lines=2), paper_cluster())
for level in result.levels:
    print(f"L{level.k}", level.as_dict())
for job in result.jobs:
    print(f"{job.name:8s} makespan {job.makespan:7.2f}")
assert result.frequent_itemsets() == flatten(brute_force_frequent(DB4, 2))
