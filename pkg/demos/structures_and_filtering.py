"""
Candidate stores and filtered transactions
==========================================

The three stores return the same matches; they differ only in the matching
cost charged by the duration model.  Filtering shrinks the input that every
later job reads.
"""
from mrapriori import experiments
from mrapriori.jobs import MiningConfig, run_apriori
from mrapriori.runtime import paper_cluster
from mrapriori.stores import StoreVariant, build_store
from mrapriori.synth import synthetic_database

store_input = [(1, 2, 3), (1, 2, 5), (1, 3, 5), (2, 3, 5), (2, 5, 9)]
for variant in StoreVariant:
    print(f"{variant.value:8s}", build_store(store_input, variant).subset_match((1, 2, 3, 5, 9)))

# %%
db = synthetic_database(3000, items=40, seed=0)
config = MiningConfig(0.02, num_splits=12)
for arm in experiments.structures(db, config, paper_cluster()).arms:
    print(f"{arm.label:8s} total makespan {arm.makespan:9.2f}")

# %%
# Filtered transactions: fewer, weighted lines for every Job2 pass.
plain = run_apriori(db, config, paper_cluster())
filtered = run_apriori(db, MiningConfig(0.02, use_filtered_transactions=True, num_splits=12), paper_cluster())
print(f"{len(db)} raw lines -> {len(filtered.weighted_transactions)} weighted lines")
print(f"without filtering {plain.total_makespan:9.2f}, with filtering {filtered.total_makespan:9.2f}")
assert plain.frequent_itemsets() == filtered.frequent_itemsets()
