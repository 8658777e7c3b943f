"""Apriori frequent-itemset mining on a simulated heterogeneous MapReduce cluster."""
from .dataset import (
    Block,
    FormatError,
    ParseError,
    Split,
    TransactionDatabase,
    WeightedTransaction,
    decode_weighted_transaction,
    encode_weighted_transaction,
    make_line_splits,
    parse_transaction_line,
    partition_into_blocks,
    read_transactions,
)
from .itemset import FrequentLevel, ItemsetError, apriori_gen, is_subset, join_step, make_itemset
from .jobs import MiningConfig, MiningResult, run_apriori
from .oracle import DB4, brute_force_frequent, support_of
from .stores import StoreVariant, build_store

__version__ = "0.1.0"
