"""Brute-force support counting used as ground truth.

Deliberately naive: every subset of the observed item universe (up to the
longest transaction) is counted against every transaction with bitmasks.
No downward closure, no candidate generation.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

from .dataset import TransactionDatabase, WeightedTransaction
from .itemset import Itemset, is_subset

MAX_UNIVERSE = 20

# Four transactions shared by the test-suite and the demos.
DB4 = TransactionDatabase.from_itemsets([(1, 2, 3), (1, 2, 4), (1, 3), (2, 4)])


class UniverseTooLarge(ValueError):
    pass


def _weighted(db):
    if isinstance(db, TransactionDatabase):
        return list(db.transactions)
    out = []
    for t in db:
        out.append(t if isinstance(t, WeightedTransaction) else WeightedTransaction(tuple(t), 1))
    return out


def support_of(c: Itemset, db) -> int:
    return sum(wt.weight for wt in _weighted(db) if is_subset(tuple(c), wt.items))


def brute_force_frequent(db, min_count: int, max_universe: int = MAX_UNIVERSE) -> dict[int, dict]:
    """All itemsets with support >= ``min_count``, grouped by length.

    Returns ``{k: {itemset: support}}`` with only non-empty lengths present.
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    rows = _weighted(db)
    if not rows:
        return {}
    universe = sorted({i for wt in rows for i in wt.items})
    if len(universe) > max_universe:
        raise UniverseTooLarge(
            f"{len(universe)} distinct items; the brute-force oracle handles at most "
            f"{max_universe}. Check a sample of the data or raise max_universe."
        )
    bit = {item: 1 << pos for pos, item in enumerate(universe)}
    masks = np.array([sum(bit[i] for i in wt.items) for wt in rows], dtype=np.int64)
    weights = np.array([wt.weight for wt in rows], dtype=np.int64)
    longest = max(len(wt.items) for wt in rows)

    table: dict[int, dict] = {}
    for k in range(1, longest + 1):
        subsets = list(combinations(range(len(universe)), k))
        if not subsets:
            break
        cand = np.array([sum(1 << p for p in s) for s in subsets], dtype=np.int64)
        level = {}
        for lo in range(0, len(cand), 4096):
            chunk = cand[lo:lo + 4096]
            hit = (masks[None, :] & chunk[:, None]) == chunk[:, None]
            counts = hit.astype(np.int64) @ weights
            for s, n in zip(subsets[lo:lo + 4096], counts.tolist()):
                if n >= min_count:
                    level[tuple(universe[p] for p in s)] = n
        if level:
            table[k] = dict(sorted(level.items()))
    return table


def flatten(table: dict[int, dict]) -> dict:
    return {key: n for k in sorted(table) for key, n in table[k].items()}
