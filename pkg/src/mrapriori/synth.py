"""Seeded synthetic click-stream style transaction data."""
from __future__ import annotations

import numpy as np

from .dataset import TransactionDatabase


def synthetic_database(lines: int, items: int = 60, mean_length: float = 3.0, seed: int = 0) -> TransactionDatabase:
    """``lines`` transactions over ``items`` ids with Zipf-like item popularity.

    Lengths are 1 + Poisson(mean_length - 1), capped at ``items``.
    """
    rng = np.random.default_rng(seed)
    popularity = 1.0 / np.arange(1, items + 1)
    popularity /= popularity.sum()
    lengths = np.minimum(1 + rng.poisson(max(mean_length - 1, 0.0), size=lines), items)
    rows = [rng.choice(items, size=int(n), replace=False, p=popularity) + 1 for n in lengths]
    return TransactionDatabase.from_itemsets(r.tolist() for r in rows)


def random_small_database(rng: np.random.Generator, max_transactions=200, max_items=15, max_length=8):
    """Small random database for oracle comparisons."""
    n = int(rng.integers(1, max_transactions + 1))
    universe = int(rng.integers(1, max_items + 1))
    rows = []
    for _ in range(n):
        size = int(rng.integers(1, min(max_length, universe) + 1))
        rows.append(rng.choice(universe, size=size, replace=False).tolist())
    return TransactionDatabase.from_itemsets(rows)
