"""Itemset algebra: canonical itemsets, subset tests and Apriori candidate generation.

An itemset is a plain ``tuple`` of non-negative ints in strictly ascending
order.  Tuples are hashable, compare lexicographically and sort the way the
rest of the package expects, so no wrapper class is needed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import groupby
from typing import Callable, Iterable, Mapping

Itemset = tuple  # tuple[int, ...], strictly ascending


class ItemsetError(ValueError):
    """Raised for malformed item ids or itemsets of the wrong length."""


def make_itemset(raw_ids: Iterable[int]) -> Itemset:
    ids = set()
    for i in raw_ids:
        if isinstance(i, bool) or not isinstance(i, int):
            raise ItemsetError(f"item id must be an integer, got {i!r}")
        if i < 0:
            raise ItemsetError(f"item id must be non-negative, got {i}")
        ids.add(i)
    return tuple(sorted(ids))


def is_canonical(items: Itemset) -> bool:
    return all(a < b for a, b in zip(items, items[1:]))


def is_subset(a: Itemset, b: Itemset) -> bool:
    """True iff every item of ``a`` occurs in ``b``; both must be canonical."""
    if len(a) > len(b):
        return False
    j = 0
    nb = len(b)
    for x in a:
        while j < nb and b[j] < x:
            j += 1
        if j == nb or b[j] != x:
            return False
        j += 1
    return True


def join_step(a: Itemset, b: Itemset) -> Itemset | None:
    """Join two (k-1)-itemsets sharing their first k-2 items.

    Returns ``a + (last(b),)`` when the prefixes agree and ``last(a) < last(b)``,
    otherwise ``None``.
    """
    if len(a) != len(b):
        raise ItemsetError(f"cannot join itemsets of lengths {len(a)} and {len(b)}")
    if not a:
        raise ItemsetError("cannot join empty itemsets")
    if a[:-1] == b[:-1] and a[-1] < b[-1]:
        return a + (b[-1],)
    return None


@dataclass
class FrequentLevel:
    """Frequent itemsets of one length ``k`` with their support counts."""

    k: int
    supports: dict = field(default_factory=dict)

    def __post_init__(self):
        for key in self.supports:
            if len(key) != self.k:
                raise ItemsetError(f"level {self.k} holds itemset {key} of length {len(key)}")

    def __len__(self):
        return len(self.supports)

    def __contains__(self, itemset):
        return itemset in self.supports

    def __iter__(self):
        return iter(sorted(self.supports))

    def itemsets(self) -> list[Itemset]:
        return sorted(self.supports)

    def as_dict(self) -> dict:
        return {key: self.supports[key] for key in sorted(self.supports)}


def apriori_gen(
    prev: FrequentLevel | Mapping | Iterable[Itemset],
    contains: Callable[[Itemset], bool] | None = None,
) -> list[Itemset]:
    """Generate candidate k-itemsets from the frequent (k-1)-itemsets.

    Itemsets sharing a (k-2)-prefix are joined pairwise, then a candidate is
    kept only if all of its (k-1)-subsets are in ``prev``.  ``contains`` lets
    the caller prune against its own store instead of a fresh set.  The
    result is sorted lexicographically.
    """
    if isinstance(prev, FrequentLevel):
        keys = prev.itemsets()
    else:
        keys = sorted(set(prev))
    if not keys:
        return []
    if contains is None:
        members = frozenset(keys)
        contains = members.__contains__

    out = []
    # sorted keys put every join partner of a in the same prefix group, after a
    for _, group in groupby(keys, key=lambda s: s[:-1]):
        group = list(group)
        for i, a in enumerate(group):
            for b in group[i + 1:]:
                cand = a + (b[-1],)
                # the two subsets dropping one of the last two items are a and b
                for j in range(len(cand) - 2):
                    if not contains(cand[:j] + cand[j + 1:]):
                        break
                else:
                    out.append(cand)
    return out
