"""Candidate stores: trie, hash tree and hash-table trie.

All three hold the itemsets of one level and answer the same three questions:
membership, enumeration in lexicographic order, and which stored itemsets are
contained in a transaction.  They are built once and then only read.
"""
from __future__ import annotations

import enum
from bisect import bisect_left
from typing import Callable, Iterable

from .itemset import Itemset, ItemsetError


class StoreVariant(enum.Enum):
    TRIE = "trie"
    HASH_TREE = "hashtree"
    HASH_TABLE_TRIE = "httrie"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        text = str(value).lower().replace("-", "_")
        for v in cls:
            if text in (v.value, v.name.lower()):
                return v
        raise ValueError(f"unknown store variant {value!r}; choose trie, hashtree or httrie")


class CandidateStore:
    variant: StoreVariant

    def __init__(self, k: int | None):
        self.k = k
        self._size = 0

    def __len__(self):
        return self._size

    def __contains__(self, itemset):
        return self.contains(itemset)

    def __iter__(self):
        return iter(self.enumerate())

    def contains(self, x: Itemset) -> bool:
        """Exact membership.  A length mismatch is simply ``False``."""
        if self.k is None or len(x) != self.k:
            return False
        return self._contains(x if type(x) is tuple else tuple(x))

    def subset_match(self, t: Itemset) -> list[Itemset]:
        """Stored itemsets contained in transaction ``t``, lexicographically sorted."""
        if self.k is None or len(t) < self.k:
            return []
        return self._subset_match(tuple(t))

    def enumerate(self) -> list[Itemset]:
        raise NotImplementedError

    def _insert(self, x):
        raise NotImplementedError

    def _contains(self, x):
        raise NotImplementedError

    def _subset_match(self, t):
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} k={self.k} size={self._size}>"


class _TrieNode:
    __slots__ = ("items", "children", "terminal")

    def __init__(self):
        self.items = []  # ascending item ids
        self.children = []  # parallel to items
        self.terminal = False


class TrieStore(CandidateStore):
    """Prefix tree with children kept in ascending item order.

    ``visit`` is an instrumentation hook called with every item the subset
    walk descends on.
    """

    variant = StoreVariant.TRIE

    def __init__(self, k, visit: Callable[[int], None] | None = None):
        super().__init__(k)
        self.root = _TrieNode()
        self.visit = visit

    def _insert(self, x):
        node = self.root
        for item in x:
            items = node.items
            if items and items[-1] == item:
                node = node.children[-1]
                continue
            pos = len(items) if not items or items[-1] < item else bisect_left(items, item)
            if pos < len(items) and items[pos] == item:
                node = node.children[pos]
            else:
                child = _TrieNode()
                items.insert(pos, item)
                node.children.insert(pos, child)
                node = child
        if not node.terminal:
            node.terminal = True
            self._size += 1

    def _contains(self, x):
        node = self.root
        for item in x:
            pos = bisect_left(node.items, item)
            if pos == len(node.items) or node.items[pos] != item:
                return False
            node = node.children[pos]
        return node.terminal

    def enumerate(self):
        out = []

        def walk(node, prefix):
            if node.terminal:
                out.append(prefix)
            for item, child in zip(node.items, node.children):
                walk(child, prefix + (item,))

        walk(self.root, ())
        return out

    def _subset_match(self, t):
        out = []
        k = self.k
        n = len(t)
        visit = self.visit

        def walk(node, start, prefix, depth):
            if depth == k:
                if node.terminal:
                    out.append(prefix)
                return
            # leave room for the k - depth - 1 items still needed below this one
            last = n - (k - depth)
            items = node.items
            ci = 0
            ti = start
            nc = len(items)
            # ordered merge of the node's children with the remaining transaction
            while ci < nc and ti <= last:
                c, x = items[ci], t[ti]
                if c < x:
                    ci = bisect_left(items, x, ci + 1)
                elif x < c:
                    ti += 1
                else:
                    if visit is not None:
                        visit(c)
                    walk(node.children[ci], ti + 1, prefix + (c,), depth + 1)
                    ci += 1
                    ti += 1

        walk(self.root, 0, (), 0)
        return out


class HashTableTrieStore(CandidateStore):
    """Trie whose per-node child lookup is a hash table (dict)."""

    variant = StoreVariant.HASH_TABLE_TRIE

    def __init__(self, k):
        super().__init__(k)
        self.root = {}
        self._terminals = set()

    def _insert(self, x):
        node = self.root
        for item in x:
            node = node.setdefault(item, {})
        if x not in self._terminals:
            self._terminals.add(x)
            self._size += 1

    def _contains(self, x):
        if not self._size:
            return False
        node = self.root
        for item in x:
            node = node.get(item)
            if node is None:
                return False
        # every root-to-depth-k path ends at a stored itemset
        return True

    def enumerate(self):
        out = []

        def walk(node, prefix):
            if len(prefix) == self.k:
                out.append(prefix)
                return
            for item in sorted(node):
                walk(node[item], prefix + (item,))

        if self._size:
            walk(self.root, ())
        return out

    def _subset_match(self, t):
        out = []
        k = self.k
        n = len(t)

        def walk(node, start, prefix, depth):
            if depth == k:
                out.append(prefix)
                return
            for ti in range(start, n - (k - depth) + 1):
                child = node.get(t[ti])
                if child is not None:
                    walk(child, ti + 1, prefix + (t[ti],), depth + 1)

        # t is ascending, so matches come out in lexicographic order
        if self._size:
            walk(self.root, 0, (), 0)
        return out


class _Leaf:
    __slots__ = ("itemsets",)

    def __init__(self):
        self.itemsets = []


class _Interior:
    __slots__ = ("buckets",)

    def __init__(self):
        self.buckets = {}


class HashTreeStore(CandidateStore):
    """Classical Apriori hash tree.

    Interior nodes at depth d route on ``itemset[d] % fanout``; leaves hold up
    to ``leaf_capacity`` itemsets and split into an interior node when they
    overflow, unless they already sit at depth k.
    """

    variant = StoreVariant.HASH_TREE

    def __init__(self, k, fanout: int = 8, leaf_capacity: int = 16):
        super().__init__(k)
        if fanout < 1 or leaf_capacity < 1:
            raise ValueError("fanout and leaf_capacity must be positive")
        self.fanout = fanout
        self.leaf_capacity = leaf_capacity
        self.root = _Leaf()

    def _bucket(self, item):
        return item % self.fanout

    def _insert(self, x):
        if self._contains(x):
            return
        self._size += 1
        parent, key, node, depth = None, None, self.root, 0
        while type(node) is _Interior:
            key = x[depth] % self.fanout
            parent = node
            node = node.buckets.setdefault(key, _Leaf())
            depth += 1
        node.itemsets.append(x)
        if len(node.itemsets) > self.leaf_capacity and depth < self.k:
            split = self._split(node.itemsets, depth)
            if parent is None:
                self.root = split
            else:
                parent.buckets[key] = split

    def _split(self, itemsets, depth):
        node = _Interior()
        for x in itemsets:
            node.buckets.setdefault(self._bucket(x[depth]), _Leaf()).itemsets.append(x)
        for key, leaf in list(node.buckets.items()):
            if len(leaf.itemsets) > self.leaf_capacity and depth + 1 < self.k:
                node.buckets[key] = self._split(leaf.itemsets, depth + 1)
        return node

    def _contains(self, x):
        node, depth, fanout = self.root, 0, self.fanout
        while type(node) is _Interior:
            node = node.buckets.get(x[depth] % fanout)
            if node is None:
                return False
            depth += 1
        return x in node.itemsets

    def enumerate(self):
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, _Leaf):
                out.extend(node.itemsets)
            else:
                stack.extend(node.buckets.values())
        return sorted(out)

    def _subset_match(self, t):
        found = set()
        seen_leaves = set()
        k = self.k
        n = len(t)
        fanout = self.fanout
        items = frozenset(t)

        def walk(node, start, depth):
            if type(node) is _Leaf:
                # one leaf can be reached along several item paths
                if id(node) in seen_leaves:
                    return
                seen_leaves.add(id(node))
                found.update(x for x in node.itemsets if items.issuperset(x))
                return
            for ti in range(start, n - (k - depth) + 1):
                child = node.buckets.get(t[ti] % fanout)
                if child is not None:
                    walk(child, ti + 1, depth + 1)

        walk(self.root, 0, 0)
        return sorted(found)


_STORE_TYPES = {
    StoreVariant.TRIE: TrieStore,
    StoreVariant.HASH_TREE: HashTreeStore,
    StoreVariant.HASH_TABLE_TRIE: HashTableTrieStore,
}


def build_store(itemsets: Iterable[Itemset], variant=StoreVariant.TRIE, k: int | None = None, **params) -> CandidateStore:
    """Build a read-only store of one variant from same-length itemsets.

    Duplicates are collapsed.  ``k`` may be given to type an empty store;
    extra keyword arguments go to the variant's constructor (``fanout`` and
    ``leaf_capacity`` for the hash tree, ``visit`` for the trie).
    """
    variant = StoreVariant.parse(variant)
    itemsets = [tuple(x) for x in itemsets]
    lengths = {len(x) for x in itemsets}
    if len(lengths) > 1:
        raise ItemsetError(f"mixed itemset lengths in one store: {sorted(lengths)}")
    if lengths:
        (found,) = lengths
        if k is not None and k != found:
            raise ItemsetError(f"store typed k={k} but itemsets have length {found}")
        k = found
    store = _STORE_TYPES[variant](k, **params)
    for x in itemsets:
        store._insert(x)
    return store
