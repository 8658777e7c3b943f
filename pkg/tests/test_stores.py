import pytest
from hypothesis import given, strategies as st

from mrapriori.itemset import ItemsetError
from mrapriori.stores import StoreVariant, TrieStore, build_store

VARIANTS = list(StoreVariant)


@st.composite
def collections(draw, max_size=120):
    k = draw(st.integers(1, 4))
    sets = draw(st.lists(st.frozensets(st.integers(0, 49), min_size=k, max_size=k), max_size=max_size))
    return k, [tuple(sorted(s)) for s in sets]


transactions = st.frozensets(st.integers(0, 49), max_size=20).map(lambda s: tuple(sorted(s)))


@pytest.mark.parametrize("variant", VARIANTS)
class TestExamples:
    def test_cardinality(self, variant):
        assert len(build_store([(1, 2), (1, 3), (2, 4)], variant)) == 3

    def test_empty(self, variant):
        store = build_store([], variant)
        assert store.subset_match((1, 2, 3)) == []
        assert store.enumerate() == []
        assert not store.contains((1,))

    def test_dedupe(self, variant):
        assert len(build_store([(1, 2), (1, 2)], variant)) == 1

    def test_contains(self, variant):
        store = build_store([(1, 2), (2, 4)], variant)
        assert store.contains((2, 4))
        assert not store.contains((1, 4))
        assert not store.contains((2,))  # length mismatch is a plain miss

    def test_subset_match(self, variant):
        store = build_store([(1, 2), (1, 3), (2, 4)], variant)
        assert store.subset_match((1, 2, 3)) == [(1, 2), (1, 3)]
        assert store.subset_match((1, 2, 3, 4)) == [(1, 2), (1, 3), (2, 4)]
        assert build_store([(1, 2)], variant).subset_match(()) == []

    def test_enumerate(self, variant):
        assert build_store([(2, 4), (1, 2)], variant).enumerate() == [(1, 2), (2, 4)]
        assert build_store([(5,)], variant).enumerate() == [(5,)]

    def test_mixed_lengths(self, variant):
        with pytest.raises(ItemsetError):
            build_store([(1,), (1, 2)], variant)


def test_variant_parse():
    assert StoreVariant.parse("httrie") is StoreVariant.HASH_TABLE_TRIE
    assert StoreVariant.parse("HASH_TREE") is StoreVariant.HASH_TREE
    with pytest.raises(ValueError):
        StoreVariant.parse("btree")


def test_hash_tree_splits_past_capacity():
    items = [(a, b) for a in range(12) for b in range(a + 1, 12)]
    built = build_store(items, StoreVariant.HASH_TREE, fanout=4, leaf_capacity=3)
    assert built.enumerate() == sorted(items)
    assert built.subset_match((0, 3, 7, 11)) == [(0, 3), (0, 7), (0, 11), (3, 7), (3, 11), (7, 11)]


@given(collections(), transactions)
def test_cross_variant_agreement(coll, t):
    _, sets = coll
    expected = sorted({c for c in sets if set(c) <= set(t)})
    for v in VARIANTS:
        assert build_store(sets, v).subset_match(t) == expected


@given(collections(), st.frozensets(st.integers(0, 49), min_size=1, max_size=4))
def test_contains_iff_inserted(coll, probe):
    k, sets = coll
    x = tuple(sorted(probe))
    for v in VARIANTS:
        store = build_store(sets, v, k=k)
        assert store.contains(x) == (len(x) == k and x in set(sets))
        assert all(store.contains(s) for s in sets)


@given(collections())
def test_enumerate_is_distinct_input(coll):
    _, sets = coll
    for v in VARIANTS:
        assert build_store(sets, v).enumerate() == sorted(set(sets))


@given(collections(), transactions)
def test_trie_walk_stays_within_transaction(coll, t):
    k, sets = coll
    visited = []
    store = build_store(sets, StoreVariant.TRIE, k=k, visit=visited.append)
    assert isinstance(store, TrieStore)
    store.subset_match(t)
    if t:
        assert all(i <= max(t) for i in visited)
    assert set(visited) <= set(t)
