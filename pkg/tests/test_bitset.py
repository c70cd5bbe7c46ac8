"""
位集合测试：与 Python set 比对的随机操作序列，以及稀疏位集合的空间占用
"""
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from src.domain.bitset import HybridBitSet, ObjectIndexer, PAGE_BITS, RegularBitSet, SparseBitSet

FACTORIES = {
    "regular": RegularBitSet,
    "sparse": SparseBitSet,
    "hybrid": lambda: HybridBitSet(threshold=4),
}

SEQUENCES = 3400
MAX_OPS = 30
MAX_INDEX = 65535


def random_indices(rng, size):
    # 一半落在前两页，让集合运算有机会重叠
    dense = rng.integers(0, 2 * PAGE_BITS, size=size)
    wide = rng.integers(0, MAX_INDEX + 1, size=size)
    return np.where(rng.random(size) < 0.5, dense, wide).tolist()


@pytest.mark.parametrize("kind", sorted(FACTORIES))
def test_random_sequences_match_set(kind):
    factory = FACTORIES[kind]
    rng = np.random.default_rng(20240607)
    for _ in range(SEQUENCES):
        bits, oracle = factory(), set()
        for _ in range(int(rng.integers(1, MAX_OPS + 1))):
            op = int(rng.integers(0, 6))
            if op <= 1:
                index = random_indices(rng, 1)[0]
                assert bits.set(index) == (index not in oracle)
                oracle.add(index)
            elif op == 2:
                if oracle and rng.random() < 0.5:
                    index = sorted(oracle)[int(rng.integers(0, len(oracle)))]
                else:
                    index = random_indices(rng, 1)[0]
                assert bits.clear(index) == (index in oracle)
                oracle.discard(index)
            else:
                values = set(random_indices(rng, int(rng.integers(0, 8))) + list(oracle)[:2])
                other = factory()
                for value in values:
                    other.set(value)
                if op == 3:
                    expected = oracle | values
                    assert bits.or_into(other) == (expected != oracle)
                elif op == 4:
                    expected = oracle & values
                    assert bits.and_into(other) == (expected != oracle)
                else:
                    expected = oracle - values
                    assert bits.and_not(other) == (expected != oracle)
                oracle = expected
            assert bits.cardinality() == len(oracle)
        assert list(bits) == sorted(oracle)
        for probe in random_indices(rng, 4) + sorted(oracle)[:2]:
            assert bits.contains(probe) == (probe in oracle)


@pytest.mark.parametrize("kind", sorted(FACTORIES))
def test_copy_is_independent(kind):
    bits = FACTORIES[kind]()
    for index in (1, 300, 5000, 7, 9, 11):
        bits.set(index)
    clone = bits.copy()
    clone.set(42)
    clone.clear(300)
    assert list(bits) == [1, 7, 9, 11, 300, 5000]
    assert list(clone) == [1, 7, 9, 11, 42, 5000]
    assert clone != bits


@pytest.mark.parametrize("kind", sorted(FACTORIES))
def test_negative_index_rejected(kind):
    bits = FACTORIES[kind]()
    with pytest.raises(ValueError):
        bits.set(-1)
    assert -1 not in bits
    assert not bits.contains(-1)


def test_mixed_kinds_interoperate():
    sparse, regular = SparseBitSet(), RegularBitSet()
    for index in (3, 700):
        sparse.set(index)
    for index in (700, 9000):
        regular.set(index)
    assert sparse.or_into(regular)
    assert list(sparse) == [3, 700, 9000]
    assert regular.and_not(sparse)
    assert regular.is_empty()


class TestRegularBitSet:

    def test_capacity_is_word_aligned(self):
        assert RegularBitSet(4096).allocated_bits() == 4096
        assert RegularBitSet(1).allocated_bits() == 32
        bits = RegularBitSet()
        bits.set(40)
        assert bits.allocated_bits() == 64


class TestSparseBitSet:

    def test_directory_grows_alternately(self):
        bits = SparseBitSet()
        shapes = [bits.directory_shape]
        for page in (1, 2, 4, 8):
            bits.set(page * PAGE_BITS)
            shapes.append(bits.directory_shape)
        assert shapes == [(1, 1), (1, 2), (2, 2), (2, 4), (4, 4)]
        assert list(bits) == [p * PAGE_BITS for p in (1, 2, 4, 8)]

    def test_allocated_bits(self):
        bits = SparseBitSet()
        for index in (20, 100, 3990, 3993):
            bits.set(index)
        assert bits.leaf_count() == 2
        assert bits.directory_shape == (4, 4)
        assert bits.second_level_count() == 2
        assert bits.allocated_bits() == 2 * 256 + 32 * (4 + 2 * 4) == 896
        assert bits.one_level_allocated_bits(16) == 1024
        assert bits.one_level_allocated_bits() == 2 * 256 + 16 * 32

    def test_compact_reclaims_empty_pages(self):
        bits = SparseBitSet()
        for index in (20, 3990):
            bits.set(index)
        bits.clear(3990)
        assert bits.leaf_count() == 2
        bits.compact()
        assert bits.leaf_count() == 1
        assert bits.second_level_count() == 1
        assert list(bits.page_map()) == [0]
        assert list(bits) == [20]

    @pytest.mark.parametrize("pages", [16, 32, 64])
    def test_half_filled_pages_beat_regular(self, pages):
        rng = np.random.default_rng(pages)
        for _ in range(50):
            filled = rng.choice(pages, size=int(rng.integers(1, math.ceil(pages / 2) + 1)), replace=False)
            sparse = SparseBitSet()
            for page in filled.tolist():
                sparse.set(page * PAGE_BITS + int(rng.integers(0, PAGE_BITS)))
            assert sparse.allocated_bits() < RegularBitSet(pages * PAGE_BITS).allocated_bits()


class TestHybridBitSet:

    def test_promotes_after_threshold(self):
        bits = HybridBitSet(threshold=3)
        for index in (9, 1, 5):
            bits.set(index)
        assert bits.is_small
        assert bits.allocated_bits() == 3 * 32
        bits.set(1000)
        assert not bits.is_small
        bits.clear(1000)
        bits.clear(9)
        assert not bits.is_small
        assert list(bits) == [1, 5]

    def test_duplicate_does_not_promote(self):
        bits = HybridBitSet(threshold=1)
        bits.set(4)
        assert not bits.set(4)
        assert bits.is_small

    def test_large_factory(self):
        bits = HybridBitSet(threshold=0, large_factory=RegularBitSet)
        bits.set(70)
        assert bits.allocated_bits() == 96

    def test_negative_threshold(self):
        with pytest.raises(ValueError):
            HybridBitSet(threshold=-1)


class TestObjectIndexer:

    def test_dense_stable_indices(self):
        indexer = ObjectIndexer()
        assert [indexer.get_index(x) for x in "abca"] == [0, 1, 2, 0]
        assert indexer.get_object(1) == "b"
        assert len(indexer) == 3 and "c" in indexer and "z" not in indexer

    def test_concurrent_registration(self):
        indexer = ObjectIndexer()
        items = [f"obj{i}" for i in range(200)]
        with ThreadPoolExecutor(max_workers=4) as pool:
            results = list(pool.map(indexer.get_index, items * 4))
        assert sorted(set(results)) == list(range(200))
        assert all(indexer.get_object(indexer.get_index(item)) == item for item in items)
