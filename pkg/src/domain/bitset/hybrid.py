"""
混合集合
元素不多时用有序列表，超过阈值后一次性转为稀疏位集合
"""
from bisect import bisect_left
from typing import Callable, Iterator, List, Optional

from .base import BitSet, WORD_BITS, check_index
from .sparse import SparseBitSet

DEFAULT_THRESHOLD = 8


class HybridBitSet(BitSet):
    """
    混合集合

    小模式（基数 ≤ threshold）用有序 Python 列表；第 threshold + 1 个元素加入时
    转为大模式，之后不再回退。
    """

    def __init__(self, threshold: int = DEFAULT_THRESHOLD,
                 large_factory: Callable[[], BitSet] = SparseBitSet):
        if threshold < 0:
            raise ValueError("threshold 不能为负")
        self.threshold = threshold
        self._factory = large_factory
        self._small: Optional[List[int]] = []
        self._large: Optional[BitSet] = None

    @property
    def is_small(self) -> bool:
        return self._small is not None

    def _promote(self) -> None:
        large = self._factory()
        for index in self._small:
            large.set(index)
        self._large = large
        self._small = None

    def set(self, index: int) -> bool:
        check_index(index)
        if self._small is None:
            return self._large.set(index)
        position = bisect_left(self._small, index)
        if position < len(self._small) and self._small[position] == index:
            return False
        if len(self._small) < self.threshold:
            self._small.insert(position, index)
            return True
        self._promote()
        return self._large.set(index)

    def clear(self, index: int) -> bool:
        if self._small is None:
            return self._large.clear(index)
        position = bisect_left(self._small, index)
        if position < len(self._small) and self._small[position] == index:
            del self._small[position]
            return True
        return False

    def contains(self, index: int) -> bool:
        if self._small is None:
            return self._large.contains(index)
        position = bisect_left(self._small, index)
        return position < len(self._small) and self._small[position] == index

    def __iter__(self) -> Iterator[int]:
        if self._small is None:
            return iter(self._large)
        return iter(list(self._small))

    def cardinality(self) -> int:
        return len(self._small) if self._small is not None else self._large.cardinality()

    def allocated_bits(self) -> int:
        if self._small is not None:
            return self.threshold * WORD_BITS
        return self._large.allocated_bits()

    def or_into(self, other: BitSet) -> bool:
        if self._small is None and isinstance(other, HybridBitSet) and other._large is not None:
            return self._large.or_into(other._large)
        return super().or_into(other)

    def copy(self) -> "HybridBitSet":
        clone = HybridBitSet(self.threshold, self._factory)
        if self._small is not None:
            clone._small = list(self._small)
        else:
            clone._small = None
            clone._large = self._large.copy()
        return clone


