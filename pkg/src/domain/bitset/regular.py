"""
常规位集合
连续的 uint8 数组，按 32 位字粒度增长
"""
from typing import Iterator, Optional

import numpy as np

from .base import BitSet, WORD_BITS, check_index, popcount, set_positions

_WORD_BYTES = WORD_BITS // 8


def _bytes_for(bits: int) -> int:
    words = (bits + WORD_BITS - 1) // WORD_BITS
    return words * _WORD_BYTES


class RegularBitSet(BitSet):
    """
    常规位集合

    容量始终不小于最高置位下标 + 1，并按字对齐；allocated_bits 即容量。
    """

    def __init__(self, capacity: int = 0):
        self._bytes = np.zeros(_bytes_for(max(capacity, 0)), dtype=np.uint8)
        self._count: Optional[int] = 0

    def _ensure(self, index: int) -> None:
        needed = _bytes_for(index + 1)
        if needed > len(self._bytes):
            grown = np.zeros(needed, dtype=np.uint8)
            grown[:len(self._bytes)] = self._bytes
            self._bytes = grown

    def set(self, index: int) -> bool:
        check_index(index)
        self._ensure(index)
        byte, mask = index >> 3, 1 << (index & 7)
        current = int(self._bytes[byte])
        if current & mask:
            return False
        self._bytes[byte] = current | mask
        if self._count is not None:
            self._count += 1
        return True

    def clear(self, index: int) -> bool:
        check_index(index)
        byte, mask = index >> 3, 1 << (index & 7)
        if byte >= len(self._bytes):
            return False
        current = int(self._bytes[byte])
        if not current & mask:
            return False
        self._bytes[byte] = current & ~mask & 0xFF
        if self._count is not None:
            self._count -= 1
        return True

    def contains(self, index: int) -> bool:
        byte = index >> 3
        return 0 <= index and byte < len(self._bytes) and bool(int(self._bytes[byte]) & (1 << (index & 7)))

    def __iter__(self) -> Iterator[int]:
        return iter(set_positions(self._bytes).tolist())

    def cardinality(self) -> int:
        if self._count is None:
            self._count = popcount(self._bytes)
        return self._count

    def allocated_bits(self) -> int:
        return len(self._bytes) * 8

    def copy(self) -> "RegularBitSet":
        clone = RegularBitSet()
        clone._bytes = self._bytes.copy()
        clone._count = self._count
        return clone

    def or_into(self, other: BitSet) -> bool:
        if not isinstance(other, RegularBitSet):
            return super().or_into(other)
        nonzero = np.flatnonzero(other._bytes)
        if nonzero.size == 0:
            return False
        length = int(nonzero[-1]) + 1
        self._ensure(length * 8 - 1)
        merged = self._bytes[:length] | other._bytes[:length]
        if np.array_equal(merged, self._bytes[:length]):
            return False
        self._bytes[:length] = merged
        self._count = None
        return True

    def and_into(self, other: BitSet) -> bool:
        if not isinstance(other, RegularBitSet):
            return super().and_into(other)
        mask = np.zeros(len(self._bytes), dtype=np.uint8)
        shared = min(len(self._bytes), len(other._bytes))
        mask[:shared] = other._bytes[:shared]
        merged = self._bytes & mask
        if np.array_equal(merged, self._bytes):
            return False
        self._bytes = merged
        self._count = None
        return True

    def and_not(self, other: BitSet) -> bool:
        if not isinstance(other, RegularBitSet):
            return super().and_not(other)
        shared = min(len(self._bytes), len(other._bytes))
        merged = self._bytes[:shared] & ~other._bytes[:shared]
        if np.array_equal(merged, self._bytes[:shared]):
            return False
        self._bytes[:shared] = merged
        self._count = None
        return True
