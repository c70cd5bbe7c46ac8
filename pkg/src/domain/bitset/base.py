"""
位集合接口
"""
from abc import ABC, abstractmethod
from typing import Iterator

import numpy as np

WORD_BITS = 32
PAGE_BITS = 256
PAGE_BYTES = PAGE_BITS // 8


def popcount(data: np.ndarray) -> int:
    return int(np.unpackbits(data).sum())


def set_positions(data: np.ndarray) -> np.ndarray:
    """uint8 数组中所有置位的位序号（升序）"""
    return np.flatnonzero(np.unpackbits(data, bitorder="little"))


class BitSet(ABC):
    """非负整数集合；修改操作返回集合是否发生变化"""

    @abstractmethod
    def set(self, index: int) -> bool:
        ...

    @abstractmethod
    def clear(self, index: int) -> bool:
        ...

    @abstractmethod
    def contains(self, index: int) -> bool:
        ...

    @abstractmethod
    def __iter__(self) -> Iterator[int]:
        """按升序迭代"""

    @abstractmethod
    def cardinality(self) -> int:
        ...

    @abstractmethod
    def allocated_bits(self) -> int:
        ...

    @abstractmethod
    def copy(self) -> "BitSet":
        ...

    def or_into(self, other: "BitSet") -> bool:
        """self |= other"""
        changed = False
        for index in other:
            changed |= self.set(index)
        return changed

    def and_into(self, other: "BitSet") -> bool:
        """self &= other"""
        removed = [i for i in self if not other.contains(i)]
        for index in removed:
            self.clear(index)
        return bool(removed)

    def and_not(self, other: "BitSet") -> bool:
        """self &= ~other"""
        removed = [i for i in self if other.contains(i)]
        for index in removed:
            self.clear(index)
        return bool(removed)

    def is_empty(self) -> bool:
        return self.cardinality() == 0

    def __contains__(self, index) -> bool:
        return isinstance(index, int) and index >= 0 and self.contains(index)

    def __len__(self) -> int:
        return self.cardinality()

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitSet):
            return NotImplemented
        return self.cardinality() == other.cardinality() and list(self) == list(other)

    def __hash__(self):
        return hash(tuple(self))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({list(self)})"


def check_index(index: int) -> None:
    if index < 0:
        raise ValueError(f"位下标不能为负: {index}")
