"""
稀疏位集合
两级目录 + 256 位叶子页：只为含置位的页分配存储
"""
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from .base import BitSet, PAGE_BITS, PAGE_BYTES, WORD_BITS, check_index, popcount, set_positions

Leaf = np.ndarray


class SparseBitSet(BitSet):
    """
    稀疏位集合

    页号 p 位于顶层目录第 p // D2 项、二级目录第 p % D2 项。目录容量不足时
    交替翻倍 D2 与 D1（(1,1)→(1,2)→(2,2)→(2,4)→…）并重新布局已有叶子。
    清除操作不会立即回收叶子页，compact() 回收全零的叶子页与空的二级目录。
    """

    def __init__(self, entry_bits: int = WORD_BITS):
        self.entry_bits = entry_bits
        self._d1 = 1
        self._d2 = 1
        self._top: List[Optional[List[Optional[Leaf]]]] = [None]
        self._count: Optional[int] = 0

    # ------------------------------------------------------------ 目录

    @property
    def directory_shape(self) -> Tuple[int, int]:
        return self._d1, self._d2

    def _locate(self, page: int) -> Tuple[int, int]:
        return divmod(page, self._d2)

    def _leaf(self, page: int) -> Optional[Leaf]:
        if page >= self._d1 * self._d2:
            return None
        top, second = self._locate(page)
        directory = self._top[top]
        return None if directory is None else directory[second]

    def _pages(self) -> Iterator[Tuple[int, Leaf]]:
        for top, directory in enumerate(self._top):
            if directory is None:
                continue
            for second, leaf in enumerate(directory):
                if leaf is not None:
                    yield top * self._d2 + second, leaf

    def _grow(self, page: int) -> None:
        if page < self._d1 * self._d2:
            return
        pages = list(self._pages())
        while page >= self._d1 * self._d2:
            if self._d2 <= self._d1:
                self._d2 *= 2
            else:
                self._d1 *= 2
        self._top = [None] * self._d1
        for number, leaf in pages:
            self._place(number, leaf)

    def _place(self, page: int, leaf: Leaf) -> None:
        top, second = self._locate(page)
        if self._top[top] is None:
            self._top[top] = [None] * self._d2
        self._top[top][second] = leaf

    def _leaf_for_write(self, page: int) -> Leaf:
        self._grow(page)
        leaf = self._leaf(page)
        if leaf is None:
            leaf = np.zeros(PAGE_BYTES, dtype=np.uint8)
            self._place(page, leaf)
        return leaf

    # ------------------------------------------------------------ 单点操作

    def set(self, index: int) -> bool:
        check_index(index)
        page, offset = divmod(index, PAGE_BITS)
        leaf = self._leaf_for_write(page)
        byte, mask = offset >> 3, 1 << (offset & 7)
        current = int(leaf[byte])
        if current & mask:
            return False
        leaf[byte] = current | mask
        if self._count is not None:
            self._count += 1
        return True

    def clear(self, index: int) -> bool:
        check_index(index)
        page, offset = divmod(index, PAGE_BITS)
        leaf = self._leaf(page)
        if leaf is None:
            return False
        byte, mask = offset >> 3, 1 << (offset & 7)
        current = int(leaf[byte])
        if not current & mask:
            return False
        leaf[byte] = current & ~mask & 0xFF
        if self._count is not None:
            self._count -= 1
        return True

    def contains(self, index: int) -> bool:
        if index < 0:
            return False
        page, offset = divmod(index, PAGE_BITS)
        leaf = self._leaf(page)
        return leaf is not None and bool(int(leaf[offset >> 3]) & (1 << (offset & 7)))

    def __iter__(self) -> Iterator[int]:
        for page, leaf in self._pages():
            base = page * PAGE_BITS
            for offset in set_positions(leaf).tolist():
                yield base + offset

    def cardinality(self) -> int:
        if self._count is None:
            self._count = sum(popcount(leaf) for _, leaf in self._pages())
        return self._count

    # ------------------------------------------------------------ 批量操作

    def or_into(self, other: BitSet) -> bool:
        if not isinstance(other, SparseBitSet):
            return super().or_into(other)
        changed = False
        for page, leaf in list(other._pages()):
            if not leaf.any():
                continue
            mine = self._leaf_for_write(page)
            merged = mine | leaf
            if not np.array_equal(merged, mine):
                mine[:] = merged
                changed = True
        if changed:
            self._count = None
        return changed

    def and_into(self, other: BitSet) -> bool:
        if not isinstance(other, SparseBitSet):
            return super().and_into(other)
        changed = False
        for page, mine in self._pages():
            theirs = other._leaf(page)
            merged = np.zeros_like(mine) if theirs is None else mine & theirs
            if not np.array_equal(merged, mine):
                mine[:] = merged
                changed = True
        if changed:
            self._count = None
        return changed

    def and_not(self, other: BitSet) -> bool:
        if not isinstance(other, SparseBitSet):
            return super().and_not(other)
        changed = False
        for page, mine in self._pages():
            theirs = other._leaf(page)
            if theirs is None:
                continue
            merged = mine & ~theirs
            if not np.array_equal(merged, mine):
                mine[:] = merged
                changed = True
        if changed:
            self._count = None
        return changed

    # ------------------------------------------------------------ 空间

    def leaf_count(self) -> int:
        return sum(1 for _ in self._pages())

    def second_level_count(self) -> int:
        return sum(1 for directory in self._top if directory is not None)

    def allocated_bits(self) -> int:
        """叶子页 + 顶层目录 + 已分配的二级目录"""
        return (self.leaf_count() * PAGE_BITS
                + self.entry_bits * (self._d1 + self.second_level_count() * self._d2))

    def one_level_allocated_bits(self, directory_entries: Optional[int] = None) -> int:
        """
        按单级目录计算的占用空间

        Args:
            directory_entries: 目录项数，默认取覆盖最高叶子页所需的项数

        Returns:
            int: 非空叶子页 × 256 + 目录项数 × 项宽
        """
        live = [page for page, leaf in self._pages() if leaf.any()]
        if directory_entries is None:
            directory_entries = (max(live) + 1) if live else 0
        return len(live) * PAGE_BITS + directory_entries * self.entry_bits

    def compact(self) -> None:
        """回收全零叶子页与空二级目录，不缩小目录尺寸"""
        for top, directory in enumerate(self._top):
            if directory is None:
                continue
            for second, leaf in enumerate(directory):
                if leaf is not None and not leaf.any():
                    directory[second] = None
            if all(leaf is None for leaf in directory):
                self._top[top] = None

    def copy(self) -> "SparseBitSet":
        clone = SparseBitSet(self.entry_bits)
        clone._d1, clone._d2 = self._d1, self._d2
        clone._top = [None] * self._d1
        for page, leaf in self._pages():
            clone._place(page, leaf.copy())
        clone._count = self._count
        return clone

    def page_map(self) -> Dict[int, Leaf]:
        return dict(self._pages())
