"""
位集合模块
常规位集合、两级稀疏位集合、混合集合与对象编号器
"""
from .base import BitSet, PAGE_BITS, WORD_BITS
from .hybrid import DEFAULT_THRESHOLD, HybridBitSet
from .indexer import ObjectIndexer
from .regular import RegularBitSet
from .sparse import SparseBitSet
