"""
指针流图
结点是真实指针，边表示点集的流向，可附带类型过滤
"""
from dataclasses import dataclass
from typing import Iterator, List, Optional

import networkx as nx

from ..ir.types import SemType
from .elements import Pointer


@dataclass(frozen=True)
class PFGEdge:
    source: Pointer
    target: Pointer
    type_filter: Optional[SemType] = None


class PointerFlowGraph:
    """指针流图，边只增不减"""

    def __init__(self):
        self._graph = nx.MultiDiGraph()

    def add_edge(self, source: Pointer, target: Pointer, type_filter: Optional[SemType] = None) -> bool:
        if self._graph.has_edge(source, target, key=type_filter):
            return False
        self._graph.add_edge(source, target, key=type_filter,
                             edge=PFGEdge(source, target, type_filter))
        return True

    def out_edges(self, pointer: Pointer) -> List[PFGEdge]:
        if pointer not in self._graph:
            return []
        return [data for _, _, data in self._graph.out_edges(pointer, data="edge")]

    def edges(self) -> Iterator[PFGEdge]:
        for _, _, data in self._graph.edges(data="edge"):
            yield data

    def has_path(self, source: Pointer, target: Pointer) -> bool:
        if source not in self._graph or target not in self._graph:
            return False
        return nx.has_path(self._graph, source, target)

    @property
    def graph(self) -> nx.MultiDiGraph:
        return self._graph

    def __len__(self) -> int:
        return self._graph.number_of_edges()
