"""
控制流图
以语句为结点的多重有向图，附加 Entry / Exit 两个边界结点
"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, List, Optional, Union

import networkx as nx

from ..ir.program import MethodBody
from ..ir.stmts import Stmt
from ..ir.types import SemType


class EdgeKind(Enum):
    ENTRY = "ENTRY"
    FALL_THROUGH = "FALL_THROUGH"
    GOTO = "GOTO"
    IF_TRUE = "IF_TRUE"
    IF_FALSE = "IF_FALSE"
    SWITCH_CASE = "SWITCH_CASE"
    SWITCH_DEFAULT = "SWITCH_DEFAULT"
    CAUGHT_EXCEPTION = "CAUGHT_EXCEPTION"
    UNCAUGHT_EXCEPTION = "UNCAUGHT_EXCEPTION"
    RETURN = "RETURN"

    @property
    def is_exceptional(self) -> bool:
        return self in (EdgeKind.CAUGHT_EXCEPTION, EdgeKind.UNCAUGHT_EXCEPTION)


@dataclass(frozen=True)
class BoundaryNode:
    """Entry 或 Exit 结点，同一方法的同名边界结点相等"""
    kind: str
    method: str

    def __str__(self) -> str:
        return self.kind


Node = Union[Stmt, BoundaryNode]


@dataclass(frozen=True)
class CFGEdge:
    source: Node
    target: Node
    kind: EdgeKind
    case_value: Optional[int] = None
    exception_type: Optional[SemType] = None

    def label(self) -> str:
        if self.kind is EdgeKind.SWITCH_CASE:
            return f"{self.kind.value}({self.case_value})"
        if self.kind is EdgeKind.CAUGHT_EXCEPTION:
            return f"{self.kind.value}({self.exception_type})"
        return self.kind.value

    def __str__(self) -> str:
        return f"{_node_id(self.source)} -[{self.label()}]-> {_node_id(self.target)}"


def _node_id(node: Node) -> str:
    return str(node) if isinstance(node, BoundaryNode) else str(node.index)


class CFG:
    """
    方法体的控制流图

    结点顺序为 Entry、语句（按下标）、Exit；边按插入顺序保存，允许同一对结点间存在多条不同种类的边。
    """

    def __init__(self, body: MethodBody):
        self.body = body
        self.entry = BoundaryNode("Entry", str(body.signature))
        self.exit = BoundaryNode("Exit", str(body.signature))
        self._graph = nx.MultiDiGraph()
        self._graph.add_node(self.entry)
        for stmt in body.stmts:
            self._graph.add_node(stmt)
        self._graph.add_node(self.exit)
        self._edges: List[CFGEdge] = []

    @property
    def method(self):
        return self.body.signature

    @property
    def graph(self) -> nx.MultiDiGraph:
        return self._graph

    def add_edge(self, edge: CFGEdge) -> bool:
        """添加一条边，完全相同的边只保留一条"""
        if self._graph.has_edge(edge.source, edge.target, key=edge):
            return False
        self._graph.add_edge(edge.source, edge.target, key=edge, edge=edge)
        self._edges.append(edge)
        return True

    @property
    def nodes(self) -> List[Node]:
        return [self.entry, *self.body.stmts, self.exit]

    @property
    def edges(self) -> List[CFGEdge]:
        return list(self._edges)

    def node_at(self, index: int) -> Stmt:
        return self.body.stmts[index]

    def is_boundary(self, node: Node) -> bool:
        return isinstance(node, BoundaryNode)

    def out_edges(self, node: Node) -> List[CFGEdge]:
        return [data for _, _, data in self._graph.out_edges(node, data="edge")]

    def in_edges(self, node: Node) -> List[CFGEdge]:
        return [data for _, _, data in self._graph.in_edges(node, data="edge")]

    def successors(self, node: Node) -> List[Node]:
        return _unique(e.target for e in self.out_edges(node))

    def predecessors(self, node: Node) -> List[Node]:
        return _unique(e.source for e in self.in_edges(node))

    def reachable_from_entry(self) -> set:
        return set(nx.descendants(self._graph, self.entry)) | {self.entry}

    def edge_summary(self) -> List[tuple]:
        """(源下标, 目标下标, 种类, case 值, 异常类型) 列表，用于比较两张图"""
        def idx(node):
            return node.index if isinstance(node, Stmt) else str(node)
        return [(idx(e.source), idx(e.target), e.kind.value, e.case_value,
                 None if e.exception_type is None else str(e.exception_type)) for e in self._edges]

    def __iter__(self) -> Iterator[Node]:
        return iter(self.nodes)

    def __len__(self) -> int:
        return len(self.body.stmts) + 2

    def __repr__(self) -> str:
        return f"CFG({self.body.signature}, {len(self._edges)} edges)"


def _unique(nodes) -> List[Node]:
    seen: Dict[int, Node] = {}
    for node in nodes:
        seen.setdefault(id(node), node)
    return list(seen.values())
