"""
数据流结果
记录每个 CFG 结点的 in / out 事实
"""
from typing import Any, Dict, Generic, List, TypeVar

from ..cfg.cfg import CFG, Node
from ..ir.stmts import Stmt

Fact = TypeVar("Fact")


class DataflowResult(Generic[Fact]):
    """数据流分析结果"""

    def __init__(self, analysis_id: str, cfg: CFG):
        self.analysis_id = analysis_id
        self.cfg = cfg
        self.in_facts: Dict[Node, Fact] = {}
        self.out_facts: Dict[Node, Fact] = {}
        self.iterations = 0

    def get_in_fact(self, node: Node) -> Fact:
        return self.in_facts[node]

    def get_out_fact(self, node: Node) -> Fact:
        return self.out_facts[node]

    def as_index_map(self) -> Dict[Any, tuple]:
        """以结点下标（边界结点用名字）为键的 (in, out) 字符串快照，便于比较"""
        snapshot = {}
        for node in self.cfg.nodes:
            key = node.index if isinstance(node, Stmt) else str(node)
            snapshot[key] = (repr(self.in_facts.get(node)), repr(self.out_facts.get(node)))
        return snapshot

    def format_lines(self) -> List[str]:
        lines = []
        for stmt in self.cfg.body.stmts:
            lines.append(f"{stmt.index} | {stmt} | IN: {self.in_facts[stmt]!r} | OUT: {self.out_facts[stmt]!r}")
        return lines

    def __repr__(self) -> str:
        return f"DataflowResult({self.analysis_id}, {self.cfg.body.signature})"
