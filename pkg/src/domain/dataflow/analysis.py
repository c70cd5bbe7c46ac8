"""
数据流分析契约
具体分析只需给出方向、边界事实、初始事实、交汇与转移函数，迭代由求解器完成
"""
from abc import ABC, abstractmethod
from enum import Enum
from typing import Generic, TypeVar

from ..cfg.cfg import CFG, CFGEdge
from ..ir.stmts import Stmt

Fact = TypeVar("Fact")


class Direction(Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


class DataflowAnalysis(ABC, Generic[Fact]):
    """
    数据流分析基类

    约定：
    - 正向分析的 transfer_node 根据 in 更新 out，反向分析根据 out 更新 in；
    - meet_into 与 transfer_node 返回被更新的事实是否发生变化；
    - 需要边转移时覆盖 needs_edge_transfer 与 transfer_edge，后者返回新事实而不修改输入。
    """

    ID = "dataflow"
    direction = Direction.FORWARD

    @property
    def is_forward(self) -> bool:
        return self.direction is Direction.FORWARD

    @abstractmethod
    def new_boundary_fact(self, cfg: CFG) -> Fact:
        """正向分析 Entry 的 out 事实，反向分析 Exit 的 in 事实"""

    @abstractmethod
    def new_initial_fact(self) -> Fact:
        """其余结点的初始事实，必须是交汇运算的单位元"""

    @abstractmethod
    def meet_into(self, fact: Fact, target: Fact) -> bool:
        ...

    @abstractmethod
    def transfer_node(self, stmt: Stmt, in_fact: Fact, out_fact: Fact) -> bool:
        ...

    @abstractmethod
    def copy_fact(self, fact: Fact) -> Fact:
        ...

    @property
    def needs_edge_transfer(self) -> bool:
        return False

    def transfer_edge(self, edge: CFGEdge, node_fact: Fact) -> Fact:
        return node_fact
