"""
数据流求解器
基于 FIFO 工作表的迭代求解，支持正向/反向分析与边转移
"""
from collections import deque
from typing import Deque, Set

from loguru import logger

from ..cfg.cfg import CFG, CFGEdge, Node
from ..errors import DataflowDivergenceError
from ..ir.stmts import Stmt
from .analysis import DataflowAnalysis
from .result import DataflowResult

DEFAULT_ITERATION_FACTOR = 10000


class DataflowSolver:
    """
    工作表求解器

    迭代次数上限为 iteration_factor × 结点数，超出时抛出 DataflowDivergenceError。
    """

    def __init__(self, iteration_factor: int = DEFAULT_ITERATION_FACTOR):
        if iteration_factor <= 0:
            raise ValueError("iteration_factor 必须为正数")
        self.iteration_factor = iteration_factor

    def solve(self, analysis: DataflowAnalysis, cfg: CFG) -> DataflowResult:
        """
        求解数据流不动点

        Args:
            analysis: 数据流分析
            cfg: 控制流图

        Returns:
            DataflowResult: 每个结点的 in / out 事实
        """
        result = self._initialize(analysis, cfg)
        if analysis.is_forward:
            self._solve_forward(analysis, cfg, result)
        else:
            self._solve_backward(analysis, cfg, result)
        logger.debug("{} on {}: {} 次迭代", analysis.ID, cfg.body.signature, result.iterations)
        return result

    def _initialize(self, analysis: DataflowAnalysis, cfg: CFG) -> DataflowResult:
        result = DataflowResult(analysis.ID, cfg)
        for node in cfg.nodes:
            result.in_facts[node] = analysis.new_initial_fact()
            result.out_facts[node] = analysis.new_initial_fact()
        if analysis.is_forward:
            result.out_facts[cfg.entry] = analysis.new_boundary_fact(cfg)
        else:
            result.in_facts[cfg.exit] = analysis.new_boundary_fact(cfg)
        return result

    def _incoming(self, analysis: DataflowAnalysis, edge: CFGEdge, fact):
        return analysis.transfer_edge(edge, fact) if analysis.needs_edge_transfer else fact

    def _ceiling(self, cfg: CFG) -> int:
        return self.iteration_factor * len(cfg)

    def _solve_forward(self, analysis: DataflowAnalysis, cfg: CFG, result: DataflowResult) -> None:
        worklist: Deque[Node] = deque(n for n in cfg.nodes if n is not cfg.entry)
        queued: Set[Node] = set(worklist)
        ceiling = self._ceiling(cfg)
        while worklist:
            result.iterations += 1
            if result.iterations > ceiling:
                raise DataflowDivergenceError(analysis.ID, result.iterations)
            node = worklist.popleft()
            queued.discard(node)
            in_fact = result.in_facts[node]
            for edge in cfg.in_edges(node):
                analysis.meet_into(self._incoming(analysis, edge, result.out_facts[edge.source]), in_fact)
            if isinstance(node, Stmt):
                changed = analysis.transfer_node(node, in_fact, result.out_facts[node])
            else:
                changed = analysis.meet_into(in_fact, result.out_facts[node])
            if changed:
                for succ in cfg.successors(node):
                    if succ not in queued:
                        queued.add(succ)
                        worklist.append(succ)

    def _solve_backward(self, analysis: DataflowAnalysis, cfg: CFG, result: DataflowResult) -> None:
        worklist: Deque[Node] = deque(n for n in reversed(cfg.nodes) if n is not cfg.exit)
        queued: Set[Node] = set(worklist)
        ceiling = self._ceiling(cfg)
        while worklist:
            result.iterations += 1
            if result.iterations > ceiling:
                raise DataflowDivergenceError(analysis.ID, result.iterations)
            node = worklist.popleft()
            queued.discard(node)
            out_fact = result.out_facts[node]
            for edge in cfg.out_edges(node):
                analysis.meet_into(self._incoming(analysis, edge, result.in_facts[edge.target]), out_fact)
            if isinstance(node, Stmt):
                changed = analysis.transfer_node(node, result.in_facts[node], out_fact)
            else:
                changed = analysis.meet_into(out_fact, result.in_facts[node])
            if changed:
                for pred in cfg.predecessors(node):
                    if pred not in queued:
                        queued.add(pred)
                        worklist.append(pred)

    def is_fixpoint(self, analysis: DataflowAnalysis, result: DataflowResult) -> bool:
        """在事实副本上重做一轮交汇与转移，检查是否无任何变化"""
        cfg = result.cfg
        for node in cfg.nodes:
            if analysis.is_forward:
                if node is cfg.entry:
                    continue
                in_fact = analysis.copy_fact(result.in_facts[node])
                out_fact = analysis.copy_fact(result.out_facts[node])
                for edge in cfg.in_edges(node):
                    if analysis.meet_into(self._incoming(analysis, edge, result.out_facts[edge.source]), in_fact):
                        return False
                changed = (analysis.transfer_node(node, in_fact, out_fact) if isinstance(node, Stmt)
                           else analysis.meet_into(in_fact, out_fact))
            else:
                if node is cfg.exit:
                    continue
                in_fact = analysis.copy_fact(result.in_facts[node])
                out_fact = analysis.copy_fact(result.out_facts[node])
                for edge in cfg.out_edges(node):
                    if analysis.meet_into(self._incoming(analysis, edge, result.in_facts[edge.target]), out_fact):
                        return False
                changed = (analysis.transfer_node(node, in_fact, out_fact) if isinstance(node, Stmt)
                           else analysis.meet_into(out_fact, in_fact))
            if changed:
                return False
        return True


def solve(analysis: DataflowAnalysis, cfg: CFG,
          iteration_factor: int = DEFAULT_ITERATION_FACTOR) -> DataflowResult:
    return DataflowSolver(iteration_factor).solve(analysis, cfg)
