"""
死代码检测
结合常量传播与活跃变量找出不可达语句与无用赋值
"""
from collections import deque
from typing import List, Set

from ..cfg.cfg import CFG, EdgeKind
from ..ir.stmts import (AssignLiteral, Binary, BinaryOp, Copy, If, Stmt, Switch, Unary)
from .constprop import condition_value
from .fact import SetFact
from .result import DataflowResult


def _has_no_side_effect(stmt: Stmt) -> bool:
    if isinstance(stmt, Binary):
        return stmt.op not in (BinaryOp.DIV, BinaryOp.REM)
    return isinstance(stmt, (AssignLiteral, Copy, Unary))


class DeadCodeDetection:
    """
    死代码检测

    从 Entry 出发遍历 CFG：条件或 switch 键为常量时只走确定的分支；
    不可达语句与“定义变量不活跃且无副作用”的赋值均视为死代码。
    """

    def __init__(self, cfg: CFG, constants: DataflowResult, live_vars: DataflowResult):
        self.cfg = cfg
        self.constants = constants
        self.live_vars = live_vars

    def _feasible_edges(self, node):
        edges = self.cfg.out_edges(node)
        if isinstance(node, If):
            outcome = condition_value(node, self.constants.get_in_fact(node))
            if outcome is not None:
                wanted = EdgeKind.IF_TRUE if outcome else EdgeKind.IF_FALSE
                return [e for e in edges if e.kind is wanted or e.kind.is_exceptional]
        if isinstance(node, Switch):
            key = self.constants.get_in_fact(node).get(node.key)
            if key.is_constant:
                matched = [e for e in edges
                           if e.kind is EdgeKind.SWITCH_CASE and e.case_value == key.constant]
                if not matched:
                    matched = [e for e in edges if e.kind is EdgeKind.SWITCH_DEFAULT]
                return matched + [e for e in edges if e.kind.is_exceptional]
        return edges

    def analyze(self) -> List[Stmt]:
        reached: Set = {self.cfg.entry}
        pending = deque([self.cfg.entry])
        while pending:
            node = pending.popleft()
            for edge in self._feasible_edges(node):
                if edge.target not in reached:
                    reached.add(edge.target)
                    pending.append(edge.target)
        dead: List[Stmt] = []
        for stmt in self.cfg.body.stmts:
            if stmt not in reached:
                dead.append(stmt)
                continue
            defined = stmt.def_var
            if defined is not None and _has_no_side_effect(stmt):
                live_out: SetFact = self.live_vars.get_out_fact(stmt)
                if defined not in live_out:
                    dead.append(stmt)
        return dead


def detect_dead_code(cfg: CFG, constants: DataflowResult, live_vars: DataflowResult) -> List[Stmt]:
    return DeadCodeDetection(cfg, constants, live_vars).analyze()
