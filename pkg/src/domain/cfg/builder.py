"""
CFG 构建
按语句种类连接普通控制流边，并按异常模式附加异常边
"""
from typing import List, Optional

from loguru import logger

from ..errors import CFGError
from ..ir.hierarchy import Hierarchy
from ..ir.program import MethodBody
from ..ir.stmts import Goto, If, Return, Stmt, Switch, Throw
from ..ir.types import ClassType
from .cfg import CFG, CFGEdge, EdgeKind
from .throw_analysis import ExceptionMode, ThrowResult


class CFGBuilder:
    """CFG 构建器"""

    def __init__(self, hierarchy: Hierarchy):
        self.hierarchy = hierarchy

    def build(self, body: MethodBody, mode: ExceptionMode = ExceptionMode.NULL,
              throw_result: Optional[ThrowResult] = None) -> CFG:
        """
        构建方法体的 CFG

        Args:
            body: 方法体
            mode: 异常边模式
            throw_result: 异常抛出分析结果，mode 不为 NULL 时必须提供

        Returns:
            CFG: 控制流图

        Raises:
            CFGError: 缺少异常抛出分析结果
        """
        if mode is not ExceptionMode.NULL and throw_result is None:
            raise CFGError(f"异常模式 {mode.value} 需要异常抛出分析结果: {body.signature}")
        cfg = CFG(body)
        stmts = body.stmts
        cfg.add_edge(CFGEdge(cfg.entry, stmts[0] if stmts else cfg.exit, EdgeKind.ENTRY))
        for stmt in stmts:
            self._add_normal_edges(cfg, stmt)
            if mode is not ExceptionMode.NULL:
                self._add_exceptional_edges(cfg, stmt, throw_result.may_throw(stmt, mode))
        logger.debug("构建 CFG {}: {} 条边", body.signature, len(cfg.edges))
        return cfg

    def _next(self, cfg: CFG, stmt: Stmt):
        following = stmt.index + 1
        return cfg.node_at(following) if following < len(cfg.body.stmts) else cfg.exit

    def _add_normal_edges(self, cfg: CFG, stmt: Stmt) -> None:
        if isinstance(stmt, Goto):
            cfg.add_edge(CFGEdge(stmt, cfg.node_at(stmt.target), EdgeKind.GOTO))
        elif isinstance(stmt, If):
            cfg.add_edge(CFGEdge(stmt, cfg.node_at(stmt.target), EdgeKind.IF_TRUE))
            cfg.add_edge(CFGEdge(stmt, self._next(cfg, stmt), EdgeKind.IF_FALSE))
        elif isinstance(stmt, Switch):
            for value, target in stmt.cases:
                cfg.add_edge(CFGEdge(stmt, cfg.node_at(target), EdgeKind.SWITCH_CASE, case_value=value))
            cfg.add_edge(CFGEdge(stmt, cfg.node_at(stmt.default_target), EdgeKind.SWITCH_DEFAULT))
        elif isinstance(stmt, Return):
            cfg.add_edge(CFGEdge(stmt, cfg.exit, EdgeKind.RETURN))
        elif isinstance(stmt, Throw):
            pass
        else:
            cfg.add_edge(CFGEdge(stmt, self._next(cfg, stmt), EdgeKind.FALL_THROUGH))

    def _add_exceptional_edges(self, cfg: CFG, stmt: Stmt, thrown) -> None:
        handlers = cfg.body.handlers_covering(stmt.index)
        uncaught = False
        for exc_type in sorted(thrown, key=str):
            handler = self._find_handler(exc_type, handlers)
            if handler is None:
                uncaught = True
                continue
            cfg.add_edge(CFGEdge(stmt, cfg.node_at(handler.handler_index),
                                 EdgeKind.CAUGHT_EXCEPTION, exception_type=handler.catch_type))
        if uncaught:
            cfg.add_edge(CFGEdge(stmt, cfg.exit, EdgeKind.UNCAUGHT_EXCEPTION))

    def _find_handler(self, exc_type: ClassType, handlers: List):
        """由内向外找第一个能捕获 exc_type 的处理器"""
        for entry in handlers:
            if self.hierarchy.is_subtype(exc_type, entry.catch_type):
                return entry
        return None


def build_cfg(body: MethodBody, hierarchy: Hierarchy, mode: ExceptionMode = ExceptionMode.NULL,
              throw_result: Optional[ThrowResult] = None) -> CFG:
    return CFGBuilder(hierarchy).build(body, mode, throw_result)
