"""
异常抛出分析
计算每条语句可能抛出的异常类型：显式（throw 语句）与隐式（运行时异常）
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Optional

from ..ir.program import MethodBody
from ..ir.stmts import (Binary, BinaryOp, Cast, Invoke, LoadArray, LoadField, Stmt, StoreArray,
                        StoreField, Throw)
from ..ir.types import (ARITHMETIC_EXCEPTION, CLASS_CAST_EXCEPTION, ClassType,
                        INDEX_OUT_OF_BOUNDS_EXCEPTION, NULL_POINTER_EXCEPTION, THROWABLE)


class ExceptionMode(Enum):
    """CFG 中异常边的建模方式"""
    NULL = "null"
    EXPLICIT = "explicit"
    ALL = "all"

    @classmethod
    def parse(cls, value) -> "ExceptionMode":
        """从选项值解析；YAML 的 null 与字符串 "null" 等价"""
        if value is None:
            return cls.NULL
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"未知的异常模式: {value}") from None


@dataclass
class ThrowResult:
    """每条语句的显式/隐式异常类型集合，未出现的语句视为空集"""
    body: MethodBody
    explicit: Dict[Stmt, FrozenSet[ClassType]] = field(default_factory=dict)
    implicit: Dict[Stmt, FrozenSet[ClassType]] = field(default_factory=dict)
    mode: ExceptionMode = ExceptionMode.ALL

    def explicit_of(self, stmt: Stmt) -> FrozenSet[ClassType]:
        return self.explicit.get(stmt, frozenset())

    def implicit_of(self, stmt: Stmt) -> FrozenSet[ClassType]:
        return self.implicit.get(stmt, frozenset())

    def may_throw(self, stmt: Stmt, mode: ExceptionMode) -> FrozenSet[ClassType]:
        if mode is ExceptionMode.NULL:
            return frozenset()
        if mode is ExceptionMode.EXPLICIT:
            return self.explicit_of(stmt)
        return self.explicit_of(stmt) | self.implicit_of(stmt)


def implicit_exceptions(stmt: Stmt) -> FrozenSet[ClassType]:
    """语句本身可能触发的运行时异常"""
    if isinstance(stmt, Binary) and stmt.op in (BinaryOp.DIV, BinaryOp.REM):
        return frozenset({ARITHMETIC_EXCEPTION})
    if isinstance(stmt, (LoadArray, StoreArray)):
        return frozenset({INDEX_OUT_OF_BOUNDS_EXCEPTION})
    if isinstance(stmt, Cast):
        return frozenset({CLASS_CAST_EXCEPTION})
    if isinstance(stmt, (LoadField, StoreField)) and stmt.base is not None:
        return frozenset({NULL_POINTER_EXCEPTION})
    if isinstance(stmt, Invoke) and stmt.base is not None:
        return frozenset({NULL_POINTER_EXCEPTION})
    return frozenset()


def explicit_exceptions(stmt: Stmt) -> FrozenSet[ClassType]:
    """throw 语句按抛出变量的声明类型计；被调方法声明的异常不在此处建模"""
    if isinstance(stmt, Throw):
        declared = stmt.var.type
        return frozenset({declared if isinstance(declared, ClassType) else THROWABLE})
    return frozenset()


def throw_analysis(body: MethodBody, mode: Optional[ExceptionMode] = None) -> ThrowResult:
    """
    对方法体做异常抛出分析

    Args:
        body: 方法体
        mode: 为 EXPLICIT 时只计算显式异常，默认两者都算

    Returns:
        ThrowResult: 逐语句的异常集合
    """
    result = ThrowResult(body, mode=ExceptionMode.EXPLICIT if mode is ExceptionMode.EXPLICIT else ExceptionMode.ALL)
    for stmt in body.stmts:
        explicit = explicit_exceptions(stmt)
        if explicit:
            result.explicit[stmt] = explicit
        if mode is not ExceptionMode.EXPLICIT:
            implicit = implicit_exceptions(stmt)
            if implicit:
                result.implicit[stmt] = implicit
    return result
