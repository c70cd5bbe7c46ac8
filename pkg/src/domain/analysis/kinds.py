"""
分析种类契约
方法级、类级与程序级分析；由框架驱动迭代，分析自身不做调度
"""
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

from ..ir.program import ClassDecl, MethodBody, Program
from .config import AnalysisKind


class Analysis(ABC):
    """分析基类，持有 id、有效选项与运行设置"""

    KIND: AnalysisKind = AnalysisKind.PROGRAM

    def __init__(self, analysis_id: str, options: Optional[Dict[str, Any]] = None,
                 program: Optional[Program] = None, settings: Optional[Dict[str, Any]] = None):
        self.id = analysis_id
        self.options: Dict[str, Any] = dict(options or {})
        self.program = program
        self.settings: Dict[str, Any] = dict(settings or {})

    def option(self, key: str, default: Any = None) -> Any:
        return self.options.get(key, default)

    def dump(self, writer: Any, holder: Any, result: Any) -> None:
        """dump 选项打开时由框架调用，把结果交给输出器；默认不输出"""

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.id}, {self.options})"


class MethodAnalysis(Analysis):
    """对每个方法体运行一次"""

    KIND = AnalysisKind.METHOD
    # 为 True 时框架可以并发地分析不同方法
    STATELESS = False

    @abstractmethod
    def analyze(self, body: MethodBody) -> Any:
        ...


class ClassAnalysis(Analysis):
    """对每个类运行一次"""

    KIND = AnalysisKind.CLASS

    @abstractmethod
    def analyze(self, class_decl: ClassDecl) -> Any:
        ...


class ProgramAnalysis(Analysis):
    """对整个程序运行一次"""

    KIND = AnalysisKind.PROGRAM

    @abstractmethod
    def analyze(self, program: Program) -> Any:
        ...
