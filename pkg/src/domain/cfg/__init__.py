"""
CFG 模块
控制流图、异常抛出分析与 CFG 构建
"""
from .builder import CFGBuilder, build_cfg
from .cfg import CFG, BoundaryNode, CFGEdge, EdgeKind
from .throw_analysis import ExceptionMode, ThrowResult, throw_analysis
