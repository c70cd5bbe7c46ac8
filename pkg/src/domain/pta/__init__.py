"""
指针分析模块
"""
from .callgraph import CallEdge, CallGraph
from .context import (EMPTY_CONTEXT, CallSiteSelector, Context, ContextSelector, InsensitiveSelector,
                      ObjectSelector, TypeSelector, make_selector)
from .elements import (ArrayIndex, CSCallSite, CSManager, CSMethod, CSObj, CSVar, InstanceField,
                       Pointer, PointsToSet, StaticField)
from .heap import ConstantObj, HeapModel, MergedObj, MockObj, NewObj, Obj
from .pfg import PFGEdge, PointerFlowGraph
from .result import PTAResult
from .solver import DEFAULT_MAX_WORKLIST_OPS, Solver, SolverStats
