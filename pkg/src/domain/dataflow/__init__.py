"""
数据流模块
通用工作表求解器与常量传播、活跃变量、死代码检测
"""
from .analysis import DataflowAnalysis, Direction
from .constprop import CPFact, ConstantPropagation, Value
from .deadcode import DeadCodeDetection, detect_dead_code
from .fact import MapFact, SetFact
from .livevar import LiveVariableAnalysis
from .result import DataflowResult
from .solver import DataflowSolver, solve
