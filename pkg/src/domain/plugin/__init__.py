"""
插件模块
求解器事件总线与内置插件：污点分析、异常对象传递、计时
"""
from .base import CompositePlugin, Plugin
from .taint import (TAINT_DESCRIPTOR, TaintAnalysisPlugin, TaintConfig, TaintFlow, TaintSink,
                    TaintSource, TaintTransfer, is_taint)
from .throw import ThrowPlugin
from .timer import TimerPlugin
