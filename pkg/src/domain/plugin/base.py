"""
插件接口
求解器在每个事件发生时依次通知各插件；插件只能经由求解器 API 修改分析状态
"""
from typing import TYPE_CHECKING, Any, List, Optional

if TYPE_CHECKING:
    from ..ir.stmts import Stmt
    from ..pta.callgraph import CallEdge
    from ..pta.elements import CSMethod, CSObj, CSVar
    from ..pta.solver import Solver


class Plugin:
    """插件基类，所有回调默认什么也不做"""

    name = "plugin"

    def on_start(self, solver: "Solver") -> None:
        pass

    def on_new_points_to_set(self, cs_var: "CSVar", delta: List["CSObj"]) -> None:
        pass

    def on_new_call_edge(self, edge: "CallEdge") -> None:
        pass

    def on_new_method(self, method: "CSMethod") -> None:
        pass

    def on_new_stmt(self, stmt: "Stmt", method: "CSMethod") -> None:
        pass

    def on_finish(self) -> None:
        pass

    def result(self) -> Optional[Any]:
        """插件产出的报告，写入 PTAResult.plugin_results"""
        return None


class CompositePlugin(Plugin):
    """按注册顺序把每个事件分发给所有插件"""

    name = "composite"

    def __init__(self, plugins: Optional[List[Plugin]] = None):
        self.plugins: List[Plugin] = list(plugins or [])

    def add_plugin(self, plugin: Plugin) -> None:
        self.plugins.append(plugin)

    def on_start(self, solver):
        for plugin in self.plugins:
            plugin.on_start(solver)

    def on_new_points_to_set(self, cs_var, delta):
        for plugin in self.plugins:
            plugin.on_new_points_to_set(cs_var, delta)

    def on_new_call_edge(self, edge):
        for plugin in self.plugins:
            plugin.on_new_call_edge(edge)

    def on_new_method(self, method):
        for plugin in self.plugins:
            plugin.on_new_method(method)

    def on_new_stmt(self, stmt, method):
        for plugin in self.plugins:
            plugin.on_new_stmt(stmt, method)

    def on_finish(self):
        for plugin in self.plugins:
            plugin.on_finish()
