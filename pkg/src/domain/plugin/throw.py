"""
异常对象插件
方法内的 throw → catch 点集传递；未被本方法处理的异常对象记为逃逸
"""
from typing import TYPE_CHECKING, Dict, List, Optional, Set

from ..ir.program import MethodBody
from ..ir.stmts import Catch, Throw
from ..pta.heap import Obj
from .base import Plugin

if TYPE_CHECKING:
    from ..pta.elements import CSObj, CSVar
    from ..pta.solver import Solver


class ThrowPlugin(Plugin):
    """过程内异常流：thrown 对象流向最内层匹配处理器的 catch 变量"""

    name = "throw"

    def __init__(self):
        self.solver: Optional["Solver"] = None
        self.escaping: Dict[str, Set[Obj]] = {}

    def on_start(self, solver: "Solver") -> None:
        self.solver = solver

    def on_new_points_to_set(self, cs_var: "CSVar", delta: List["CSObj"]) -> None:
        method = self.solver.program.get_method(cs_var.var.method)
        if method is None or method.body is None:
            return
        body = method.body
        for stmt in body.relevant_stmts(cs_var.var).throws:
            for obj in delta:
                catch = self._match_handler(body, stmt, obj)
                if catch is None:
                    self.escaping.setdefault(str(method.signature), set()).add(obj.obj)
                else:
                    self.solver.add_var_points_to(cs_var.context, catch.lhs, [obj])

    def _match_handler(self, body: MethodBody, stmt: Throw, obj: "CSObj") -> Optional[Catch]:
        hierarchy = self.solver.hierarchy
        for entry in body.handlers_covering(stmt.index):
            if hierarchy.is_subtype(obj.obj.type, entry.catch_type):
                return body.stmt_at(entry.handler_index)
        return None

    def result(self) -> Dict[str, List[str]]:
        """每个方法逃逸的异常对象"""
        return {method: sorted(str(o) for o in objs) for method, objs in sorted(self.escaping.items())}
