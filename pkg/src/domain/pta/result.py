"""
指针分析结果
求解结束时的快照：上下文敏感点集、调用图、指针流图与上下文无关投影
"""
from typing import TYPE_CHECKING, Any, Dict, FrozenSet, List, Optional, Set, Tuple

from ..ir.program import MethodDecl
from ..ir.refs import Var
from ..ir.stmts import Invoke
from .callgraph import CallEdge
from .elements import CSMethod, CSObj, CSVar, Pointer
from .heap import Obj
from .pfg import PointerFlowGraph

if TYPE_CHECKING:
    from .solver import Solver


class PTAResult:
    """指针分析结果，构造后不再变化"""

    def __init__(self, solver: "Solver"):
        self.selector = solver.selector.describe()
        self.pfg: PointerFlowGraph = solver.pfg
        self.stats = solver.stats.to_dict()
        self._points_to: Dict[Pointer, FrozenSet[CSObj]] = {
            p: frozenset(p.points_to_set) for p in solver.cs_manager.pointers()}
        self._cs_vars: List[CSVar] = solver.cs_manager.cs_vars()
        self._reachable: List[CSMethod] = solver.call_graph.reachable_methods()
        self._edges: List[CallEdge] = solver.call_graph.edges()
        self._objects: List[Obj] = solver.heap_model.objects()
        self._ci: Dict[Var, FrozenSet[Obj]] = {}
        for cs_var in self._cs_vars:
            objs = {o.obj for o in self._points_to[cs_var]}
            self._ci[cs_var.var] = self._ci.get(cs_var.var, frozenset()) | objs
        self.plugin_results: Dict[str, Any] = {}
        for plugin in solver.plugin.plugins:
            report = plugin.result()
            if report is not None:
                self.plugin_results[plugin.name] = report

    # ------------------------------------------------------------ 上下文敏感视图

    def points_to(self, pointer: Pointer) -> FrozenSet[CSObj]:
        return self._points_to.get(pointer, frozenset())

    def pointers(self) -> List[Pointer]:
        return list(self._points_to)

    def cs_vars(self) -> List[CSVar]:
        return list(self._cs_vars)

    def cs_reachable_methods(self) -> List[CSMethod]:
        return list(self._reachable)

    def cs_call_edges(self) -> List[CallEdge]:
        return list(self._edges)

    def objects(self) -> List[Obj]:
        return list(self._objects)

    # ------------------------------------------------------------ 上下文无关投影

    def ci_points_to(self, var: Var) -> FrozenSet[Obj]:
        """var 在所有上下文下点集的并，擦除堆上下文"""
        return self._ci.get(var, frozenset())

    def ci_vars(self) -> List[Var]:
        return list(self._ci)

    def reachable_methods(self) -> Set[MethodDecl]:
        return {m.method for m in self._reachable}

    def call_edges(self) -> Set[Tuple[Invoke, MethodDecl]]:
        return {(e.call_site.call_site, e.callee.method) for e in self._edges}

    def find_var(self, method: MethodDecl, name: str) -> Optional[Var]:
        if method.body is None:
            return None
        return method.body.get_var(name)

    def metrics(self) -> Dict[str, int]:
        """#varpt：上下文无关的变量指向关系总数；#reach：可达方法数；#edges：调用边数"""
        return {
            "varpt": sum(len(objs) for objs in self._ci.values()),
            "reach": len(self.reachable_methods()),
            "edges": len(self.call_edges()),
        }

    def __repr__(self) -> str:
        m = self.metrics()
        return f"PTAResult({self.selector}, varpt={m['varpt']}, reach={m['reach']}, edges={m['edges']})"
