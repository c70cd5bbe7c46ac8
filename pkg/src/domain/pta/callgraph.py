"""
调用图
上下文敏感调用边与可达方法集合，随求解过程在线构建
"""
from dataclasses import dataclass
from typing import Dict, List, Set, Tuple

from ..ir.program import MethodDecl
from ..ir.stmts import Invoke, InvokeKind
from .elements import CSCallSite, CSMethod


@dataclass(frozen=True)
class CallEdge:
    kind: InvokeKind
    call_site: CSCallSite
    callee: CSMethod

    def __str__(self) -> str:
        return f"{self.call_site} -> {self.callee}"


class CallGraph:
    """调用图；边的被调方法总在可达集合中，边与可达集合只增不减"""

    def __init__(self):
        self._reachable: Dict[CSMethod, None] = {}
        self._edges: Dict[CallEdge, None] = {}
        self._callees: Dict[CSCallSite, List[CallEdge]] = {}
        self._callers: Dict[MethodDecl, List[CSCallSite]] = {}

    def add_reachable(self, method: CSMethod) -> bool:
        if method in self._reachable:
            return False
        self._reachable[method] = None
        return True

    def add_edge(self, edge: CallEdge) -> bool:
        if edge in self._edges:
            return False
        self._edges[edge] = None
        self._callees.setdefault(edge.call_site, []).append(edge)
        sites = self._callers.setdefault(edge.callee.method, [])
        if edge.call_site not in sites:
            sites.append(edge.call_site)
        return True

    def is_reachable(self, method: CSMethod) -> bool:
        return method in self._reachable

    def reachable_methods(self) -> List[CSMethod]:
        return list(self._reachable)

    def edges(self) -> List[CallEdge]:
        return list(self._edges)

    def edges_out_of(self, call_site: CSCallSite) -> List[CallEdge]:
        return list(self._callees.get(call_site, []))

    def callers_of(self, method: MethodDecl) -> List[CSCallSite]:
        return list(self._callers.get(method, []))

    def ci_reachable_methods(self) -> Set[MethodDecl]:
        return {m.method for m in self._reachable}

    def ci_edges(self) -> Set[Tuple[Invoke, MethodDecl]]:
        return {(e.call_site.call_site, e.callee.method) for e in self._edges}
