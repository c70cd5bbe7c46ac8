"""
参考实现
直接按定义迭代到不动点的 Andersen 分析与轮询式数据流求解，只用于和正式实现比对
"""
from typing import Any, Dict, Iterable, List, Optional, Set, Tuple

from src.domain.cfg.cfg import CFG
from src.domain.dataflow.analysis import DataflowAnalysis
from src.domain.errors import DispatchError
from src.domain.ir.program import MethodDecl, Program
from src.domain.ir.refs import Var
from src.domain.ir.stmts import (AssignLiteral, Cast, Copy, Invoke, InvokeKind, LoadArray, LoadField,
                                 New, Stmt, StoreArray, StoreField)
from src.domain.ir.types import SemType, STRING
from src.domain.plugin.taint import TAINT_DESCRIPTOR, TaintConfig, method_label
from src.domain.pta.heap import ConstantObj, MockObj, NewObj, Obj

FlowKey = Tuple[str, int, str, int, int]


class AndersenOracle:
    """
    上下文不敏感的 Andersen 分析

    每轮把所有可达方法的所有语句重新应用一遍，直到点集、调用边与可达方法都不再增长。
    过滤规则与正式求解器一致：按声明类型过滤赋值目标，类型转换按目标类型过滤，this 不过滤。
    """

    def __init__(self, program: Program, type_filter: bool = True,
                 taint_config: Optional[TaintConfig] = None):
        self.program = program
        self.hierarchy = program.hierarchy
        self.type_filter = type_filter
        self.taint_config = taint_config
        self.pts: Dict[Any, Set[Obj]] = {}
        self.reachable: Set[MethodDecl] = set()
        self.edges: Set[Tuple[Invoke, MethodDecl]] = set()

    def points_to(self, key: Any) -> Set[Obj]:
        return self.pts.get(key, set())

    def _add(self, key: Any, objs: Iterable[Obj], filter_type: Optional[SemType] = None) -> bool:
        target = self.pts.setdefault(key, set())
        before = len(target)
        for obj in list(objs):
            if filter_type is None or self.hierarchy.is_subtype(obj.type, filter_type):
                target.add(obj)
        return len(target) != before

    def _declared(self, var: Var) -> Optional[SemType]:
        return var.type if self.type_filter else None

    def solve(self) -> "AndersenOracle":
        self.reachable.update(self.program.entry_methods)
        changed = True
        while changed:
            changed = False
            for method in list(self.reachable):
                if method.body is None:
                    continue
                for stmt in method.body.stmts:
                    changed |= self._apply(method, stmt)
            if self.taint_config is not None:
                changed |= self._apply_taint()
        return self

    def _apply(self, method: MethodDecl, stmt: Stmt) -> bool:
        if isinstance(stmt, New):
            return self._add(stmt.lhs, [NewObj(stmt, method.signature)])
        if isinstance(stmt, AssignLiteral):
            if isinstance(stmt.literal.value, str):
                return self._add(stmt.lhs, [ConstantObj(STRING, stmt.literal.value)])
            return False
        if isinstance(stmt, Copy):
            return self._add(stmt.lhs, self.points_to(stmt.rhs), self._declared(stmt.lhs))
        if isinstance(stmt, Cast):
            return self._add(stmt.lhs, self.points_to(stmt.rhs), stmt.cast_type)
        if isinstance(stmt, LoadField):
            if stmt.is_static:
                return self._add(stmt.lhs, self.points_to(("static", stmt.field)), self._declared(stmt.lhs))
            changed = False
            for obj in list(self.points_to(stmt.base)):
                changed |= self._add(stmt.lhs, self.points_to(("field", obj, stmt.field)),
                                     self._declared(stmt.lhs))
            return changed
        if isinstance(stmt, StoreField):
            if stmt.is_static:
                return self._add(("static", stmt.field), self.points_to(stmt.rhs))
            changed = False
            for obj in list(self.points_to(stmt.base)):
                changed |= self._add(("field", obj, stmt.field), self.points_to(stmt.rhs))
            return changed
        if isinstance(stmt, LoadArray):
            changed = False
            for obj in list(self.points_to(stmt.base)):
                changed |= self._add(stmt.lhs, self.points_to(("array", obj)), self._declared(stmt.lhs))
            return changed
        if isinstance(stmt, StoreArray):
            changed = False
            for obj in list(self.points_to(stmt.base)):
                changed |= self._add(("array", obj), self.points_to(stmt.rhs))
            return changed
        if isinstance(stmt, Invoke):
            return self._apply_invoke(stmt)
        return False

    def _apply_invoke(self, invoke: Invoke) -> bool:
        if invoke.is_static:
            try:
                callee = self.hierarchy.resolve_method(invoke.method_ref)
            except DispatchError:
                return False
            return self._link(invoke, callee)
        changed = False
        for receiver in list(self.points_to(invoke.base)):
            try:
                if invoke.kind is InvokeKind.VIRTUAL:
                    callee = self.hierarchy.dispatch(receiver.type, invoke.method_ref)
                else:
                    callee = self.hierarchy.resolve_method(invoke.method_ref)
            except DispatchError:
                continue
            changed |= self._link(invoke, callee)
            if callee.body is not None and callee.body.this_var is not None:
                changed |= self._add(callee.body.this_var, [receiver])
        return changed

    def _link(self, invoke: Invoke, callee: MethodDecl) -> bool:
        changed = False
        if (invoke, callee) not in self.edges:
            self.edges.add((invoke, callee))
            changed = True
        if callee not in self.reachable:
            self.reachable.add(callee)
            changed = True
        body = callee.body
        if body is None:
            return changed
        for arg, param in zip(invoke.args, body.params):
            changed |= self._add(param, self.points_to(arg), self._declared(param))
        if invoke.result is not None:
            for ret in body.return_vars:
                changed |= self._add(invoke.result, self.points_to(ret), self._declared(invoke.result))
        return changed

    # ------------------------------------------------------------ 污点

    def _edges_to(self, signature_text: str) -> List[Tuple[Invoke, MethodDecl]]:
        return [(invoke, callee) for invoke, callee in self.edges if str(callee.signature) == signature_text]

    @staticmethod
    def _role_var(invoke: Invoke, role) -> Optional[Var]:
        if role == "base":
            return invoke.base
        if role == "result":
            return invoke.result
        return invoke.args[role]

    def _apply_taint(self) -> bool:
        changed = False
        for source in self.taint_config.sources:
            for invoke, callee in self._edges_to(source.method):
                if invoke.result is not None:
                    taint = MockObj(TAINT_DESCRIPTOR, invoke, callee.signature.return_type)
                    changed |= self._add(invoke.result, [taint])
        for transfer in self.taint_config.transfers:
            for invoke, _ in self._edges_to(transfer.method):
                from_var = self._role_var(invoke, transfer.from_)
                to_var = self._role_var(invoke, transfer.to)
                if from_var is None or to_var is None:
                    continue
                taints = [o for o in self.points_to(from_var) if _is_taint(o)]
                changed |= self._add(to_var, taints)
        return changed

    def taint_flows(self) -> List[FlowKey]:
        flows: Set[FlowKey] = set()
        for sink in self.taint_config.sinks:
            for invoke, _ in self._edges_to(sink.method):
                for obj in self.points_to(invoke.args[sink.index]):
                    if _is_taint(obj):
                        flows.add((method_label(self.program.container_of(obj.source)), obj.source.index,
                                   method_label(self.program.container_of(invoke)), invoke.index,
                                   sink.index))
        return sorted(flows, key=lambda f: (f[2], f[3], f[4], f[0], f[1]))

    def var_points_to(self) -> Dict[Var, Set[Obj]]:
        return {key: objs for key, objs in self.pts.items() if isinstance(key, Var) and objs}


def _is_taint(obj: Obj) -> bool:
    return isinstance(obj, MockObj) and obj.descriptor == TAINT_DESCRIPTOR


def round_robin(analysis: DataflowAnalysis, cfg: CFG) -> Dict[Any, tuple]:
    """
    轮询式求解

    每轮按结点顺序（反向分析按逆序）重算所有结点，非边界结点的交汇结果每轮从初始事实重新计算。
    返回值与 DataflowResult.as_index_map 的格式相同。
    """
    in_facts = {node: analysis.new_initial_fact() for node in cfg.nodes}
    out_facts = {node: analysis.new_initial_fact() for node in cfg.nodes}
    if analysis.is_forward:
        out_facts[cfg.entry] = analysis.new_boundary_fact(cfg)
    else:
        in_facts[cfg.exit] = analysis.new_boundary_fact(cfg)

    def incoming(edge, fact):
        return analysis.transfer_edge(edge, fact) if analysis.needs_edge_transfer else fact

    changed = True
    while changed:
        changed = False
        if analysis.is_forward:
            for node in cfg.nodes:
                if node is cfg.entry:
                    continue
                fresh = analysis.new_initial_fact()
                for edge in cfg.in_edges(node):
                    analysis.meet_into(incoming(edge, out_facts[edge.source]), fresh)
                in_facts[node] = fresh
                if isinstance(node, Stmt):
                    changed |= analysis.transfer_node(node, fresh, out_facts[node])
                else:
                    changed |= analysis.meet_into(fresh, out_facts[node])
        else:
            for node in reversed(cfg.nodes):
                if node is cfg.exit:
                    continue
                fresh = analysis.new_initial_fact()
                for edge in cfg.out_edges(node):
                    analysis.meet_into(incoming(edge, in_facts[edge.target]), fresh)
                out_facts[node] = fresh
                if isinstance(node, Stmt):
                    changed |= analysis.transfer_node(node, in_facts[node], fresh)
                else:
                    changed |= analysis.meet_into(fresh, in_facts[node])

    snapshot = {}
    for node in cfg.nodes:
        key = node.index if isinstance(node, Stmt) else str(node)
        snapshot[key] = (repr(in_facts[node]), repr(out_facts[node]))
    return snapshot
