"""
污点分析插件
在指针分析过程中引入污点对象、沿传递方法扩散污点，并在不动点时检查汇点参数
"""
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Iterable, List, Optional, Set, Tuple

from loguru import logger

from ..errors import TaintConfigError
from ..ir.program import MethodDecl, Program
from ..ir.refs import Var
from ..ir.stmts import Invoke
from ..pta.heap import MockObj, Obj
from .base import Plugin

if TYPE_CHECKING:
    from ..pta.callgraph import CallEdge
    from ..pta.elements import CSObj, CSVar
    from ..pta.solver import Solver

TAINT_DESCRIPTOR = "TaintObj"
BASE = "base"
RESULT = "result"


@dataclass(frozen=True)
class TaintSource:
    """返回值被污染的方法"""
    method: str


@dataclass(frozen=True)
class TaintTransfer:
    """
    污点传递方法

    from_: ``param N`` 对应的参数下标，或 ``"base"``
    to: ``"base"`` 或 ``"result"``
    """
    method: str
    from_: object
    to: str


@dataclass(frozen=True)
class TaintSink:
    method: str
    index: int


@dataclass
class TaintConfig:
    """污点配置：方法以 ``Class.name(T1,T2)`` 形式给出"""
    sources: List[TaintSource] = field(default_factory=list)
    transfers: List[TaintTransfer] = field(default_factory=list)
    sinks: List[TaintSink] = field(default_factory=list)

    def is_empty(self) -> bool:
        return not (self.sources or self.transfers or self.sinks)

    def validate(self, program: Program) -> None:
        """
        检查每个方法都能在程序中找到，参数下标不越界

        Raises:
            TaintConfigError: 方法不存在或下标越界
        """
        methods = {str(m.signature): m for m in program.methods()}

        def lookup(name: str) -> MethodDecl:
            method = methods.get(name)
            if method is None:
                raise TaintConfigError(f"污点配置中的方法不存在: {name}")
            return method

        for source in self.sources:
            lookup(source.method)
        for transfer in self.transfers:
            method = lookup(transfer.method)
            if isinstance(transfer.from_, int) and not 0 <= transfer.from_ < method.signature.arity:
                raise TaintConfigError(f"参数下标越界: {transfer.method} param {transfer.from_}")
            if method.is_static and BASE in (transfer.from_, transfer.to):
                raise TaintConfigError(f"静态方法没有 base: {transfer.method}")
        for sink in self.sinks:
            method = lookup(sink.method)
            if not 0 <= sink.index < method.signature.arity:
                raise TaintConfigError(f"参数下标越界: {sink.method} param {sink.index}")


@dataclass(frozen=True)
class TaintFlow:
    """一条污点流：源调用点到汇点调用点的第 param 个参数"""
    source_method: str
    source_index: int
    sink_method: str
    sink_index: int
    param: int
    taint: Obj

    def sort_key(self) -> Tuple:
        return self.sink_method, self.sink_index, self.param, self.source_method, self.source_index

    def to_line(self) -> str:
        return (f"LEAK source={self.source_method}@{self.source_index} "
                f"sink={self.sink_method}@{self.sink_index} param={self.param}")

    def __str__(self) -> str:
        return self.to_line()


def is_taint(obj: Obj) -> bool:
    return isinstance(obj, MockObj) and obj.descriptor == TAINT_DESCRIPTOR


def method_label(method: Optional[MethodDecl]) -> str:
    if method is None:
        return "<synthetic>"
    return f"{method.declaring_class}.{method.name}"


class TaintAnalysisPlugin(Plugin):
    """污点分析：源方法返回污点对象，传递方法扩散，汇点处报告泄漏"""

    name = "taint"

    def __init__(self, config: TaintConfig):
        self.config = config
        self.solver: Optional["Solver"] = None
        self.flows: List[TaintFlow] = []
        self._sources: Set[str] = {s.method for s in config.sources}
        self._transfers: Dict[str, List[TaintTransfer]] = {}
        for transfer in config.transfers:
            self._transfers.setdefault(transfer.method, []).append(transfer)
        self._transfer_vars: Dict["CSVar", Set["CSVar"]] = {}
        self._methods: Dict[str, MethodDecl] = {}

    def on_start(self, solver: "Solver") -> None:
        self.solver = solver
        self._methods = {str(m.signature): m for m in solver.program.methods()}

    def on_new_call_edge(self, edge: "CallEdge") -> None:
        callee = str(edge.callee.method.signature)
        invoke = edge.call_site.call_site
        context = edge.call_site.context
        if callee in self._sources:
            if invoke.result is None:
                logger.warning("污点源调用没有接收返回值，忽略: {}", invoke)
            else:
                taint = self.solver.heap_model.get_mock_obj(
                    TAINT_DESCRIPTOR, invoke, edge.callee.method.signature.return_type)
                self.solver.add_var_points_to(context, invoke.result, [taint])
        for transfer in self._transfers.get(callee, ()):
            from_var = self._transfer_var(invoke, transfer.from_)
            to_var = self._transfer_var(invoke, transfer.to)
            if from_var is None or to_var is None:
                continue
            cs_manager = self.solver.cs_manager
            from_cs = cs_manager.get_cs_var(context, from_var)
            to_cs = cs_manager.get_cs_var(context, to_var)
            self._transfer_vars.setdefault(from_cs, set()).add(to_cs)
            self._transfer_taint(from_cs.points_to_set, to_cs)

    @staticmethod
    def _transfer_var(invoke: Invoke, role) -> Optional[Var]:
        if role == BASE:
            return invoke.base
        if role == RESULT:
            return invoke.result
        return invoke.args[role]

    def _transfer_taint(self, objs: Iterable["CSObj"], target: "CSVar") -> None:
        taints = [o for o in objs if is_taint(o.obj)]
        if taints:
            self.solver.add_points_to(target, taints)

    def on_new_points_to_set(self, cs_var: "CSVar", delta: List["CSObj"]) -> None:
        for target in self._transfer_vars.get(cs_var, ()):
            self._transfer_taint(delta, target)

    def on_finish(self) -> None:
        program = self.solver.program
        found: Set[TaintFlow] = set()
        for sink in self.config.sinks:
            method = self._methods.get(sink.method)
            if method is None:
                continue
            for call_site in self.solver.get_callers_of(method):
                invoke = call_site.call_site
                arg = self.solver.cs_manager.find_cs_var(call_site.context, invoke.args[sink.index])
                if arg is None:
                    continue
                for obj in arg.points_to_set:
                    if not is_taint(obj.obj):
                        continue
                    source = obj.obj.source
                    found.add(TaintFlow(method_label(program.container_of(source)), source.index,
                                        method_label(program.container_of(invoke)), invoke.index,
                                        sink.index, obj.obj))
        self.flows = sorted(found, key=TaintFlow.sort_key)
        logger.info("污点分析发现 {} 条泄漏", len(self.flows))

    def result(self) -> List[TaintFlow]:
        return list(self.flows)
