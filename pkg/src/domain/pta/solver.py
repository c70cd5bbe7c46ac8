"""
指针分析求解器
基于指针流图的 Andersen 式求解：工作表驱动，调用图在线构建，事件逐一通知插件
"""
import threading
from collections import deque
from dataclasses import dataclass
from typing import Deque, Dict, Iterable, List, Optional, Sequence, Set, Union

from loguru import logger

from ..errors import DispatchError, PluginError, UnreachableMethodError, WorklistLimitError
from ..ir.program import MethodDecl, Program, RelevantStmts, record_relevant_stmt
from ..ir.refs import Var
from ..ir.stmts import (AssignLiteral, Cast, Copy, Invoke, InvokeKind, LoadArray, LoadField,
                        New, Stmt, StoreArray, StoreField)
from ..ir.types import ClassType, SemType, STRING
from ..plugin.base import CompositePlugin, Plugin
from .callgraph import CallEdge, CallGraph
from .context import EMPTY_CONTEXT, Context, ContextSelector, InsensitiveSelector
from .elements import CSCallSite, CSManager, CSMethod, CSObj, CSVar, Pointer
from .heap import HeapModel, Obj
from .pfg import PointerFlowGraph
from .result import PTAResult

DEFAULT_MAX_WORKLIST_OPS = 5_000_000


@dataclass
class SolverStats:
    worklist_ops: int = 0
    points_to_events: int = 0
    call_edge_events: int = 0
    method_events: int = 0
    stmt_events: int = 0
    dispatch_failures: int = 0

    def to_dict(self) -> Dict[str, int]:
        return dict(self.__dict__)


class Solver:
    """
    指针分析求解器

    一次 solve 在单线程中完成；插件回调也在该线程内被调用，
    只能通过 add_points_to / add_call_edge / add_stmts 修改状态。
    """

    def __init__(self, program: Program, selector: Optional[ContextSelector] = None,
                 plugins: Sequence[Plugin] = (), heap_model: Optional[HeapModel] = None,
                 type_filter: bool = True, hybrid_threshold: int = 8,
                 max_worklist_ops: int = DEFAULT_MAX_WORKLIST_OPS,
                 entry_methods: Optional[Sequence[MethodDecl]] = None,
                 mock_entry_receivers: bool = False):
        self.program = program
        self.hierarchy = program.hierarchy
        self.selector = selector or InsensitiveSelector()
        self.plugin = CompositePlugin(list(plugins))
        self.heap_model = heap_model or HeapModel()
        self.type_filter = type_filter
        self.max_worklist_ops = max_worklist_ops
        self.entry_methods = list(program.entry_methods if entry_methods is None else entry_methods)
        self.mock_entry_receivers = mock_entry_receivers

        self.cs_manager = CSManager(hybrid_threshold)
        self.call_graph = CallGraph()
        self.pfg = PointerFlowGraph()
        self.stats = SolverStats()

        self._queue: Deque[Pointer] = deque()
        self._pending: Dict[Pointer, List[CSObj]] = {}
        self._edge_queue: Deque[CallEdge] = deque()
        self._extra_relevant: Dict[Var, RelevantStmts] = {}
        self._owner_thread: Optional[int] = None
        self._state = "idle"

    # ------------------------------------------------------------ 入口

    def solve(self) -> PTAResult:
        """
        求解到不动点

        Returns:
            PTAResult: 不可变的分析结果

        Raises:
            PluginError: 在回调中重入 solve
            WorklistLimitError: 工作表操作超过安全上限
        """
        if self._state == "running":
            raise PluginError("求解过程中不能再次调用 solve")
        self._owner_thread = threading.get_ident()
        self._state = "running"
        logger.info("开始指针分析: 上下文 {}, {} 个入口方法", self.selector.describe(),
                    len(self.entry_methods))
        self.plugin.on_start(self)
        for entry in self.entry_methods:
            cs_entry = self.cs_manager.get_cs_method(EMPTY_CONTEXT, entry)
            self._add_reachable(cs_entry)
            if self.mock_entry_receivers and entry.body is not None and entry.body.this_var is not None:
                receiver = self.heap_model.get_mock_obj("EntryReceiver", None, ClassType(entry.declaring_class))
                self.add_points_to(self.cs_manager.get_cs_var(EMPTY_CONTEXT, entry.body.this_var), [receiver])
        self._analyze()
        self.plugin.on_finish()
        self._state = "finished"
        result = PTAResult(self)
        logger.info("指针分析完成: #varpt={} #reach={} #edges={}",
                    result.metrics()["varpt"], result.metrics()["reach"], result.metrics()["edges"])
        return result

    def _analyze(self) -> None:
        while self._edge_queue or self._queue:
            self._tick()
            if self._edge_queue:
                self._process_call_edge(self._edge_queue.popleft())
                continue
            pointer = self._queue.popleft()
            objs = self._pending.pop(pointer)
            delta = self._propagate(pointer, objs)
            if delta and isinstance(pointer, CSVar):
                self._on_var_delta(pointer, delta)

    def _tick(self) -> None:
        self.stats.worklist_ops += 1
        if self.stats.worklist_ops > self.max_worklist_ops:
            raise WorklistLimitError(self.max_worklist_ops)

    # ------------------------------------------------------------ 工作表与传播

    def _enqueue(self, pointer: Pointer, objs: Iterable[CSObj]) -> None:
        objs = list(objs)
        if not objs:
            return
        pending = self._pending.get(pointer)
        if pending is None:
            self._pending[pointer] = objs
            self._queue.append(pointer)
        else:
            pending.extend(objs)

    def _filter(self, objs: Iterable[CSObj], type_filter: Optional[SemType]) -> List[CSObj]:
        if type_filter is None:
            return list(objs)
        return [o for o in objs if self.hierarchy.is_subtype(o.obj.type, type_filter)]

    def _var_filter(self, var: Var) -> Optional[SemType]:
        return var.type if self.type_filter else None

    def _propagate(self, pointer: Pointer, objs: List[CSObj]) -> List[CSObj]:
        delta = pointer.points_to_set.add_all_diff(objs)
        if delta:
            for edge in self.pfg.out_edges(pointer):
                self._enqueue(edge.target, self._filter(delta, edge.type_filter))
        return delta

    def _add_pfg_edge(self, source: Pointer, target: Pointer, type_filter: Optional[SemType] = None) -> None:
        if self.pfg.add_edge(source, target, type_filter):
            pts = source.points_to_set
            if not pts.is_empty():
                self._enqueue(target, self._filter(pts.objects(), type_filter))

    # ------------------------------------------------------------ 语句处理

    def _method_of(self, var: Var) -> MethodDecl:
        return self.program.get_method(var.method)

    def _relevant_of(self, var: Var) -> List[RelevantStmts]:
        tables = []
        method = self._method_of(var)
        if method is not None and method.body is not None:
            tables.append(method.body.relevant_stmts(var))
        extra = self._extra_relevant.get(var)
        if extra is not None:
            tables.append(extra)
        return tables

    def _on_var_delta(self, cs_var: CSVar, delta: List[CSObj]) -> None:
        for relevant in self._relevant_of(cs_var.var):
            for obj in delta:
                for stmt in relevant.stores:
                    self._store_field(cs_var.context, obj, stmt)
                for stmt in relevant.loads:
                    self._load_field(cs_var.context, obj, stmt)
                for stmt in relevant.store_arrays:
                    self._store_array(cs_var.context, obj, stmt)
                for stmt in relevant.load_arrays:
                    self._load_array(cs_var.context, obj, stmt)
                for stmt in relevant.invokes:
                    self._process_instance_call(cs_var.context, obj, stmt)
        self.stats.points_to_events += 1
        self.plugin.on_new_points_to_set(cs_var, delta)

    def _store_field(self, context: Context, obj: CSObj, stmt: StoreField) -> None:
        cm = self.cs_manager
        self._add_pfg_edge(cm.get_cs_var(context, stmt.rhs), cm.get_instance_field(obj, stmt.field))

    def _load_field(self, context: Context, obj: CSObj, stmt: LoadField) -> None:
        cm = self.cs_manager
        self._add_pfg_edge(cm.get_instance_field(obj, stmt.field), cm.get_cs_var(context, stmt.lhs),
                           self._var_filter(stmt.lhs))

    def _store_array(self, context: Context, obj: CSObj, stmt: StoreArray) -> None:
        cm = self.cs_manager
        self._add_pfg_edge(cm.get_cs_var(context, stmt.rhs), cm.get_array_index(obj))

    def _load_array(self, context: Context, obj: CSObj, stmt: LoadArray) -> None:
        cm = self.cs_manager
        self._add_pfg_edge(cm.get_array_index(obj), cm.get_cs_var(context, stmt.lhs),
                           self._var_filter(stmt.lhs))

    def _add_reachable(self, method: CSMethod) -> None:
        if not self.call_graph.add_reachable(method):
            return
        self.stats.method_events += 1
        self.plugin.on_new_method(method)
        body = method.method.body
        if body is not None:
            self._process_stmts(method, body.stmts)

    def _process_stmts(self, method: CSMethod, stmts: Iterable[Stmt]) -> None:
        for stmt in stmts:
            self._process_stmt(method, stmt)
            self.stats.stmt_events += 1
            self.plugin.on_new_stmt(stmt, method)

    def _process_stmt(self, method: CSMethod, stmt: Stmt) -> None:
        cm = self.cs_manager
        context = method.context
        if isinstance(stmt, New):
            obj = self.heap_model.get_obj(stmt, method.method.signature)
            heap_context = self.selector.select_heap_context(method, obj)
            self._enqueue(cm.get_cs_var(context, stmt.lhs), [cm.get_cs_obj(heap_context, obj)])
        elif isinstance(stmt, AssignLiteral):
            if isinstance(stmt.literal.value, str):
                obj = self.heap_model.get_constant_obj(stmt.literal.value, STRING)
                self._enqueue(cm.get_cs_var(context, stmt.lhs),
                              [cm.get_cs_obj(self.selector.select_heap_context(method, obj), obj)])
        elif isinstance(stmt, Copy):
            self._add_pfg_edge(cm.get_cs_var(context, stmt.rhs), cm.get_cs_var(context, stmt.lhs),
                               self._var_filter(stmt.lhs))
        elif isinstance(stmt, Cast):
            self._add_pfg_edge(cm.get_cs_var(context, stmt.rhs), cm.get_cs_var(context, stmt.lhs),
                               stmt.cast_type)
        elif isinstance(stmt, LoadField) and stmt.is_static:
            self._add_pfg_edge(cm.get_static_field(stmt.field), cm.get_cs_var(context, stmt.lhs),
                               self._var_filter(stmt.lhs))
        elif isinstance(stmt, StoreField) and stmt.is_static:
            self._add_pfg_edge(cm.get_cs_var(context, stmt.rhs), cm.get_static_field(stmt.field))
        elif isinstance(stmt, Invoke) and stmt.is_static:
            self._process_static_call(method, stmt)
        self._process_existing_base(method, stmt)

    def _process_existing_base(self, method: CSMethod, stmt: Stmt) -> None:
        """基变量在语句变为可达前已有点集时（插件注入或合成语句），立即按已有对象处理"""
        base = getattr(stmt, "base", None)
        if base is None:
            return
        cs_base = self.cs_manager.find_cs_var(method.context, base)
        if cs_base is None or cs_base.points_to_set.is_empty():
            return
        for obj in cs_base.points_to_set.objects():
            if isinstance(stmt, StoreField):
                self._store_field(method.context, obj, stmt)
            elif isinstance(stmt, LoadField):
                self._load_field(method.context, obj, stmt)
            elif isinstance(stmt, StoreArray):
                self._store_array(method.context, obj, stmt)
            elif isinstance(stmt, LoadArray):
                self._load_array(method.context, obj, stmt)
            elif isinstance(stmt, Invoke):
                self._process_instance_call(method.context, obj, stmt)

    def _process_static_call(self, method: CSMethod, invoke: Invoke) -> None:
        try:
            callee = self.hierarchy.resolve_method(invoke.method_ref)
        except DispatchError as e:
            self.stats.dispatch_failures += 1
            logger.warning("静态调用解析失败，跳过: {}", e)
            return
        call_site = self.cs_manager.get_call_site(method.context, invoke, method)
        callee_context = self.selector.select_method_context(call_site, callee, None)
        self._edge_queue.append(CallEdge(invoke.kind, call_site,
                                         self.cs_manager.get_cs_method(callee_context, callee)))

    def _process_instance_call(self, context: Context, receiver: CSObj, invoke: Invoke) -> None:
        try:
            if invoke.kind is InvokeKind.VIRTUAL:
                callee = self.hierarchy.dispatch(receiver.obj.type, invoke.method_ref)
            else:
                callee = self.hierarchy.resolve_method(invoke.method_ref)
        except DispatchError as e:
            self.stats.dispatch_failures += 1
            logger.warning("虚调用分派失败，跳过调用边: {}", e)
            return
        cm = self.cs_manager
        container = cm.get_cs_method(context, self._method_of(invoke.base))
        call_site = cm.get_call_site(context, invoke, container)
        callee_context = self.selector.select_method_context(call_site, callee, receiver)
        self._edge_queue.append(CallEdge(invoke.kind, call_site, cm.get_cs_method(callee_context, callee)))
        this_var = callee.body.this_var if callee.body is not None else None
        if this_var is not None:
            self._enqueue(cm.get_cs_var(callee_context, this_var), [receiver])

    def _process_call_edge(self, edge: CallEdge) -> None:
        if not self.call_graph.add_edge(edge):
            return
        callee = edge.callee
        self._add_reachable(callee)
        body = callee.method.body
        invoke = edge.call_site.call_site
        if body is not None:
            cm = self.cs_manager
            caller_context = edge.call_site.context
            for arg, param in zip(invoke.args, body.params):
                self._add_pfg_edge(cm.get_cs_var(caller_context, arg), cm.get_cs_var(callee.context, param),
                                   self._var_filter(param))
            if invoke.result is not None:
                target = cm.get_cs_var(caller_context, invoke.result)
                for ret in body.return_vars:
                    self._add_pfg_edge(cm.get_cs_var(callee.context, ret), target,
                                       self._var_filter(invoke.result))
        self.stats.call_edge_events += 1
        self.plugin.on_new_call_edge(edge)

    # ------------------------------------------------------------ 插件可用的 API

    def _check_caller(self) -> None:
        if self._state == "finished":
            raise PluginError("求解已结束，不能再修改分析状态")
        if self._owner_thread is not None and threading.get_ident() != self._owner_thread:
            raise PluginError("只能在求解线程中调用求解器 API")

    def add_points_to(self, pointer: Pointer, objs: Iterable[Union[CSObj, Obj]]) -> None:
        """
        向指针的点集加入对象，随后按正常流程传播

        Args:
            pointer: 目标指针
            objs: CSObj，或不带上下文的 Obj（使用空堆上下文）
        """
        self._check_caller()
        wrapped = [o if isinstance(o, CSObj) else self.cs_manager.get_cs_obj(EMPTY_CONTEXT, o) for o in objs]
        fresh = [o for o in wrapped if o not in pointer.points_to_set]
        self._enqueue(pointer, fresh)

    def add_var_points_to(self, context: Context, var: Var, objs: Iterable[Union[CSObj, Obj]]) -> None:
        self.add_points_to(self.cs_manager.get_cs_var(context, var), objs)

    def add_call_edge(self, edge: CallEdge) -> None:
        self._check_caller()
        self._edge_queue.append(edge)

    def add_stmts(self, method: CSMethod, stmts: Sequence[Stmt]) -> None:
        """
        向可达方法追加合成语句，按解析得到的语句同样处理

        Raises:
            UnreachableMethodError: 方法尚不可达
        """
        self._check_caller()
        if not self.call_graph.is_reachable(method):
            raise UnreachableMethodError(f"方法不可达: {method}")
        for stmt in stmts:
            record_relevant_stmt(self._extra_relevant, stmt)
        self._process_stmts(method, stmts)

    def get_points_to_set(self, pointer: Pointer) -> List[CSObj]:
        return pointer.points_to_set.objects()

    def get_ci_points_to_set(self, var: Var) -> Set[Obj]:
        return {o.obj for cs_var in self.cs_manager.cs_vars() if cs_var.var == var
                for o in cs_var.points_to_set}

    def get_callers_of(self, method: MethodDecl) -> List[CSCallSite]:
        return self.call_graph.callers_of(method)
