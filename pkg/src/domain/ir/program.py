"""
程序实体
类、字段、方法、方法体与整个程序；解析完成后不可变，分析结果挂在各层级的结果槽上
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

from ..errors import MissingResultError
from .hierarchy import Hierarchy
from .refs import MethodSignature, Var
from .stmts import (Cast, Copy, Invoke, LoadArray, LoadField, Return, Stmt,
                    StoreArray, StoreField, Throw)
from .types import ClassType, SemType


class ResultHolder:
    """
    结果槽混入类

    Program / ClassDecl / MethodBody 各自保存本层级分析的结果，
    以分析 ID 为键。查询不存在的结果抛出 MissingResultError。
    """

    RESULT_LEVEL = "unknown"

    def _result_slot(self) -> Dict[str, Any]:
        slot = self.__dict__.get("_results")
        if slot is None:
            slot = {}
            self.__dict__["_results"] = slot
        return slot

    def store_result(self, analysis_id: str, value: Any) -> None:
        self._result_slot()[analysis_id] = value

    def get_result(self, analysis_id: str) -> Any:
        slot = self._result_slot()
        if analysis_id not in slot:
            raise MissingResultError(analysis_id, self.RESULT_LEVEL)
        return slot[analysis_id]

    def has_result(self, analysis_id: str) -> bool:
        return analysis_id in self._result_slot()

    def result_ids(self) -> List[str]:
        return list(self._result_slot())

    def clear_results(self) -> None:
        self._result_slot().clear()


@dataclass(frozen=True)
class FieldDecl:
    name: str
    type: SemType
    is_static: bool
    declaring_class: str


@dataclass(frozen=True)
class ExceptionEntry:
    """异常表项：覆盖 [try_start, try_end) 的语句，处理入口为 handler_index 处的 Catch"""
    try_start: int
    try_end: int
    handler_index: int
    catch_type: ClassType

    def covers(self, index: int) -> bool:
        return self.try_start <= index < self.try_end

    @property
    def span(self) -> int:
        return self.try_end - self.try_start


@dataclass
class RelevantStmts:
    """与某个变量相关的语句索引，供指针分析在点集变化时快速定位"""
    loads: List[LoadField] = field(default_factory=list)
    stores: List[StoreField] = field(default_factory=list)
    load_arrays: List[LoadArray] = field(default_factory=list)
    store_arrays: List[StoreArray] = field(default_factory=list)
    invokes: List[Invoke] = field(default_factory=list)
    throws: List[Throw] = field(default_factory=list)
    copies: List[Copy] = field(default_factory=list)
    casts: List[Cast] = field(default_factory=list)


_EMPTY_RELEVANT = RelevantStmts()


def record_relevant_stmt(table: Dict[Var, RelevantStmts], stmt: Stmt) -> None:
    """把语句登记到其基变量（或右值变量）的相关语句表中"""
    def of(var: Var) -> RelevantStmts:
        return table.setdefault(var, RelevantStmts())

    if isinstance(stmt, LoadField) and stmt.base is not None:
        of(stmt.base).loads.append(stmt)
    elif isinstance(stmt, StoreField) and stmt.base is not None:
        of(stmt.base).stores.append(stmt)
    elif isinstance(stmt, LoadArray):
        of(stmt.base).load_arrays.append(stmt)
    elif isinstance(stmt, StoreArray):
        of(stmt.base).store_arrays.append(stmt)
    elif isinstance(stmt, Invoke) and stmt.base is not None:
        of(stmt.base).invokes.append(stmt)
    elif isinstance(stmt, Throw):
        of(stmt.var).throws.append(stmt)
    elif isinstance(stmt, Copy):
        of(stmt.rhs).copies.append(stmt)
    elif isinstance(stmt, Cast):
        of(stmt.rhs).casts.append(stmt)


class MethodBody(ResultHolder):
    """方法体：参数、this 变量、局部变量、语句序列与异常表"""

    RESULT_LEVEL = "method"

    def __init__(self, signature: MethodSignature, params: Tuple[Var, ...],
                 this_var: Optional[Var], variables: Tuple[Var, ...],
                 stmts: Tuple[Stmt, ...], exception_table: Tuple[ExceptionEntry, ...] = (),
                 stmt_lines: Optional[Dict[int, int]] = None):
        self.signature = signature
        self.params = params
        self.this_var = this_var
        self.variables = variables
        self.stmts = stmts
        self.exception_table = exception_table
        self.stmt_lines = dict(stmt_lines or {})
        self._var_map = {v.name: v for v in variables}
        self._relevant = self._index_relevant_stmts()

    def _index_relevant_stmts(self) -> Dict[Var, RelevantStmts]:
        relevant: Dict[Var, RelevantStmts] = {}
        for stmt in self.stmts:
            record_relevant_stmt(relevant, stmt)
        return relevant

    def relevant_stmts(self, var: Var) -> RelevantStmts:
        return self._relevant.get(var, _EMPTY_RELEVANT)

    def get_var(self, name: str) -> Optional[Var]:
        return self._var_map.get(name)

    def stmt_at(self, index: int) -> Stmt:
        return self.stmts[index]

    def handlers_covering(self, index: int) -> List[ExceptionEntry]:
        """覆盖给定语句的异常表项，由内向外（区间小者优先，其次按表中顺序）"""
        covering = [(entry.span, order, entry)
                    for order, entry in enumerate(self.exception_table) if entry.covers(index)]
        covering.sort(key=lambda item: (item[0], item[1]))
        return [entry for _, _, entry in covering]

    @property
    def return_vars(self) -> List[Var]:
        return [s.value for s in self.stmts if isinstance(s, Return) and s.value is not None]

    def __iter__(self) -> Iterator[Stmt]:
        return iter(self.stmts)

    def __len__(self) -> int:
        return len(self.stmts)

    def __repr__(self) -> str:
        return f"MethodBody({self.signature}, {len(self.stmts)} stmts)"


@dataclass(eq=False)
class MethodDecl:
    """方法声明；抽象方法没有方法体，由 Program 组装时校验"""
    signature: MethodSignature
    body: Optional[MethodBody] = None

    @property
    def name(self) -> str:
        return self.signature.name

    @property
    def declaring_class(self) -> str:
        return self.signature.declaring_class

    @property
    def is_static(self) -> bool:
        return self.signature.is_static

    @property
    def is_abstract(self) -> bool:
        return self.signature.is_abstract

    def __repr__(self) -> str:
        return f"MethodDecl({self.signature})"

    def __str__(self) -> str:
        return str(self.signature)


class ClassDecl(ResultHolder):
    """类或接口声明"""

    RESULT_LEVEL = "class"

    def __init__(self, name: str, superclass: Optional[str], interfaces: Tuple[str, ...],
                 is_interface: bool = False, is_abstract: bool = False,
                 fields: Tuple[FieldDecl, ...] = (), methods: Tuple[MethodDecl, ...] = (),
                 is_builtin: bool = False):
        if is_interface and superclass is not None:
            raise ValueError(f"接口 {name} 不能有父类")
        self.name = name
        self.superclass = superclass
        self.interfaces = interfaces
        self.is_interface = is_interface
        self.is_abstract = is_abstract or is_interface
        self.fields = fields
        self.methods = methods
        self.is_builtin = is_builtin
        self._field_map = {f.name: f for f in fields}
        self._method_map = {m.signature.subsignature: m for m in methods}

    @property
    def type(self) -> ClassType:
        return ClassType(self.name)

    def get_field(self, name: str) -> Optional[FieldDecl]:
        return self._field_map.get(name)

    def get_method(self, subsignature) -> Optional[MethodDecl]:
        return self._method_map.get(subsignature)

    def methods_named(self, name: str) -> List[MethodDecl]:
        return [m for m in self.methods if m.name == name]

    def __repr__(self) -> str:
        kind = "interface" if self.is_interface else "class"
        return f"ClassDecl({kind} {self.name})"


class Program(ResultHolder):
    """
    整个程序

    classes 按声明顺序保存（内置类在前）；entry_methods 为所有静态 main 方法。
    """

    RESULT_LEVEL = "program"

    def __init__(self, classes: Dict[str, ClassDecl], entry_methods: List[MethodDecl]):
        self.classes = dict(classes)
        self.entry_methods = list(entry_methods)
        self.hierarchy = Hierarchy(self.classes)
        self._container: Dict[Stmt, MethodDecl] = {}
        self._by_signature: Dict[MethodSignature, MethodDecl] = {}
        for method in self.methods():
            if method.is_abstract != (method.body is None):
                raise ValueError(f"方法体与抽象修饰不符: {method.signature}")
            self._by_signature[method.signature] = method
            if method.body is not None:
                for stmt in method.body.stmts:
                    self._container[stmt] = method

    def methods(self) -> Iterator[MethodDecl]:
        for decl in self.classes.values():
            yield from decl.methods

    def bodies(self) -> Iterator[MethodBody]:
        for method in self.methods():
            if method.body is not None:
                yield method.body

    def user_classes(self) -> List[ClassDecl]:
        return [c for c in self.classes.values() if not c.is_builtin]

    def get_class(self, name: str) -> Optional[ClassDecl]:
        return self.classes.get(name)

    def get_method(self, signature: MethodSignature) -> Optional[MethodDecl]:
        return self._by_signature.get(signature)

    def container_of(self, stmt: Stmt) -> Optional[MethodDecl]:
        """语句所在的方法；求解期间合成的语句返回 None"""
        return self._container.get(stmt)

    def __repr__(self) -> str:
        return f"Program({len(self.classes)} classes, {len(self.entry_methods)} entries)"
