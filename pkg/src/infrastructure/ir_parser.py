"""
IR 解析器
把 IR 文本解析为 Program：pyparsing 负责语法，随后一趟名字解析生成不可变的程序实体
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import pyparsing as pp
from loguru import logger

from ..domain.errors import InheritanceCycleError, IRError, IRResolutionError, IRSyntaxError
from ..domain.ir.hierarchy import Hierarchy
from ..domain.ir.program import (ClassDecl, ExceptionEntry, FieldDecl, MethodBody,
                                 MethodDecl, Program)
from ..domain.ir.refs import FieldRef, Literal, MethodRef, MethodSignature, Var
from ..domain.ir.stmts import (AssignLiteral, Binary, BinaryOp, Cast, Catch, ConditionOp,
                               Copy, Goto, If, Invoke, InvokeKind, LoadArray, LoadField, New,
                               Nop, Return, Stmt, StoreArray, StoreField, Switch, Throw,
                               Unary, UnaryOp)
from ..domain.ir.types import (ArrayType, ClassType, OBJECT, SemType, THROWABLE, VoidType,
                               base_class_name, parse_type_name)

PRELUDE_PATH = Path(__file__).parent / "resources" / "prelude.ir"

KEYWORDS = frozenset({
    "class", "interface", "extends", "implements", "static", "abstract", "new",
    "return", "if", "goto", "switch", "case", "default", "throw", "nop",
    "invokestatic", "invokevirtual", "invokespecial", "catch", "true", "false",
    "null", "void", "int", "boolean",
})
_TYPE_KEYWORDS = frozenset({"int", "boolean", "void"})


# ---------------------------------------------------------------- 语法树记录

@dataclass
class RawStmt:
    kind: str
    line: int
    column: int
    parts: Dict[str, Any]
    label: Optional[str] = None


@dataclass
class RawCase:
    value: int
    target: str


@dataclass
class RawDecl:
    type: str
    name: str
    line: int


@dataclass
class RawCatch:
    type: str
    start: str
    end: str
    handler: str
    line: int


@dataclass
class RawField:
    modifiers: List[str]
    type: str
    name: str
    line: int


@dataclass
class RawMethod:
    modifiers: List[str]
    return_type: str
    name: str
    params: List[RawDecl]
    has_body: bool
    decls: List[RawDecl]
    stmts: List[RawStmt]
    catches: List[RawCatch]
    line: int
    end_label: Optional[str] = None


@dataclass
class RawClass:
    name: str
    is_interface: bool
    is_abstract: bool
    superclass: Optional[str]
    interfaces: List[str]
    members: List[Any]
    line: int
    source: str = "<input>"
    is_builtin: bool = False


def _plain(value: Any) -> Any:
    if isinstance(value, pp.ParseResults):
        return list(value)
    return value


def _located(s: str, loc: int) -> Tuple[int, int]:
    return pp.lineno(loc, s), pp.col(loc, s)


def _not_keyword(s, loc, toks) -> bool:
    return toks[0] not in KEYWORDS


def _type_not_keyword(s, loc, toks) -> bool:
    base = toks[0].split("[")[0]
    return base in _TYPE_KEYWORDS or base not in KEYWORDS


def _kw(word: str) -> pp.Keyword:
    return pp.Keyword(word)


def _stmt(kind: str, expr: pp.ParserElement, *names: str) -> pp.ParserElement:
    def action(s, loc, toks):
        line, column = _located(s, loc)
        parts = {name: _plain(toks.get(name)) for name in names}
        return RawStmt(kind, line, column, parts)
    return expr.set_parse_action(action).set_name(kind)


def _build_grammar() -> pp.ParserElement:
    """构造 IR 文法，返回整个程序的语法元素"""
    LBRACE, RBRACE, LPAR, RPAR, SEMI, COMMA, COLON, EQ, DOT = map(pp.Suppress, "{}();,:=.")
    ARRAY_ALL = pp.Suppress(pp.Literal("[") + pp.Literal("*") + pp.Literal("]"))

    ident = pp.Word(pp.alphas + "_", pp.alphanums + "_$").add_condition(
        _not_keyword, message="不能使用关键字作为标识符").set_name("标识符")
    type_ = pp.Regex(r"[A-Za-z_][A-Za-z0-9_$]*(?:\[\])*").add_condition(
        _type_not_keyword, message="不能使用关键字作为类型").set_name("类型")
    integer = pp.Regex(r"-?\d+").set_name("整数")

    literal = (
        integer.copy().set_parse_action(lambda s, loc, t: Literal.of(int(t[0])))
        | _kw("true").set_parse_action(lambda s, loc, t: Literal.of(True))
        | _kw("false").set_parse_action(lambda s, loc, t: Literal.of(False))
        | _kw("null").set_parse_action(lambda s, loc, t: Literal.of(None))
        | pp.QuotedString('"', esc_char="\\").set_parse_action(lambda s, loc, t: Literal.of(t[0]))
    ).set_name("字面量")

    bin_op = pp.one_of("<< >> <= >= == != + - * / % & | ^ < >")
    cond_op = pp.one_of("<= >= == != < >")
    unary_op = pp.one_of("- !")

    lhs = ident("lhs") + EQ
    args = pp.Group(pp.Optional(ident + pp.ZeroOrMore(COMMA + ident)))("args")
    invoke_expr = (
        _kw("invokestatic")("kind") - ident("owner") + DOT + ident("method") + LPAR + args + RPAR
        | (_kw("invokevirtual") | _kw("invokespecial"))("kind")
        - ident("base") + DOT + ident("method") + LPAR + args + RPAR
    )
    case = (_kw("case").suppress() - integer("value") + COLON + ident("target") + SEMI).set_parse_action(
        lambda s, loc, t: RawCase(int(t["value"]), t["target"]))

    stmt_body = pp.MatchFirst([
        _stmt("invoke", pp.Optional(ident("result") + EQ) + invoke_expr + SEMI,
              "result", "kind", "owner", "base", "method", "args"),
        _stmt("new", lhs + _kw("new") - type_("type") + SEMI, "lhs", "type"),
        _stmt("catch", lhs + pp.Suppress(pp.Literal("@catch")) - SEMI, "lhs"),
        _stmt("literal", lhs + literal("literal") + SEMI, "lhs", "literal"),
        _stmt("cast", lhs + LPAR + type_("type") + RPAR + ident("rhs") + SEMI, "lhs", "type", "rhs"),
        _stmt("unary", lhs + unary_op("op") + ident("rhs") + SEMI, "lhs", "op", "rhs"),
        _stmt("binary", lhs + ident("op1") + bin_op("op") + ident("op2") + SEMI,
              "lhs", "op1", "op", "op2"),
        _stmt("load_array", lhs + ident("base") + ARRAY_ALL + SEMI, "lhs", "base"),
        _stmt("load_field", lhs + ident("base") + DOT + ident("field") + SEMI, "lhs", "base", "field"),
        _stmt("copy", lhs + ident("rhs") + SEMI, "lhs", "rhs"),
        _stmt("store_array", ident("base") + ARRAY_ALL + EQ + ident("rhs") + SEMI, "base", "rhs"),
        _stmt("store_field", ident("base") + DOT + ident("field") + EQ + ident("rhs") + SEMI,
              "base", "field", "rhs"),
        _stmt("return", _kw("return") - pp.Optional(ident("value")) + SEMI, "value"),
        _stmt("if", _kw("if") - ident("op1") + cond_op("op") + ident("op2")
              + _kw("goto") + ident("target") + SEMI, "op1", "op", "op2", "target"),
        _stmt("goto", _kw("goto") - ident("target") + SEMI, "target"),
        _stmt("switch", _kw("switch") - ident("key") + LBRACE + pp.Group(pp.ZeroOrMore(case))("cases")
              + _kw("default") + COLON + ident("default") + SEMI + RBRACE + SEMI,
              "key", "cases", "default"),
        _stmt("throw", _kw("throw") - ident("var") + SEMI, "var"),
        _stmt("nop", _kw("nop") - SEMI),
    ])

    def attach_label(s, loc, toks):
        raw = toks[-1]
        label = toks.get("label")
        if label is not None:
            raw.label = label
        return raw

    stmt = (pp.Optional(ident("label") + COLON) + stmt_body).set_parse_action(attach_label)

    decl = (type_("type") + ident("name") + SEMI).set_parse_action(
        lambda s, loc, t: RawDecl(t["type"], t["name"], pp.lineno(loc, s)))
    catch_entry = (_kw("catch").suppress() - LPAR + type_("type") + COMMA + ident("start") + COMMA
                   + ident("end") + COMMA + ident("handler") + RPAR + SEMI).set_parse_action(
        lambda s, loc, t: RawCatch(t["type"], t["start"], t["end"], t["handler"], pp.lineno(loc, s)))

    modifiers = pp.Group(pp.ZeroOrMore(_kw("static") | _kw("abstract")))("mods")
    param = (type_("type") + ident("name")).set_parse_action(
        lambda s, loc, t: RawDecl(t["type"], t["name"], pp.lineno(loc, s)))
    params = pp.Group(pp.Optional(param + pp.ZeroOrMore(COMMA + param)))("params")
    # 最后一条语句之后可以单独写一个标签，只用作 try 区间的（不含）终点
    end_label = ident("end_label") + COLON
    body = (LBRACE - pp.Group(pp.ZeroOrMore(decl))("decls") + pp.Group(pp.ZeroOrMore(stmt))("stmts")
            + pp.Optional(end_label) + pp.Group(pp.ZeroOrMore(catch_entry))("catches") + RBRACE)

    def make_method(s, loc, t):
        return RawMethod(
            modifiers=list(t.get("mods") or []), return_type=t["ret"], name=t["name"],
            params=list(t.get("params") or []), has_body=t.get("no_body") is None,
            decls=list(t.get("decls") or []), stmts=list(t.get("stmts") or []),
            catches=list(t.get("catches") or []), line=pp.lineno(loc, s),
            end_label=t.get("end_label"))

    method = (modifiers + type_("ret") + ident("name") + LPAR - params + RPAR
              + (body | pp.Literal(";")("no_body"))).set_parse_action(make_method)
    field_ = (modifiers + type_("type") + ident("name") + SEMI).set_parse_action(
        lambda s, loc, t: RawField(list(t.get("mods") or []), t["type"], t["name"], pp.lineno(loc, s)))
    member = field_ | method

    name_list = pp.Group(ident + pp.ZeroOrMore(COMMA + ident))

    def make_class(s, loc, t):
        return RawClass(
            name=t["name"], is_interface=False, is_abstract=t.get("abstract") is not None,
            superclass=t.get("super"), interfaces=list(t.get("ifaces") or []),
            members=list(t.get("members") or []), line=pp.lineno(loc, s))

    def make_interface(s, loc, t):
        return RawClass(
            name=t["name"], is_interface=True, is_abstract=True, superclass=None,
            interfaces=list(t.get("ifaces") or []), members=list(t.get("members") or []),
            line=pp.lineno(loc, s))

    class_decl = (pp.Optional(_kw("abstract"))("abstract") + _kw("class") - ident("name")
                  + pp.Optional(_kw("extends") + ident("super"))
                  + pp.Optional(_kw("implements") + name_list("ifaces"))
                  + LBRACE + pp.Group(pp.ZeroOrMore(member))("members") + RBRACE
                  ).set_parse_action(make_class)
    interface_decl = (_kw("interface") - ident("name")
                      + pp.Optional(_kw("extends") + name_list("ifaces"))
                      + LBRACE + pp.Group(pp.ZeroOrMore(method))("members") + RBRACE
                      ).set_parse_action(make_interface)

    program = pp.ZeroOrMore(class_decl | interface_decl) + pp.StringEnd()
    program.ignore(pp.dbl_slash_comment)
    program.ignore(pp.c_style_comment)
    return program


_GRAMMAR: Optional[pp.ParserElement] = None


def _grammar() -> pp.ParserElement:
    global _GRAMMAR
    if _GRAMMAR is None:
        _GRAMMAR = _build_grammar()
    return _GRAMMAR


def parse_raw(text: str, source: str = "<input>") -> List[RawClass]:
    """只做语法分析，返回类声明记录"""
    try:
        result = _grammar().parse_string(text, parse_all=True)
    except pp.ParseBaseException as e:
        raise IRSyntaxError(e.msg, e.lineno, e.col, source) from None
    classes = [item for item in result if isinstance(item, RawClass)]
    for raw in classes:
        raw.source = source
    return classes


# ---------------------------------------------------------------- 名字解析

_BINARY_OPS = {op.value: op for op in BinaryOp}
_CONDITION_OPS = {op.value: op for op in ConditionOp}
_UNARY_OPS = {op.value: op for op in UnaryOp}
_INVOKE_KINDS = {kind.value: kind for kind in InvokeKind}


@dataclass
class _MethodScope:
    raw_class: RawClass
    raw: RawMethod
    signature: MethodSignature
    variables: Dict[str, Var] = field(default_factory=dict)
    labels: Dict[str, int] = field(default_factory=dict)


class ProgramBuilder:
    """
    名字解析与程序组装

    依次完成：类表登记、继承校验与成环检查、签名类型解析、方法体语句解析。
    """

    def __init__(self, raw_classes: Sequence[RawClass]):
        self._raw_classes = list(raw_classes)
        self._classes: Dict[str, ClassDecl] = {}
        self._raw_by_name: Dict[str, RawClass] = {}
        self._hierarchy: Optional[Hierarchy] = None

    def build(self) -> Program:
        self._register_classes()
        self._check_inheritance()
        self._declare_members()
        self._hierarchy = Hierarchy(self._classes)
        for decl in self._classes.values():
            raw_class = self._raw_by_name[decl.name]
            raw_methods = [m for m in raw_class.members if isinstance(m, RawMethod)]
            for method, raw in zip(decl.methods, raw_methods):
                if raw.has_body:
                    method.body = self._build_body(raw_class, raw, method.signature)
        entries = [m for decl in self._classes.values() if not decl.is_builtin
                   for m in decl.methods if m.is_static and m.name == "main"]
        program = Program(self._classes, entries)
        logger.debug("解析完成: {} 个类, {} 个入口方法", len(self._classes), len(entries))
        return program

    # ------------------------------------------------------------ 类表

    def _register_classes(self) -> None:
        for raw in self._raw_classes:
            if raw.name in self._raw_by_name:
                raise IRResolutionError(raw.name, "类重复定义", raw.line, raw.source)
            self._raw_by_name[raw.name] = raw
        if OBJECT.name not in self._raw_by_name:
            raise IRResolutionError(OBJECT.name, "缺少内置类 Object")

    def _check_inheritance(self) -> None:
        graph = nx.DiGraph()
        for raw in self._raw_by_name.values():
            graph.add_node(raw.name)
            if not raw.is_interface and raw.superclass is None and raw.name != OBJECT.name:
                raw.superclass = OBJECT.name
            if raw.superclass is not None:
                parent = self._raw_by_name.get(raw.superclass)
                if parent is None:
                    raise IRResolutionError(raw.superclass, "父类不存在", raw.line, raw.source)
                if parent.is_interface:
                    raise IRResolutionError(raw.superclass, "不能继承接口", raw.line, raw.source)
                graph.add_edge(raw.name, raw.superclass)
            for name in raw.interfaces:
                parent = self._raw_by_name.get(name)
                if parent is None:
                    raise IRResolutionError(name, "接口不存在", raw.line, raw.source)
                if not parent.is_interface:
                    raise IRResolutionError(name, "只能实现接口", raw.line, raw.source)
                graph.add_edge(raw.name, name)
        try:
            cycle = nx.find_cycle(graph)
        except nx.NetworkXNoCycle:
            return
        names = [edge[0] for edge in cycle]
        raise InheritanceCycleError(names + [names[0]])

    def _resolve_type(self, text: str, line: int, source: str, allow_void: bool = False) -> SemType:
        try:
            sem_type = parse_type_name(text)
        except ValueError as e:
            raise IRResolutionError(text, str(e), line, source) from None
        if isinstance(sem_type, VoidType) and not allow_void:
            raise IRResolutionError(text, "void 只能作为返回类型", line, source)
        name = base_class_name(sem_type)
        if name is not None and name not in self._raw_by_name:
            raise IRResolutionError(name, "未知类型", line, source)
        return sem_type

    def _declare_members(self) -> None:
        for raw in self._raw_by_name.values():
            fields: List[FieldDecl] = []
            methods: List[MethodDecl] = []
            for member in raw.members:
                if isinstance(member, RawField):
                    if raw.is_interface:
                        raise IRResolutionError(member.name, "接口不能声明字段", member.line, raw.source)
                    if any(f.name == member.name for f in fields):
                        raise IRResolutionError(member.name, "字段重复定义", member.line, raw.source)
                    fields.append(FieldDecl(
                        member.name, self._resolve_type(member.type, member.line, raw.source),
                        "static" in member.modifiers, raw.name))
                else:
                    methods.append(self._declare_method(raw, member))
            seen = set()
            for method in methods:
                if method.signature.subsignature in seen:
                    raise IRResolutionError(method.name, "方法重复定义", None, raw.source)
                seen.add(method.signature.subsignature)
            self._classes[raw.name] = ClassDecl(
                raw.name, raw.superclass, tuple(raw.interfaces), raw.is_interface, raw.is_abstract,
                tuple(fields), tuple(methods), raw.is_builtin)

    def _declare_method(self, raw_class: RawClass, raw: RawMethod) -> MethodDecl:
        is_abstract = raw_class.is_interface or "abstract" in raw.modifiers
        if raw_class.is_interface and raw.has_body:
            raise IRResolutionError(raw.name, "接口方法不能有方法体", raw.line, raw_class.source)
        if is_abstract == raw.has_body:
            message = "抽象方法不能有方法体" if is_abstract else "缺少方法体"
            raise IRResolutionError(raw.name, message, raw.line, raw_class.source)
        if is_abstract and not raw_class.is_abstract:
            raise IRResolutionError(raw.name, "非抽象类不能声明抽象方法", raw.line, raw_class.source)
        params = tuple(self._resolve_type(p.type, p.line, raw_class.source) for p in raw.params)
        signature = MethodSignature(
            declaring_class=raw_class.name, name=raw.name, param_types=params,
            return_type=self._resolve_type(raw.return_type, raw.line, raw_class.source, allow_void=True),
            is_static="static" in raw.modifiers, is_abstract=is_abstract)
        return MethodDecl(signature)

    # ------------------------------------------------------------ 方法体

    def _build_body(self, raw_class: RawClass, raw: RawMethod, signature: MethodSignature) -> MethodBody:
        scope = _MethodScope(raw_class, raw, signature)
        source = raw_class.source
        params: List[Var] = []
        for p, p_type in zip(raw.params, signature.param_types):
            params.append(self._declare_var(scope, p.name, p_type, p.line))
        this_var = None
        if not signature.is_static:
            this_var = self._declare_var(scope, "this", ClassType(raw_class.name), raw.line)
        for decl in raw.decls:
            self._declare_var(scope, decl.name, self._resolve_type(decl.type, decl.line, source), decl.line)

        for index, raw_stmt in enumerate(raw.stmts):
            if raw_stmt.label is not None:
                if raw_stmt.label in scope.labels:
                    raise IRResolutionError(raw_stmt.label, "标签重复", raw_stmt.line, source)
                scope.labels[raw_stmt.label] = index
        if raw.end_label is not None and raw.end_label in scope.labels:
            raise IRResolutionError(raw.end_label, "标签重复", raw.line, source)

        stmts: List[Stmt] = []
        lines: Dict[int, int] = {}
        for index, raw_stmt in enumerate(raw.stmts):
            builder = getattr(self, "_stmt_" + raw_stmt.kind)
            stmts.append(builder(scope, index, raw_stmt))
            lines[index] = raw_stmt.line

        table = tuple(self._build_catch(scope, entry, stmts) for entry in raw.catches)
        return MethodBody(signature, tuple(params), this_var, tuple(scope.variables.values()),
                          tuple(stmts), table, lines)

    def _declare_var(self, scope: _MethodScope, name: str, var_type: SemType, line: int) -> Var:
        if name in scope.variables:
            raise IRResolutionError(name, "变量重复声明", line, scope.raw_class.source)
        var = Var(name, var_type, scope.signature)
        scope.variables[name] = var
        return var

    def _var(self, scope: _MethodScope, name: str, raw: RawStmt) -> Var:
        var = scope.variables.get(name)
        if var is None:
            raise IRResolutionError(name, "未声明的变量", raw.line, scope.raw_class.source)
        return var

    def _label(self, scope: _MethodScope, name: str, line: int, allow_end: bool = False) -> int:
        if name == scope.raw.end_label:
            if not allow_end:
                raise IRResolutionError(name, "方法末尾标签只能作为 try 区间终点", line, scope.raw_class.source)
            return len(scope.raw.stmts)
        index = scope.labels.get(name)
        if index is None:
            raise IRResolutionError(name, "未定义的标签", line, scope.raw_class.source)
        return index

    def _build_catch(self, scope: _MethodScope, raw: RawCatch, stmts: List[Stmt]) -> ExceptionEntry:
        source = scope.raw_class.source
        catch_type = self._resolve_type(raw.type, raw.line, source)
        if not isinstance(catch_type, ClassType) or not self._hierarchy.is_subtype(catch_type, THROWABLE):
            raise IRResolutionError(raw.type, "捕获类型必须是 Throwable 的子类", raw.line, source)
        start = self._label(scope, raw.start, raw.line)
        end = self._label(scope, raw.end, raw.line, allow_end=True)
        handler = self._label(scope, raw.handler, raw.line)
        if start >= end:
            raise IRResolutionError(raw.end, "try 区间为空", raw.line, source)
        if not isinstance(stmts[handler], Catch):
            raise IRResolutionError(raw.handler, "处理入口必须是 @catch 语句", raw.line, source)
        return ExceptionEntry(start, end, handler, catch_type)

    def _stmt_new(self, scope, index, raw):
        lhs = self._var(scope, raw.parts["lhs"], raw)
        new_type = self._resolve_type(raw.parts["type"], raw.line, scope.raw_class.source)
        if isinstance(new_type, ClassType):
            decl = self._classes[new_type.name]
            if decl.is_abstract:
                raise IRResolutionError(new_type.name, "不能实例化抽象类或接口", raw.line,
                                        scope.raw_class.source)
        elif not isinstance(new_type, ArrayType):
            raise IRResolutionError(raw.parts["type"], "只能创建对象或数组", raw.line, scope.raw_class.source)
        return New(index, lhs, new_type, f"{scope.signature}/{index}")

    def _stmt_catch(self, scope, index, raw):
        return Catch(index, self._var(scope, raw.parts["lhs"], raw))

    def _stmt_literal(self, scope, index, raw):
        return AssignLiteral(index, self._var(scope, raw.parts["lhs"], raw), raw.parts["literal"])

    def _stmt_cast(self, scope, index, raw):
        cast_type = self._resolve_type(raw.parts["type"], raw.line, scope.raw_class.source)
        return Cast(index, self._var(scope, raw.parts["lhs"], raw), cast_type,
                    self._var(scope, raw.parts["rhs"], raw))

    def _stmt_unary(self, scope, index, raw):
        return Unary(index, self._var(scope, raw.parts["lhs"], raw), _UNARY_OPS[raw.parts["op"]],
                     self._var(scope, raw.parts["rhs"], raw))

    def _stmt_binary(self, scope, index, raw):
        return Binary(index, self._var(scope, raw.parts["lhs"], raw), _BINARY_OPS[raw.parts["op"]],
                      self._var(scope, raw.parts["op1"], raw), self._var(scope, raw.parts["op2"], raw))

    def _stmt_copy(self, scope, index, raw):
        return Copy(index, self._var(scope, raw.parts["lhs"], raw), self._var(scope, raw.parts["rhs"], raw))

    def _stmt_load_array(self, scope, index, raw):
        return LoadArray(index, self._var(scope, raw.parts["lhs"], raw), self._var(scope, raw.parts["base"], raw))

    def _stmt_store_array(self, scope, index, raw):
        return StoreArray(index, self._var(scope, raw.parts["base"], raw), self._var(scope, raw.parts["rhs"], raw))

    def _field_target(self, scope: _MethodScope, owner: str, field_name: str,
                      raw: RawStmt) -> Tuple[Optional[Var], FieldRef]:
        """解析 owner.f：owner 优先视为变量，其次视为类名（静态字段）"""
        source = scope.raw_class.source
        base = scope.variables.get(owner)
        if base is not None:
            if not isinstance(base.type, ClassType):
                raise IRResolutionError(owner, f"类型 {base.type} 没有字段", raw.line, source)
            found = self._hierarchy.find_field(base.type.name, field_name)
            if found is None or found.is_static:
                raise IRResolutionError(field_name, f"{base.type} 中没有实例字段", raw.line, source)
        elif owner in self._classes:
            found = self._hierarchy.find_field(owner, field_name)
            if found is None or not found.is_static:
                raise IRResolutionError(field_name, f"{owner} 中没有静态字段", raw.line, source)
        else:
            raise IRResolutionError(owner, "既不是变量也不是类", raw.line, source)
        return base, FieldRef(found.declaring_class, found.name, found.type, found.is_static)

    def _stmt_load_field(self, scope, index, raw):
        lhs = self._var(scope, raw.parts["lhs"], raw)
        base, ref = self._field_target(scope, raw.parts["base"], raw.parts["field"], raw)
        return LoadField(index, lhs, base, ref)

    def _stmt_store_field(self, scope, index, raw):
        base, ref = self._field_target(scope, raw.parts["base"], raw.parts["field"], raw)
        return StoreField(index, base, ref, self._var(scope, raw.parts["rhs"], raw))

    def _stmt_invoke(self, scope, index, raw):
        source = scope.raw_class.source
        kind = _INVOKE_KINDS[raw.parts["kind"]]
        args = tuple(self._var(scope, name, raw) for name in raw.parts["args"] or [])
        arg_types = [a.type for a in args]
        name = raw.parts["method"]
        base = None
        if kind is InvokeKind.STATIC:
            owner = raw.parts["owner"]
            if owner not in self._classes:
                raise IRResolutionError(owner, "未知类", raw.line, source)
            target = self._hierarchy.lookup_method(owner, name, arg_types)
            if target is None or not target.is_static:
                raise IRResolutionError(name, f"{owner} 中没有匹配的静态方法", raw.line, source)
        else:
            base = self._var(scope, raw.parts["base"], raw)
            if isinstance(base.type, ClassType):
                owner = base.type.name
            elif isinstance(base.type, ArrayType):
                owner = OBJECT.name
            else:
                raise IRResolutionError(base.name, f"类型 {base.type} 不能作为接收者", raw.line, source)
            target = self._hierarchy.lookup_method(owner, name, arg_types)
            if target is None or target.is_static:
                raise IRResolutionError(name, f"{owner} 中没有匹配的实例方法", raw.line, source)
        result = None
        if raw.parts["result"] is not None:
            result = self._var(scope, raw.parts["result"], raw)
            if isinstance(target.signature.return_type, VoidType):
                raise IRResolutionError(name, "void 方法没有返回值", raw.line, source)
        return Invoke(index, kind, result, base, MethodRef.of(target.signature), args)

    def _stmt_return(self, scope, index, raw):
        value = raw.parts["value"]
        returns_void = isinstance(scope.signature.return_type, VoidType)
        if (value is None) != returns_void:
            raise IRResolutionError(scope.signature.name, "return 与返回类型不符", raw.line,
                                    scope.raw_class.source)
        return Return(index, None if value is None else self._var(scope, value, raw))

    def _stmt_if(self, scope, index, raw):
        return If(index, _CONDITION_OPS[raw.parts["op"]], self._var(scope, raw.parts["op1"], raw),
                  self._var(scope, raw.parts["op2"], raw), self._label(scope, raw.parts["target"], raw.line))

    def _stmt_goto(self, scope, index, raw):
        return Goto(index, self._label(scope, raw.parts["target"], raw.line))

    def _stmt_switch(self, scope, index, raw):
        cases = []
        seen = set()
        for case in raw.parts["cases"] or []:
            if case.value in seen:
                raise IRResolutionError(str(case.value), "case 值重复", raw.line, scope.raw_class.source)
            seen.add(case.value)
            cases.append((case.value, self._label(scope, case.target, raw.line)))
        return Switch(index, self._var(scope, raw.parts["key"], raw), tuple(cases),
                      self._label(scope, raw.parts["default"], raw.line))

    def _stmt_throw(self, scope, index, raw):
        var = self._var(scope, raw.parts["var"], raw)
        if not self._hierarchy.is_subtype(var.type, THROWABLE):
            raise IRResolutionError(var.name, "只能抛出 Throwable 对象", raw.line, scope.raw_class.source)
        return Throw(index, var)

    def _stmt_nop(self, scope, index, raw):
        return Nop(index)


class IRParser:
    """IR 解析入口，默认连同内置类一起解析"""

    def __init__(self, include_prelude: bool = True):
        self.include_prelude = include_prelude

    def _prelude(self) -> List[RawClass]:
        if not self.include_prelude:
            return []
        classes = parse_raw(PRELUDE_PATH.read_text(encoding="utf-8"), "<prelude>")
        for raw in classes:
            raw.is_builtin = True
        return classes

    def parse(self, text: str, source: str = "<input>") -> Program:
        """
        解析一段 IR 文本

        Args:
            text: IR 源文本
            source: 出错时报告的来源名

        Returns:
            Program: 解析并完成名字解析的程序

        Raises:
            IRSyntaxError: 语法错误
            IRResolutionError: 名字无法解析
            InheritanceCycleError: 继承成环
        """
        return self.parse_sources([(source, text)])

    def parse_sources(self, sources: Iterable[Tuple[str, str]]) -> Program:
        raw_classes = self._prelude()
        for source, text in sources:
            raw_classes.extend(parse_raw(text, source))
        try:
            return ProgramBuilder(raw_classes).build()
        except ValueError as e:
            raise IRError(str(e)) from e

    def parse_files(self, paths: Iterable[Path]) -> Program:
        sources = []
        for path in paths:
            path = Path(path)
            if not path.exists():
                raise FileNotFoundError(f"程序文件不存在: {path}")
            sources.append((str(path), path.read_text(encoding="utf-8")))
        return self.parse_sources(sources)


def parse_program(text: str, source: str = "<input>") -> Program:
    return IRParser().parse(text, source)
