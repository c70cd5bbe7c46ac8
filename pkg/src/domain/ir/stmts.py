"""
三地址语句
每种语句只暴露自己的操作数；语句以对象身份比较，index 为其在方法体中的位置
"""
from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional, Tuple

from .refs import FieldRef, Literal, MethodRef, Var
from .types import SemType


class BinaryOp(Enum):
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"
    REM = "%"
    AND = "&"
    OR = "|"
    XOR = "^"
    SHL = "<<"
    SHR = ">>"
    EQ = "=="
    NE = "!="
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="

    @property
    def is_comparison(self) -> bool:
        return self in _COMPARISONS


_COMPARISONS = frozenset({BinaryOp.EQ, BinaryOp.NE, BinaryOp.LT,
                          BinaryOp.LE, BinaryOp.GT, BinaryOp.GE})


class ConditionOp(Enum):
    EQ = "=="
    NE = "!="
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="


class UnaryOp(Enum):
    NEG = "-"
    NOT = "!"


class InvokeKind(Enum):
    STATIC = "invokestatic"
    VIRTUAL = "invokevirtual"
    SPECIAL = "invokespecial"


class StmtVisitor:
    """语句访问者，未覆盖的 visit_xxx 落到 visit_default"""

    def visit_default(self, stmt: "Stmt") -> Any:
        return None


@dataclass(frozen=True, eq=False)
class Stmt:
    index: int

    @property
    def def_var(self) -> Optional[Var]:
        return None

    @property
    def uses(self) -> Tuple[Var, ...]:
        return ()

    @property
    def can_fall_through(self) -> bool:
        return True

    def accept(self, visitor: StmtVisitor) -> Any:
        method = getattr(visitor, "visit_" + _VISIT_NAMES[type(self)], None)
        if method is None:
            return visitor.visit_default(self)
        return method(self)

    def __repr__(self) -> str:
        return f"{self.index}: {self}"


@dataclass(frozen=True, eq=False)
class New(Stmt):
    lhs: Var
    type: SemType
    alloc_id: str

    @property
    def def_var(self):
        return self.lhs

    def __str__(self):
        return f"{self.lhs} = new {self.type};"


@dataclass(frozen=True, eq=False)
class AssignLiteral(Stmt):
    lhs: Var
    literal: Literal

    @property
    def def_var(self):
        return self.lhs

    def __str__(self):
        return f"{self.lhs} = {self.literal};"


@dataclass(frozen=True, eq=False)
class Copy(Stmt):
    lhs: Var
    rhs: Var

    @property
    def def_var(self):
        return self.lhs

    @property
    def uses(self):
        return (self.rhs,)

    def __str__(self):
        return f"{self.lhs} = {self.rhs};"


@dataclass(frozen=True, eq=False)
class LoadField(Stmt):
    """x = y.f，静态字段时 base 为 None"""
    lhs: Var
    base: Optional[Var]
    field: FieldRef

    @property
    def is_static(self) -> bool:
        return self.base is None

    @property
    def def_var(self):
        return self.lhs

    @property
    def uses(self):
        return () if self.base is None else (self.base,)

    def __str__(self):
        owner = self.field.declaring_class if self.base is None else self.base.name
        return f"{self.lhs} = {owner}.{self.field.name};"


@dataclass(frozen=True, eq=False)
class StoreField(Stmt):
    """y.f = x，静态字段时 base 为 None"""
    base: Optional[Var]
    field: FieldRef
    rhs: Var

    @property
    def is_static(self) -> bool:
        return self.base is None

    @property
    def uses(self):
        return (self.rhs,) if self.base is None else (self.base, self.rhs)

    def __str__(self):
        owner = self.field.declaring_class if self.base is None else self.base.name
        return f"{owner}.{self.field.name} = {self.rhs};"


@dataclass(frozen=True, eq=False)
class LoadArray(Stmt):
    """x = a[*]，数组下标不区分"""
    lhs: Var
    base: Var

    @property
    def def_var(self):
        return self.lhs

    @property
    def uses(self):
        return (self.base,)

    def __str__(self):
        return f"{self.lhs} = {self.base}[*];"


@dataclass(frozen=True, eq=False)
class StoreArray(Stmt):
    base: Var
    rhs: Var

    @property
    def uses(self):
        return (self.base, self.rhs)

    def __str__(self):
        return f"{self.base}[*] = {self.rhs};"


@dataclass(frozen=True, eq=False)
class Binary(Stmt):
    lhs: Var
    op: BinaryOp
    op1: Var
    op2: Var

    @property
    def def_var(self):
        return self.lhs

    @property
    def uses(self):
        return (self.op1, self.op2)

    def __str__(self):
        return f"{self.lhs} = {self.op1} {self.op.value} {self.op2};"


@dataclass(frozen=True, eq=False)
class Unary(Stmt):
    lhs: Var
    op: UnaryOp
    operand: Var

    @property
    def def_var(self):
        return self.lhs

    @property
    def uses(self):
        return (self.operand,)

    def __str__(self):
        return f"{self.lhs} = {self.op.value}{self.operand};"


@dataclass(frozen=True, eq=False)
class Cast(Stmt):
    lhs: Var
    cast_type: SemType
    rhs: Var

    @property
    def def_var(self):
        return self.lhs

    @property
    def uses(self):
        return (self.rhs,)

    def __str__(self):
        return f"{self.lhs} = ({self.cast_type}) {self.rhs};"


@dataclass(frozen=True, eq=False)
class Invoke(Stmt):
    """方法调用；静态调用 base 为 None，无返回值接收时 result 为 None"""
    kind: InvokeKind
    result: Optional[Var]
    base: Optional[Var]
    method_ref: MethodRef
    args: Tuple[Var, ...]

    @property
    def is_static(self) -> bool:
        return self.kind is InvokeKind.STATIC

    @property
    def def_var(self):
        return self.result

    @property
    def uses(self):
        receiver = () if self.base is None else (self.base,)
        return receiver + tuple(self.args)

    def __str__(self):
        owner = self.method_ref.declaring_class if self.base is None else self.base.name
        call = f"{self.kind.value} {owner}.{self.method_ref.name}({', '.join(a.name for a in self.args)});"
        return call if self.result is None else f"{self.result} = {call}"


@dataclass(frozen=True, eq=False)
class Return(Stmt):
    value: Optional[Var]

    @property
    def uses(self):
        return () if self.value is None else (self.value,)

    @property
    def can_fall_through(self):
        return False

    def __str__(self):
        return "return;" if self.value is None else f"return {self.value};"


@dataclass(frozen=True, eq=False)
class If(Stmt):
    op: ConditionOp
    op1: Var
    op2: Var
    target: int

    @property
    def uses(self):
        return (self.op1, self.op2)

    def __str__(self):
        return f"if {self.op1} {self.op.value} {self.op2} goto L{self.target};"


@dataclass(frozen=True, eq=False)
class Goto(Stmt):
    target: int

    @property
    def can_fall_through(self):
        return False

    def __str__(self):
        return f"goto L{self.target};"


@dataclass(frozen=True, eq=False)
class Switch(Stmt):
    """cases 为 (case 值, 目标下标) 序列"""
    key: Var
    cases: Tuple[Tuple[int, int], ...]
    default_target: int

    @property
    def uses(self):
        return (self.key,)

    @property
    def can_fall_through(self):
        return False

    def __str__(self):
        cases = " ".join(f"case {v}: L{t};" for v, t in self.cases)
        body = f"{cases} default: L{self.default_target};".strip()
        return f"switch {self.key} {{ {body} }};"


@dataclass(frozen=True, eq=False)
class Throw(Stmt):
    var: Var

    @property
    def uses(self):
        return (self.var,)

    @property
    def can_fall_through(self):
        return False

    def __str__(self):
        return f"throw {self.var};"


@dataclass(frozen=True, eq=False)
class Catch(Stmt):
    """异常处理入口，lhs 接收被捕获的异常对象"""
    lhs: Var

    @property
    def def_var(self):
        return self.lhs

    def __str__(self):
        return f"{self.lhs} = @catch;"


@dataclass(frozen=True, eq=False)
class Nop(Stmt):
    def __str__(self):
        return "nop;"


_VISIT_NAMES = {
    New: "new",
    AssignLiteral: "assign_literal",
    Copy: "copy",
    LoadField: "load_field",
    StoreField: "store_field",
    LoadArray: "load_array",
    StoreArray: "store_array",
    Binary: "binary",
    Unary: "unary",
    Cast: "cast",
    Invoke: "invoke",
    Return: "return",
    If: "if",
    Goto: "goto",
    Switch: "switch",
    Throw: "throw",
    Catch: "catch",
    Nop: "nop",
}
