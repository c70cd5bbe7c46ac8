"""
常量传播
对 int / boolean 变量做正向常量传播，值格为 UNDEF ⊑ 常量 ⊑ NAC
"""
from typing import Optional, Union

from ..cfg.cfg import CFG, CFGEdge, EdgeKind
from ..ir.stmts import (AssignLiteral, Binary, BinaryOp, ConditionOp, Copy, If, Stmt, Unary,
                        UnaryOp)
from .analysis import DataflowAnalysis, Direction
from .fact import MapFact

INT_MIN = -(1 << 31)


class Value:
    """常量传播的格元素"""

    __slots__ = ("kind", "constant")

    UNDEF: "Value"
    NAC: "Value"

    def __init__(self, kind: str, constant: Union[int, bool, None] = None):
        self.kind = kind
        self.constant = constant

    @staticmethod
    def make_constant(constant: Union[int, bool]) -> "Value":
        return Value("CONST", constant)

    @property
    def is_undef(self) -> bool:
        return self.kind == "UNDEF"

    @property
    def is_nac(self) -> bool:
        return self.kind == "NAC"

    @property
    def is_constant(self) -> bool:
        return self.kind == "CONST"

    def _key(self):
        return self.kind, type(self.constant).__name__, self.constant

    def __eq__(self, other) -> bool:
        return isinstance(other, Value) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self) -> str:
        if self.is_constant:
            if isinstance(self.constant, bool):
                return "true" if self.constant else "false"
            return str(self.constant)
        return self.kind


Value.UNDEF = Value("UNDEF")
Value.NAC = Value("NAC")


def meet_value(v1: Value, v2: Value) -> Value:
    if v1.is_nac or v2.is_nac:
        return Value.NAC
    if v1.is_undef:
        return v2
    if v2.is_undef:
        return v1
    return v1 if v1 == v2 else Value.NAC


class CPFact(MapFact):
    """变量到格元素的映射，缺省为 UNDEF"""

    def __init__(self, items=None):
        super().__init__(Value.UNDEF, items)


def _wrap_int(value: int) -> int:
    """按 32 位补码截断"""
    return ((value - INT_MIN) & 0xFFFFFFFF) + INT_MIN


def _div(a: int, b: int) -> int:
    quotient = abs(a) // abs(b)
    return quotient if (a >= 0) == (b >= 0) else -quotient


def _rem(a: int, b: int) -> int:
    return a - _div(a, b) * b


def evaluate_binary(op: BinaryOp, a, b) -> Union[int, bool]:
    """按 Java 语义计算二元运算；除数为 0 由调用方处理"""
    if op is BinaryOp.EQ:
        return a == b
    if op is BinaryOp.NE:
        return a != b
    if op is BinaryOp.LT:
        return a < b
    if op is BinaryOp.LE:
        return a <= b
    if op is BinaryOp.GT:
        return a > b
    if op is BinaryOp.GE:
        return a >= b
    if isinstance(a, bool) and isinstance(b, bool) and op in (BinaryOp.AND, BinaryOp.OR, BinaryOp.XOR):
        return {BinaryOp.AND: a and b, BinaryOp.OR: a or b, BinaryOp.XOR: a != b}[op]
    a, b = int(a), int(b)
    if op is BinaryOp.ADD:
        return _wrap_int(a + b)
    if op is BinaryOp.SUB:
        return _wrap_int(a - b)
    if op is BinaryOp.MUL:
        return _wrap_int(a * b)
    if op is BinaryOp.DIV:
        return _wrap_int(_div(a, b))
    if op is BinaryOp.REM:
        return _wrap_int(_rem(a, b))
    if op is BinaryOp.AND:
        return _wrap_int(a & b)
    if op is BinaryOp.OR:
        return _wrap_int(a | b)
    if op is BinaryOp.XOR:
        return _wrap_int(a ^ b)
    if op is BinaryOp.SHL:
        return _wrap_int(a << (b & 31))
    if op is BinaryOp.SHR:
        return _wrap_int(a >> (b & 31))
    raise ValueError(f"未知运算符: {op}")


def evaluate(stmt: Stmt, in_fact: CPFact) -> Value:
    """计算语句定义变量在 out 中的值"""
    if isinstance(stmt, AssignLiteral):
        value = stmt.literal.value
        if isinstance(value, (bool, int)):
            return Value.make_constant(value)
        return Value.NAC
    if isinstance(stmt, Copy):
        return in_fact.get(stmt.rhs)
    if isinstance(stmt, Binary):
        v1, v2 = in_fact.get(stmt.op1), in_fact.get(stmt.op2)
        if stmt.op in (BinaryOp.DIV, BinaryOp.REM) and v2.is_constant and v2.constant == 0:
            return Value.UNDEF
        if v1.is_nac or v2.is_nac:
            return Value.NAC
        if v1.is_undef or v2.is_undef:
            return Value.UNDEF
        return Value.make_constant(evaluate_binary(stmt.op, v1.constant, v2.constant))
    if isinstance(stmt, Unary):
        v = in_fact.get(stmt.operand)
        if not v.is_constant:
            return v
        if stmt.op is UnaryOp.NOT:
            return Value.make_constant(not v.constant)
        return Value.make_constant(_wrap_int(-int(v.constant)))
    return Value.NAC


class ConstantPropagation(DataflowAnalysis[CPFact]):
    """
    常量传播

    edge_refine 为真时启用分支精化：在 if x == y 的真分支（或 x != y 的假分支）上，
    若一侧为常量则把另一侧也视为该常量。
    """

    ID = "constprop"
    direction = Direction.FORWARD

    def __init__(self, edge_refine: bool = False):
        self.edge_refine = edge_refine

    def new_boundary_fact(self, cfg: CFG) -> CPFact:
        fact = CPFact()
        body = cfg.body
        for param in body.params:
            fact.update(param, Value.NAC)
        if body.this_var is not None:
            fact.update(body.this_var, Value.NAC)
        return fact

    def new_initial_fact(self) -> CPFact:
        return CPFact()

    def copy_fact(self, fact: CPFact) -> CPFact:
        return fact.copy()

    def meet_into(self, fact: CPFact, target: CPFact) -> bool:
        changed = False
        for var, value in list(fact.items()):
            changed |= target.update(var, meet_value(value, target.get(var)))
        return changed

    def transfer_node(self, stmt: Stmt, in_fact: CPFact, out_fact: CPFact) -> bool:
        new_out = in_fact.copy()
        defined = stmt.def_var
        if defined is not None:
            new_out.update(defined, evaluate(stmt, in_fact))
        return out_fact.copy_from(new_out)

    @property
    def needs_edge_transfer(self) -> bool:
        return self.edge_refine

    def transfer_edge(self, edge: CFGEdge, node_fact: CPFact) -> CPFact:
        stmt = edge.source
        if not isinstance(stmt, If):
            return node_fact
        equal_edge = ((stmt.op is ConditionOp.EQ and edge.kind is EdgeKind.IF_TRUE)
                      or (stmt.op is ConditionOp.NE and edge.kind is EdgeKind.IF_FALSE))
        if not equal_edge:
            return node_fact
        v1, v2 = node_fact.get(stmt.op1), node_fact.get(stmt.op2)
        refined: Optional[CPFact] = None
        if v1.is_constant and not v2.is_constant:
            refined = node_fact.copy()
            refined.update(stmt.op2, v1)
        elif v2.is_constant and not v1.is_constant:
            refined = node_fact.copy()
            refined.update(stmt.op1, v2)
        return node_fact if refined is None else refined


def condition_value(stmt: If, fact: CPFact) -> Optional[bool]:
    """条件两侧均为常量时返回判定结果，否则 None"""
    v1, v2 = fact.get(stmt.op1), fact.get(stmt.op2)
    if not (v1.is_constant and v2.is_constant):
        return None
    return bool(evaluate_binary(BinaryOp(stmt.op.value), v1.constant, v2.constant))
