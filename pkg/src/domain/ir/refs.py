"""
IR 基本元素
变量、字面量、字段引用、方法引用与方法签名
"""
from dataclasses import dataclass
from typing import Tuple, Union

from .types import BOOLEAN, INT, NULL, STRING, SemType


@dataclass(frozen=True)
class MethodSignature:
    """方法签名：声明类 + 名字 + 参数类型 + 返回类型 + 修饰符"""
    declaring_class: str
    name: str
    param_types: Tuple[SemType, ...]
    return_type: SemType
    is_static: bool = False
    is_abstract: bool = False

    @property
    def subsignature(self) -> Tuple[str, Tuple[SemType, ...]]:
        """用于分派匹配的子签名（名字与参数描述符）"""
        return self.name, self.param_types

    @property
    def arity(self) -> int:
        return len(self.param_types)

    def __str__(self) -> str:
        params = ",".join(str(t) for t in self.param_types)
        return f"{self.declaring_class}.{self.name}({params})"


@dataclass(frozen=True)
class Var:
    """方法内的局部变量，名字在方法内唯一"""
    name: str
    type: SemType
    method: MethodSignature

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Var({self.method}/{self.name}:{self.type})"


LiteralValue = Union[int, bool, str, None]


@dataclass(frozen=True)
class Literal:
    """int / boolean / String / null 字面量"""
    value: LiteralValue
    type: SemType

    @staticmethod
    def of(value: LiteralValue) -> "Literal":
        if value is None:
            return Literal(None, NULL)
        if isinstance(value, bool):
            return Literal(value, BOOLEAN)
        if isinstance(value, int):
            return Literal(value, INT)
        return Literal(value, STRING)

    def __str__(self) -> str:
        if self.value is None:
            return "null"
        if isinstance(self.value, bool):
            return "true" if self.value else "false"
        if isinstance(self.value, int):
            return str(self.value)
        escaped = (self.value.replace("\\", "\\\\").replace('"', '\\"')
                   .replace("\n", "\\n").replace("\t", "\\t"))
        return f'"{escaped}"'


@dataclass(frozen=True)
class FieldRef:
    """已解析的字段引用，declaring_class 为字段实际声明所在的类"""
    declaring_class: str
    name: str
    type: SemType
    is_static: bool = False

    def __str__(self) -> str:
        return f"{self.declaring_class}.{self.name}"


@dataclass(frozen=True)
class MethodRef:
    """调用点上的方法引用，declaring_class 为查找起点所解析到的声明类"""
    declaring_class: str
    name: str
    param_types: Tuple[SemType, ...]
    return_type: SemType

    @property
    def subsignature(self) -> Tuple[str, Tuple[SemType, ...]]:
        return self.name, self.param_types

    @staticmethod
    def of(signature: MethodSignature) -> "MethodRef":
        return MethodRef(signature.declaring_class, signature.name,
                         signature.param_types, signature.return_type)

    def __str__(self) -> str:
        params = ",".join(str(t) for t in self.param_types)
        return f"{self.declaring_class}.{self.name}({params})"


