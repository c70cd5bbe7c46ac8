"""
语义类型
IR 中所有值的静态类型：基本类型、类类型、数组类型、null 类型与 void
"""
from dataclasses import dataclass
from enum import Enum


class SemType:
    """语义类型基类"""

    @property
    def is_reference(self) -> bool:
        return False

    @property
    def is_primitive(self) -> bool:
        return False


class PrimitiveKind(Enum):
    INT = "int"
    BOOLEAN = "boolean"


@dataclass(frozen=True)
class PrimitiveType(SemType):
    kind: PrimitiveKind

    @property
    def is_primitive(self) -> bool:
        return True

    def __str__(self) -> str:
        return self.kind.value


@dataclass(frozen=True)
class ClassType(SemType):
    """类或接口类型，以类名标识"""
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("类名不能为空")

    @property
    def is_reference(self) -> bool:
        return True

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class ArrayType(SemType):
    element: SemType

    def __post_init__(self):
        if isinstance(self.element, (VoidType, NullType)):
            raise ValueError(f"非法的数组元素类型: {self.element}")

    @property
    def is_reference(self) -> bool:
        return True

    def __str__(self) -> str:
        return f"{self.element}[]"


@dataclass(frozen=True)
class NullType(SemType):
    """null 字面量的类型，是所有引用类型的子类型"""

    @property
    def is_reference(self) -> bool:
        return True

    def __str__(self) -> str:
        return "null"


@dataclass(frozen=True)
class VoidType(SemType):
    def __str__(self) -> str:
        return "void"


INT = PrimitiveType(PrimitiveKind.INT)
BOOLEAN = PrimitiveType(PrimitiveKind.BOOLEAN)
NULL = NullType()
VOID = VoidType()

OBJECT = ClassType("Object")
STRING = ClassType("String")
THROWABLE = ClassType("Throwable")
ARITHMETIC_EXCEPTION = ClassType("ArithmeticException")
INDEX_OUT_OF_BOUNDS_EXCEPTION = ClassType("IndexOutOfBoundsException")
CLASS_CAST_EXCEPTION = ClassType("ClassCastException")
NULL_POINTER_EXCEPTION = ClassType("NullPointerException")


def parse_type_name(text: str) -> SemType:
    """
    将类型文本（如 ``int``、``A[]``）转换为语义类型

    类名是否存在由调用方校验。
    """
    text = text.strip()
    if text.endswith("[]"):
        return ArrayType(parse_type_name(text[:-2]))
    if text == "int":
        return INT
    if text == "boolean":
        return BOOLEAN
    if text == "void":
        return VOID
    return ClassType(text)


def base_class_name(t: SemType):
    """返回数组最内层或自身的类名，基本类型返回 None"""
    while isinstance(t, ArrayType):
        t = t.element
    return t.name if isinstance(t, ClassType) else None
