"""
堆模型
抽象堆对象分四类：分配点对象、常量对象、合并对象与模拟对象
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

from ..ir.refs import LiteralValue, MethodSignature
from ..ir.stmts import New, Stmt
from ..ir.types import ClassType, SemType, STRING


class Obj:
    """抽象堆对象基类"""

    type: SemType

    @property
    def allocating_class(self) -> Optional[str]:
        """分配该对象的方法所在类，用于类型敏感"""
        return None


@dataclass(frozen=True)
class NewObj(Obj):
    """分配点对象，每个 new 语句一个"""
    alloc: New
    container: MethodSignature

    @property
    def type(self) -> SemType:
        return self.alloc.type

    @property
    def allocating_class(self) -> Optional[str]:
        return self.container.declaring_class

    def __str__(self) -> str:
        return f"NewObj{{{self.container}[{self.alloc.index}]: new {self.alloc.type}}}"


@dataclass(frozen=True)
class ConstantObj(Obj):
    """常量对象（字符串字面量），按 (类型, 值) 驻留"""
    type: SemType
    value: LiteralValue

    def __str__(self) -> str:
        return f"ConstantObj{{{self.type}: {self.value!r}}}"


@dataclass(frozen=True)
class MergedObj(Obj):
    """同类型对象合并后的代表，members 记录其来源"""
    type: SemType
    members: Set[Obj] = field(default_factory=set, compare=False, hash=False)

    def __str__(self) -> str:
        return f"MergedObj{{{self.type}}}"


@dataclass(frozen=True)
class MockObj(Obj):
    """由分析合成的模拟对象，如污点对象"""
    descriptor: str
    source: Optional[Stmt]
    type: SemType

    def __post_init__(self):
        if not self.descriptor:
            raise ValueError("MockObj 的描述符不能为空")

    def __str__(self) -> str:
        where = "" if self.source is None else f"@{self.source.index}"
        return f"MockObj{{{self.descriptor}{where}: {self.type}}}"


class HeapModel:
    """
    堆管理器

    NewObj 按分配点唯一，ConstantObj 按 (类型, 值) 驻留，MockObj 按 (描述符, 来源) 唯一；
    merge_types 中列出的类型的分配点与常量对象统一映射为该类型的 MergedObj。
    """

    def __init__(self, merge_types: Iterable[str] = ()):
        self.merge_types = frozenset(merge_types)
        self._new_objs: Dict[New, Obj] = {}
        self._constants: Dict[Tuple[SemType, LiteralValue], Obj] = {}
        self._merged: Dict[SemType, MergedObj] = {}
        self._mocks: Dict[Tuple[str, Optional[Stmt]], MockObj] = {}
        self._all: List[Obj] = []

    def _should_merge(self, obj_type: SemType) -> bool:
        return isinstance(obj_type, ClassType) and obj_type.name in self.merge_types

    def _remember(self, obj: Obj) -> Obj:
        self._all.append(obj)
        return obj

    def get_obj(self, alloc: New, container: MethodSignature) -> Obj:
        obj = self._new_objs.get(alloc)
        if obj is None:
            created = NewObj(alloc, container)
            if self._should_merge(alloc.type):
                obj = self.get_merged_obj(alloc.type, [created])
            else:
                obj = self._remember(created)
            self._new_objs[alloc] = obj
        return obj

    def get_constant_obj(self, value: LiteralValue, obj_type: SemType = STRING) -> Obj:
        key = (obj_type, value)
        obj = self._constants.get(key)
        if obj is None:
            created = ConstantObj(obj_type, value)
            if self._should_merge(obj_type):
                obj = self.get_merged_obj(obj_type, [created])
            else:
                obj = self._remember(created)
            self._constants[key] = obj
        return obj

    def get_merged_obj(self, obj_type: SemType, members: Iterable[Obj] = ()) -> MergedObj:
        merged = self._merged.get(obj_type)
        if merged is None:
            merged = MergedObj(obj_type)
            self._merged[obj_type] = merged
            self._remember(merged)
        merged.members.update(members)
        return merged

    def get_mock_obj(self, descriptor: str, source: Optional[Stmt], obj_type: SemType) -> MockObj:
        key = (descriptor, source)
        obj = self._mocks.get(key)
        if obj is None:
            obj = MockObj(descriptor, source, obj_type)
            self._mocks[key] = obj
            self._remember(obj)
        return obj

    def objects(self) -> List[Obj]:
        return list(self._all)
