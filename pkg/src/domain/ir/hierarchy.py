"""
类层次
子类型判断、虚调用分派、方法与字段解析；所有类相关查询的唯一入口
"""
from typing import TYPE_CHECKING, Dict, Iterable, Iterator, List, Optional, Sequence, Set

from ..errors import DispatchError, FieldResolutionError, HierarchyError
from .refs import FieldRef, MethodRef, MethodSignature
from .types import ArrayType, ClassType, NullType, OBJECT, SemType

if TYPE_CHECKING:
    from .program import ClassDecl, FieldDecl, MethodDecl


class Hierarchy:
    """基于类声明表的层次查询，构造后只读"""

    def __init__(self, classes: Dict[str, "ClassDecl"]):
        self._classes = classes
        self._direct_subtypes: Dict[str, List[str]] = {name: [] for name in classes}
        for decl in classes.values():
            parents = list(decl.interfaces)
            if decl.superclass is not None:
                parents.insert(0, decl.superclass)
            for parent in parents:
                self._direct_subtypes.setdefault(parent, []).append(decl.name)
        self._supertype_cache: Dict[str, frozenset] = {}

    # ------------------------------------------------------------ 类查询

    def get_class(self, name: str) -> "ClassDecl":
        decl = self._classes.get(name)
        if decl is None:
            raise HierarchyError(f"未知类: {name}")
        return decl

    def has_class(self, name: str) -> bool:
        return name in self._classes

    def all_classes(self) -> List["ClassDecl"]:
        return list(self._classes.values())

    def is_concrete(self, name: str) -> bool:
        decl = self.get_class(name)
        return not (decl.is_interface or decl.is_abstract)

    def superclass_chain(self, name: str) -> Iterator["ClassDecl"]:
        """从 name 自身开始沿父类链向上"""
        current: Optional[str] = name
        while current is not None:
            decl = self.get_class(current)
            yield decl
            current = decl.superclass

    def supertypes(self, name: str) -> frozenset:
        """name 的全部超类型名（含自身与 Object）"""
        cached = self._supertype_cache.get(name)
        if cached is not None:
            return cached
        result: Set[str] = set()
        pending = [name]
        while pending:
            current = pending.pop()
            if current in result:
                continue
            result.add(current)
            decl = self.get_class(current)
            if decl.superclass is not None:
                pending.append(decl.superclass)
            pending.extend(decl.interfaces)
        result.add(OBJECT.name)
        frozen = frozenset(result)
        self._supertype_cache[name] = frozen
        return frozen

    def direct_subtypes_of(self, name: str) -> List["ClassDecl"]:
        return [self._classes[n] for n in self._direct_subtypes.get(name, [])]

    def direct_subclasses_of(self, name: str) -> List["ClassDecl"]:
        """直接子类（不含实现该接口的类）"""
        return [d for d in self.direct_subtypes_of(name) if d.superclass == name]

    def subtypes_of(self, name: str) -> List["ClassDecl"]:
        """传递意义下的全部子类型（不含自身），按发现顺序"""
        seen: Set[str] = set()
        ordered: List["ClassDecl"] = []
        pending = list(self._direct_subtypes.get(name, []))
        while pending:
            current = pending.pop(0)
            if current in seen:
                continue
            seen.add(current)
            ordered.append(self._classes[current])
            pending.extend(self._direct_subtypes.get(current, []))
        return ordered

    # ------------------------------------------------------------ 子类型

    def is_subtype(self, sub: SemType, sup: SemType) -> bool:
        """
        判断 sub 是否为 sup 的子类型

        Args:
            sub: 子类型候选
            sup: 超类型候选

        Returns:
            bool: 基本类型仅与自身相容；null 相容于任意引用类型；
                  数组对引用元素协变，且所有数组相容于 Object
        """
        if sub == sup:
            return True
        if isinstance(sub, NullType):
            return sup.is_reference
        if isinstance(sub, ArrayType):
            if sup == OBJECT:
                return True
            if isinstance(sup, ArrayType):
                if sub.element.is_reference and sup.element.is_reference:
                    return self.is_subtype(sub.element, sup.element)
                return sub.element == sup.element
            return False
        if isinstance(sub, ClassType) and isinstance(sup, ClassType):
            if not self.has_class(sub.name):
                return sup == OBJECT
            return sup.name in self.supertypes(sub.name)
        return False

    # ------------------------------------------------------------ 方法

    def get_method(self, signature: MethodSignature) -> "MethodDecl":
        decl = self.get_class(signature.declaring_class)
        method = decl.get_method(signature.subsignature)
        if method is None:
            raise HierarchyError(f"未知方法: {signature}")
        return method

    def lookup_method(self, class_name: str, name: str,
                      arg_types: Sequence[SemType]) -> Optional["MethodDecl"]:
        """
        按名字和实参类型查找可见方法：先沿父类链，再查接口，取最近的匹配

        Args:
            class_name: 查找起点
            name: 方法名
            arg_types: 实参的声明类型

        Returns:
            Optional[MethodDecl]: 找到的方法声明，未找到返回 None
        """
        for decl in self._lookup_order(class_name):
            for method in decl.methods_named(name):
                params = method.signature.param_types
                if len(params) == len(arg_types) and all(
                        self.is_subtype(a, p) for a, p in zip(arg_types, params)):
                    return method
        return None

    def _lookup_order(self, class_name: str) -> Iterable["ClassDecl"]:
        seen: Set[str] = set()
        chain = list(self.superclass_chain(class_name))
        for decl in chain:
            seen.add(decl.name)
            yield decl
        pending: List[str] = [i for decl in chain for i in decl.interfaces]
        while pending:
            current = pending.pop(0)
            if current in seen:
                continue
            seen.add(current)
            decl = self.get_class(current)
            yield decl
            pending.extend(decl.interfaces)
        if OBJECT.name not in seen and self.has_class(OBJECT.name):
            yield self.get_class(OBJECT.name)

    def dispatch(self, receiver: SemType, ref: MethodRef) -> "MethodDecl":
        """
        虚调用分派：沿接收者类型的父类链寻找第一个同名同描述符的非抽象方法

        Args:
            receiver: 接收者对象的动态类型（数组按 Object 处理）
            ref: 调用点上的方法引用

        Returns:
            MethodDecl: 被调用的方法

        Raises:
            DispatchError: 父类链上没有可调用的实现
        """
        class_name = receiver.name if isinstance(receiver, ClassType) else OBJECT.name
        if not isinstance(receiver, (ClassType, ArrayType)):
            raise DispatchError(receiver, ref)
        for decl in self.superclass_chain(class_name):
            method = decl.get_method(ref.subsignature)
            if method is not None and not method.is_abstract:
                return method
        raise DispatchError(receiver, ref)

    def resolve_method(self, ref: MethodRef) -> "MethodDecl":
        """静态调用与 invokespecial 的直接解析：从引用的声明类开始查找实现"""
        for decl in self.superclass_chain(ref.declaring_class):
            method = decl.get_method(ref.subsignature)
            if method is not None and not method.is_abstract:
                return method
        raise DispatchError(ClassType(ref.declaring_class), ref)

    # ------------------------------------------------------------ 字段

    def find_field(self, class_name: str, field_name: str) -> Optional["FieldDecl"]:
        for decl in self.superclass_chain(class_name):
            found = decl.get_field(field_name)
            if found is not None:
                return found
        return None

    def resolve_field(self, ref: FieldRef) -> "FieldDecl":
        if not self.has_class(ref.declaring_class):
            raise FieldResolutionError(ref)
        found = self.find_field(ref.declaring_class, ref.name)
        if found is None or found.is_static != ref.is_static:
            raise FieldResolutionError(ref)
        return found

    def __repr__(self) -> str:
        return f"Hierarchy({len(self._classes)} classes)"
