"""
上下文敏感元素
带上下文的对象、方法、调用点与指针；由 CSManager 驻留，因此可按身份比较
"""
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from ..bitset import DEFAULT_THRESHOLD, HybridBitSet, ObjectIndexer
from ..ir.program import MethodDecl
from ..ir.refs import FieldRef, Var
from ..ir.stmts import Invoke
from .context import Context
from .heap import Obj


class CSObj:
    """带堆上下文的对象"""

    __slots__ = ("context", "obj")

    def __init__(self, context: Context, obj: Obj):
        self.context = context
        self.obj = obj

    def __repr__(self) -> str:
        return f"{self.context}:{self.obj}"


class CSMethod:
    __slots__ = ("context", "method")

    def __init__(self, context: Context, method: MethodDecl):
        self.context = context
        self.method = method

    def __repr__(self) -> str:
        return f"{self.context}:{self.method.signature}"


class CSCallSite:
    __slots__ = ("context", "call_site", "container")

    def __init__(self, context: Context, call_site: Invoke, container: CSMethod):
        self.context = context
        self.call_site = call_site
        self.container = container

    def __repr__(self) -> str:
        return f"{self.context}:{self.container.method.signature}@{self.call_site.index}"


class PointsToSet:
    """
    指针的点集

    元素为 CSObj，底层是按 ObjectIndexer 编号的混合集合；同一次求解共享一个编号器。
    """

    def __init__(self, indexer: ObjectIndexer, threshold: int = DEFAULT_THRESHOLD):
        self._indexer = indexer
        self._bits = HybridBitSet(threshold)

    def add(self, cs_obj: CSObj) -> bool:
        return self._bits.set(self._indexer.get_index(cs_obj))

    def add_all_diff(self, objs: Iterable[CSObj]) -> List[CSObj]:
        """并入 objs，返回其中原本不在集合里的对象"""
        return [o for o in objs if self.add(o)]

    def contains(self, cs_obj: CSObj) -> bool:
        return cs_obj in self._indexer and self._bits.contains(self._indexer.get_index(cs_obj))

    def __contains__(self, cs_obj) -> bool:
        return self.contains(cs_obj)

    def __iter__(self) -> Iterator[CSObj]:
        for index in self._bits:
            yield self._indexer.get_object(index)

    def __len__(self) -> int:
        return self._bits.cardinality()

    def is_empty(self) -> bool:
        return self._bits.cardinality() == 0

    def objects(self) -> List[CSObj]:
        return list(self)

    @property
    def bits(self) -> HybridBitSet:
        return self._bits


class Pointer:
    """指针流图结点，每个指针持有唯一的点集"""

    def __init__(self, points_to_set: PointsToSet):
        self.points_to_set = points_to_set

    def get_points_to_set(self) -> PointsToSet:
        return self.points_to_set


class CSVar(Pointer):
    def __init__(self, pts: PointsToSet, context: Context, var: Var):
        super().__init__(pts)
        self.context = context
        self.var = var

    def __repr__(self) -> str:
        return f"{self.context}:{self.var.method}/{self.var.name}"


class InstanceField(Pointer):
    def __init__(self, pts: PointsToSet, base: CSObj, field: FieldRef):
        super().__init__(pts)
        self.base = base
        self.field = field

    def __repr__(self) -> str:
        return f"{self.base}.{self.field.name}"


class ArrayIndex(Pointer):
    def __init__(self, pts: PointsToSet, array: CSObj):
        super().__init__(pts)
        self.array = array

    def __repr__(self) -> str:
        return f"{self.array}[*]"


class StaticField(Pointer):
    def __init__(self, pts: PointsToSet, field: FieldRef):
        super().__init__(pts)
        self.field = field

    def __repr__(self) -> str:
        return str(self.field)


class CSManager:
    """上下文敏感元素的驻留表"""

    def __init__(self, threshold: int = DEFAULT_THRESHOLD):
        self.threshold = threshold
        self.indexer: ObjectIndexer[CSObj] = ObjectIndexer()
        self._objs: Dict[Tuple[Context, Obj], CSObj] = {}
        self._methods: Dict[Tuple[Context, MethodDecl], CSMethod] = {}
        self._call_sites: Dict[Tuple[Context, Invoke], CSCallSite] = {}
        self._vars: Dict[Tuple[Context, Var], CSVar] = {}
        self._instance_fields: Dict[Tuple[CSObj, FieldRef], InstanceField] = {}
        self._array_indexes: Dict[CSObj, ArrayIndex] = {}
        self._static_fields: Dict[FieldRef, StaticField] = {}

    def _new_pts(self) -> PointsToSet:
        return PointsToSet(self.indexer, self.threshold)

    def get_cs_obj(self, context: Context, obj: Obj) -> CSObj:
        key = (context, obj)
        found = self._objs.get(key)
        if found is None:
            found = self._objs[key] = CSObj(context, obj)
        return found

    def get_cs_method(self, context: Context, method: MethodDecl) -> CSMethod:
        key = (context, method)
        found = self._methods.get(key)
        if found is None:
            found = self._methods[key] = CSMethod(context, method)
        return found

    def get_call_site(self, context: Context, call_site: Invoke, container: CSMethod) -> CSCallSite:
        key = (context, call_site)
        found = self._call_sites.get(key)
        if found is None:
            found = self._call_sites[key] = CSCallSite(context, call_site, container)
        return found

    def get_cs_var(self, context: Context, var: Var) -> CSVar:
        key = (context, var)
        found = self._vars.get(key)
        if found is None:
            found = self._vars[key] = CSVar(self._new_pts(), context, var)
        return found

    def find_cs_var(self, context: Context, var: Var) -> Optional[CSVar]:
        return self._vars.get((context, var))

    def get_instance_field(self, base: CSObj, field: FieldRef) -> InstanceField:
        key = (base, field)
        found = self._instance_fields.get(key)
        if found is None:
            found = self._instance_fields[key] = InstanceField(self._new_pts(), base, field)
        return found

    def get_array_index(self, array: CSObj) -> ArrayIndex:
        found = self._array_indexes.get(array)
        if found is None:
            found = self._array_indexes[array] = ArrayIndex(self._new_pts(), array)
        return found

    def get_static_field(self, field: FieldRef) -> StaticField:
        found = self._static_fields.get(field)
        if found is None:
            found = self._static_fields[field] = StaticField(self._new_pts(), field)
        return found

    def cs_vars(self) -> List[CSVar]:
        return list(self._vars.values())

    def cs_objs(self) -> List[CSObj]:
        return list(self._objs.values())

    def pointers(self) -> Iterator[Pointer]:
        yield from self._vars.values()
        yield from self._instance_fields.values()
        yield from self._array_indexes.values()
        yield from self._static_fields.values()
