"""
上下文与上下文选择器
支持上下文不敏感、k-调用点、k-对象与 k-类型敏感
"""
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Optional, Tuple

from ..ir.program import MethodDecl
from ..ir.stmts import Invoke
from ..ir.types import ClassType
from .heap import ConstantObj, MergedObj, Obj

if TYPE_CHECKING:
    from .elements import CSCallSite, CSMethod, CSObj


@dataclass(frozen=True)
class Context:
    """有界上下文元素序列，空序列即不敏感上下文"""
    elements: Tuple[Any, ...] = ()

    def append(self, element: Any, limit: int) -> "Context":
        return Context((self.elements + (element,))[-limit:] if limit > 0 else ())

    def truncate(self, limit: int) -> "Context":
        return Context(self.elements[-limit:] if limit > 0 else ())

    def __len__(self) -> int:
        return len(self.elements)

    def __str__(self) -> str:
        def show(element):
            if isinstance(element, Invoke):
                return f"call@{element.index}"
            return str(element)
        return "[" + ", ".join(show(e) for e in self.elements) + "]"


EMPTY_CONTEXT = Context()


class ContextSelector(ABC):
    """上下文选择策略"""

    name = "ci"

    def __init__(self, k_method: int = 0, k_heap: int = 0):
        if k_method < 0 or k_heap < 0:
            raise ValueError("上下文长度不能为负")
        self.k_method = k_method
        self.k_heap = k_heap

    @property
    def empty_context(self) -> Context:
        return EMPTY_CONTEXT

    @abstractmethod
    def select_method_context(self, call_site: "CSCallSite", callee: MethodDecl,
                              receiver: Optional["CSObj"] = None) -> Context:
        ...

    def select_heap_context(self, method: "CSMethod", obj: Obj) -> Context:
        if isinstance(obj, (ConstantObj, MergedObj)):
            return EMPTY_CONTEXT
        return method.context.truncate(self.k_heap)

    def describe(self) -> str:
        if self.k_method == 0:
            return "ci"
        return f"{self.k_method}-{self.name};heap:{self.k_heap}"


class InsensitiveSelector(ContextSelector):
    name = "ci"

    def __init__(self):
        super().__init__(0, 0)

    def select_method_context(self, call_site, callee, receiver=None) -> Context:
        return EMPTY_CONTEXT

    def select_heap_context(self, method, obj) -> Context:
        return EMPTY_CONTEXT


class CallSiteSelector(ContextSelector):
    name = "call"

    def select_method_context(self, call_site, callee, receiver=None) -> Context:
        return call_site.context.append(call_site.call_site, self.k_method)


class ObjectSelector(ContextSelector):
    name = "obj"

    def select_method_context(self, call_site, callee, receiver=None) -> Context:
        if receiver is None:
            return call_site.context
        return receiver.context.append(receiver.obj, self.k_method)


class TypeSelector(ContextSelector):
    name = "type"

    def select_method_context(self, call_site, callee, receiver=None) -> Context:
        if receiver is None:
            return call_site.context
        owner = receiver.obj.allocating_class
        element = ClassType(owner) if owner is not None else receiver.obj.type
        return receiver.context.append(element, self.k_method)


_SELECTORS = {"call": CallSiteSelector, "cs": CallSiteSelector, "call-site": CallSiteSelector,
              "obj": ObjectSelector, "object": ObjectSelector,
              "type": TypeSelector}
_SPEC = re.compile(r"^(\d+)-([a-z-]+)$")


def make_selector(spec: Optional[str] = "ci", k_heap: Optional[int] = None) -> ContextSelector:
    """
    根据选项文本构造选择器

    Args:
        spec: ``ci``、``2-call``、``1-obj``、``2-type`` 等
        k_heap: 堆上下文长度，缺省为 k_method - 1

    Returns:
        ContextSelector: 选择器实例
    """
    text = "ci" if spec is None else str(spec).strip().lower()
    if text in ("ci", "insensitive"):
        return InsensitiveSelector()
    match = _SPEC.match(text)
    if match is None or match.group(2) not in _SELECTORS:
        raise ValueError(f"无法识别的上下文敏感设置: {spec}")
    k_method = int(match.group(1))
    if k_method == 0:
        return InsensitiveSelector()
    heap = max(k_method - 1, 0) if k_heap is None else int(k_heap)
    return _SELECTORS[match.group(2)](k_method, heap)
