"""
数据流事实
集合事实与映射事实两种容器，均可复制、比较并原地更新
"""
from typing import Callable, Dict, Generic, Iterable, Iterator, Set, Tuple, TypeVar

K = TypeVar("K")
V = TypeVar("V")
E = TypeVar("E")


class SetFact(Generic[E]):
    """集合事实"""

    def __init__(self, elements: Iterable[E] = ()):
        self._set: Set[E] = set(elements)

    def add(self, element: E) -> bool:
        if element in self._set:
            return False
        self._set.add(element)
        return True

    def remove(self, element: E) -> bool:
        if element not in self._set:
            return False
        self._set.remove(element)
        return True

    def union(self, other: "SetFact[E]") -> bool:
        before = len(self._set)
        self._set |= other._set
        return len(self._set) != before

    def set_to(self, other: "SetFact[E]") -> None:
        self._set = set(other._set)

    def copy(self) -> "SetFact[E]":
        return SetFact(self._set)

    def __contains__(self, element) -> bool:
        return element in self._set

    def __iter__(self) -> Iterator[E]:
        return iter(self._set)

    def __len__(self) -> int:
        return len(self._set)

    def __eq__(self, other) -> bool:
        return isinstance(other, SetFact) and self._set == other._set

    def __hash__(self):
        return hash(frozenset(self._set))

    def sorted_str(self, key: Callable = str) -> str:
        return "{" + ", ".join(str(e) for e in sorted(self._set, key=key)) + "}"

    def __repr__(self) -> str:
        return self.sorted_str()


class MapFact(Generic[K, V]):
    """
    映射事实

    缺省值 default 不显式存储，因此两个事实相等当且仅当非缺省项相同。
    """

    def __init__(self, default: V, items: Dict[K, V] = None):
        self.default = default
        self._map: Dict[K, V] = {}
        for key, value in (items or {}).items():
            self.update(key, value)

    def get(self, key: K) -> V:
        return self._map.get(key, self.default)

    def update(self, key: K, value: V) -> bool:
        old = self._map.get(key, self.default)
        if value == self.default:
            self._map.pop(key, None)
        else:
            self._map[key] = value
        return old != value

    def copy_from(self, other: "MapFact[K, V]") -> bool:
        changed = self._map != other._map
        self._map = dict(other._map)
        return changed

    def copy(self) -> "MapFact[K, V]":
        fact = self.__class__.__new__(self.__class__)
        fact.default = self.default
        fact._map = dict(self._map)
        return fact

    def keys(self) -> Iterable[K]:
        return self._map.keys()

    def items(self) -> Iterable[Tuple[K, V]]:
        return self._map.items()

    def __eq__(self, other) -> bool:
        return isinstance(other, MapFact) and self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __len__(self) -> int:
        return len(self._map)

    def __repr__(self) -> str:
        entries = sorted(self._map.items(), key=lambda kv: str(kv[0]))
        return "{" + ", ".join(f"{k}={v}" for k, v in entries) + "}"
