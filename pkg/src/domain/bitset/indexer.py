"""
对象编号器
为对象分配从 0 开始的稠密编号，使对象集合可以用位集合表示
"""
from threading import Lock
from typing import Dict, Generic, Hashable, List, TypeVar

T = TypeVar("T", bound=Hashable)


class ObjectIndexer(Generic[T]):
    """首次出现的对象获得下一个编号，编号一经分配不再改变"""

    def __init__(self):
        self._index: Dict[T, int] = {}
        self._objects: List[T] = []
        self._lock = Lock()

    def get_index(self, obj: T) -> int:
        index = self._index.get(obj)
        if index is None:
            with self._lock:
                index = self._index.get(obj)
                if index is None:
                    index = len(self._objects)
                    self._objects.append(obj)
                    self._index[obj] = index
        return index

    def get_object(self, index: int) -> T:
        return self._objects[index]

    def __contains__(self, obj) -> bool:
        return obj in self._index

    def __len__(self) -> int:
        return len(self._objects)
