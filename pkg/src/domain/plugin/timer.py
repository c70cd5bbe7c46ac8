"""
分析计时插件
"""
import time
from typing import Dict, Optional

from loguru import logger

from .base import Plugin


class TimerPlugin(Plugin):
    """记录 on_start 到 on_finish 的耗时以及各类事件次数"""

    name = "timer"

    def __init__(self):
        self._started: Optional[float] = None
        self.elapsed = 0.0
        self.counts: Dict[str, int] = {"points_to_events": 0, "call_edge_events": 0,
                                       "method_events": 0, "stmt_events": 0}

    def on_start(self, solver) -> None:
        self._started = time.perf_counter()

    def on_new_points_to_set(self, cs_var, delta) -> None:
        self.counts["points_to_events"] += 1

    def on_new_call_edge(self, edge) -> None:
        self.counts["call_edge_events"] += 1

    def on_new_method(self, method) -> None:
        self.counts["method_events"] += 1

    def on_new_stmt(self, stmt, method) -> None:
        self.counts["stmt_events"] += 1

    def on_finish(self) -> None:
        if self._started is not None:
            self.elapsed = max(time.perf_counter() - self._started, 0.0)
        logger.info("指针分析耗时 {:.3f}s, 事件: {}", self.elapsed, self.counts)

    def result(self) -> Dict[str, object]:
        return {"elapsed": self.elapsed, **self.counts}
