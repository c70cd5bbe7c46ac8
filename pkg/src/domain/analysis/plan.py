"""
执行计划
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List


@dataclass(frozen=True)
class PlanStep:
    analysis_id: str
    options: Dict[str, Any] = field(default_factory=dict, compare=True, hash=False)

    def __str__(self) -> str:
        opts = ";".join(f"{k}:{v}" for k, v in self.options.items())
        return f"{self.analysis_id}({opts})"


@dataclass
class Plan:
    """按依赖拓扑序排列的分析步骤，依赖总在被依赖者之前"""
    steps: List[PlanStep] = field(default_factory=list)

    def ids(self) -> List[str]:
        return [step.analysis_id for step in self.steps]

    def options_of(self, analysis_id: str) -> Dict[str, Any]:
        for step in self.steps:
            if step.analysis_id == analysis_id:
                return step.options
        raise KeyError(analysis_id)

    def __iter__(self) -> Iterator[PlanStep]:
        return iter(self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        return " -> ".join(self.ids()) if self.steps else "<empty>"
