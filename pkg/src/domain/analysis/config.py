"""
分析配置
注册表条目、依赖条件与选项值的文本化比较
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

from ..errors import RegistryError, UnknownOptionError


class AnalysisKind(Enum):
    METHOD = "method"
    CLASS = "class"
    PROGRAM = "program"


def option_text(value: Any) -> str:
    """选项值的规范文本：null / true / false / 原文"""
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def option_enabled(value: Any) -> bool:
    return option_text(value).lower() == "true"


@dataclass(frozen=True)
class Condition:
    """
    依赖条件：子句的合取，每个子句是 key=v1|v2 形式的取值析取

    例如 ``exception=explicit|all`` 或 ``cs=ci&dump=true``
    """
    clauses: Tuple[Tuple[str, FrozenSet[str]], ...]

    def keys(self) -> List[str]:
        return [key for key, _ in self.clauses]

    def evaluate(self, options: Dict[str, Any], analysis_id: str = "?") -> bool:
        """
        在有效选项上求值

        Raises:
            UnknownOptionError: 条件引用了选项表中不存在的键
        """
        for key, accepted in self.clauses:
            if key not in options:
                raise UnknownOptionError(analysis_id, key)
            if option_text(options[key]) not in accepted:
                return False
        return True

    def __str__(self) -> str:
        return "&".join(f"{key}={'|'.join(sorted(values))}" for key, values in self.clauses)


@dataclass(frozen=True)
class Requirement:
    analysis_id: str
    condition: Optional[Condition] = None

    def is_active(self, options: Dict[str, Any], dependent: str = "?") -> bool:
        return self.condition is None or self.condition.evaluate(options, dependent)

    def __str__(self) -> str:
        return self.analysis_id if self.condition is None else f"{self.analysis_id}({self.condition})"


@dataclass
class AnalysisConfig:
    """注册表中的一个分析"""
    id: str
    description: str = ""
    kind: AnalysisKind = AnalysisKind.PROGRAM
    analysis_class: str = ""
    requires: List[Requirement] = field(default_factory=list)
    options: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id:
            raise ValueError("分析 id 不能为空")

    def effective_options(self, overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """
        默认值叠加覆盖值

        Raises:
            UnknownOptionError: 覆盖了未声明的选项
        """
        merged = dict(self.options)
        for key, value in (overrides or {}).items():
            if key not in self.options:
                raise UnknownOptionError(self.id, key)
            merged[key] = value
        return merged


def validate_registry(configs: Sequence[AnalysisConfig]) -> Dict[str, AnalysisConfig]:
    """
    校验注册表：id 唯一、依赖存在、条件键属于本分析的选项

    Returns:
        Dict[str, AnalysisConfig]: 按 id 索引、保持文件顺序

    Raises:
        RegistryError: 任一校验失败
    """
    by_id: Dict[str, AnalysisConfig] = {}
    for config in configs:
        if config.id in by_id:
            raise RegistryError(f"分析 id 重复: {config.id}")
        by_id[config.id] = config
    for config in configs:
        for requirement in config.requires:
            if requirement.analysis_id not in by_id:
                raise RegistryError(f"分析 '{config.id}' 依赖未知分析 '{requirement.analysis_id}'")
            if requirement.condition is not None:
                for key in requirement.condition.keys():
                    if key not in config.options:
                        raise RegistryError(f"分析 '{config.id}' 的依赖条件引用了未声明的选项 '{key}'")
    return by_id
