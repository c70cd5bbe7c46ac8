"""
分析管理领域模型
注册表条目、依赖条件、执行计划与三种分析契约
"""
from .config import (AnalysisConfig, AnalysisKind, Condition, Requirement, option_enabled,
                     option_text, validate_registry)
from .kinds import Analysis, ClassAnalysis, MethodAnalysis, ProgramAnalysis
from .plan import Plan, PlanStep
