"""
错误类型
分析框架各层共用的异常层次
"""
from typing import Any, List, Optional, Sequence


class AnalysisFrameworkError(Exception):
    """框架异常根类"""


# ---------------------------------------------------------------- IR

class IRError(AnalysisFrameworkError):
    """IR 解析与校验错误"""


class IRSyntaxError(IRError):
    """IR 文本语法错误，带行列号"""

    def __init__(self, message: str, line: int, column: int, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{column}: 语法错误: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.source = source


class IRResolutionError(IRError):
    """名字无法解析（变量、类型、字段、方法、标签）"""

    def __init__(self, name: str, message: str, line: Optional[int] = None, source: str = "<input>"):
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(f"{where}无法解析 '{name}': {message}")
        self.name = name
        self.line = line
        self.source = source


class InheritanceCycleError(IRError):
    """继承关系成环"""

    def __init__(self, cycle: Sequence[str]):
        super().__init__("继承关系存在环: " + " -> ".join(cycle))
        self.cycle = list(cycle)


# ---------------------------------------------------------------- 类层次

class HierarchyError(AnalysisFrameworkError):
    """类层次查询错误"""


class DispatchError(HierarchyError):
    """虚调用分派失败"""

    def __init__(self, receiver: Any, ref: Any):
        super().__init__(f"无法在 {receiver} 上分派方法 {ref}")
        self.receiver = receiver
        self.ref = ref


class FieldResolutionError(HierarchyError):
    """字段引用解析失败"""

    def __init__(self, ref: Any):
        super().__init__(f"找不到字段 {ref}")
        self.ref = ref


# ---------------------------------------------------------------- CFG / 数据流

class CFGError(AnalysisFrameworkError):
    """CFG 构建错误"""


class DataflowDivergenceError(AnalysisFrameworkError):
    """数据流求解超过迭代上限（通常说明转移函数不单调）"""

    def __init__(self, analysis_id: str, iterations: int):
        super().__init__(f"数据流分析 '{analysis_id}' 在 {iterations} 次迭代后仍未收敛")
        self.analysis_id = analysis_id
        self.iterations = iterations


# ---------------------------------------------------------------- 指针分析 / 插件

class PointerAnalysisError(AnalysisFrameworkError):
    """指针分析错误"""


class UnreachableMethodError(PointerAnalysisError):
    """向不可达方法添加语句"""


class WorklistLimitError(PointerAnalysisError):
    """工作表操作次数超过安全上限"""

    def __init__(self, limit: int):
        super().__init__(f"指针分析工作表操作超过上限 {limit}")
        self.limit = limit


class PluginError(AnalysisFrameworkError):
    """插件违反求解器调用约定"""


class TaintConfigError(AnalysisFrameworkError):
    """污点配置错误"""

    def __init__(self, message: str, line: Optional[int] = None):
        prefix = f"第 {line} 行: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


# ---------------------------------------------------------------- 配置与分析管理

class ConfigError(AnalysisFrameworkError):
    """运行设置错误"""


class RegistryError(AnalysisFrameworkError):
    """分析注册表格式或校验错误"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f"第 {line} 行第 {column} 列: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


class PlanError(AnalysisFrameworkError):
    """执行计划错误"""


class UnknownAnalysisError(PlanError):
    """请求了注册表中不存在的分析"""

    def __init__(self, analysis_id: str):
        super().__init__(f"未知分析: {analysis_id}")
        self.analysis_id = analysis_id


class UnknownOptionError(PlanError):
    """选项名不属于该分析"""

    def __init__(self, analysis_id: str, key: str):
        super().__init__(f"分析 '{analysis_id}' 没有选项 '{key}'")
        self.analysis_id = analysis_id
        self.key = key


class DependencyCycleError(PlanError):
    """激活的依赖关系成环"""

    def __init__(self, cycle: List[str]):
        super().__init__("分析依赖存在环: " + " -> ".join(cycle))
        self.cycle = cycle


class MissingResultError(AnalysisFrameworkError):
    """查询的结果不存在（分析未运行或层级不符）"""

    def __init__(self, analysis_id: str, level: str):
        super().__init__(f"{level} 级别上没有分析 '{analysis_id}' 的结果")
        self.analysis_id = analysis_id
        self.level = level


class AnalysisExecutionError(AnalysisFrameworkError):
    """某个分析执行失败"""

    def __init__(self, analysis_id: str, cause: BaseException):
        super().__init__(f"分析 '{analysis_id}' 执行失败: {cause}")
        self.analysis_id = analysis_id
        self.cause = cause
