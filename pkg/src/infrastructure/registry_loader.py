"""
分析注册表加载器
读取 YAML 格式的注册表，解析 requires 条件并校验
"""
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import pyparsing as pp
import yaml
from loguru import logger

from ..domain.analysis import AnalysisConfig, AnalysisKind, Condition, Requirement, validate_registry
from ..domain.errors import RegistryError

ENTRY_FIELDS = ("description", "analysisClass", "id", "requires", "options")

KindResolver = Callable[[str], Optional[AnalysisKind]]


def _requirement_grammar() -> pp.ParserElement:
    name = pp.Word(pp.alphanums + "_-.")
    value = pp.Word(pp.alphanums + "_-.")
    clause = pp.Group(name("key") + pp.Suppress("=") + pp.Group(pp.DelimitedList(value, "|"))("values"))
    condition = pp.Group(pp.DelimitedList(clause, "&"))("clauses")
    return (name("id") + pp.Optional(pp.Suppress("(") + condition + pp.Suppress(")"))) + pp.StringEnd()


_REQUIREMENT = _requirement_grammar()


def parse_requirement(text: str, line: Optional[int] = None) -> Requirement:
    """
    解析 ``throw(exception=explicit|all)`` 形式的依赖

    Raises:
        RegistryError: 语法错误
    """
    try:
        parsed = _REQUIREMENT.parse_string(text.strip())
    except pp.ParseBaseException as e:
        raise RegistryError(f"依赖条件语法错误 '{text}': {e.msg}", line, e.col) from e
    condition = None
    if "clauses" in parsed:
        clauses = tuple((c["key"], frozenset(c["values"])) for c in parsed["clauses"])
        keys = [key for key, _ in clauses]
        if len(set(keys)) != len(keys):
            raise RegistryError(f"依赖条件中键重复: '{text}'", line)
        condition = Condition(clauses)
    return Requirement(parsed["id"], condition)


def _yaml_error(e: yaml.YAMLError) -> RegistryError:
    mark = getattr(e, "problem_mark", None)
    if mark is None:
        return RegistryError(f"注册表 YAML 格式错误: {e}")
    return RegistryError(f"注册表 YAML 格式错误: {getattr(e, 'problem', e)}", mark.line + 1, mark.column + 1)


def parse_registry(text: str, kind_resolver: Optional[KindResolver] = None) -> List[AnalysisConfig]:
    """
    解析并校验注册表文本

    Args:
        text: 注册表内容，条目列表
        kind_resolver: 由 id 给出分析种类；无法给出时按程序级处理

    Returns:
        List[AnalysisConfig]: 按文件顺序

    Raises:
        RegistryError: 语法错误、字段错误、id 重复、依赖未知或条件键未声明
    """
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise _yaml_error(e) from e
    if data is None:
        return []
    if not isinstance(data, list):
        raise RegistryError("注册表必须是分析条目的列表", 1, 1)

    configs = []
    for entry, node in zip(data, root.value):
        line = node.start_mark.line + 1
        configs.append(_parse_entry(entry, line, kind_resolver))
    validate_registry(configs)
    logger.debug("注册表包含 {} 个分析", len(configs))
    return configs


def _parse_entry(entry: Any, line: int, kind_resolver: Optional[KindResolver]) -> AnalysisConfig:
    if not isinstance(entry, dict):
        raise RegistryError("注册表条目必须是映射", line)
    unknown = [key for key in entry if key not in ENTRY_FIELDS]
    if unknown:
        raise RegistryError(f"未知字段: {', '.join(map(str, unknown))}", line)
    analysis_id = entry.get("id")
    if not isinstance(analysis_id, str) or not analysis_id:
        raise RegistryError("条目缺少 id", line)
    requires = entry.get("requires") or []
    if not isinstance(requires, list):
        raise RegistryError(f"分析 '{analysis_id}' 的 requires 必须是列表", line)
    options = entry.get("options") or {}
    if not isinstance(options, dict):
        raise RegistryError(f"分析 '{analysis_id}' 的 options 必须是映射", line)
    kind = kind_resolver(analysis_id) if kind_resolver else None
    return AnalysisConfig(
        id=analysis_id,
        description=str(entry.get("description") or ""),
        kind=kind or AnalysisKind.PROGRAM,
        analysis_class=str(entry.get("analysisClass") or ""),
        requires=[parse_requirement(str(r), line) for r in requires],
        options={str(k): v for k, v in options.items()},
    )


def load_registry(path: Union[str, Path], kind_resolver: Optional[KindResolver] = None) -> List[AnalysisConfig]:
    """
    从文件加载注册表

    Raises:
        RegistryError: 文件不存在或内容无效
    """
    registry_file = Path(path)
    if not registry_file.exists():
        raise RegistryError(f"注册表文件不存在: {registry_file}")
    with open(registry_file, "r", encoding="utf-8") as f:
        return parse_registry(f.read(), kind_resolver)


def parse_option_overrides(text: str) -> Dict[str, Any]:
    """
    解析命令行 ``key:val;key:val`` 形式的选项覆盖，值按 YAML 标量转换

    Raises:
        RegistryError: 缺少冒号或键为空
    """
    overrides: Dict[str, Any] = {}
    for part in filter(None, (p.strip() for p in text.split(";"))):
        key, sep, raw = part.partition(":")
        if not sep or not key.strip():
            raise RegistryError(f"选项格式应为 key:value，实际为 '{part}'")
        try:
            value = yaml.safe_load(raw) if raw.strip() else None
        except yaml.YAMLError:
            value = raw
        overrides[key.strip()] = value
    return overrides


def parse_request(text: str) -> tuple:
    """``cfg=exception:null`` → ``("cfg", {"exception": None})``"""
    analysis_id, _, opts = text.partition("=")
    return analysis_id.strip(), parse_option_overrides(opts)


def describe_registry(configs: Sequence[AnalysisConfig]) -> List[str]:
    return [f"{c.id:<22} {c.kind.value:<8} {c.description}" for c in configs]
