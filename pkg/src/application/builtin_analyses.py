"""
内置分析
把领域层的各项分析包装为方法级 / 类级 / 程序级分析，并登记到按 id 索引的工厂表
"""
from typing import Any, Dict, List, Optional, Type

from loguru import logger

from ..domain.analysis import (Analysis, AnalysisKind, ClassAnalysis, MethodAnalysis, ProgramAnalysis,
                               option_enabled)
from ..domain.cfg import ExceptionMode, build_cfg, throw_analysis
from ..domain.dataflow import ConstantPropagation, DataflowSolver, LiveVariableAnalysis, detect_dead_code
from ..domain.errors import ConfigError
from ..domain.ir.program import ClassDecl, MethodBody, Program
from ..domain.plugin import Plugin, TaintAnalysisPlugin, ThrowPlugin, TimerPlugin
from ..domain.pta import HeapModel, Solver, make_selector
from ..infrastructure.taint_config_loader import load_taint_config


def _as_list(value: Any) -> List[str]:
    if value is None:
        return []
    if isinstance(value, str):
        return [v.strip() for v in value.split(",") if v.strip()]
    return [str(v) for v in value]


def _as_int(value: Any) -> Optional[int]:
    return None if value is None else int(value)


class ThrowAnalysisWrapper(MethodAnalysis):
    """异常抛出分析"""

    STATELESS = True

    def analyze(self, body: MethodBody):
        return throw_analysis(body, ExceptionMode.parse(self.option("exception")))


class CFGAnalysis(MethodAnalysis):
    """控制流图构建；异常模式不为 null 时读取 throw 的结果"""

    STATELESS = True

    def analyze(self, body: MethodBody):
        mode = ExceptionMode.parse(self.option("exception"))
        throw_result = body.get_result("throw") if mode is not ExceptionMode.NULL else None
        if mode is ExceptionMode.ALL and throw_result.mode is ExceptionMode.EXPLICIT:
            logger.warning("{}: throw 结果只含显式异常，cfg 按 all 模式补算隐式异常", body.signature)
            throw_result = throw_analysis(body, ExceptionMode.ALL)
        return build_cfg(body, self.program.hierarchy, mode, throw_result)

    def dump(self, writer, holder, result) -> None:
        writer.write_cfg(self.program.get_method(holder.signature), result)


class DataflowWrapper(MethodAnalysis):
    """在 cfg 结果上运行一个数据流分析"""

    STATELESS = True

    def new_analysis(self):
        raise NotImplementedError

    def analyze(self, body: MethodBody):
        solver = DataflowSolver(self.settings.get("dataflow_iteration_factor", 10000))
        return solver.solve(self.new_analysis(), body.get_result("cfg"))

    def dump(self, writer, holder, result) -> None:
        writer.write_method_lines(self.program.get_method(holder.signature), self.id, result.format_lines())


class ConstPropAnalysis(DataflowWrapper):
    def new_analysis(self):
        return ConstantPropagation(edge_refine=option_enabled(self.option("edge-refine", False)))


class LiveVarAnalysis(DataflowWrapper):
    def new_analysis(self):
        return LiveVariableAnalysis()


class DeadCodeAnalysis(MethodAnalysis):
    """死代码检测：不可达语句与无用赋值，按语句下标排序"""

    STATELESS = True

    def analyze(self, body: MethodBody):
        return detect_dead_code(body.get_result("cfg"), body.get_result("constprop"), body.get_result("livevar"))

    def dump(self, writer, holder, result) -> None:
        writer.write_method_lines(self.program.get_method(holder.signature), self.id,
                                  [f"{stmt.index} | {stmt}" for stmt in result])


PTA_PLUGINS: Dict[str, Type[Plugin]] = {"timer": TimerPlugin, "throw": ThrowPlugin}


class PointerAnalysis(ProgramAnalysis):
    """上下文敏感指针分析"""

    def make_plugins(self) -> List[Plugin]:
        plugins = []
        for name in _as_list(self.option("plugins")):
            plugin_class = PTA_PLUGINS.get(name)
            if plugin_class is None:
                raise ConfigError(f"未知的指针分析插件: {name}")
            plugins.append(plugin_class())
        return plugins

    def make_solver(self, program: Program, plugins: List[Plugin]) -> Solver:
        return Solver(
            program,
            selector=make_selector(self.option("cs", "ci"), _as_int(self.option("heap"))),
            plugins=plugins,
            heap_model=HeapModel(_as_list(self.option("merge-types"))),
            type_filter=option_enabled(self.option("type-filter", True)),
            hybrid_threshold=self.settings.get("hybrid_threshold", 8),
            max_worklist_ops=self.settings.get("pta_max_worklist_ops", 5_000_000),
            mock_entry_receivers=option_enabled(self.option("mock-entry", False)),
        )

    def analyze(self, program: Program):
        return self.make_solver(program, self.make_plugins()).solve()

    def dump(self, writer, holder, result) -> None:
        writer.write_pta(result)
        for name, report in result.plugin_results.items():
            if isinstance(report, dict):
                writer.write_mapping(f"pta-{name}", report)


class TaintAnalysis(PointerAnalysis):
    """污点分析：挂接 TaintAnalysisPlugin 单独运行一次指针分析，结果为 TaintFlow 列表"""

    def make_plugins(self) -> List[Plugin]:
        path = self.option("config")
        if not path:
            raise ConfigError("taint 分析需要 config 选项指定污点配置文件")
        config = load_taint_config(path)
        config.validate(self.program)
        return [TaintAnalysisPlugin(config)]

    def analyze(self, program: Program):
        result = self.make_solver(program, self.make_plugins()).solve()
        flows = result.plugin_results.get(TaintAnalysisPlugin.name, [])
        for flow in flows:
            logger.warning("发现污点流: {}", flow.to_line())
        return flows

    def dump(self, writer, holder, result) -> None:
        writer.write_taint_flows(result)


class MaskedFieldsAnalysis(ClassAnalysis):
    """找出与父类字段同名、把父类字段遮蔽掉的字段"""

    def analyze(self, class_decl: ClassDecl) -> List[str]:
        if class_decl.superclass is None:
            return []
        hierarchy = self.program.hierarchy
        masked = []
        for field in class_decl.fields:
            inherited = hierarchy.find_field(class_decl.superclass, field.name)
            if inherited is not None:
                masked.append(f"{class_decl.name}.{field.name} masks {inherited.declaring_class}.{field.name}")
        return masked

    def dump(self, writer, holder, result) -> None:
        if result:
            writer.write_report(f"{holder.name}.{self.id}", result)


class RedundantInterfacesAnalysis(ClassAnalysis):
    """找出父类已经实现、在本类中重复声明的接口"""

    def analyze(self, class_decl: ClassDecl) -> List[str]:
        if class_decl.superclass is None:
            return []
        inherited = self.program.hierarchy.supertypes(class_decl.superclass)
        return [name for name in class_decl.interfaces if name in inherited]

    def dump(self, writer, holder, result) -> None:
        if result:
            writer.write_report(f"{holder.name}.{self.id}", result)


BUILTIN_ANALYSES: Dict[str, Type[Analysis]] = {
    "throw": ThrowAnalysisWrapper,
    "cfg": CFGAnalysis,
    "constprop": ConstPropAnalysis,
    "livevar": LiveVarAnalysis,
    "deadcode": DeadCodeAnalysis,
    "pta": PointerAnalysis,
    "taint": TaintAnalysis,
    "masked-fields": MaskedFieldsAnalysis,
    "redundant-interfaces": RedundantInterfacesAnalysis,
}


def builtin_kind(analysis_id: str) -> Optional[AnalysisKind]:
    analysis_class = BUILTIN_ANALYSES.get(analysis_id)
    return None if analysis_class is None else analysis_class.KIND
