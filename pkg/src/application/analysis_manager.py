"""
分析管理服务
根据注册表与请求生成执行计划，按计划驱动各级分析并把结果存放到对应层级
"""
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Type

import networkx as nx
from loguru import logger

from ..domain.analysis import (Analysis, AnalysisConfig, AnalysisKind, ClassAnalysis, MethodAnalysis,
                               Plan, PlanStep, option_enabled, validate_registry)
from ..domain.errors import AnalysisExecutionError, DependencyCycleError, UnknownAnalysisError
from ..domain.ir.program import MethodBody, Program
from .builtin_analyses import BUILTIN_ANALYSES

Request = Tuple[str, Dict[str, Any]]


@dataclass
class ExecutionReport:
    """一次执行的记录；结果本身存放在程序、类与方法体上"""
    program: Program
    executed: List[str] = field(default_factory=list)
    failed: Optional[str] = None
    error: Optional[AnalysisExecutionError] = None
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def succeeded(self) -> bool:
        return self.failed is None


class AnalysisManager:
    """分析管理器"""

    def __init__(self, registry: Sequence[AnalysisConfig], settings: Optional[Dict[str, Any]] = None,
                 factories: Optional[Dict[str, Type[Analysis]]] = None, writer=None):
        """
        初始化分析管理器

        Args:
            registry: 注册表条目
            settings: 运行设置（迭代上限、并发数等）
            factories: id 到分析类的映射，缺省为内置分析
            writer: 结果输出器；为 None 时忽略 dump 选项
        """
        self.registry = validate_registry(registry)
        self.settings = dict(settings or {})
        self.factories = dict(BUILTIN_ANALYSES if factories is None else factories)
        self.writer = writer
        self._order = {analysis_id: i for i, analysis_id in enumerate(self.registry)}

    def _config(self, analysis_id: str) -> AnalysisConfig:
        config = self.registry.get(analysis_id)
        if config is None:
            raise UnknownAnalysisError(analysis_id)
        return config

    def make_plan(self, requested: Sequence[Request]) -> Plan:
        """
        生成执行计划

        Args:
            requested: (分析 id, 选项覆盖) 列表

        Returns:
            Plan: 依赖在前的拓扑序

        Raises:
            UnknownAnalysisError: 请求了未注册的分析
            UnknownOptionError: 覆盖了未声明的选项
            DependencyCycleError: 激活的依赖成环
        """
        overrides: Dict[str, Dict[str, Any]] = {}
        for analysis_id, opts in requested:
            config = self._config(analysis_id)
            config.effective_options(opts)
            overrides.setdefault(analysis_id, {}).update(opts)

        effective: Dict[str, Dict[str, Any]] = {}
        graph = nx.DiGraph()
        pending = list(overrides)
        while pending:
            analysis_id = pending.pop(0)
            if analysis_id in effective:
                continue
            config = self._config(analysis_id)
            options = config.effective_options(overrides.get(analysis_id))
            effective[analysis_id] = options
            graph.add_node(analysis_id)
            for requirement in config.requires:
                if requirement.is_active(options, analysis_id):
                    graph.add_edge(requirement.analysis_id, analysis_id)
                    pending.append(requirement.analysis_id)

        try:
            cycle = nx.find_cycle(graph)
        except nx.NetworkXNoCycle:
            cycle = None
        if cycle:
            ids = [source for source, _ in cycle] + [cycle[0][0]]
            raise DependencyCycleError(ids)

        ordered = nx.lexicographical_topological_sort(graph, key=lambda n: self._order[n])
        plan = Plan([PlanStep(analysis_id, effective[analysis_id]) for analysis_id in ordered])
        logger.info("执行计划: {}", plan)
        return plan

    def execute(self, plan: Plan, program: Program) -> ExecutionReport:
        """
        按计划执行分析

        某个分析失败时停止，返回带失败记录的部分结果。

        Returns:
            ExecutionReport: 已执行的分析、失败信息与耗时
        """
        report = ExecutionReport(program)
        for step in plan:
            started = time.perf_counter()
            try:
                self._run_step(step, program)
            except Exception as e:
                report.failed = step.analysis_id
                report.error = AnalysisExecutionError(step.analysis_id, e)
                logger.error("分析 {} 执行失败: {}", step.analysis_id, e)
                break
            finally:
                report.timings[step.analysis_id] = time.perf_counter() - started
            report.executed.append(step.analysis_id)
            logger.info("完成 {} ({:.3f}s)", step.analysis_id, report.timings[step.analysis_id])
        return report

    def _instantiate(self, step: PlanStep, program: Program) -> Analysis:
        analysis_class = self.factories.get(step.analysis_id)
        if analysis_class is None:
            raise UnknownAnalysisError(step.analysis_id)
        return analysis_class(step.analysis_id, step.options, program, self.settings)

    def _run_step(self, step: PlanStep, program: Program) -> None:
        analysis = self._instantiate(step, program)
        dump = self.writer is not None and option_enabled(step.options.get("dump", False))
        if isinstance(analysis, MethodAnalysis):
            bodies = self._method_targets(analysis, step, program)
            for body, result in zip(bodies, self._analyze_bodies(analysis, bodies)):
                body.store_result(step.analysis_id, result)
                if dump and not program.get_class(body.signature.declaring_class).is_builtin:
                    analysis.dump(self.writer, body, result)
        elif isinstance(analysis, ClassAnalysis):
            for class_decl in program.classes.values():
                result = analysis.analyze(class_decl)
                class_decl.store_result(step.analysis_id, result)
                if dump and not class_decl.is_builtin:
                    analysis.dump(self.writer, class_decl, result)
        else:
            result = analysis.analyze(program)
            program.store_result(step.analysis_id, result)
            if dump:
                analysis.dump(self.writer, program, result)

    def _method_dependencies(self, step: PlanStep) -> List[str]:
        config = self._config(step.analysis_id)
        return [r.analysis_id for r in config.requires
                if r.is_active(step.options, step.analysis_id)
                and self._config(r.analysis_id).kind is AnalysisKind.METHOD]

    def _method_targets(self, analysis: MethodAnalysis, step: PlanStep, program: Program) -> List[MethodBody]:
        """
        确定方法级分析要处理的方法体

        only-reachable 时只取 pta 可达的方法；另外跳过缺少任一方法级依赖结果的方法体，
        依赖本身只分析了可达方法时，下游分析随之收窄。
        """
        bodies = list(program.bodies())
        if option_enabled(analysis.option("only-reachable", False)):
            if program.has_result("pta"):
                reachable = program.get_result("pta").reachable_methods()
                bodies = [b for b in bodies if program.get_method(b.signature) in reachable]
            else:
                logger.warning("{} 要求只分析可达方法，但没有 pta 结果，分析全部方法", analysis.id)
        dependencies = self._method_dependencies(step)
        if dependencies:
            covered = [b for b in bodies if all(b.has_result(d) for d in dependencies)]
            if len(covered) != len(bodies):
                logger.info("{}: {} 个方法体缺少依赖结果 {}，跳过", analysis.id,
                            len(bodies) - len(covered), dependencies)
            bodies = covered
        return bodies

    def _analyze_bodies(self, analysis: MethodAnalysis, bodies: List[MethodBody]) -> List[Any]:
        workers = int(self.settings.get("workers", 1) or 1)
        if analysis.STATELESS and workers > 1 and len(bodies) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(analysis.analyze, bodies))
        return [analysis.analyze(body) for body in bodies]

    def run(self, requested: Sequence[Request], program: Program) -> Tuple[Plan, ExecutionReport]:
        plan = self.make_plan(requested)
        return plan, self.execute(plan, program)
