"""
分析器CLI接口
提供命令行工具：加载程序与注册表、生成计划、执行分析并输出结果
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from ..application.analysis_manager import AnalysisManager, ExecutionReport
from ..application.builtin_analyses import builtin_kind
from ..domain.errors import ConfigError, IRError, PlanError, RegistryError
from ..infrastructure.config_loader import ConfigLoader
from ..infrastructure.ir_parser import IRParser
from ..infrastructure.logging_setup import configure_logging
from ..infrastructure.registry_loader import describe_registry, load_registry, parse_request
from ..infrastructure.result_writer import ResultWriter

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PLAN = 2
EXIT_ANALYSIS = 3


class UsageError(Exception):
    """命令行用法错误"""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class AnalyzerCLI:
    """分析器CLI类"""

    def __init__(self, config_dir: str = "config"):
        """初始化CLI"""
        self.config_dir = config_dir
        self.parser = self._build_parser()

    def _build_parser(self) -> argparse.ArgumentParser:
        parser = _ArgumentParser(
            prog="analyzer",
            description="mini-IR 静态分析框架",
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog="""
使用示例:
  python -m src.main -a cfg data/programs/branch.ir                      # 运行 throw 与 cfg
  python -m src.main -a cfg=exception:null data/programs/branch.ir       # 只运行 cfg
  python -m src.main -a "pta=cs:2-obj;dump:true" data/programs/identity.ir
  python -m src.main --list                                              # 列出注册表中的分析
            """
        )
        parser.add_argument("programs", nargs="*", help="IR 程序文件")
        parser.add_argument("-a", "--analysis", dest="analyses", action="append", default=[],
                            metavar="ID[=key:val;...]", help="要运行的分析，可重复")
        parser.add_argument("--config", help="分析注册表文件，缺省取 settings.yaml 中的 registry")
        parser.add_argument("--settings", help="运行设置文件，缺省为 config/settings.yaml")
        parser.add_argument("--out", help="结果输出目录")
        parser.add_argument("--log-level", help="日志级别")
        parser.add_argument("--list", action="store_true", help="列出注册表中的分析")
        parser.add_argument("--init-config", action="store_true", help="写出默认运行设置文件")
        return parser

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        """
        运行CLI

        Returns:
            int: 退出码，0 成功，1 用法/解析/配置错误，2 计划错误，3 分析失败
        """
        try:
            args = self.parser.parse_args(argv)
        except UsageError as e:
            self.parser.print_usage(sys.stderr)
            print(f"❌ 参数错误: {e}", file=sys.stderr)
            return EXIT_USAGE

        config_loader = ConfigLoader(self.config_dir, args.settings)
        if args.init_config:
            path = config_loader.create_default_config()
            print(f"默认配置文件已创建: {path}")
            return EXIT_OK

        try:
            settings = config_loader.get_analyzer_config()
        except ConfigError as e:
            print(f"❌ 配置错误: {e}", file=sys.stderr)
            return EXIT_USAGE
        configure_logging(args.log_level or settings["log_level"], settings.get("log_file"))
        if not config_loader.validate_config():
            print("❌ 运行设置无效", file=sys.stderr)
            return EXIT_USAGE

        try:
            registry = load_registry(args.config or settings["registry"], builtin_kind)
        except RegistryError as e:
            print(f"❌ 注册表错误: {e}", file=sys.stderr)
            return EXIT_USAGE

        if args.list:
            self.list_analyses(registry)
            return EXIT_OK
        if not args.analyses or not args.programs:
            self.parser.print_usage(sys.stderr)
            print("❌ 至少需要一个 -a 分析与一个程序文件", file=sys.stderr)
            return EXIT_USAGE

        try:
            requests = [parse_request(text) for text in args.analyses]
            program = IRParser().parse_files([Path(p) for p in args.programs])
        except FileNotFoundError as e:
            print(f"❌ {e}", file=sys.stderr)
            return EXIT_USAGE
        except (IRError, RegistryError) as e:
            print(f"❌ 解析失败: {e}", file=sys.stderr)
            return EXIT_USAGE

        writer = ResultWriter(config_loader.get_output_path(args.out))
        manager = AnalysisManager(registry, settings, writer=writer)
        try:
            plan = manager.make_plan(requests)
        except PlanError as e:
            print(f"❌ 计划错误: {e}", file=sys.stderr)
            return EXIT_PLAN

        print("=" * 80)
        print(f"执行计划: {plan}")
        print("=" * 80)
        report = manager.execute(plan, program)
        self._display_report(report, writer)
        if not report.succeeded:
            return EXIT_ANALYSIS
        return EXIT_OK

    def list_analyses(self, registry) -> None:
        """列出注册表中的分析"""
        print("=" * 80)
        print("已注册的分析")
        print("=" * 80)
        for line in describe_registry(registry):
            print(line)

    def _display_report(self, report: ExecutionReport, writer: ResultWriter) -> None:
        for analysis_id in report.executed:
            print(f"✅ {analysis_id:<22} {report.timings[analysis_id]:.3f}s")
        if report.failed:
            print(f"❌ {report.failed:<22} {report.error}")
        if "taint" in report.executed:
            flows = report.program.get_result("taint")
            print(f"\n污点流 (共 {len(flows)} 条):")
            for flow in flows:
                print(f"  {flow.to_line()}")
        if writer.written:
            print(f"\n结果文件 (共 {len(writer.written)} 个) 位于: {writer.output_dir}")


def main(argv: Optional[List[str]] = None) -> int:
    return AnalyzerCLI().run(argv)


if __name__ == "__main__":
    sys.exit(main())
