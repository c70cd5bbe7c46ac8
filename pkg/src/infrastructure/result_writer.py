"""
结果输出
CFG 写为 DOT，数据流结果与报告写为文本，指针分析结果另写 CSV 表格
"""
from pathlib import Path
from typing import Any, Iterable, List, Mapping, Sequence

import graphviz
import pandas as pd
from loguru import logger

from ..domain.cfg.cfg import CFG, Node
from ..domain.ir.program import MethodDecl
from ..domain.ir.stmts import Stmt
from ..domain.plugin.taint import TaintFlow
from ..domain.pta.result import PTAResult

CSV_ENCODING = "utf-8-sig"


def method_file_stem(method: MethodDecl) -> str:
    return f"{method.declaring_class}.{method.name}"


def cfg_to_dot(cfg: CFG) -> graphviz.Digraph:
    """只生成 DOT 源文本，不调用 Graphviz 可执行程序"""
    dot = graphviz.Digraph(name=str(cfg.method), node_attr={"shape": "box", "fontname": "monospace"})

    def node_id(node: Node) -> str:
        return f"s{node.index}" if isinstance(node, Stmt) else node.kind

    for node in cfg.nodes:
        label = f"{node.index}: {node}" if isinstance(node, Stmt) else node.kind
        dot.node(node_id(node), label)
    for edge in cfg.edges:
        style = "dashed" if edge.kind.is_exceptional else "solid"
        dot.edge(node_id(edge.source), node_id(edge.target), label=edge.label(), style=style)
    return dot


class ResultWriter:
    """把分析结果写入输出目录"""

    def __init__(self, output_dir: Path):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.written: List[Path] = []

    def _write_lines(self, file_name: str, lines: Iterable[str]) -> Path:
        path = self.output_dir / file_name
        with open(path, "w", encoding="utf-8") as f:
            for line in lines:
                f.write(line + "\n")
        self.written.append(path)
        return path

    def write_cfg(self, method: MethodDecl, cfg: CFG) -> Path:
        dot = cfg_to_dot(cfg)
        path = Path(dot.save(filename=f"{method_file_stem(method)}.dot", directory=str(self.output_dir)))
        self.written.append(path)
        return path

    def write_method_lines(self, method: MethodDecl, analysis_id: str, lines: Sequence[str]) -> Path:
        return self._write_lines(f"{method_file_stem(method)}.{analysis_id}.txt", lines)

    def write_report(self, analysis_id: str, lines: Sequence[str]) -> Path:
        return self._write_lines(f"{analysis_id}.txt", lines)

    def write_taint_flows(self, flows: Sequence[TaintFlow]) -> Path:
        return self._write_lines("taint-flows.txt", (flow.to_line() for flow in flows))

    def write_pta(self, result: PTAResult) -> List[Path]:
        """文本报告加三张 CSV：变量指向关系、调用边与计量"""
        points_to = pd.DataFrame(
            [{"method": str(var.method), "var": var.name, "object": str(obj)}
             for var in result.ci_vars() for obj in result.ci_points_to(var)],
            columns=["method", "var", "object"],
        ).sort_values(["method", "var", "object"], kind="stable")
        edges = pd.DataFrame(
            [{"caller": str(e.call_site.container.method.signature), "call_site": e.call_site.call_site.index,
              "callee": str(e.callee.method.signature)} for e in result.cs_call_edges()],
            columns=["caller", "call_site", "callee"],
        ).drop_duplicates().sort_values(["caller", "call_site", "callee"], kind="stable")
        metrics = pd.DataFrame([result.metrics()], columns=["varpt", "reach", "edges"])

        paths = []
        for name, frame in (("pta-points-to.csv", points_to), ("pta-call-edges.csv", edges),
                            ("pta-metrics.csv", metrics)):
            path = self.output_dir / name
            frame.to_csv(path, index=False, encoding=CSV_ENCODING)
            paths.append(path)
        self.written.extend(paths)

        lines = [f"selector: {result.selector}"]
        lines += [f"#{key}: {value}" for key, value in result.metrics().items()]
        lines.append("")
        lines.append("points-to:")
        lines += [f"  {row.method}/{row.var} -> {row.object}" for row in points_to.itertuples()]
        lines.append("call edges:")
        lines += [f"  {row.caller}@{row.call_site} -> {row.callee}" for row in edges.itertuples()]
        paths.append(self._write_lines("pta-result.txt", lines))
        logger.info("指针分析结果已写入 {}", self.output_dir)
        return paths

    def write_mapping(self, analysis_id: str, mapping: Mapping[str, Any]) -> Path:
        lines = []
        for key in sorted(mapping):
            value = mapping[key]
            if isinstance(value, (list, tuple, set, frozenset)):
                value = ", ".join(sorted(str(v) for v in value))
            lines.append(f"{key}: {value}")
        return self.write_report(analysis_id, lines)

