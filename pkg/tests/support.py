"""
测试辅助
语料路径与按名字取类、方法、变量的小工具
"""
from pathlib import Path
from typing import List

from src.domain.ir.program import MethodDecl, Program
from src.domain.ir.refs import Var
from src.infrastructure.ir_parser import IRParser

PROJECT_ROOT = Path(__file__).resolve().parent.parent
PROGRAMS_DIR = PROJECT_ROOT / "data" / "programs"
CONFIG_DIR = PROJECT_ROOT / "config"
REGISTRY_PATH = CONFIG_DIR / "analyses.yaml"
TAINT_CONFIG_PATH = CONFIG_DIR / "taint.txt"

CORPUS: List[str] = sorted(p.stem for p in PROGRAMS_DIR.glob("*.ir"))


def program_path(name: str) -> Path:
    return PROGRAMS_DIR / f"{name}.ir"


def load_program(name: str) -> Program:
    """解析语料中的一个程序（连同内置类）"""
    return IRParser().parse_files([program_path(name)])


def method(program: Program, class_name: str, method_name: str) -> MethodDecl:
    """按名字取方法；语料中不存在同名重载"""
    candidates = program.get_class(class_name).methods_named(method_name)
    assert len(candidates) == 1, f"{class_name}.{method_name} 应当唯一"
    return candidates[0]


def var(program: Program, class_name: str, method_name: str, var_name: str) -> Var:
    found = method(program, class_name, method_name).body.get_var(var_name)
    assert found is not None, f"{class_name}.{method_name} 中没有变量 {var_name}"
    return found
