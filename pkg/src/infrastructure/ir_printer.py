"""
IR 打印器
把 Program 输出为可再次解析的 IR 文本；跳转目标统一打印为 L<下标>
"""
from typing import List, Set

from ..domain.ir.program import ClassDecl, MethodBody, MethodDecl, Program
from ..domain.ir.stmts import Goto, If, Switch

INDENT = "    "


def _jump_targets(body: MethodBody) -> Set[int]:
    targets: Set[int] = set()
    for stmt in body.stmts:
        if isinstance(stmt, (If, Goto)):
            targets.add(stmt.target)
        elif isinstance(stmt, Switch):
            targets.update(t for _, t in stmt.cases)
            targets.add(stmt.default_target)
    for entry in body.exception_table:
        targets.update((entry.try_start, entry.try_end, entry.handler_index))
    return targets


def format_method(method: MethodDecl, indent: str = INDENT) -> List[str]:
    sig = method.signature
    modifiers = ""
    if sig.is_static:
        modifiers += "static "
    if sig.is_abstract:
        modifiers += "abstract "
    if method.body is None:
        params = ", ".join(f"{t} p{i}" for i, t in enumerate(sig.param_types))
        return [f"{indent}{modifiers}{sig.return_type} {sig.name}({params});"]

    body = method.body
    params = ", ".join(f"{p.type} {p.name}" for p in body.params)
    lines = [f"{indent}{modifiers}{sig.return_type} {sig.name}({params}) {{"]
    declared = set(body.params)
    if body.this_var is not None:
        declared.add(body.this_var)
    for var in body.variables:
        if var not in declared:
            lines.append(f"{indent}{INDENT}{var.type} {var.name};")
    targets = _jump_targets(body)
    for stmt in body.stmts:
        label = f"L{stmt.index}: " if stmt.index in targets else ""
        lines.append(f"{indent}{INDENT}{label}{stmt}")
    if len(body.stmts) in targets:
        lines.append(f"{indent}{INDENT}L{len(body.stmts)}:")
    for entry in body.exception_table:
        lines.append(f"{indent}{INDENT}catch ({entry.catch_type}, L{entry.try_start}, "
                     f"L{entry.try_end}, L{entry.handler_index});")
    lines.append(f"{indent}}}")
    return lines


def format_class(decl: ClassDecl) -> str:
    if decl.is_interface:
        header = f"interface {decl.name}"
        if decl.interfaces:
            header += " extends " + ", ".join(decl.interfaces)
    else:
        header = ("abstract " if decl.is_abstract else "") + f"class {decl.name}"
        if decl.superclass is not None and decl.superclass != "Object":
            header += f" extends {decl.superclass}"
        if decl.interfaces:
            header += " implements " + ", ".join(decl.interfaces)
    lines = [header + " {"]
    for f in decl.fields:
        lines.append(f"{INDENT}{'static ' if f.is_static else ''}{f.type} {f.name};")
    for method in decl.methods:
        if decl.is_interface:
            sig = method.signature
            params = ", ".join(f"{t} p{i}" for i, t in enumerate(sig.param_types))
            lines.append(f"{INDENT}{sig.return_type} {sig.name}({params});")
        else:
            lines.extend(format_method(method))
    lines.append("}")
    return "\n".join(lines)


def format_program(program: Program, include_builtin: bool = False) -> str:
    """
    打印整个程序

    Args:
        program: 待打印的程序
        include_builtin: 是否连同内置类一起打印

    Returns:
        str: IR 文本，重新解析后与原程序结构一致
    """
    classes = program.classes.values() if include_builtin else program.user_classes()
    return "\n\n".join(format_class(decl) for decl in classes) + "\n"
