"""
污点配置加载器
逐行解析 source / transfer / sink 规则
"""
from pathlib import Path
from typing import Union

import pyparsing as pp

from ..domain.errors import TaintConfigError
from ..domain.plugin.taint import BASE, RESULT, TaintConfig, TaintSink, TaintSource, TaintTransfer


def _grammar() -> pp.ParserElement:
    ident = pp.Word(pp.alphas + "_$", pp.alphanums + "_$")
    type_name = pp.Regex(r"[A-Za-z_$][A-Za-z0-9_$]*(?:\[\])*")
    index = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))
    descriptor = pp.Group(pp.Optional(pp.DelimitedList(type_name, ",")))
    method = pp.Group(ident("cls") + pp.Suppress(".") + ident("name")
                      + pp.Suppress("(") + descriptor("params") + pp.Suppress(")"))("method")
    param = pp.Suppress(pp.Keyword("param")) + index("from")

    source = pp.Keyword("source")("kind") + method + pp.Suppress("->") + pp.Keyword(RESULT)
    transfer = (pp.Keyword("transfer")("kind") + method
                + pp.Suppress(pp.Keyword("from") + ":") + (param | pp.Keyword(BASE)("from"))
                + pp.Suppress(pp.Keyword("to") + ":") + (pp.Keyword(BASE)("to") | pp.Keyword(RESULT)("to")))
    sink = pp.Keyword("sink")("kind") + method + pp.Suppress(pp.Keyword("param") + ":") + index("index")
    return (source | transfer | sink) + pp.StringEnd()


_RULE = _grammar()


def _method_key(parsed) -> str:
    method = parsed["method"]
    return f"{method['cls']}.{method['name']}({','.join(method['params'])})"


def parse_taint_config(text: str) -> TaintConfig:
    """
    解析污点配置文本；``#`` 开头的行和空行被忽略

    Raises:
        TaintConfigError: 某一行无法解析，带行号
    """
    config = TaintConfig()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            parsed = _RULE.parse_string(line)
        except pp.ParseBaseException as e:
            raise TaintConfigError(f"无法解析污点规则 '{line}': {e.msg}", number) from e
        kind = parsed["kind"]
        if kind == "source":
            config.sources.append(TaintSource(_method_key(parsed)))
        elif kind == "transfer":
            config.transfers.append(TaintTransfer(_method_key(parsed), parsed["from"], parsed["to"]))
        else:
            config.sinks.append(TaintSink(_method_key(parsed), parsed["index"]))
    return config


def load_taint_config(path: Union[str, Path]) -> TaintConfig:
    config_file = Path(path)
    if not config_file.exists():
        raise TaintConfigError(f"污点配置文件不存在: {config_file}")
    with open(config_file, "r", encoding="utf-8") as f:
        return parse_taint_config(f.read())
