"""
CFG 构建与异常抛出分析测试
"""
import pytest

from src.domain.cfg import CFGEdge, EdgeKind, ExceptionMode, build_cfg, throw_analysis
from src.domain.errors import CFGError
from src.domain.ir.stmts import Stmt, Throw
from src.domain.ir.types import ARITHMETIC_EXCEPTION, ClassType, NULL_POINTER_EXCEPTION
from tests.support import CORPUS, load_program, method


def make_cfg(program, body, mode):
    throw_result = None if mode is ExceptionMode.NULL else throw_analysis(body, mode)
    return build_cfg(body, program.hierarchy, mode, throw_result)


def exceptional(cfg):
    return {s for s in cfg.edge_summary() if s[2] in ("CAUGHT_EXCEPTION", "UNCAUGHT_EXCEPTION")}


class TestNormalEdges:

    def test_entry_and_return_edges(self):
        program = load_program("branch")
        body = method(program, "Main", "refine").body
        cfg = make_cfg(program, body, ExceptionMode.NULL)
        summary = cfg.edge_summary()
        assert ("Entry", 0, "ENTRY", None, None) in summary
        assert (3, "Exit", "RETURN", None, None) in summary
        assert (5, "Exit", "RETURN", None, None) in summary

    def test_if_has_one_true_and_one_false_edge(self):
        program = load_program("branch")
        body = method(program, "Main", "refine").body
        cfg = make_cfg(program, body, ExceptionMode.NULL)
        out = cfg.out_edges(body.stmts[1])
        assert sorted((e.kind.value, e.target.index) for e in out) == [("IF_FALSE", 2), ("IF_TRUE", 4)]

    def test_goto_and_fall_through(self):
        program = load_program("branch")
        body = method(program, "Main", "compute").body
        summary = make_cfg(program, body, ExceptionMode.NULL).edge_summary()
        assert (4, 6, "GOTO", None, None) in summary
        assert (3, 4, "FALL_THROUGH", None, None) in summary
        assert (4, 5, "FALL_THROUGH", None, None) not in summary

    def test_switch_edges(self):
        program = load_program("switch")
        body = method(program, "Main", "choose").body
        cfg = make_cfg(program, body, ExceptionMode.NULL)
        out = [(e.kind, e.case_value, e.target.index) for e in cfg.out_edges(body.stmts[0])]
        assert sorted(out, key=lambda t: t[2]) == [(EdgeKind.SWITCH_CASE, 1, 1), (EdgeKind.SWITCH_CASE, 5, 3),
                                                  (EdgeKind.SWITCH_DEFAULT, None, 5)]

    def test_loop_back_edge(self):
        program = load_program("loop")
        body = method(program, "Main", "loop").body
        cfg = make_cfg(program, body, ExceptionMode.NULL)
        head = body.stmts[4]
        assert body.stmts[7] in cfg.predecessors(head)
        assert body.stmts[3] in cfg.predecessors(head)

    def test_edge_labels(self):
        program = load_program("switch")
        body = method(program, "Main", "choose").body
        cfg = make_cfg(program, body, ExceptionMode.NULL)
        labels = {e.label() for e in cfg.out_edges(body.stmts[0])}
        assert labels == {"SWITCH_CASE(1)", "SWITCH_CASE(5)", "SWITCH_DEFAULT"}

    def test_duplicate_edge_ignored(self):
        program = load_program("branch")
        body = method(program, "Main", "refine").body
        cfg = make_cfg(program, body, ExceptionMode.NULL)
        before = len(cfg.edges)
        assert not cfg.add_edge(CFGEdge(cfg.entry, body.stmts[0], EdgeKind.ENTRY))
        assert len(cfg.edges) == before

    def test_node_order(self):
        program = load_program("loop")
        body = method(program, "Main", "loop").body
        cfg = make_cfg(program, body, ExceptionMode.NULL)
        assert cfg.nodes[0] is cfg.entry and cfg.nodes[-1] is cfg.exit
        assert len(cfg) == len(body.stmts) + 2
        assert str(cfg.entry) == "Entry" and str(cfg.exit) == "Exit"


class TestExceptionalEdges:

    def test_null_mode_has_no_exceptional_edges(self):
        program = load_program("exceptions")
        body = method(program, "Main", "main").body
        cfg = make_cfg(program, body, ExceptionMode.NULL)
        assert exceptional(cfg) == set()
        assert cfg.out_edges(body.stmts[4]) == []

    def test_explicit_mode_links_throw_to_handler(self):
        program = load_program("exceptions")
        body = method(program, "Main", "main").body
        cfg = make_cfg(program, body, ExceptionMode.EXPLICIT)
        assert exceptional(cfg) == {(4, 5, "CAUGHT_EXCEPTION", None, "MyError")}

    def test_all_mode_adds_implicit_exceptions(self):
        program = load_program("exceptions")
        body = method(program, "Main", "main").body
        cfg = make_cfg(program, body, ExceptionMode.ALL)
        assert exceptional(cfg) == {(4, 5, "CAUGHT_EXCEPTION", None, "MyError"),
                                    (2, 8, "CAUGHT_EXCEPTION", None, "ArithmeticException")}
        caught = [e for e in cfg.out_edges(body.stmts[2]) if e.kind is EdgeKind.CAUGHT_EXCEPTION]
        assert caught[0].label() == "CAUGHT_EXCEPTION(ArithmeticException)"

    def test_uncaught_throw_goes_to_exit(self):
        program = load_program("exceptions")
        body = method(program, "Main", "risky").body
        cfg = make_cfg(program, body, ExceptionMode.EXPLICIT)
        assert isinstance(body.stmts[4], Throw)
        assert [(e.kind, e.target) for e in cfg.out_edges(body.stmts[4])] == [
            (EdgeKind.UNCAUGHT_EXCEPTION, cfg.exit)]

    def test_implicit_null_pointer_is_uncaught(self):
        program = load_program("fields_arrays")
        body = method(program, "Main", "main").body
        cfg = make_cfg(program, body, ExceptionMode.ALL)
        store = body.stmts[4]
        kinds = {e.kind for e in cfg.out_edges(store)}
        assert kinds == {EdgeKind.FALL_THROUGH, EdgeKind.UNCAUGHT_EXCEPTION}

    def test_exception_mode_requires_throw_result(self):
        program = load_program("exceptions")
        body = method(program, "Main", "main").body
        with pytest.raises(CFGError):
            build_cfg(body, program.hierarchy, ExceptionMode.EXPLICIT, None)

    @pytest.mark.parametrize("name", CORPUS)
    def test_modes_are_monotone(self, name):
        program = load_program(name)
        for body in program.bodies():
            null = set(make_cfg(program, body, ExceptionMode.NULL).edge_summary())
            explicit = set(make_cfg(program, body, ExceptionMode.EXPLICIT).edge_summary())
            everything = set(make_cfg(program, body, ExceptionMode.ALL).edge_summary())
            assert null <= explicit <= everything

    @pytest.mark.parametrize("name", CORPUS)
    def test_edges_connect_graph_nodes(self, name):
        program = load_program(name)
        for body in program.bodies():
            cfg = make_cfg(program, body, ExceptionMode.ALL)
            nodes = set(cfg.nodes)
            for edge in cfg.edges:
                assert edge.source in nodes and edge.target in nodes
                assert edge.target in cfg.successors(edge.source)
                assert edge.source in cfg.predecessors(edge.target)
            assert cfg.in_edges(cfg.entry) == []
            assert cfg.out_edges(cfg.exit) == []


class TestThrowAnalysis:

    def test_explicit_only(self):
        body = method(load_program("exceptions"), "Main", "main").body
        result = throw_analysis(body, ExceptionMode.EXPLICIT)
        assert result.mode is ExceptionMode.EXPLICIT
        assert result.explicit_of(body.stmts[4]) == frozenset({ClassType("MyError")})
        assert result.implicit_of(body.stmts[2]) == frozenset()

    def test_all_includes_implicit(self):
        body = method(load_program("exceptions"), "Main", "main").body
        result = throw_analysis(body, ExceptionMode.ALL)
        assert result.mode is ExceptionMode.ALL
        assert result.implicit_of(body.stmts[2]) == frozenset({ARITHMETIC_EXCEPTION})
        assert result.may_throw(body.stmts[2], ExceptionMode.EXPLICIT) == frozenset()
        assert result.may_throw(body.stmts[2], ExceptionMode.NULL) == frozenset()

    def test_instance_call_may_throw_null_pointer(self):
        body = method(load_program("box"), "Main", "main").body
        result = throw_analysis(body)
        invoke = body.stmts[4]
        assert result.implicit_of(invoke) == frozenset({NULL_POINTER_EXCEPTION})

    @pytest.mark.parametrize("text, expected", [
        (None, ExceptionMode.NULL), ("null", ExceptionMode.NULL), ("EXPLICIT", ExceptionMode.EXPLICIT),
        ("all", ExceptionMode.ALL), (ExceptionMode.ALL, ExceptionMode.ALL)])
    def test_parse_mode(self, text, expected):
        assert ExceptionMode.parse(text) is expected

    def test_parse_unknown_mode(self):
        with pytest.raises(ValueError):
            ExceptionMode.parse("sometimes")

    def test_every_statement_is_a_node(self):
        program = load_program("exceptions")
        body = method(program, "Main", "main").body
        cfg = make_cfg(program, body, ExceptionMode.ALL)
        assert [n.index for n in cfg.nodes if isinstance(n, Stmt)] == list(range(len(body.stmts)))
