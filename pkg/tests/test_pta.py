"""
指针分析测试：与参考 Andersen 实现比对、上下文敏感、堆模型与求解器 API
"""
import threading

import pytest

from src.domain.errors import PluginError, UnreachableMethodError, WorklistLimitError
from src.domain.ir.stmts import Copy, New
from src.domain.ir.types import ClassType, STRING
from src.domain.plugin.base import Plugin
from src.domain.pta import (EMPTY_CONTEXT, ConstantObj, HeapModel, MergedObj, MockObj, NewObj, Solver,
                            make_selector)
from tests.oracles import AndersenOracle
from tests.support import CORPUS, load_program, method, var

SELECTORS = ["1-call", "2-call", "1-obj", "2-obj", "1-type", "2-type"]


def solve(program, selector="ci", **kwargs):
    return Solver(program, make_selector(selector), **kwargs).solve()


def alloc(program, class_name, method_name, var_name):
    """方法中给 var_name 赋值的 new 语句对应的对象"""
    decl = method(program, class_name, method_name)
    news = [s for s in decl.body.stmts if isinstance(s, New) and s.lhs.name == var_name]
    assert len(news) == 1
    return NewObj(news[0], decl.signature)


def pts(program, result, class_name, method_name, var_name):
    return set(result.ci_points_to(var(program, class_name, method_name, var_name)))


def cs_var_of(result, v):
    matches = [cs for cs in result.cs_vars() if cs.var == v]
    assert len(matches) == 1
    return matches[0]


class TestAgainstOracle:

    @pytest.mark.parametrize("name", CORPUS)
    @pytest.mark.parametrize("type_filter", [True, False])
    def test_insensitive_matches_oracle(self, name, type_filter):
        program = load_program(name)
        result = solve(program, type_filter=type_filter)
        oracle = AndersenOracle(program, type_filter=type_filter).solve()
        actual = {v: set(objs) for v in result.ci_vars() if (objs := result.ci_points_to(v))}
        assert actual == oracle.var_points_to()
        assert result.reachable_methods() == oracle.reachable
        assert result.call_edges() == oracle.edges

    @pytest.mark.parametrize("name", CORPUS)
    @pytest.mark.parametrize("selector", SELECTORS)
    def test_sensitive_is_subset_of_insensitive(self, name, selector):
        program = load_program(name)
        result = solve(program, selector)
        oracle = AndersenOracle(program).solve()
        for v in result.ci_vars():
            assert set(result.ci_points_to(v)) <= oracle.points_to(v), repr(v)
        assert result.reachable_methods() <= oracle.reachable
        assert result.call_edges() <= oracle.edges

    @pytest.mark.parametrize("name", CORPUS)
    def test_metrics(self, name):
        program = load_program(name)
        metrics = solve(program).metrics()
        oracle = AndersenOracle(program).solve()
        assert metrics == {
            "varpt": sum(len(objs) for objs in oracle.var_points_to().values()),
            "reach": len(oracle.reachable),
            "edges": len(oracle.edges),
        }


class TestContextSensitivity:

    @pytest.mark.parametrize("selector, split", [
        ("ci", False), ("1-call", True), ("1-obj", True), ("1-type", False), ("2-obj", True)])
    def test_identity_calls(self, selector, split):
        program = load_program("identity")
        result = solve(program, selector)
        o1, o2 = alloc(program, "Main", "main", "o1"), alloc(program, "Main", "main", "o2")
        r1 = pts(program, result, "Main", "main", "r1")
        r2 = pts(program, result, "Main", "main", "r2")
        if split:
            assert (r1, r2) == ({o1}, {o2})
        else:
            assert r1 == r2 == {o1, o2}

    @pytest.mark.parametrize("selector", ["1-call", "1-obj"])
    def test_container_fields(self, selector):
        program = load_program("box")
        o1 = alloc(program, "Main", "main", "o1")
        assert pts(program, solve(program, selector), "Main", "main", "r1") == {o1}
        assert len(pts(program, solve(program), "Main", "main", "r1")) == 2

    def test_callee_analysed_per_context(self):
        program = load_program("identity")
        result = solve(program, "1-call")
        id_method = method(program, "Id", "id")
        contexts = [m.context for m in result.cs_reachable_methods() if m.method is id_method]
        assert len(contexts) == 2 and len(set(contexts)) == 2

    def test_heap_context(self):
        program = load_program("box")
        result = solve(program, "2-obj")
        contexts = {o.context for cs_var in result.cs_vars() for o in result.points_to(cs_var)}
        assert contexts == {EMPTY_CONTEXT}

    @pytest.mark.parametrize("text, described", [
        ("ci", "ci"), (None, "ci"), ("0-call", "ci"), ("1-call", "1-call;heap:0"),
        ("2-obj", "2-obj;heap:1"), ("2-type", "2-type;heap:1"), ("1-object", "1-obj;heap:0")])
    def test_selector_names(self, text, described):
        assert make_selector(text).describe() == described

    def test_explicit_heap_length(self):
        assert make_selector("2-call", k_heap=2).describe() == "2-call;heap:2"

    @pytest.mark.parametrize("text", ["bogus", "k-obj", "1-field"])
    def test_unknown_selector(self, text):
        with pytest.raises(ValueError):
            make_selector(text)


class TestStatementsAndHeap:

    def test_field_chains_and_arrays(self):
        program = load_program("fields_arrays")
        result = solve(program)
        b = alloc(program, "Main", "main", "b")
        assert pts(program, result, "Main", "main", "x") == {b}
        assert pts(program, result, "Main", "main", "z") == {alloc(program, "Main", "main", "a"),
                                                            alloc(program, "Main", "main", "n1")}

    def test_casts_filter_objects(self):
        program = load_program("casts")
        result = solve(program)
        dog, cat = alloc(program, "Main", "main", "d"), alloc(program, "Main", "main", "c")
        assert pts(program, result, "Main", "main", "e") == {dog, cat}
        assert pts(program, result, "Main", "main", "a") == {dog, cat}
        assert pts(program, result, "Main", "main", "d2") == {dog}

    def test_static_fields_and_recursion(self):
        program = load_program("statics")
        result = solve(program)
        x, y = alloc(program, "Main", "main", "x"), alloc(program, "Main", "main", "y")
        assert pts(program, result, "Main", "main", "z") == {x}
        assert pts(program, result, "Main", "main", "w") == {x, y}
        assert method(program, "Main", "pick") in result.reachable_methods()

    def test_virtual_and_special_calls(self):
        program = load_program("dispatch")
        result = solve(program)
        assert pts(program, result, "Main", "main", "t") == {alloc(program, "Circle", "init", "t")}
        reachable = {str(m.signature) for m in result.reachable_methods()}
        assert {"Circle.area()", "Circle.describe()", "Square.describe()", "Base.self()",
                "Circle.init()"} <= reachable
        assert "Square.area()" not in reachable
        me = pts(program, result, "Main", "main", "me")
        assert me == {alloc(program, "Main", "main", "b")}

    def test_string_constants_are_interned(self):
        program = load_program("strings")
        result = solve(program)
        hello = ConstantObj(STRING, "hello")
        assert pts(program, result, "Main", "main", "a") == {hello}
        assert pts(program, result, "Main", "main", "b") == {hello}
        assert pts(program, result, "Main", "main", "o") == {hello}
        assert pts(program, result, "Main", "main", "c") == {ConstantObj(STRING, "world")}

    def test_merged_string_objects(self):
        program = load_program("strings")
        result = solve(program, heap_model=HeapModel(merge_types=["String"]))
        merged = MergedObj(STRING)
        for name in ("a", "b", "c", "d"):
            assert pts(program, result, "Main", "main", name) == {merged}
        members = [o for o in result.objects() if isinstance(o, MergedObj)][0].members
        assert ConstantObj(STRING, "hello") in members and ConstantObj(STRING, "world") in members

    def test_pointer_flow_graph(self):
        program = load_program("pfg_example")
        result = solve(program)
        b = cs_var_of(result, var(program, "Main", "main", "b"))
        x = cs_var_of(result, var(program, "Main", "main", "x"))
        assert result.pfg.has_path(b, x)
        assert not result.pfg.has_path(x, b)
        assert pts(program, result, "Main", "main", "x") == {alloc(program, "Main", "main", "b")}

    def test_mock_entry_receiver(self):
        program = load_program("box")
        getter = method(program, "Box", "get")
        result = solve(program, entry_methods=[getter], mock_entry_receivers=True)
        receiver = MockObj("EntryReceiver", None, ClassType("Box"))
        assert set(result.ci_points_to(getter.body.this_var)) == {receiver}
        assert result.reachable_methods() == {getter}

    def test_heap_model_identity(self):
        program = load_program("identity")
        new = [s for s in method(program, "Main", "main").body.stmts if isinstance(s, New)][0]
        heap = HeapModel()
        signature = method(program, "Main", "main").signature
        assert heap.get_obj(new, signature) is heap.get_obj(new, signature)
        assert heap.get_constant_obj("k") is heap.get_constant_obj("k")
        assert heap.get_mock_obj("M", None, STRING) is heap.get_mock_obj("M", None, STRING)
        assert len(heap.objects()) == 3
        with pytest.raises(ValueError):
            MockObj("", None, STRING)


class _Recorder(Plugin):
    name = "recorder"

    def __init__(self, action):
        self.action = action
        self.solver = None
        self.errors = []

    def on_start(self, solver):
        self.solver = solver

    def on_new_method(self, method):
        self.action(self, method)


class TestSolverApi:

    def test_worklist_limit(self):
        program = load_program("fields_arrays")
        with pytest.raises(WorklistLimitError) as info:
            solve(program, max_worklist_ops=3)
        assert info.value.limit == 3

    def test_stats_are_recorded(self):
        program = load_program("box")
        solver = Solver(program)
        result = solver.solve()
        assert result.stats == solver.stats.to_dict()
        assert result.stats["method_events"] == len(result.cs_reachable_methods())
        assert result.stats["call_edge_events"] == len(result.cs_call_edges())
        assert result.stats["dispatch_failures"] == 0

    def test_api_closed_after_finish(self):
        program = load_program("box")
        solver = Solver(program)
        solver.solve()
        with pytest.raises(PluginError):
            solver.add_var_points_to(EMPTY_CONTEXT, var(program, "Main", "main", "o1"), [])

    def test_add_stmts_requires_reachable_method(self):
        program = load_program("box")
        solver = Solver(program)
        unreachable = solver.cs_manager.get_cs_method(EMPTY_CONTEXT, method(program, "Box", "get"))
        with pytest.raises(UnreachableMethodError):
            solver.add_stmts(unreachable, [])

    def test_synthetic_statements(self):
        program = load_program("strings")
        main = method(program, "Main", "main")
        o, c = main.body.get_var("o"), main.body.get_var("c")

        def inject(plugin, cs_method):
            if cs_method.method is main:
                plugin.solver.add_stmts(cs_method, [Copy(100, o, c)])

        result = Solver(program, plugins=[_Recorder(inject)]).solve()
        assert set(result.ci_points_to(o)) == {ConstantObj(STRING, "hello"), ConstantObj(STRING, "world")}

    def test_reentrant_solve_rejected(self):
        program = load_program("box")
        with pytest.raises(PluginError):
            Solver(program, plugins=[_Recorder(lambda plugin, m: plugin.solver.solve())]).solve()

    def test_other_threads_rejected(self):
        program = load_program("box")
        o1 = var(program, "Main", "main", "o1")

        def from_thread(plugin, cs_method):
            def attempt():
                try:
                    plugin.solver.add_var_points_to(EMPTY_CONTEXT, o1, [])
                except PluginError as e:
                    plugin.errors.append(e)
            worker = threading.Thread(target=attempt)
            worker.start()
            worker.join()

        recorder = _Recorder(from_thread)
        Solver(program, plugins=[recorder]).solve()
        assert recorder.errors

    def test_callers_of(self):
        program = load_program("identity")
        solver = Solver(program)
        solver.solve()
        callers = solver.get_callers_of(method(program, "Id", "id"))
        assert sorted(site.call_site.index for site in callers) == [4, 5]
