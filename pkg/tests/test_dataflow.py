"""
数据流框架测试：常量传播、活跃变量与死代码检测
"""
import pytest

from src.domain.cfg import ExceptionMode, build_cfg, throw_analysis
from src.domain.dataflow import (CPFact, ConstantPropagation, DataflowSolver, LiveVariableAnalysis, SetFact,
                                 Value, detect_dead_code)
from src.domain.dataflow.constprop import condition_value, evaluate_binary, meet_value
from src.domain.errors import DataflowDivergenceError
from src.domain.ir.stmts import BinaryOp
from tests.oracles import round_robin
from tests.support import CORPUS, load_program, method


def cfg_of(program, class_name, method_name, mode=ExceptionMode.NULL):
    body = method(program, class_name, method_name).body
    throw_result = None if mode is ExceptionMode.NULL else throw_analysis(body, mode)
    return build_cfg(body, program.hierarchy, mode, throw_result)


def solve(analysis, cfg):
    return DataflowSolver().solve(analysis, cfg)


class TestValueLattice:

    def test_meet(self):
        three = Value.make_constant(3)
        assert meet_value(Value.UNDEF, three) == three
        assert meet_value(three, Value.make_constant(3)) == three
        assert meet_value(three, Value.make_constant(4)) == Value.NAC
        assert meet_value(Value.NAC, Value.UNDEF) == Value.NAC

    def test_boolean_and_int_constants_differ(self):
        assert Value.make_constant(1) != Value.make_constant(True)
        assert repr(Value.make_constant(True)) == "true"
        assert repr(Value.NAC) == "NAC"

    def test_division_by_zero_is_undefined(self):
        program = load_program("exceptions")
        cfg = cfg_of(program, "Main", "main")
        result = solve(ConstantPropagation(), cfg)
        c = cfg.body.get_var("c")
        assert result.get_out_fact(cfg.body.stmts[2]).get(c) == Value.UNDEF

    def test_integer_arithmetic_wraps(self):
        assert evaluate_binary(BinaryOp.ADD, 2 ** 31 - 1, 1) == -(2 ** 31)
        assert evaluate_binary(BinaryOp.DIV, -7, 2) == -3
        assert evaluate_binary(BinaryOp.REM, -7, 2) == -1


class TestConstantPropagation:

    def test_merge_of_distinct_constants_is_nac(self):
        program = load_program("branch")
        cfg = cfg_of(program, "Main", "compute")
        result = solve(ConstantPropagation(), cfg)
        body = cfg.body
        after = result.get_out_fact(body.stmts[7])
        assert after.get(body.get_var("x")) == Value.NAC
        assert after.get(body.get_var("y")) == Value.make_constant(3)
        assert after.get(body.get_var("z")) == Value.NAC
        assert after.get(body.get_var("p")) == Value.NAC

    def test_parameters_start_as_nac(self):
        program = load_program("branch")
        cfg = cfg_of(program, "Main", "refine")
        result = solve(ConstantPropagation(), cfg)
        p = cfg.body.get_var("p")
        assert result.get_out_fact(cfg.entry).get(p) == Value.NAC
        assert result.get_in_fact(cfg.body.stmts[0]).get(p) == Value.NAC

    def test_edge_refinement(self):
        program = load_program("branch")
        cfg = cfg_of(program, "Main", "refine")
        q = cfg.body.get_var("q")
        refined = solve(ConstantPropagation(edge_refine=True), cfg)
        plain = solve(ConstantPropagation(edge_refine=False), cfg)
        assert refined.get_out_fact(cfg.body.stmts[4]).get(q) == Value.make_constant(3)
        assert plain.get_out_fact(cfg.body.stmts[4]).get(q) == Value.NAC
        assert refined.get_out_fact(cfg.body.stmts[2]).get(q) == Value.NAC

    def test_loop_reaches_fixpoint(self):
        program = load_program("loop")
        cfg = cfg_of(program, "Main", "loop")
        analysis = ConstantPropagation()
        solver = DataflowSolver()
        result = solver.solve(analysis, cfg)
        body = cfg.body
        exit_fact = result.get_in_fact(body.stmts[8])
        assert exit_fact.get(body.get_var("s")) == Value.NAC
        assert exit_fact.get(body.get_var("one")) == Value.make_constant(1)
        assert solver.is_fixpoint(analysis, result)

    def test_condition_value(self):
        program = load_program("branch")
        cfg = cfg_of(program, "Main", "compute")
        result = solve(ConstantPropagation(), cfg)
        body = cfg.body
        assert condition_value(body.stmts[9], result.get_in_fact(body.stmts[9])) is True
        assert condition_value(body.stmts[2], result.get_in_fact(body.stmts[2])) is None

    def test_format_lines(self):
        program = load_program("branch")
        cfg = cfg_of(program, "Main", "refine")
        lines = solve(ConstantPropagation(), cfg).format_lines()
        assert len(lines) == len(cfg.body.stmts)
        assert lines[0] == "0 | three = 3; | IN: {p=NAC} | OUT: {p=NAC, three=3}"


class TestLiveVariables:

    def test_liveness(self):
        program = load_program("branch")
        cfg = cfg_of(program, "Main", "compute")
        result = solve(LiveVariableAnalysis(), cfg)
        body = cfg.body
        names = lambda fact: sorted(v.name for v in fact)
        assert names(result.get_out_fact(body.stmts[8])) == ["one", "z"]
        assert names(result.get_in_fact(body.stmts[12])) == ["z"]
        assert names(result.get_out_fact(cfg.entry)) == ["p"]

    def test_set_fact_operations(self):
        fact = SetFact([1, 2])
        assert fact.union(SetFact([2, 3]))
        assert not fact.union(SetFact([3]))
        assert fact.remove(1) and not fact.remove(1)
        assert repr(fact) == "{2, 3}"


class TestDeadCode:

    def _dead(self, program, class_name, method_name):
        cfg = cfg_of(program, class_name, method_name)
        constants = solve(ConstantPropagation(), cfg)
        live = solve(LiveVariableAnalysis(), cfg)
        return [s.index for s in detect_dead_code(cfg, constants, live)]

    def test_unreachable_branch_and_useless_assignment(self):
        assert self._dead(load_program("branch"), "Main", "compute") == [8, 10, 11]

    def test_constant_switch(self):
        program = load_program("switch")
        assert self._dead(program, "Main", "fixed") == [2, 3, 6, 7]
        assert self._dead(program, "Main", "choose") == []

    def test_side_effects_are_kept(self):
        # c = a / b 的结果不再使用，但除法可能抛异常
        assert 2 not in self._dead(load_program("exceptions"), "Main", "main")

    def test_loop_has_no_dead_code(self):
        assert self._dead(load_program("loop"), "Main", "loop") == []


class TestSolver:

    @pytest.mark.parametrize("name", CORPUS)
    @pytest.mark.parametrize("mode", [ExceptionMode.NULL, ExceptionMode.ALL])
    def test_matches_round_robin(self, name, mode):
        program = load_program(name)
        solver = DataflowSolver()
        for decl in program.methods():
            if decl.body is None or program.get_class(decl.declaring_class).is_builtin:
                continue
            throw_result = None if mode is ExceptionMode.NULL else throw_analysis(decl.body, mode)
            cfg = build_cfg(decl.body, program.hierarchy, mode, throw_result)
            for analysis in (ConstantPropagation(), LiveVariableAnalysis()):
                result = solver.solve(analysis, cfg)
                assert result.as_index_map() == round_robin(analysis, cfg), f"{decl} {analysis.ID}"
                assert solver.is_fixpoint(analysis, result)

    def test_iteration_ceiling(self):
        program = load_program("loop")
        cfg = cfg_of(program, "Main", "loop")

        class Diverging(ConstantPropagation):
            ID = "diverging"

            def __init__(self):
                super().__init__()
                self.counter = 0

            def transfer_node(self, stmt, in_fact, out_fact):
                self.counter += 1
                return out_fact.update(stmt, Value.make_constant(self.counter))

        with pytest.raises(DataflowDivergenceError) as info:
            DataflowSolver(iteration_factor=2).solve(Diverging(), cfg)
        assert info.value.analysis_id == "diverging"

    def test_iteration_factor_must_be_positive(self):
        with pytest.raises(ValueError):
            DataflowSolver(0)

    def test_cp_fact_equality_ignores_undef(self):
        fact = CPFact()
        program = load_program("loop")
        n = method(program, "Main", "loop").body.get_var("n")
        assert not fact.update(n, Value.UNDEF)
        assert fact == CPFact()
        assert fact.update(n, Value.NAC)
        assert fact != CPFact()
