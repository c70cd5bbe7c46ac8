"""
IR 解析与打印测试
"""
import pytest

from src.domain.errors import InheritanceCycleError, IRResolutionError, IRSyntaxError
from src.domain.ir.stmts import Catch, Goto, If, Invoke, InvokeKind, LoadField, New, Return, Switch
from src.domain.ir.types import ArrayType, ClassType, INT, OBJECT
from src.infrastructure.ir_parser import IRParser, parse_program
from src.infrastructure.ir_printer import format_class, format_method, format_program
from tests.support import CORPUS, load_program, method, program_path


class TestCorpusParsing:
    """语料中的每个程序都能完整解析"""

    @pytest.mark.parametrize("name", CORPUS)
    def test_parses_with_single_entry(self, name):
        program = load_program(name)
        entries = [str(m.signature) for m in program.entry_methods]
        assert entries == ["Main.main()"]

    @pytest.mark.parametrize("name", CORPUS)
    def test_statement_indices_are_dense(self, name):
        program = load_program(name)
        for body in program.bodies():
            assert [s.index for s in body.stmts] == list(range(len(body.stmts)))
            for stmt in body.stmts:
                assert program.container_of(stmt).body is body

    def test_builtin_classes_are_flagged(self):
        program = load_program("taint")
        assert program.get_class("Object").is_builtin
        assert program.get_class("String").is_builtin
        assert [c.name for c in program.user_classes()] == ["Source", "Sink", "Main"]

    def test_labels_resolve_to_indices(self):
        program = load_program("branch")
        body = method(program, "Main", "compute").body
        branch = body.stmts[2]
        assert isinstance(branch, If) and branch.target == 5
        assert isinstance(body.stmts[4], Goto) and body.stmts[4].target == 6

    def test_switch_cases(self):
        body = method(load_program("switch"), "Main", "choose").body
        switch = body.stmts[0]
        assert isinstance(switch, Switch)
        assert switch.cases == ((1, 1), (5, 3))
        assert switch.default_target == 5

    def test_invoke_kinds_and_refs(self):
        program = load_program("dispatch")
        body = method(program, "Main", "main").body
        invokes = [s for s in body.stmts if isinstance(s, Invoke)]
        assert [i.kind for i in invokes] == [InvokeKind.VIRTUAL, InvokeKind.VIRTUAL, InvokeKind.VIRTUAL,
                                             InvokeKind.VIRTUAL, InvokeKind.SPECIAL]
        assert str(invokes[0].method_ref) == "Shape.area()"
        assert str(invokes[3].method_ref) == "Base.self()"

    def test_this_is_implicit_for_instance_methods(self):
        program = load_program("dispatch")
        body = method(program, "Base", "self").body
        assert body.this_var is not None and body.this_var.type == ClassType("Base")
        assert body.return_vars == [body.this_var]
        assert method(program, "Main", "main").body.this_var is None

    def test_field_refs_use_declaring_class(self):
        program = load_program("dispatch")
        load = [s for s in method(program, "Main", "main").body.stmts if isinstance(s, LoadField)][0]
        assert str(load.field) == "Base.tag"
        assert not load.is_static

    def test_static_field_access(self):
        program = load_program("statics")
        body = method(program, "Registry", "get").body
        assert isinstance(body.stmts[0], LoadField) and body.stmts[0].is_static
        assert body.stmts[0].base is None

    def test_array_types(self):
        body = method(load_program("fields_arrays"), "Main", "main").body
        arr = body.get_var("arr")
        assert arr.type == ArrayType(OBJECT)
        allocs = [s for s in body.stmts if isinstance(s, New)]
        assert allocs[-1].type == ArrayType(OBJECT)

    def test_exception_table(self):
        body = method(load_program("exceptions"), "Main", "main").body
        assert [(e.try_start, e.try_end, e.handler_index, str(e.catch_type)) for e in body.exception_table] == [
            (2, 5, 8, "ArithmeticException"), (2, 5, 5, "MyError")]
        assert [str(e.catch_type) for e in body.handlers_covering(4)] == ["ArithmeticException", "MyError"]
        assert body.handlers_covering(6) == []
        assert isinstance(body.stmts[5], Catch) and isinstance(body.stmts[8], Catch)

    def test_params_and_types(self):
        body = method(load_program("statics"), "Main", "pick").body
        assert [p.name for p in body.params] == ["a", "b", "n"]
        assert body.params[2].type == INT


class TestPrinter:
    """打印结果可以被重新解析，且再次打印不变"""

    @pytest.mark.parametrize("name", CORPUS)
    def test_round_trip(self, name):
        first = format_program(load_program(name))
        reparsed = parse_program(first, f"{name}.printed")
        assert format_program(reparsed) == first

    @pytest.mark.parametrize("name", CORPUS)
    def test_round_trip_preserves_statements(self, name):
        original = load_program(name)
        reparsed = parse_program(format_program(original))
        for cls in original.user_classes():
            for decl in cls.methods:
                other = reparsed.get_class(cls.name).get_method(decl.signature.subsignature)
                assert other is not None
                if decl.body is None:
                    assert other.body is None
                    continue
                assert [str(s) for s in other.body.stmts] == [str(s) for s in decl.body.stmts]

    def test_jump_targets_printed_as_index_labels(self):
        lines = format_method(method(load_program("branch"), "Main", "compute"))
        assert any(line.strip() == "if p > one goto L5;" for line in lines)
        assert any(line.strip().startswith("L5: x = two;") for line in lines)

    def test_catch_entries_printed(self):
        lines = format_method(method(load_program("exceptions"), "Main", "main"))
        assert "catch (MyError, L2, L5, L5);" in [line.strip() for line in lines]

    def test_abstract_method_and_interface(self):
        program = load_program("dispatch")
        text = format_class(program.get_class("Base"))
        assert text.startswith("abstract class Base implements Shape")
        assert "abstract Object describe();" in text
        assert format_class(program.get_class("Shape")).startswith("interface Shape")

    def test_builtins_omitted_by_default(self):
        program = load_program("strings")
        assert "class String" not in format_program(program)
        assert "class String" in format_program(program, include_builtin=True)


class TestErrors:
    """语法与名字解析错误"""

    def test_syntax_error_has_position(self):
        text = ("class Main {\n"
                "    static void main() {\n"
                "        int x;\n"
                "        x = 1\n"
                "        return;\n"
                "    }\n"
                "}\n")
        with pytest.raises(IRSyntaxError) as info:
            parse_program(text, "broken.ir")
        assert info.value.line == 4
        assert info.value.source == "broken.ir"

    def test_undeclared_variable(self):
        text = ("class Main {\n"
                "    static void main() {\n"
                "        y = 1;\n"
                "        return;\n"
                "    }\n"
                "}\n")
        with pytest.raises(IRResolutionError) as info:
            parse_program(text)
        assert info.value.name == "y"
        assert info.value.line == 3

    def test_unknown_label(self):
        text = ("class Main {\n"
                "    static void main() {\n"
                "        goto L9;\n"
                "    }\n"
                "}\n")
        with pytest.raises(IRResolutionError) as info:
            parse_program(text)
        assert info.value.name == "L9"

    def test_unknown_type(self):
        text = "class Main {\n    Missing m;\n}\n"
        with pytest.raises(IRResolutionError) as info:
            parse_program(text)
        assert info.value.name == "Missing"

    def test_inheritance_cycle(self):
        text = "class A extends B {\n}\nclass B extends A {\n}\n"
        with pytest.raises(InheritanceCycleError) as info:
            parse_program(text)
        assert set(info.value.cycle) == {"A", "B"}
        assert info.value.cycle[0] == info.value.cycle[-1]

    def test_cannot_instantiate_interface(self):
        text = ("interface I {\n}\n"
                "class Main {\n"
                "    static void main() {\n"
                "        I i;\n"
                "        i = new I;\n"
                "        return;\n"
                "    }\n"
                "}\n")
        with pytest.raises(IRResolutionError):
            parse_program(text)

    def test_return_must_match_signature(self):
        text = ("class Main {\n"
                "    static int f() {\n"
                "        return;\n"
                "    }\n"
                "}\n")
        with pytest.raises(IRResolutionError):
            parse_program(text)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            IRParser().parse_files([tmp_path / "absent.ir"])

    def test_multiple_sources_share_namespace(self):
        library = "class Lib {\n    static Object make() {\n        Object o;\n        o = new Object;\n        return o;\n    }\n}\n"
        client = ("class Main {\n    static void main() {\n        Object x;\n"
                  "        x = invokestatic Lib.make();\n        return;\n    }\n}\n")
        program = IRParser().parse_sources([("lib.ir", library), ("main.ir", client)])
        assert program.get_class("Lib") is not None
        assert [str(m.signature) for m in program.entry_methods] == ["Main.main()"]

    def test_duplicate_class_across_files(self):
        with pytest.raises(IRResolutionError):
            IRParser().parse_files([program_path("box"), program_path("identity")])

    def test_return_statement_kinds(self):
        body = method(load_program("box"), "Box", "get").body
        assert isinstance(body.stmts[-1], Return)
        assert body.stmts[-1].value.name == "r"


TRY_TO_END = ("class Main {\n"
              "    static int div(int a, int b) {\n"
              "        int c;\n"
              "        int zero;\n"
              "        ArithmeticException e;\n"
              "        goto L3;\n"
              "    L1: e = @catch;\n"
              "        zero = 0;\n"
              "        return zero;\n"
              "    L3: c = a / b;\n"
              "        return c;\n"
              "    END:\n"
              "        catch (ArithmeticException, L3, END, L1);\n"
              "    }\n"
              "}\n")


class TestTrailingLabel:
    """最后一条语句之后的标签可作为 try 区间终点"""

    def test_try_range_reaches_last_statement(self):
        body = method(parse_program(TRY_TO_END), "Main", "div").body
        assert len(body.stmts) == 6
        assert [(e.try_start, e.try_end, e.handler_index, str(e.catch_type)) for e in body.exception_table] == [
            (4, 6, 1, "ArithmeticException")]
        assert [str(e.catch_type) for e in body.handlers_covering(5)] == ["ArithmeticException"]

    def test_printed_with_trailing_label(self):
        text = format_program(parse_program(TRY_TO_END))
        stripped = [line.strip() for line in text.splitlines()]
        assert "L6:" in stripped
        assert "catch (ArithmeticException, L4, L6, L1);" in stripped
        assert format_program(parse_program(text)) == text

    def test_trailing_label_is_not_a_jump_target(self):
        text = TRY_TO_END.replace("goto L3;", "goto END;")
        with pytest.raises(IRResolutionError) as info:
            parse_program(text)
        assert info.value.name == "END"

    def test_trailing_label_must_be_unique(self):
        text = TRY_TO_END.replace("L3: c = a / b;", "END: c = a / b;").replace("goto L3;", "goto END;")
        with pytest.raises(IRResolutionError) as info:
            parse_program(text)
        assert info.value.name == "END"
