"""Static diagnostics: greyed-out roots, missing inputs, type rules."""

from blockea.blocks import ProgramBuilder
from blockea.examples import build_simple_plotting
from blockea.validate import (
    DISCONNECTED_ROOT,
    MISSING_INPUT,
    TYPE_MISMATCH,
    has_errors,
    validate,
)


def test_dangling_crossover_root_is_warning_only():
    b = ProgramBuilder()
    b.block("crossover_one_point")
    diags = validate(b.build())
    assert [d.code for d in diags] == [DISCONNECTED_ROOT]
    assert not has_errors(diags)


def test_if_with_empty_condition_reports_missing_input():
    b = ProgramBuilder()
    b.block("if_else")
    diags = validate(b.build())
    assert [d.code for d in diags] == [MISSING_INPUT]
    assert diags[0].detail == "condition"
    assert has_errors(diags)


def test_simple_plotting_is_clean():
    assert validate(build_simple_plotting()) == []


def test_type_mismatch_on_programmatic_connection():
    b = ProgramBuilder()
    b.block(
        "print",
        inputs={"value": b.block(
            "population_size",
            inputs={"population": b.num(3)},  # Number into a Population port
        )},
    )
    diags = validate(b.build())
    codes = {d.code for d in diags}
    assert codes == {TYPE_MISMATCH}
    # the print port itself is fine: population_size outputs Number... but
    # print wants Text, so there are two mismatches here
    assert len(diags) == 2


def test_variable_type_conflict():
    b = ProgramBuilder()
    set_stmt = b.block("var_set_number", {"name": "x"}, {"value": b.num(1)})
    use_stmt = b.block(
        "print",
        inputs={"value": b.block(
            "text_of_individual",
            inputs={"individual": b.block("var_get_individual", {"name": "x"})},
        )},
    )
    b.chain([set_stmt, use_stmt])
    diags = validate(b.build())
    assert any(d.code == TYPE_MISMATCH and d.detail == "x" for d in diags)


def test_task_export_variables_join_the_type_check():
    b = ProgramBuilder()
    stmt = b.block(
        "run_tasks_sequential",
        {"export_var": "f", "collect_into": "results"},
        {"tasks": b.num(1)},
        body={"body": [b.block("var_set_number", {"name": "f"},
                               {"value": b.num(2)})]},
    )
    conflict = b.block(
        "var_set_number", {"name": "results"}, {"value": b.num(0)}
    )
    b.chain([stmt, conflict])
    diags = validate(b.build())
    assert any(d.code == TYPE_MISMATCH and d.detail == "results" for d in diags)


def test_deep_checks_skip_disconnected_fragments():
    b = ProgramBuilder()
    b.block("print", inputs={"value": b.text("ok")})
    b.block("crossover_one_point")  # empty ports, but not executable
    diags = validate(b.build())
    assert [d.code for d in diags] == [DISCONNECTED_ROOT]
    assert not has_errors(diags)
