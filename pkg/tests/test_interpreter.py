"""Execution semantics: values, control flow, runs, workers, halts."""

import threading
import time

import pytest

from blockea.blocks import ProgramBuilder
from blockea.errors import Cancelled, RuntimeHalt
from blockea.events import PlotPoint, Print, Record, RunFinished, RunStarted
from blockea.interpreter import (
    Interpreter,
    MAIN_RUN_ID,
    RunContext,
    Scope,
    interpret,
    InvalidProgram,
)
from blockea.rng import RandomSource
from blockea.runner import pool


def run_print_program(text_value, seed=0):
    b = ProgramBuilder()
    b.block("print", inputs={"value": b.text(text_value)})
    return interpret(b.build(), seed)


def test_print_constant():
    result = run_print_program("x")
    assert [e for e in result.events] == [Print(MAIN_RUN_ID, "x")]


def test_invalid_program_rejected():
    b = ProgramBuilder()
    b.block("if_else")
    with pytest.raises(InvalidProgram):
        interpret(b.build(), 0)


def eval_expr(builder, uid, seed=0):
    program = builder.build()
    interp = Interpreter(program)
    ctx = RunContext(run_id=-1, seed=seed, rng=RandomSource(seed),
                     emit=lambda e: None)
    return interp.eval_value(program.block(uid), ctx, Scope()), ctx


def test_literal_seven():
    b = ProgramBuilder()
    uid = b.num(7)
    value, _ = eval_expr(b, uid)
    assert value == 7.0


def test_random_degenerate_range():
    b = ProgramBuilder()
    uid = b.block("random_number", inputs={"low": b.num(3), "high": b.num(3)})
    value, _ = eval_expr(b, uid)
    assert value == 3.0


def test_random_die_frequencies():
    b = ProgramBuilder()
    uid = b.block("random_number", inputs={"low": b.num(1), "high": b.num(6)})
    program = b.build()
    interp = Interpreter(program)
    ctx = RunContext(run_id=-1, seed=5, rng=RandomSource(5), emit=lambda e: None)
    counts = {i: 0 for i in range(1, 7)}
    n = 100_000
    block = program.block(uid)
    scope = Scope()
    for _ in range(n):
        counts[int(interp.eval_value(block, ctx, scope))] += 1
    for face, count in counts.items():
        assert abs(count / n - 1 / 6) < 0.01, face


def test_random_bad_range_halts():
    b = ProgramBuilder()
    uid = b.block("random_number", inputs={"low": b.num(5), "high": b.num(2)})
    with pytest.raises(RuntimeHalt) as err:
        eval_expr(b, uid)
    assert err.value.reason == "BadRange"


def test_division_by_zero_halts():
    b = ProgramBuilder()
    uid = b.block("number_arith", {"op": "divide"},
                  {"first": b.num(1), "second": b.num(0)})
    with pytest.raises(RuntimeHalt) as err:
        eval_expr(b, uid)
    assert err.value.reason == "DivisionByZero"


def test_unbound_variable_halts():
    b = ProgramBuilder()
    b.block("print", inputs={"value": b.block(
        "text_of_number", inputs={"value": b.block(
            "var_get_number", {"name": "ghost"}
        )}
    )})
    with pytest.raises(RuntimeHalt) as err:
        interpret(b.build(), 0)
    assert err.value.reason == "UnboundVariable"


def test_if_takes_boolean_branch():
    b = ProgramBuilder()
    b.block(
        "if_else",
        inputs={"condition": b.block("bool_literal", {"value": "true"})},
        body={
            "then": [b.block("print", inputs={"value": b.text("A")})],
            "else": [b.block("print", inputs={"value": b.text("B")})],
        },
    )
    result = interpret(b.build(), 0)
    assert result.prints == ["A"]


def test_repeat_zero_never_runs_body():
    b = ProgramBuilder()
    b.block(
        "repeat_n",
        inputs={"times": b.num(0)},
        body={"body": [b.block("print", inputs={"value": b.text("never")})]},
    )
    assert interpret(b.build(), 0).prints == []


def test_non_integer_count_halts():
    b = ProgramBuilder()
    b.block("repeat_n", inputs={"times": b.num(2.5)}, body={"body": []})
    with pytest.raises(RuntimeHalt) as err:
        interpret(b.build(), 0)
    assert err.value.reason == "NotAnInteger"


def one_plus_one_ea(n=10):
    """(1+1)-EA on OneMax inside an aggregation loop."""
    b = ProgramBuilder()

    def get_x():
        return b.block("var_get_individual", {"name": "x"})

    init = b.block(
        "var_set_individual", {"name": "x"},
        {"value": b.block("individual_random",
                          inputs={"bit_length": b.num(n)})},
    )
    init_best = b.block(
        "var_set_number", {"name": "best"},
        {"value": b.block("fitness_onemax", inputs={"individual": get_x()})},
    )
    challenger = b.block(
        "var_set_individual", {"name": "y"},
        {"value": b.block(
            "mutate_per_bit",
            inputs={"individual": get_x(), "probability": b.num(1 / n)},
        )},
    )
    accept = b.block(
        "if_else",
        inputs={"condition": b.block(
            "compare", {"op": "ge"},
            {
                "first": b.block("fitness_onemax", inputs={
                    "individual": b.block("var_get_individual", {"name": "y"})
                }),
                "second": b.block("var_get_number", {"name": "best"}),
            },
        )},
        body={"then": [b.block(
            "var_set_individual", {"name": "x"},
            {"value": b.block("var_get_individual", {"name": "y"})},
        )]},
    )
    update = b.block(
        "var_set_number", {"name": "best"},
        {"value": b.block("fitness_onemax", inputs={"individual": get_x()})},
    )
    loop = b.block(
        "ioh_loop",
        inputs={"until": b.block(
            "compare", {"op": "eq"},
            {"first": b.block("var_get_number", {"name": "best"}),
             "second": b.num(n)},
        )},
        body={"body": [challenger, accept, update]},
    )
    b.block("repetitions", {"count": 1.0}, body={"body": [init, init_best, loop]})
    return b.build()


def test_one_plus_one_ea_reaches_optimum_with_monotone_records():
    result = interpret(one_plus_one_ea(10), 3)
    [log] = result.logs
    assert log.best_fitness == 10.0
    assert log.best_individual.text == "1" * 10
    evals = [r[1] for r in log.records]
    bests = [r[2] for r in log.records]
    assert evals == sorted(evals) and len(set(evals)) == len(evals)
    assert bests == sorted(bests)
    assert bests[-1] == 10.0


def test_budget_exhaustion():
    b = ProgramBuilder()
    b.block(
        "evolutionary_loop",
        inputs={"until": b.block("bool_literal", {"value": "false"})},
        body={"body": []},
    )
    with pytest.raises(RuntimeHalt) as err:
        interpret(b.build(), 0, budget=50)
    assert err.value.reason == "BudgetExhausted"


def test_generation_counter_binds_to_loop():
    b = ProgramBuilder()
    b.block(
        "evolutionary_loop",
        inputs={"until": b.block(
            "compare", {"op": "ge"},
            {"first": b.block("generation_counter"), "second": b.num(3)},
        )},
        body={"body": [b.block("print", inputs={"value": b.block(
            "text_of_number", inputs={"value": b.block("generation_counter")}
        )})]},
    )
    assert interpret(b.build(), 0).prints == ["1", "2", "3"]


def test_sleep_and_timer():
    b = ProgramBuilder()
    t0 = b.block("var_set_number", {"name": "t0"},
                 {"value": b.block("timer_read")})
    nap = b.block("sleep", inputs={"seconds": b.num(0.2)})
    report = b.block("print", inputs={"value": b.block(
        "text_of_number",
        inputs={"value": b.block(
            "number_arith", {"op": "minus"},
            {"first": b.block("timer_read"),
             "second": b.block("var_get_number", {"name": "t0"})},
        )},
    )})
    b.chain([t0, nap, report])
    result = interpret(b.build(), 0)
    assert float(result.prints[0]) >= 200.0


def test_timer_starts_near_zero_and_is_monotone():
    b = ProgramBuilder()
    first = b.block("var_set_number", {"name": "a"},
                    {"value": b.block("timer_read")})
    second = b.block("print", inputs={"value": b.block(
        "text_of_number", inputs={"value": b.block("var_get_number",
                                                   {"name": "a"})}
    )})
    third = b.block("print", inputs={"value": b.block(
        "text_of_number", inputs={"value": b.block("timer_read")}
    )})
    b.chain([first, second, third])
    prints = interpret(b.build(), 0).prints
    start, later = float(prints[0]), float(prints[1])
    assert 0.0 <= start < 50.0  # sanity bound, robust to CI load
    assert later >= start


def test_negative_sleep_halts():
    b = ProgramBuilder()
    b.block("sleep", inputs={"seconds": b.num(-1)})
    with pytest.raises(RuntimeHalt) as err:
        interpret(b.build(), 0)
    assert err.value.reason == "BadDuration"


def test_disconnected_root_produces_no_events():
    b = ProgramBuilder()
    b.block("crossover_one_point")
    result = interpret(b.build(), 0)
    assert result.events == ()


def test_repetitions_fresh_scope_and_run_events():
    b = ProgramBuilder()
    top = b.block("var_set_number", {"name": "n"}, {"value": b.num(5)})
    reps = b.block(
        "repetitions", {"count": 3.0},
        body={"body": [b.block("print", inputs={"value": b.block(
            "text_of_number", inputs={"value": b.block("run_index")}
        )})]},
    )
    b.chain([top, reps])
    result = interpret(b.build(), 0)
    assert result.prints == ["0", "1", "2"]
    starts = [e.run_id for e in result.events if isinstance(e, RunStarted)]
    finishes = [e.run_id for e in result.events if isinstance(e, RunFinished)]
    assert starts == [0, 1, 2] and finishes == [0, 1, 2]

    # the top-level variable is not visible inside the fresh run scope
    b2 = ProgramBuilder()
    top2 = b2.block("var_set_number", {"name": "n"}, {"value": b2.num(5)})
    reps2 = b2.block(
        "repetitions", {"count": 1.0},
        body={"body": [b2.block("print", inputs={"value": b2.block(
            "text_of_number",
            inputs={"value": b2.block("var_get_number", {"name": "n"})},
        )})]},
    )
    b2.chain([top2, reps2])
    with pytest.raises(RuntimeHalt) as err:
        interpret(b2.build(), 0)
    assert err.value.reason == "UnboundVariable"


def test_nested_repetitions_halt():
    b = ProgramBuilder()
    inner = b.block("repetitions", {"count": 1.0}, body={"body": []})
    b.block("repetitions", {"count": 1.0}, body={"body": [inner]})
    with pytest.raises(RuntimeHalt) as err:
        interpret(b.build(), 0)
    assert err.value.reason == "NestedRepetitions"


def test_two_repetitions_blocks_get_contiguous_run_ids():
    b = ProgramBuilder()
    first = b.block("repetitions", {"count": 2.0}, body={"body": []})
    second = b.block("repetitions", {"count": 2.0}, body={"body": []})
    b.chain([first, second])
    result = interpret(b.build(), 0)
    starts = [e.run_id for e in result.events if isinstance(e, RunStarted)]
    assert starts == [0, 1, 2, 3]


def task_imports_program():
    b = ProgramBuilder()
    setup = b.block("var_set_number", {"name": "m"}, {"value": b.num(21)})
    tasks = b.block(
        "run_tasks_sequential",
        {"imports": "m", "export_var": "f", "collect_into": "fs"},
        {"tasks": b.num(3)},
        body={"body": [
            b.block("var_set_number", {"name": "f"}, {"value": b.block(
                "number_arith", {"op": "plus"},
                {"first": b.block("var_get_number", {"name": "m"}),
                 "second": b.num(1)},
            )}),
            # worker-local writes never leak back to the parent scope
            b.block("var_set_number", {"name": "m"}, {"value": b.num(0)}),
        ]},
    )
    report = b.block("print", inputs={"value": b.block(
        "text_of_number",
        inputs={"value": b.block("var_get_number", {"name": "m"})},
    )})
    total = b.block("print", inputs={"value": b.block(
        "text_of_number",
        inputs={"value": b.block("list_sum", inputs={
            "list": b.block("var_get_list", {"name": "fs"})
        })},
    )})
    b.chain([setup, tasks, report, total])
    return b.build()


def test_worker_imports_are_isolated_and_exports_collected():
    result = interpret(task_imports_program(), 0)
    # parent m untouched by worker writes; 3 exports of 22 collected
    assert result.prints == ["21", "66"]


def test_worker_evaluations_merge_into_parent():
    b = ProgramBuilder()
    tasks = b.block(
        "run_tasks_sequential", {},
        {"tasks": b.num(2)},
        body={"body": [b.block(
            "var_set_number", {"name": "v"},
            {"value": b.block("fitness_onemax", inputs={
                "individual": b.block("individual_literal", {"bits": "1111"})
            })},
        )]},
    )
    loop = b.block(
        "ioh_loop",
        inputs={"until": b.block(
            "compare", {"op": "ge"},
            {"first": b.block("generation_counter"), "second": b.num(1)},
        )},
        body={"body": []},
    )
    reps = b.block("repetitions", {"count": 1.0}, body={"body": [tasks, loop]})
    result = interpret(b.build(), 0)
    [log] = result.logs
    assert log.records == ((1, 2, 4.0),)
    assert log.best_fitness == 4.0


def test_parallel_task_block_matches_sequential():
    def build(kind):
        b = ProgramBuilder()
        extra = {"workers": b.num(2)} if kind == "run_tasks_pooled" else {}
        b.block(
            kind, {},
            {"tasks": b.num(3), **extra},
            body={"body": [b.block("print", inputs={"value": b.block(
                "text_of_number", inputs={"value": b.block(
                    "random_number",
                    inputs={"low": b.num(0), "high": b.num(99)},
                )},
            )})]},
        )
        return interpret(b.build(), 11).events

    seq = build("run_tasks_sequential")
    par = build("run_tasks_parallel")
    pooled = build("run_tasks_pooled")
    assert seq == par == pooled


def test_interpret_deterministic_and_mode_independent():
    program = one_plus_one_ea(8)
    first = interpret(program, 9).events
    second = interpret(program, 9).events
    assert first == second
    pooled = interpret(program, 9, mode=pool(2)).events
    assert pooled == first


def test_cancellation_interrupts_loop():
    b = ProgramBuilder()
    b.block(
        "evolutionary_loop",
        inputs={"until": b.block("bool_literal", {"value": "false"})},
        body={"body": []},
    )
    cancel = threading.Event()
    cancel.set()
    with pytest.raises(Cancelled):
        interpret(b.build(), 0, cancel=cancel)


def test_cancellation_interrupts_sleep():
    b = ProgramBuilder()
    b.block("sleep", inputs={"seconds": b.num(30)})
    cancel = threading.Event()
    timer = threading.Timer(0.15, cancel.set)
    timer.start()
    start = time.monotonic()
    with pytest.raises(Cancelled):
        interpret(b.build(), 0, cancel=cancel)
    assert time.monotonic() - start < 5.0
    timer.cancel()
