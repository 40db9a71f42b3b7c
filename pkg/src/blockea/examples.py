"""Shipped example programs.

Both examples are constructed programmatically and also shipped as
canonical `.blockea.xml` assets under `blockea/data/`; a golden test
keeps the two in sync (regenerate with `scripts/regenerate_examples.py`).
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Callable

from .blocks import BlockProgram, ProgramBuilder

ONEMAX = {"objective": "onemax", "gap": 2.0}


def build_simple_plotting() -> BlockProgram:
    """15 repetitions of a (10+10)-EA with one-point crossover and
    per-bit mutation p=1/20 on OneMax, n=20, plotting best fitness per
    generation and printing the best individual of each run."""
    b = ProgramBuilder()

    def pop():
        return b.block("var_get_population", {"name": "pop"})

    def best_of_pop():
        return b.block("population_best", ONEMAX, {"population": pop()})

    def measure_best():
        return b.block(
            "fitness_onemax", inputs={"individual": best_of_pop()}
        )

    init_pop = b.block(
        "var_set_population",
        {"name": "pop"},
        {"value": b.block(
            "population_create",
            inputs={"size": b.num(10), "bit_length": b.num(20)},
        )},
    )
    init_best = b.block(
        "var_set_number", {"name": "best"}, {"value": measure_best()}
    )

    clear_offspring = b.block(
        "var_set_population",
        {"name": "offspring"},
        {"value": b.block("population_empty")},
    )
    make_child = b.block(
        "var_set_individual",
        {"name": "child"},
        {"value": b.block(
            "mutate_per_bit",
            inputs={
                "individual": b.block(
                    "crossover_one_point",
                    inputs={
                        "first": b.block(
                            "population_select_uniform",
                            inputs={"population": pop()},
                        ),
                        "second": b.block(
                            "population_select_uniform",
                            inputs={"population": pop()},
                        ),
                    },
                ),
                "probability": b.num(0.05),
            },
        )},
    )
    keep_child = b.block(
        "var_set_population",
        {"name": "offspring"},
        {"value": b.block(
            "population_add",
            inputs={
                "population": b.block("var_get_population", {"name": "offspring"}),
                "individual": b.block("var_get_individual", {"name": "child"}),
            },
        )},
    )
    breed = b.block(
        "repeat_n",
        inputs={"times": b.num(10)},
        body={"body": [make_child, keep_child]},
    )
    survive = b.block(
        "var_set_population",
        {"name": "pop"},
        {"value": b.block(
            "population_take",
            inputs={
                "population": b.block(
                    "population_sort",
                    ONEMAX,
                    {"population": b.block(
                        "population_merge",
                        inputs={
                            "first": pop(),
                            "second": b.block(
                                "var_get_population", {"name": "offspring"}
                            ),
                        },
                    )},
                ),
                "count": b.num(10),
            },
        )},
    )
    update_best = b.block(
        "var_set_number", {"name": "best"}, {"value": measure_best()}
    )
    plot = b.block(
        "plot_point",
        {"style": "line"},
        {
            "series": b.block(
                "text_concat",
                inputs={
                    "first": b.text("run "),
                    "second": b.block(
                        "text_of_number", inputs={"value": b.block("run_index")}
                    ),
                },
            ),
            "x": b.block("generation_counter"),
            "y": b.block("var_get_number", {"name": "best"}),
        },
    )
    generation = b.block(
        "ioh_loop",
        inputs={"until": b.block(
            "compare",
            {"op": "eq"},
            {
                "first": b.block("var_get_number", {"name": "best"}),
                "second": b.num(20),
            },
        )},
        body={"body": [clear_offspring, breed, survive, update_best, plot]},
    )
    report = b.block(
        "print",
        inputs={"value": b.block(
            "text_concat",
            inputs={
                "first": b.text("best: "),
                "second": b.block(
                    "text_of_individual", inputs={"individual": best_of_pop()}
                ),
            },
        )},
    )
    b.block(
        "repetitions",
        {"count": 15.0},
        body={"body": [init_pop, init_best, generation, report]},
    )
    return b.build()


def build_performance_test(i_max: int = 5, fib_arg: int = 24) -> BlockProgram:
    """Times i copies of the Fibonacci dummy task for i = 1..i_max in all
    three threading modes and prints the comparison table."""
    b = ProgramBuilder()

    def get(name):
        return b.block("var_get_number", {"name": name})

    def set_num(name, value_uid):
        return b.block("var_set_number", {"name": name}, {"value": value_uid})

    def tn(uid):
        return b.block("text_of_number", inputs={"value": uid})

    def concat(first_uid, second_uid):
        return b.block(
            "text_concat", inputs={"first": first_uid, "second": second_uid}
        )

    def row(label, threads_uid):
        # "<label>,<i>,<threads>,<elapsed>"
        text = concat(
            concat(
                concat(
                    concat(concat(b.text(label + ","), tn(get("i"))), b.text(",")),
                    threads_uid,
                ),
                b.text(","),
            ),
            tn(get("dt")),
        )
        return b.block("print", inputs={"value": text})

    def task_body():
        return [set_num(
            "f",
            b.block("fibonacci", inputs={"value": get("m")}),
        )]

    def timed(run_uid_fn):
        start = set_num("t0", b.block("timer_read"))
        run = run_uid_fn()
        stop = set_num(
            "dt",
            b.block(
                "number_arith",
                {"op": "minus"},
                {"first": b.block("timer_read"), "second": get("t0")},
            ),
        )
        return [start, run, stop]

    setup = [
        set_num("x", b.block("hardware_concurrency")),
        set_num("m", b.num(fib_arg)),
        set_num("i", b.num(0)),
        b.block(
            "print",
            inputs={"value": b.text("threads,num_iterations,num_threads,time")},
        ),
    ]

    body = [
        set_num(
            "i",
            b.block(
                "number_arith",
                {"op": "plus"},
                {"first": get("i"), "second": b.num(1)},
            ),
        ),
        b.block(
            "if_else",
            inputs={"condition": b.block(
                "compare", {"op": "gt"}, {"first": get("i"), "second": b.num(1)}
            )},
            body={"then": [b.block("print", inputs={"value": b.text("-" * 48)})]},
        ),
        *timed(lambda: b.block(
            "run_tasks_sequential",
            {"imports": "m"},
            {"tasks": get("i")},
            body={"body": task_body()},
        )),
        row("one thread", tn(b.num(1))),
        *timed(lambda: b.block(
            "run_tasks_parallel",
            {"imports": "m"},
            {"tasks": get("i")},
            body={"body": task_body()},
        )),
        row("all threads", tn(get("i"))),
        *timed(lambda: b.block(
            "run_tasks_pooled",
            {"imports": "m"},
            {"tasks": get("i"), "workers": get("x")},
            body={"body": task_body()},
        )),
        row("limited threads", tn(get("x"))),
    ]

    loop = b.block(
        "evolutionary_loop",
        inputs={"until": b.block(
            "compare",
            {"op": "ge"},
            {"first": get("i"), "second": b.num(i_max)},
        )},
        body={"body": body},
    )
    b.chain(setup + [loop])
    return b.build()


@dataclass(frozen=True)
class Example:
    name: str
    title: str
    build: Callable[[], BlockProgram]
    asset: str


EXAMPLES: dict[str, Example] = {
    e.name: e
    for e in (
        Example(
            "simple-plotting",
            "Simple Plotting",
            build_simple_plotting,
            "simple_plotting.blockea.xml",
        ),
        Example(
            "multithreading-performance-test",
            "Multi-Threading Performance Test",
            build_performance_test,
            "multithreading_performance_test.blockea.xml",
        ),
    )
}


def example_names() -> list[str]:
    return list(EXAMPLES)


def example_xml(name: str) -> str:
    example = EXAMPLES.get(name)
    if example is None:
        raise KeyError(f"no example named {name!r}")
    return (
        resources.files("blockea").joinpath("data", example.asset).read_text("utf-8")
    )
