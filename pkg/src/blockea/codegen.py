"""Standalone-code export: a block program becomes a runnable two-file
Python bundle (main program + runtime support).

Every block kind maps to a code snippet; the bundle reproduces the
interpreter's print/plot/record output under the same master seed
because the runtime re-implements the engine's random stream and draw
patterns. Multi-threading blocks are emitted as sequential loops (the
bundle stays dependency-free); the engine's in-order event flushing
makes that behavior-preserving. Time blocks are emitted but their
values are inherently wall-clock dependent.
"""

from __future__ import annotations

from importlib import resources

from .blocks import Block, BlockProgram, REGISTRY, kind_of
from .interpreter import DEFAULT_ITERATION_BUDGET
from .validate import executable_roots, has_errors, validate

MAIN_NAME = "main.py"
RUNTIME_NAME = "runtime_support.py"


class UnsupportedBlock(ValueError):
    def __init__(self, kind: str):
        super().__init__(f"no code emitter for block kind {kind!r}")
        self.kind = kind


def _runtime_text() -> str:
    return (
        resources.files("blockea")
        .joinpath("data", "runtime_support.py.txt")
        .read_text("utf-8")
    )


class _Emitter:
    def __init__(self, program: BlockProgram, master_seed: int):
        self.program = program
        self.master_seed = master_seed
        self.lines: list[str] = []
        self.temp = 0

    def fresh(self, stem: str) -> str:
        self.temp += 1
        return f"_{stem}{self.temp}"

    def line(self, indent: int, text: str) -> None:
        self.lines.append("    " * indent + text)

    # ---- expressions ----

    def expr(self, uid: str, level: int) -> str:
        block = self.program.block(uid)
        kind = block.kind
        emit = _VALUE_EMITTERS.get(kind)
        if emit is None:
            raise UnsupportedBlock(kind)
        return emit(self, block, level)

    def port(self, block: Block, name: str, level: int) -> str:
        return self.expr(block.input_connections[name], level)

    # ---- statements ----

    def chain(self, head: str | None, level: int, indent: int) -> None:
        emitted = False
        uid = head
        while uid is not None:
            block = self.program.block(uid)
            emit = _STATEMENT_EMITTERS.get(block.kind)
            if emit is None:
                raise UnsupportedBlock(block.kind)
            emit(self, block, level, indent)
            emitted = True
            uid = block.next
        if not emitted:
            self.line(indent, "pass")

    def body(self, block: Block, slot: str, level: int, indent: int) -> None:
        self.chain(block.body_heads.get(slot), level, indent)


def _field_str(block: Block, name: str) -> str:
    return str(block.field_values[name])


def _objective_args(block: Block) -> str:
    objective = _field_str(block, "objective")
    gap = float(block.field_values["gap"])
    return f"{objective!r}, {gap!r}"


# ---- value emitters: kind -> python expression --------------------


def _literal_number(e, b, level):
    return repr(float(b.field_values["value"]))


_VALUE_EMITTERS = {
    "number_literal": _literal_number,
    "number_arith": lambda e, b, L: (
        f"num_arith({_field_str(b, 'op')!r}, "
        f"{e.port(b, 'first', L)}, {e.port(b, 'second', L)})"
    ),
    "random_number": lambda e, b, L: (
        f"random_int(c{L}, {e.port(b, 'low', L)}, {e.port(b, 'high', L)})"
    ),
    "text_literal": lambda e, b, L: repr(str(b.field_values["value"])),
    "text_concat": lambda e, b, L: (
        f"({e.port(b, 'first', L)} + {e.port(b, 'second', L)})"
    ),
    "text_of_number": lambda e, b, L: f"format_number({e.port(b, 'value', L)})",
    "text_of_individual": lambda e, b, L: f"ind_text({e.port(b, 'individual', L)})",
    "list_sum": lambda e, b, L: f"float(sum({e.port(b, 'list', L)}))",
    "list_length": lambda e, b, L: f"float(len({e.port(b, 'list', L)}))",
    "bool_literal": lambda e, b, L: (
        "True" if b.field_values["value"] == "true" else "False"
    ),
    "bool_not": lambda e, b, L: f"(not {e.port(b, 'value', L)})",
    "bool_op": lambda e, b, L: (
        f"bool_both({_field_str(b, 'op')!r}, "
        f"{e.port(b, 'first', L)}, {e.port(b, 'second', L)})"
    ),
    "compare": lambda e, b, L: (
        f"num_compare({_field_str(b, 'op')!r}, "
        f"{e.port(b, 'first', L)}, {e.port(b, 'second', L)})"
    ),
    "individual_random": lambda e, b, L: (
        f"individual_random(c{L}, {e.port(b, 'bit_length', L)})"
    ),
    "individual_literal": lambda e, b, L: (
        f"individual_literal({_field_str(b, 'bits')!r})"
    ),
    "individual_length": lambda e, b, L: (
        f"float(len({e.port(b, 'individual', L)}))"
    ),
    "crossover_one_point": lambda e, b, L: (
        f"one_point_crossover(c{L}, {e.port(b, 'first', L)}, {e.port(b, 'second', L)})"
    ),
    "crossover_two_point": lambda e, b, L: (
        f"two_point_crossover(c{L}, {e.port(b, 'first', L)}, {e.port(b, 'second', L)})"
    ),
    "crossover_uniform": lambda e, b, L: (
        f"uniform_crossover(c{L}, {e.port(b, 'first', L)}, {e.port(b, 'second', L)})"
    ),
    "mutate_per_bit": lambda e, b, L: (
        f"mutate_per_bit(c{L}, {e.port(b, 'individual', L)}, "
        f"{e.port(b, 'probability', L)})"
    ),
    "mutate_k_bits": lambda e, b, L: (
        f"mutate_k_bits(c{L}, {e.port(b, 'individual', L)}, "
        f"{e.port(b, 'count', L)})"
    ),
    "fitness_onemax": lambda e, b, L: (
        f"fit_onemax(c{L}, {e.port(b, 'individual', L)})"
    ),
    "fitness_leading_ones": lambda e, b, L: (
        f"fit_leading_ones(c{L}, {e.port(b, 'individual', L)})"
    ),
    "fitness_jump": lambda e, b, L: (
        f"fit_jump(c{L}, {e.port(b, 'individual', L)}, "
        f"{float(b.field_values['gap'])!r})"
    ),
    "diversity_mean_hamming": lambda e, b, L: (
        f"diversity_mean_hamming({e.port(b, 'population', L)})"
    ),
    "population_create": lambda e, b, L: (
        f"population_create(c{L}, {e.port(b, 'size', L)}, "
        f"{e.port(b, 'bit_length', L)})"
    ),
    "population_empty": lambda e, b, L: "()",
    "population_size": lambda e, b, L: f"float(len({e.port(b, 'population', L)}))",
    "population_best": lambda e, b, L: (
        f"population_best(c{L}, {e.port(b, 'population', L)}, {_objective_args(b)})"
    ),
    "population_select_uniform": lambda e, b, L: (
        f"select_uniform(c{L}, {e.port(b, 'population', L)})"
    ),
    "population_select_proportionate": lambda e, b, L: (
        f"select_proportionate(c{L}, {e.port(b, 'population', L)}, "
        f"{_objective_args(b)})"
    ),
    "population_add": lambda e, b, L: (
        f"({e.port(b, 'population', L)} + ({e.port(b, 'individual', L)},))"
    ),
    "population_merge": lambda e, b, L: (
        f"({e.port(b, 'first', L)} + {e.port(b, 'second', L)})"
    ),
    "population_sort": lambda e, b, L: (
        f"population_sort(c{L}, {e.port(b, 'population', L)}, {_objective_args(b)})"
    ),
    "population_take": lambda e, b, L: (
        f"population_take({e.port(b, 'population', L)}, {e.port(b, 'count', L)})"
    ),
    "generation_counter": lambda e, b, L: f"float(c{L}.generation)",
    "run_index": lambda e, b, L: f"float(c{L}.run_id)",
    "hardware_concurrency": lambda e, b, L: "hardware_concurrency()",
    "fibonacci": lambda e, b, L: f"fib_value(c{L}, {e.port(b, 'value', L)})",
    "timer_read": lambda e, b, L: f"c{L}.elapsed_ms()",
}

for _vt_suffix in ("number", "boolean", "text", "individual", "population", "list"):
    _VALUE_EMITTERS[f"var_get_{_vt_suffix}"] = (
        lambda e, b, L: f"scope_get(s{L}, {_field_str(b, 'name')!r})"
    )


# ---- statement emitters --------------------------------------------


def _s_var_set(e, b, level, indent):
    e.line(indent, f"s{level}[{_field_str(b, 'name')!r}] = {e.port(b, 'value', level)}")


def _s_print(e, b, level, indent):
    e.line(indent, f"emit_print({e.port(b, 'value', level)})")


def _s_plot_point(e, b, level, indent):
    e.line(
        indent,
        f"emit_plot({e.port(b, 'series', level)}, {e.port(b, 'x', level)}, "
        f"{e.port(b, 'y', level)}, {_field_str(b, 'style')!r})",
    )


def _s_comment(e, b, level, indent):
    text = _field_str(b, "text").replace("\n", " ").replace("\r", " ")
    e.line(indent, f"# {text}" if text else "#")
    e.line(indent, "pass")


def _s_if_else(e, b, level, indent):
    e.line(indent, f"if {e.port(b, 'condition', level)}:")
    e.body(b, "then", level, indent + 1)
    e.line(indent, "else:")
    e.body(b, "else", level, indent + 1)


def _s_repeat_n(e, b, level, indent):
    n = e.fresh("n")
    e.line(indent, f"{n} = require_int({e.port(b, 'times', level)}, 'repeat_n.times')")
    e.line(indent, f"if {n} < 0:")
    e.line(indent + 1, f"halt('BadCount', 'repeat count must be >= 0, got %d' % {n})")
    e.line(indent, f"for {e.fresh('i')} in range({n}):")
    e.line(indent + 1, f"c{level}.tick()")
    e.body(b, "body", level, indent + 1)


def _s_loop(record: bool):
    def emit(e, b, level, indent):
        e.line(indent, "while True:")
        e.line(indent + 1, f"if {e.port(b, 'until', level)}:")
        e.line(indent + 2, "break")
        e.line(indent + 1, f"c{level}.tick()")
        e.line(indent + 1, f"c{level}.generation += 1")
        e.body(b, "body", level, indent + 1)
        if record:
            e.line(indent + 1, f"emit_record(c{level})")

    return emit


def _s_sleep(e, b, level, indent):
    e.line(indent, f"do_sleep({e.port(b, 'seconds', level)})")


def _s_repetitions(e, b, level, indent):
    count = float(b.field_values["count"])
    if level != 0:
        e.line(indent, "halt('NestedRepetitions', "
                       "'repetition blocks cannot run inside another run')")
        return
    if not count.is_integer() or int(count) < 1:
        e.line(indent, f"halt('BadCount', 'repetition count must be >= 1, "
                       f"got {count!r}')")
        return
    first = e.fresh("first")
    offset = e.fresh("r")
    inner = level + 1
    e.line(indent, f"{first} = c{level}.next_run_id")
    e.line(indent, f"c{level}.next_run_id += {int(count)}")
    e.line(indent, f"for {offset} in range({int(count)}):")
    e.line(indent + 1, f"c{inner} = Context(run_id={first} + {offset}, "
                       f"seed=derive_seed(MASTER_SEED, {first} + {offset}), "
                       f"budget=c{level}.budget)")
    e.line(indent + 1, f"s{inner} = {{}}")
    e.body(b, "body", inner, indent + 1)


def _s_run_tasks(e, b, level, indent):
    # parallel/pooled blocks run sequentially in the standalone bundle;
    # the engine flushes worker events in task order, so output matches
    n = e.fresh("n")
    e.line(indent, f"{n} = require_int({e.port(b, 'tasks', level)}, "
                   f"'{b.kind}.tasks')")
    e.line(indent, f"if {n} < 0:")
    e.line(indent + 1, f"halt('BadCount', 'task count must be >= 0, got %d' % {n})")
    if b.kind == "run_tasks_pooled":
        w = e.fresh("w")
        e.line(indent, f"{w} = require_int({e.port(b, 'workers', level)}, "
                       f"'{b.kind}.workers')")
        e.line(indent, f"if {w} < 1:")
        e.line(indent + 1,
               f"halt('BadCount', 'worker count must be >= 1, got %d' % {w})")

    import_names = [
        name.strip()
        for name in _field_str(b, "imports").split(",")
        if name.strip()
    ]
    export_var = _field_str(b, "export_var")
    collect_into = _field_str(b, "collect_into")

    base = e.fresh("base")
    evals = e.fresh("evals")
    bests = e.fresh("bests")
    exports = e.fresh("exports")
    t = e.fresh("t")
    inner = level + 1

    e.line(indent, f"{base} = c{level}.task_streams")
    e.line(indent, f"c{level}.task_streams += {n}")
    e.line(indent, f"{evals} = c{level}.evals")
    e.line(indent, f"{bests} = []")
    e.line(indent, f"{exports} = []")
    e.line(indent, f"for {t} in range({n}):")
    e.line(indent + 1, f"c{inner} = Context(run_id=c{level}.run_id, "
                       f"seed=derive_seed(c{level}.seed, {base} + {t}), "
                       f"budget=c{level}.budget, evals={evals}, "
                       f"generation=c{level}.generation)")
    imports_src = ", ".join(
        f"{name!r}: scope_get(s{level}, {name!r})" for name in import_names
    )
    e.line(indent + 1, f"s{inner} = {{{imports_src}}}")
    e.body(b, "body", inner, indent + 1)
    e.line(indent + 1, f"{bests}.append((c{inner}.best_individual, "
                       f"c{inner}.best_fitness))")
    if export_var:
        e.line(indent + 1, f"{exports}.append(export_number(s{inner}, "
                           f"{export_var!r}))")
    e.line(indent + 1, f"c{level}.evals += c{inner}.evals - {evals}")
    bi, bf = e.fresh("bi"), e.fresh("bf")
    e.line(indent, f"for {bi}, {bf} in {bests}:")
    e.line(indent + 1, f"if {bi} is not None:")
    e.line(indent + 2, f"c{level}.note({bi}, {bf})")
    if export_var and collect_into:
        e.line(indent, f"s{level}[{collect_into!r}] = tuple({exports})")


_STATEMENT_EMITTERS = {
    "print": _s_print,
    "plot_point": _s_plot_point,
    "comment": _s_comment,
    "if_else": _s_if_else,
    "repeat_n": _s_repeat_n,
    "evolutionary_loop": _s_loop(record=False),
    "ioh_loop": _s_loop(record=True),
    "sleep": _s_sleep,
    "repetitions": _s_repetitions,
    "run_tasks_sequential": _s_run_tasks,
    "run_tasks_parallel": _s_run_tasks,
    "run_tasks_pooled": _s_run_tasks,
}

for _vt_suffix in ("number", "boolean", "text", "individual", "population", "list"):
    _STATEMENT_EMITTERS[f"var_set_{_vt_suffix}"] = _s_var_set


def emitter_coverage() -> list[str]:
    """Registry kinds lacking an emitter; must be empty for the shipped set."""
    missing = []
    for kind_id, kind in REGISTRY.items():
        table = _STATEMENT_EMITTERS if kind.is_statement else _VALUE_EMITTERS
        if kind_id not in table:
            missing.append(kind_id)
    return sorted(missing)


def emit_standalone(
    program: BlockProgram,
    master_seed: int,
    budget: int = DEFAULT_ITERATION_BUDGET,
) -> dict[str, str]:
    """Emit {filename: text} for a runnable two-file Python bundle."""
    diagnostics = validate(program)
    if has_errors(diagnostics):
        raise ValueError(
            "cannot export an invalid program: "
            + "; ".join(str(d) for d in diagnostics if d.is_error)
        )

    e = _Emitter(program, master_seed)
    e.line(0, "#!/usr/bin/env python3")
    e.line(0, "# standalone program exported from blockea")
    e.line(0, "import sys")
    e.line(0, "")
    e.line(0, "from runtime_support import *")
    e.line(0, "")
    e.line(0, f"MASTER_SEED = {master_seed}")
    e.line(0, f"BUDGET = {budget}")
    e.line(0, "")
    e.line(0, "")
    e.line(0, "def main():")
    e.line(1, "c0 = Context(run_id=-1, seed=derive_seed(MASTER_SEED, -1), "
               "budget=BUDGET)")
    e.line(1, "s0 = {}")
    roots = executable_roots(program)
    if roots:
        for root in roots:
            e.chain(root, 0, 1)
    else:
        e.line(1, "pass")
    e.line(0, "")
    e.line(0, "")
    e.line(0, 'if __name__ == "__main__":')
    e.line(1, "try:")
    e.line(2, "main()")
    e.line(1, "except Halt as err:")
    e.line(2, "print(str(err), file=sys.stderr)")
    e.line(2, "sys.exit(3)")

    return {
        MAIN_NAME: "\n".join(e.lines) + "\n",
        RUNTIME_NAME: _runtime_text(),
    }
