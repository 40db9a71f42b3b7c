"""Tree-walking execution of validated block programs.

Each repetition run owns a context: a derived random stream, evaluation
counter, generation counter, best-so-far tracking, and an event emitter.
Identical (program, master seed) produce identical event streams in any
execution mode, because run seeds derive from run ids, worker-task seeds
derive from (context seed, task index), and worker events are flushed in
task order.

Boolean operators evaluate both operands (no short-circuit): sub-
expressions may consume random draws and the draw sequence is part of
the determinism contract shared with emitted standalone bundles.
"""

from __future__ import annotations

import pickle
import time
from dataclasses import dataclass, field

from . import ea
from .blocks import Block, BlockProgram
from .datalog import RunLog, collect
from .errors import Cancelled, RuntimeHalt
from .events import (
    Event,
    EventSink,
    Print,
    PlotPoint,
    Record,
    RunFinished,
    RunStarted,
)
from .fitness import (
    EvalCounter,
    FitnessError,
    diversity_mean_hamming,
    jump,
    leading_ones,
    onemax,
)
from .rng import RandomSource, derive_seed
from .runner import (
    SEQUENTIAL,
    Task,
    ThreadMode,
    fib,
    hardware_concurrency,
    run_tasks,
)
from .validate import executable_roots, has_errors, validate
from .values import format_number, runtime_type_of

DEFAULT_ITERATION_BUDGET = 1_000_000
MAIN_RUN_ID = -1

_CANCEL_POLL_MASK = 31  # poll the cancel token every 32 loop iterations


class InvalidProgram(ValueError):
    """interpret() was handed a program whose validation reports errors."""

    def __init__(self, diagnostics):
        super().__init__("; ".join(str(d) for d in diagnostics if d.is_error))
        self.diagnostics = diagnostics


class Scope:
    """Flat per-run variable bindings; reading an unbound name halts."""

    __slots__ = ("bindings",)

    def __init__(self, bindings: dict | None = None):
        self.bindings = dict(bindings or {})

    def get(self, name: str):
        try:
            return self.bindings[name]
        except KeyError:
            raise RuntimeHalt(
                "UnboundVariable", f"variable {name!r} was never set"
            ) from None

    def set(self, name: str, value) -> None:
        self.bindings[name] = value


@dataclass
class RunContext:
    run_id: int
    seed: int
    rng: RandomSource
    emit: EventSink
    budget: int = DEFAULT_ITERATION_BUDGET
    mode: ThreadMode = SEQUENTIAL
    cancel: object | None = None
    master_seed: int = 0
    eval_counter: EvalCounter = field(default_factory=EvalCounter)
    generation: int = 0
    best_fitness: float = float("-inf")
    best_individual: ea.Individual | None = None
    iterations: int = 0
    task_streams: int = 0
    next_run_id: int = 0
    start: float = field(default_factory=time.monotonic)
    last_record_evals: int = -1

    def __post_init__(self):
        # records are keyed by evaluation count; an unchanged count would
        # break the strictly-increasing invariant and carries no information
        self.last_record_evals = self.eval_counter.count

    def note_evaluation(self, individual: ea.Individual, value: float) -> None:
        if value > self.best_fitness:
            self.best_fitness = value
            self.best_individual = individual

    def tick(self) -> None:
        self.iterations += 1
        if self.iterations > self.budget:
            raise RuntimeHalt(
                "BudgetExhausted",
                f"run exceeded the {self.budget}-iteration safety budget",
            )
        if (self.iterations & _CANCEL_POLL_MASK) == 0:
            self.check_cancel()

    def check_cancel(self) -> None:
        if self.cancel is not None and self.cancel.is_set():
            raise Cancelled()

    def elapsed_ms(self) -> float:
        return (time.monotonic() - self.start) * 1000.0


def _halt(error: Exception) -> RuntimeHalt:
    return RuntimeHalt(type(error).__name__, str(error))


def _require_int(value: float, what: str) -> int:
    if isinstance(value, bool) or not float(value).is_integer():
        raise RuntimeHalt("NotAnInteger", f"{what} must be an integer, got {value!r}")
    return int(value)


def _objective(block: Block, ctx: RunContext):
    """Fitness closure for population blocks with an objective field;
    every call counts one evaluation and feeds best-so-far tracking."""
    name = block.field_values["objective"]
    gap = block.field_values["gap"]

    def evaluate(ind: ea.Individual) -> float:
        if name == "onemax":
            value = onemax(ind, ctx.eval_counter)
        elif name == "leading_ones":
            value = leading_ones(ind, ctx.eval_counter)
        else:
            value = jump(ind, _require_int(gap, "jump gap"), ctx.eval_counter)
        ctx.note_evaluation(ind, value)
        return value

    return evaluate


class Interpreter:
    def __init__(self, program: BlockProgram):
        self.program = program

    # ---- values ----------------------------------------------------

    def eval_value(self, block: Block, ctx: RunContext, scope: Scope):
        handler = _VALUE_HANDLERS.get(block.kind)
        if handler is None:
            raise RuntimeHalt("UnsupportedBlock", f"no value handler for {block.kind}")
        try:
            return handler(self, block, ctx, scope)
        except (ea.EaError, FitnessError) as e:
            raise _halt(e) from e

    def _input(self, block: Block, port: str, ctx: RunContext, scope: Scope):
        child = block.input_connections.get(port)
        if child is None:
            raise RuntimeHalt(
                "MissingInput", f"{block.kind}: input {port!r} is empty"
            )
        return self.eval_value(self.program.block(child), ctx, scope)

    def _num(self, block: Block, port: str, ctx, scope) -> float:
        return float(self._input(block, port, ctx, scope))

    def _int(self, block: Block, port: str, ctx, scope) -> int:
        return _require_int(
            self._num(block, port, ctx, scope), f"{block.kind}.{port}"
        )

    # ---- statements ------------------------------------------------

    def exec_chain(self, head_uid: str | None, ctx: RunContext, scope: Scope):
        uid = head_uid
        while uid is not None:
            block = self.program.block(uid)
            self.exec_statement(block, ctx, scope)
            uid = block.next

    def exec_statement(self, block: Block, ctx: RunContext, scope: Scope):
        handler = _STATEMENT_HANDLERS.get(block.kind)
        if handler is None:
            raise RuntimeHalt(
                "UnsupportedBlock", f"no statement handler for {block.kind}"
            )
        try:
            handler(self, block, ctx, scope)
        except (ea.EaError, FitnessError) as e:
            raise _halt(e) from e

    def exec_body(self, block: Block, slot: str, ctx: RunContext, scope: Scope):
        self.exec_chain(block.body_heads.get(slot), ctx, scope)

    # ---- loops -----------------------------------------------------

    def _run_loop(self, block: Block, ctx: RunContext, scope: Scope, record: bool):
        while True:
            done = self._input(block, "until", ctx, scope)
            if done:
                return
            ctx.tick()
            ctx.generation += 1
            self.exec_body(block, "body", ctx, scope)
            if record and ctx.eval_counter.count != ctx.last_record_evals:
                ctx.last_record_evals = ctx.eval_counter.count
                ctx.emit(
                    Record(
                        ctx.run_id,
                        ctx.generation,
                        ctx.eval_counter.count,
                        ctx.best_fitness,
                    )
                )

    # ---- worker tasks ----------------------------------------------

    def _exec_task_block(self, block: Block, ctx: RunContext, scope: Scope):
        count = self._int(block, "tasks", ctx, scope)
        if count < 0:
            raise RuntimeHalt("BadCount", f"task count must be >= 0, got {count}")
        if block.kind == "run_tasks_parallel":
            mode = ThreadMode("unlimited")
        elif block.kind == "run_tasks_pooled":
            workers = self._int(block, "workers", ctx, scope)
            if workers < 1:
                raise RuntimeHalt(
                    "BadCount", f"worker count must be >= 1, got {workers}"
                )
            mode = ThreadMode("pool", workers)
        else:
            mode = SEQUENTIAL

        import_names = [
            name.strip()
            for name in str(block.field_values["imports"]).split(",")
            if name.strip()
        ]
        imports = {name: scope.get(name) for name in import_names}
        export_var = str(block.field_values["export_var"])
        collect_into = str(block.field_values["collect_into"])

        base_stream = ctx.task_streams
        ctx.task_streams += count
        tasks = []
        for index in range(count):
            payload = pickle.dumps(
                {
                    "program": self.program,
                    "head": block.body_heads.get("body"),
                    "run_id": ctx.run_id,
                    "seed": derive_seed(ctx.seed, base_stream + index),
                    "budget": ctx.budget,
                    "imports": imports,
                    "export_var": export_var,
                    "eval_base": ctx.eval_counter.count,
                    "generation": ctx.generation,
                }
            )
            tasks.append(Task(_worker_task, payload))

        if mode.kind == "unlimited" and count == 0:
            results = []
        else:
            results = run_tasks(tasks, mode, ctx.emit, cancel=ctx.cancel)

        exports = []
        for result in results:
            evals_delta, best_ind, best_fit, exported = result.value
            ctx.eval_counter.count += evals_delta
            if best_ind is not None:
                ctx.note_evaluation(best_ind, best_fit)
            exports.append(exported)
        if export_var and collect_into:
            scope.set(collect_into, tuple(float(x) for x in exports))

    def _exec_repetitions(self, block: Block, ctx: RunContext, scope: Scope):
        if ctx.run_id != MAIN_RUN_ID:
            raise RuntimeHalt(
                "NestedRepetitions",
                "repetition blocks cannot run inside another run",
            )
        count = _require_int(block.field_values["count"], "repetition count")
        if count < 1:
            raise RuntimeHalt(
                "BadCount", f"repetition count must be >= 1, got {count}"
            )
        first_run = ctx.next_run_id
        ctx.next_run_id += count
        tasks = []
        for offset in range(count):
            run_id = first_run + offset
            payload = pickle.dumps(
                {
                    "program": self.program,
                    "head": block.body_heads.get("body"),
                    "run_id": run_id,
                    "seed": derive_seed(ctx.master_seed, run_id),
                    "budget": ctx.budget,
                }
            )
            tasks.append(Task(_repetition_task, payload))
        run_tasks(tasks, ctx.mode, ctx.emit, cancel=ctx.cancel)


# module-level so task payload functions pickle for process workers


def _repetition_task(payload: bytes, emit: EventSink, cancel):
    spec = pickle.loads(payload)
    interp = Interpreter(spec["program"])
    ctx = RunContext(
        run_id=spec["run_id"],
        seed=spec["seed"],
        rng=RandomSource(spec["seed"]),
        emit=emit,
        budget=spec["budget"],
        cancel=cancel,
    )
    emit(RunStarted(ctx.run_id))
    interp.exec_chain(spec["head"], ctx, Scope())
    emit(RunFinished(ctx.run_id, ctx.best_individual, ctx.best_fitness))
    return (ctx.eval_counter.count, ctx.best_individual, ctx.best_fitness, None)


def _worker_task(payload: bytes, emit: EventSink, cancel):
    spec = pickle.loads(payload)
    interp = Interpreter(spec["program"])
    ctx = RunContext(
        run_id=spec["run_id"],
        seed=spec["seed"],
        rng=RandomSource(spec["seed"]),
        emit=emit,
        budget=spec["budget"],
        cancel=cancel,
        eval_counter=EvalCounter(spec["eval_base"]),
        generation=spec["generation"],
    )
    scope = Scope(spec["imports"])
    interp.exec_chain(spec["head"], ctx, scope)
    exported = None
    if spec["export_var"]:
        exported = scope.get(spec["export_var"])
        if runtime_type_of(exported).value != "Number":
            raise RuntimeHalt(
                "WrongVariableType",
                f"task export {spec['export_var']!r} must be a Number",
            )
        exported = float(exported)
    return (
        ctx.eval_counter.count - spec["eval_base"],
        ctx.best_individual,
        ctx.best_fitness,
        exported,
    )


# ---- value handlers ------------------------------------------------


def _v_number_literal(self, block, ctx, scope):
    return float(block.field_values["value"])


def _v_number_arith(self, block, ctx, scope):
    a = self._num(block, "first", ctx, scope)
    b = self._num(block, "second", ctx, scope)
    op = block.field_values["op"]
    if op == "plus":
        return a + b
    if op == "minus":
        return a - b
    if op == "times":
        return a * b
    if b == 0.0:
        raise RuntimeHalt("DivisionByZero", "division by zero")
    return a / b


def _v_random_number(self, block, ctx, scope):
    lo = self._int(block, "low", ctx, scope)
    hi = self._int(block, "high", ctx, scope)
    if lo > hi:
        raise RuntimeHalt("BadRange", f"empty random range [{lo}, {hi}]")
    return float(ctx.rng.next_int(lo, hi))


def _v_text_literal(self, block, ctx, scope):
    return str(block.field_values["value"])


def _v_text_concat(self, block, ctx, scope):
    return str(self._input(block, "first", ctx, scope)) + str(
        self._input(block, "second", ctx, scope)
    )


def _v_text_of_number(self, block, ctx, scope):
    return format_number(self._num(block, "value", ctx, scope))


def _v_text_of_individual(self, block, ctx, scope):
    return self._input(block, "individual", ctx, scope).text


def _v_list_sum(self, block, ctx, scope):
    return float(sum(self._input(block, "list", ctx, scope)))


def _v_list_length(self, block, ctx, scope):
    return float(len(self._input(block, "list", ctx, scope)))


def _v_bool_literal(self, block, ctx, scope):
    return block.field_values["value"] == "true"


def _v_bool_not(self, block, ctx, scope):
    return not self._input(block, "value", ctx, scope)


def _v_bool_op(self, block, ctx, scope):
    a = bool(self._input(block, "first", ctx, scope))
    b = bool(self._input(block, "second", ctx, scope))
    return (a and b) if block.field_values["op"] == "and" else (a or b)


def _v_compare(self, block, ctx, scope):
    a = self._num(block, "first", ctx, scope)
    b = self._num(block, "second", ctx, scope)
    op = block.field_values["op"]
    return {
        "eq": a == b,
        "ne": a != b,
        "lt": a < b,
        "le": a <= b,
        "gt": a > b,
        "ge": a >= b,
    }[op]


def _v_individual_random(self, block, ctx, scope):
    n = self._int(block, "bit_length", ctx, scope)
    return ea.init_individual_random(n, ctx.rng)


def _v_individual_literal(self, block, ctx, scope):
    return ea.init_individual_explicit(str(block.field_values["bits"]))


def _v_individual_length(self, block, ctx, scope):
    return float(self._input(block, "individual", ctx, scope).n)


def _v_crossover(op):
    def handler(self, block, ctx, scope):
        a = self._input(block, "first", ctx, scope)
        b = self._input(block, "second", ctx, scope)
        return op(a, b, ctx.rng)

    return handler


def _v_mutate_per_bit(self, block, ctx, scope):
    ind = self._input(block, "individual", ctx, scope)
    p = self._num(block, "probability", ctx, scope)
    return ea.mutate_per_bit(ind, p, ctx.rng)


def _v_mutate_k_bits(self, block, ctx, scope):
    ind = self._input(block, "individual", ctx, scope)
    k = self._int(block, "count", ctx, scope)
    return ea.mutate_k_bits(ind, k, ctx.rng)


def _v_fitness(fn):
    def handler(self, block, ctx, scope):
        ind = self._input(block, "individual", ctx, scope)
        value = fn(ind, ctx.eval_counter)
        ctx.note_evaluation(ind, value)
        return value

    return handler


def _v_fitness_jump(self, block, ctx, scope):
    ind = self._input(block, "individual", ctx, scope)
    gap = _require_int(block.field_values["gap"], "jump gap")
    value = jump(ind, gap, ctx.eval_counter)
    ctx.note_evaluation(ind, value)
    return value


def _v_diversity(self, block, ctx, scope):
    return diversity_mean_hamming(self._input(block, "population", ctx, scope))


def _v_population_create(self, block, ctx, scope):
    size = self._int(block, "size", ctx, scope)
    n = self._int(block, "bit_length", ctx, scope)
    return ea.init_population_random(size, n, ctx.rng)


def _v_population_empty(self, block, ctx, scope):
    return ea.Population()


def _v_population_size(self, block, ctx, scope):
    return float(len(self._input(block, "population", ctx, scope)))


def _v_population_best(self, block, ctx, scope):
    pop = self._input(block, "population", ctx, scope)
    return ea.best_of(pop, _objective(block, ctx))


def _v_population_select_uniform(self, block, ctx, scope):
    return ea.select_uniform(self._input(block, "population", ctx, scope), ctx.rng)


def _v_population_select_proportionate(self, block, ctx, scope):
    pop = self._input(block, "population", ctx, scope)
    return ea.select_fitness_proportionate(pop, _objective(block, ctx), ctx.rng)


def _v_population_add(self, block, ctx, scope):
    pop = self._input(block, "population", ctx, scope)
    ind = self._input(block, "individual", ctx, scope)
    return ea.add_individual(pop, ind)


def _v_population_merge(self, block, ctx, scope):
    return ea.merge(
        self._input(block, "first", ctx, scope),
        self._input(block, "second", ctx, scope),
    )


def _v_population_sort(self, block, ctx, scope):
    pop = self._input(block, "population", ctx, scope)
    return ea.sort_by_fitness(pop, _objective(block, ctx))


def _v_population_take(self, block, ctx, scope):
    pop = self._input(block, "population", ctx, scope)
    k = self._int(block, "count", ctx, scope)
    return ea.take_first(pop, k)


def _v_generation_counter(self, block, ctx, scope):
    return float(ctx.generation)


def _v_run_index(self, block, ctx, scope):
    return float(ctx.run_id)


def _v_hardware_concurrency(self, block, ctx, scope):
    return float(hardware_concurrency())


def _v_fibonacci(self, block, ctx, scope):
    m = self._int(block, "value", ctx, scope)
    if m < 0:
        raise RuntimeHalt("BadCount", f"fibonacci argument must be >= 0, got {m}")
    return float(fib(m))


def _v_timer_read(self, block, ctx, scope):
    return ctx.elapsed_ms()


def _v_var_get(expected: str):
    def handler(self, block, ctx, scope):
        value = scope.get(str(block.field_values["name"]))
        if runtime_type_of(value).name != expected:
            raise RuntimeHalt(
                "WrongVariableType",
                f"variable {block.field_values['name']!r} does not hold "
                f"a {expected} value",
            )
        return value

    return handler


# ---- statement handlers --------------------------------------------


def _s_var_set(expected: str):
    def handler(self, block, ctx, scope):
        value = self._input(block, "value", ctx, scope)
        if runtime_type_of(value).name != expected:
            raise RuntimeHalt(
                "WrongVariableType",
                f"cannot store a non-{expected} value in "
                f"{block.field_values['name']!r}",
            )
        scope.set(str(block.field_values["name"]), value)

    return handler


def _s_print(self, block, ctx, scope):
    ctx.emit(Print(ctx.run_id, str(self._input(block, "value", ctx, scope))))


def _s_plot_point(self, block, ctx, scope):
    ctx.emit(
        PlotPoint(
            ctx.run_id,
            str(self._input(block, "series", ctx, scope)),
            self._num(block, "x", ctx, scope),
            self._num(block, "y", ctx, scope),
            str(block.field_values["style"]),
        )
    )


def _s_comment(self, block, ctx, scope):
    pass


def _s_if_else(self, block, ctx, scope):
    if self._input(block, "condition", ctx, scope):
        self.exec_body(block, "then", ctx, scope)
    else:
        self.exec_body(block, "else", ctx, scope)


def _s_repeat_n(self, block, ctx, scope):
    times = self._int(block, "times", ctx, scope)
    if times < 0:
        raise RuntimeHalt("BadCount", f"repeat count must be >= 0, got {times}")
    for _ in range(times):
        ctx.tick()
        self.exec_body(block, "body", ctx, scope)


def _s_evolutionary_loop(self, block, ctx, scope):
    self._run_loop(block, ctx, scope, record=False)


def _s_ioh_loop(self, block, ctx, scope):
    self._run_loop(block, ctx, scope, record=True)


def _s_sleep(self, block, ctx, scope):
    seconds = self._num(block, "seconds", ctx, scope)
    if seconds < 0:
        raise RuntimeHalt("BadDuration", f"cannot sleep {seconds} seconds")
    deadline = time.monotonic() + seconds
    while True:
        ctx.check_cancel()
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            return
        time.sleep(min(remaining, 0.05))


def _s_repetitions(self, block, ctx, scope):
    self._exec_repetitions(block, ctx, scope)


def _s_run_tasks(self, block, ctx, scope):
    self._exec_task_block(block, ctx, scope)


_VALUE_HANDLERS = {
    "number_literal": _v_number_literal,
    "number_arith": _v_number_arith,
    "random_number": _v_random_number,
    "text_literal": _v_text_literal,
    "text_concat": _v_text_concat,
    "text_of_number": _v_text_of_number,
    "text_of_individual": _v_text_of_individual,
    "list_sum": _v_list_sum,
    "list_length": _v_list_length,
    "bool_literal": _v_bool_literal,
    "bool_not": _v_bool_not,
    "bool_op": _v_bool_op,
    "compare": _v_compare,
    "individual_random": _v_individual_random,
    "individual_literal": _v_individual_literal,
    "individual_length": _v_individual_length,
    "crossover_one_point": _v_crossover(ea.one_point_crossover),
    "crossover_two_point": _v_crossover(ea.two_point_crossover),
    "crossover_uniform": _v_crossover(ea.uniform_crossover),
    "mutate_per_bit": _v_mutate_per_bit,
    "mutate_k_bits": _v_mutate_k_bits,
    "fitness_onemax": _v_fitness(onemax),
    "fitness_leading_ones": _v_fitness(leading_ones),
    "fitness_jump": _v_fitness_jump,
    "diversity_mean_hamming": _v_diversity,
    "population_create": _v_population_create,
    "population_empty": _v_population_empty,
    "population_size": _v_population_size,
    "population_best": _v_population_best,
    "population_select_uniform": _v_population_select_uniform,
    "population_select_proportionate": _v_population_select_proportionate,
    "population_add": _v_population_add,
    "population_merge": _v_population_merge,
    "population_sort": _v_population_sort,
    "population_take": _v_population_take,
    "generation_counter": _v_generation_counter,
    "run_index": _v_run_index,
    "hardware_concurrency": _v_hardware_concurrency,
    "fibonacci": _v_fibonacci,
    "timer_read": _v_timer_read,
    "var_get_number": _v_var_get("NUMBER"),
    "var_get_boolean": _v_var_get("BOOLEAN"),
    "var_get_text": _v_var_get("TEXT"),
    "var_get_individual": _v_var_get("INDIVIDUAL"),
    "var_get_population": _v_var_get("POPULATION"),
    "var_get_list": _v_var_get("LIST_OF_NUMBER"),
}

_STATEMENT_HANDLERS = {
    "print": _s_print,
    "plot_point": _s_plot_point,
    "comment": _s_comment,
    "if_else": _s_if_else,
    "repeat_n": _s_repeat_n,
    "evolutionary_loop": _s_evolutionary_loop,
    "ioh_loop": _s_ioh_loop,
    "sleep": _s_sleep,
    "repetitions": _s_repetitions,
    "run_tasks_sequential": _s_run_tasks,
    "run_tasks_parallel": _s_run_tasks,
    "run_tasks_pooled": _s_run_tasks,
    "var_set_number": _s_var_set("NUMBER"),
    "var_set_boolean": _s_var_set("BOOLEAN"),
    "var_set_text": _s_var_set("TEXT"),
    "var_set_individual": _s_var_set("INDIVIDUAL"),
    "var_set_population": _s_var_set("POPULATION"),
    "var_set_list": _s_var_set("LIST_OF_NUMBER"),
}


@dataclass(frozen=True)
class ExperimentResult:
    events: tuple[Event, ...]
    logs: tuple[RunLog, ...]

    @property
    def prints(self) -> list[str]:
        return [e.text for e in self.events if isinstance(e, Print)]


def interpret(
    program: BlockProgram,
    master_seed: int,
    sink: EventSink | None = None,
    *,
    mode: ThreadMode = SEQUENTIAL,
    budget: int = DEFAULT_ITERATION_BUDGET,
    cancel=None,
) -> ExperimentResult:
    """Run every executable root in order under the given master seed.

    Repetition blocks execute their runs through the task runner in the
    requested mode; value blocks left at top level are skipped. Events go
    to `sink` as they are flushed and are also returned in the result.
    """
    diagnostics = validate(program)
    if has_errors(diagnostics):
        raise InvalidProgram(diagnostics)

    events: list[Event] = []

    def emit(event: Event) -> None:
        events.append(event)
        if sink is not None:
            sink(event)

    main_seed = derive_seed(master_seed, MAIN_RUN_ID)
    ctx = RunContext(
        run_id=MAIN_RUN_ID,
        seed=main_seed,
        rng=RandomSource(main_seed),
        emit=emit,
        budget=budget,
        mode=mode,
        cancel=cancel,
        master_seed=master_seed,
    )

    interp = Interpreter(program)
    scope = Scope()
    for root in executable_roots(program):
        interp.exec_chain(root, ctx, scope)

    return ExperimentResult(events=tuple(events), logs=tuple(collect(events)))
