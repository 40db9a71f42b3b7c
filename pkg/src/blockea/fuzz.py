"""Random valid program generation for property and differential tests.

Generated programs always pass validation with zero errors and never
halt at runtime: variables are read only where they are definitely
bound, population sizes are tracked as static lower bounds so selection
never sees an empty population, loops terminate via generation bounds,
and fitness-proportionate selection uses the jump objective (which is
strictly positive). Time blocks are excluded: their values are wall-
clock dependent and have dedicated direct tests.
"""

from __future__ import annotations

import random

from .blocks import BlockProgram, ProgramBuilder

_TEXT_POOL = ["", "x", "hi", "run ", "a b", "0,1;2", "done!", "value=", "<&>"]


class _Gen:
    def __init__(self, r: random.Random, codegen_safe: bool):
        self.r = r
        self.b = ProgramBuilder()
        self.L = r.randint(4, 8)
        self.codegen_safe = codegen_safe
        self.counters = {p: 0 for p in "nbtipl"}

    def fresh(self, prefix: str) -> str:
        self.counters[prefix] += 1
        return f"{prefix}{self.counters[prefix]}"

    def pick(self, weighted):
        total = sum(w for w, _ in weighted)
        x = self.r.uniform(0, total)
        acc = 0.0
        for w, fn in weighted:
            acc += w
            if x < acc:
                return fn
        return weighted[-1][1]

    # ---- value expressions -----------------------------------------

    def number(self, env: dict, depth: int) -> str:
        b, r = self.b, self.r
        num_vars = [n for n, (t, _) in env.items() if t == "n"]
        list_vars = [n for n, (t, _) in env.items() if t == "l"]
        pops = [(n, lb) for n, (t, lb) in env.items() if t == "p"]
        choices = [
            (4.0, lambda: b.num(float(r.choice(
                [0, 1, 2, 3, 5, 7, 10, -1, -4, 0.5, 2.5]
            )))),
            (1.0, lambda: b.block("generation_counter")),
            (0.5, lambda: b.block("run_index")),
            (0.5, lambda: b.block("hardware_concurrency")),
        ]
        if num_vars:
            choices.append(
                (3.0, lambda: b.block("var_get_number",
                                      {"name": r.choice(num_vars)}))
            )
        if list_vars:
            choices.append(
                (1.0, lambda: b.block(
                    r.choice(["list_sum", "list_length"]),
                    inputs={"list": b.block("var_get_list",
                                            {"name": r.choice(list_vars)})},
                ))
            )
        if depth > 0:
            choices += [
                (2.0, lambda: b.block(
                    "number_arith",
                    {"op": r.choice(["plus", "minus", "times"])},
                    {
                        "first": self.number(env, depth - 1),
                        "second": self.number(env, depth - 1),
                    },
                )),
                (1.0, lambda: self._random_number()),
                (1.5, lambda: b.block(
                    r.choice(["fitness_onemax", "fitness_leading_ones"]),
                    inputs={"individual": self.individual(env, depth - 1)},
                )),
                (1.0, lambda: b.block(
                    "fitness_jump",
                    {"gap": float(r.randint(1, self.L))},
                    {"individual": self.individual(env, depth - 1)},
                )),
                (0.7, lambda: b.block(
                    "population_size",
                    inputs={"population": self.population(env, depth - 1)[0]},
                )),
                (0.7, lambda: b.block(
                    "individual_length",
                    inputs={"individual": self.individual(env, depth - 1)},
                )),
                (0.5, lambda: b.block(
                    "fibonacci", inputs={"value": b.num(float(r.randint(0, 10)))}
                )),
            ]
            if pops and any(lb >= 2 for _, lb in pops):
                big = [n for n, lb in pops if lb >= 2]
                choices.append(
                    (0.7, lambda: b.block(
                        "diversity_mean_hamming",
                        inputs={"population": b.block(
                            "var_get_population", {"name": r.choice(big)}
                        )},
                    ))
                )
        return self.pick(choices)()

    def _random_number(self) -> str:
        lo = self.r.randint(-3, 6)
        hi = lo + self.r.randint(0, 6)
        return self.b.block(
            "random_number",
            inputs={"low": self.b.num(float(lo)), "high": self.b.num(float(hi))},
        )

    def boolean(self, env: dict, depth: int) -> str:
        b, r = self.b, self.r
        bool_vars = [n for n, (t, _) in env.items() if t == "b"]
        choices = [
            (1.0, lambda: b.block(
                "bool_literal", {"value": r.choice(["true", "false"])}
            )),
        ]
        if bool_vars:
            choices.append(
                (1.5, lambda: b.block("var_get_boolean",
                                      {"name": r.choice(bool_vars)}))
            )
        if depth > 0:
            choices += [
                (3.0, lambda: b.block(
                    "compare",
                    {"op": r.choice(["eq", "ne", "lt", "le", "gt", "ge"])},
                    {
                        "first": self.number(env, depth - 1),
                        "second": self.number(env, depth - 1),
                    },
                )),
                (1.0, lambda: b.block(
                    "bool_not", inputs={"value": self.boolean(env, depth - 1)}
                )),
                (1.0, lambda: b.block(
                    "bool_op",
                    {"op": r.choice(["and", "or"])},
                    {
                        "first": self.boolean(env, depth - 1),
                        "second": self.boolean(env, depth - 1),
                    },
                )),
            ]
        return self.pick(choices)()

    def text(self, env: dict, depth: int) -> str:
        b, r = self.b, self.r
        text_vars = [n for n, (t, _) in env.items() if t == "t"]
        choices = [(2.0, lambda: b.text(r.choice(_TEXT_POOL)))]
        if text_vars:
            choices.append(
                (2.0, lambda: b.block("var_get_text",
                                      {"name": r.choice(text_vars)}))
            )
        if depth > 0:
            choices += [
                (2.0, lambda: b.block(
                    "text_concat",
                    inputs={
                        "first": self.text(env, depth - 1),
                        "second": self.text(env, depth - 1),
                    },
                )),
                (1.5, lambda: b.block(
                    "text_of_number", inputs={"value": self.number(env, depth - 1)}
                )),
                (1.0, lambda: b.block(
                    "text_of_individual",
                    inputs={"individual": self.individual(env, depth - 1)},
                )),
            ]
        return self.pick(choices)()

    def individual(self, env: dict, depth: int) -> str:
        b, r = self.b, self.r
        ind_vars = [n for n, (t, _) in env.items() if t == "i"]
        nonempty = [n for n, (t, lb) in env.items() if t == "p" and lb >= 1]

        def literal():
            bits = "".join(r.choice("01") for _ in range(self.L))
            return b.block("individual_literal", {"bits": bits})

        choices = [
            (2.0, literal),
            (2.0, lambda: b.block(
                "individual_random",
                inputs={"bit_length": b.num(float(self.L))},
            )),
        ]
        if ind_vars:
            choices.append(
                (2.5, lambda: b.block("var_get_individual",
                                      {"name": r.choice(ind_vars)}))
            )
        if depth > 0:
            choices += [
                (2.0, lambda: b.block(
                    r.choice([
                        "crossover_one_point",
                        "crossover_two_point",
                        "crossover_uniform",
                    ]),
                    inputs={
                        "first": self.individual(env, depth - 1),
                        "second": self.individual(env, depth - 1),
                    },
                )),
                (1.5, lambda: b.block(
                    "mutate_per_bit",
                    inputs={
                        "individual": self.individual(env, depth - 1),
                        "probability": b.num(
                            r.choice([0.0, 0.1, 0.25, 0.5, 1.0])
                        ),
                    },
                )),
                (1.0, lambda: b.block(
                    "mutate_k_bits",
                    inputs={
                        "individual": self.individual(env, depth - 1),
                        "count": b.num(float(r.randint(0, self.L))),
                    },
                )),
                (1.0, lambda: self._selection(env, depth)),
            ]
        if nonempty or depth > 0:
            choices.append((0.8, lambda: b.block(
                "population_best",
                self._objective(),
                {"population": self.population(env, depth - 1, min_lb=1)[0]},
            )))
        return self.pick(choices)()

    def _objective(self) -> dict:
        name = self.r.choice(["onemax", "leading_ones", "jump"])
        return {"objective": name, "gap": float(self.r.randint(1, self.L))}

    def _selection(self, env: dict, depth: int) -> str:
        pop, _ = self.population(env, depth - 1, min_lb=1)
        if self.r.random() < 0.5:
            return self.b.block(
                "population_select_uniform", inputs={"population": pop}
            )
        # jump is strictly positive, so the distribution is always defined
        return self.b.block(
            "population_select_proportionate",
            {"objective": "jump", "gap": float(self.r.randint(1, self.L))},
            {"population": pop},
        )

    def population(self, env: dict, depth: int, min_lb: int = 0) -> tuple[str, int]:
        b, r = self.b, self.r
        pop_vars = [(n, lb) for n, (t, lb) in env.items()
                    if t == "p" and lb >= min_lb]

        def create():
            size = r.randint(max(min_lb, 2), 4)
            return (
                b.block(
                    "population_create",
                    inputs={
                        "size": b.num(float(size)),
                        "bit_length": b.num(float(self.L)),
                    },
                ),
                size,
            )

        choices = [(2.0, create)]
        if min_lb == 0:
            choices.append((0.7, lambda: (b.block("population_empty"), 0)))
        if pop_vars:
            def from_var():
                name, lb = r.choice(pop_vars)
                return b.block("var_get_population", {"name": name}), lb
            choices.append((2.5, from_var))
        if depth > 0:
            def add():
                pop, lb = self.population(env, depth - 1,
                                          min_lb=max(0, min_lb - 1))
                return (
                    b.block(
                        "population_add",
                        inputs={
                            "population": pop,
                            "individual": self.individual(env, depth - 1),
                        },
                    ),
                    lb + 1,
                )

            def merged():
                a, lba = self.population(env, depth - 1, min_lb=min_lb)
                c, lbc = self.population(env, depth - 1)
                return (
                    b.block("population_merge",
                            inputs={"first": a, "second": c}),
                    lba + lbc,
                )

            def sorted_pop():
                pop, lb = self.population(env, depth - 1, min_lb=min_lb)
                return (
                    b.block("population_sort", self._objective(),
                            {"population": pop}),
                    lb,
                )

            def taken():
                pop, lb = self.population(env, depth - 1, min_lb=min_lb)
                k = r.randint(min_lb, lb)
                return (
                    b.block(
                        "population_take",
                        inputs={"population": pop, "count": b.num(float(k))},
                    ),
                    k,
                )

            choices += [(1.2, add), (1.0, merged), (1.0, sorted_pop), (0.8, taken)]
        return self.pick(choices)()

    # ---- statements --------------------------------------------------

    def statement(self, env: dict, depth: int, in_worker: bool,
                  at_top: bool) -> str:
        b, r = self.b, self.r

        def set_number():
            name = self._var_target(env, "n")
            uid = b.block("var_set_number", {"name": name},
                          {"value": self.number(env, depth)})
            env[name] = ("n", 0)
            return uid

        def set_boolean():
            name = self._var_target(env, "b")
            uid = b.block("var_set_boolean", {"name": name},
                          {"value": self.boolean(env, depth)})
            env[name] = ("b", 0)
            return uid

        def set_text():
            name = self._var_target(env, "t")
            uid = b.block("var_set_text", {"name": name},
                          {"value": self.text(env, depth)})
            env[name] = ("t", 0)
            return uid

        def set_individual():
            name = self._var_target(env, "i")
            uid = b.block("var_set_individual", {"name": name},
                          {"value": self.individual(env, depth)})
            env[name] = ("i", 0)
            return uid

        def set_population():
            name = self._var_target(env, "p")
            pop, lb = self.population(env, depth)
            uid = b.block("var_set_population", {"name": name}, {"value": pop})
            env[name] = ("p", lb)
            return uid

        def emit_print():
            return b.block("print", inputs={"value": self.text(env, depth)})

        def plot():
            return b.block(
                "plot_point",
                {"style": r.choice(["scatter", "line", "bar"])},
                {
                    "series": self.text(env, depth - 1 if depth else 0),
                    "x": self.number(env, depth),
                    "y": self.number(env, depth),
                },
            )

        def comment():
            return b.block("comment", {"text": r.choice(_TEXT_POOL)})

        def if_else():
            return b.block(
                "if_else",
                inputs={"condition": self.boolean(env, depth)},
                body={
                    "then": self.chain(dict(env), depth - 1, in_worker, False,
                                       max_len=2),
                    "else": self.chain(dict(env), depth - 1, in_worker, False,
                                       max_len=2),
                },
            )

        def repeat():
            return b.block(
                "repeat_n",
                inputs={"times": b.num(float(r.randint(0, 3)))},
                body={"body": self.chain(dict(env), depth - 1, in_worker,
                                         False, max_len=2)},
            )

        def loop():
            kind = "evolutionary_loop"
            if not in_worker and r.random() < 0.5:
                kind = "ioh_loop"
            bound = b.block(
                "compare",
                {"op": "ge"},
                {
                    "first": b.block("generation_counter"),
                    "second": b.num(float(r.randint(0, 3))),
                },
            )
            return b.block(
                kind,
                inputs={"until": bound},
                body={"body": self.chain(dict(env), depth - 1, in_worker,
                                         False, max_len=3)},
            )

        def tasks():
            kind = r.choice([
                "run_tasks_sequential",
                "run_tasks_parallel",
                "run_tasks_pooled",
            ])
            importable = list(env)
            r.shuffle(importable)
            imports = importable[: r.randint(0, min(3, len(importable)))]
            task_env = {name: env[name] for name in imports}
            pre_body_env = dict(task_env)
            fields: dict = {"imports": ",".join(imports)}
            inputs = {"tasks": b.num(float(r.randint(0, 3)))}
            if kind == "run_tasks_pooled":
                inputs["workers"] = b.num(float(r.randint(1, 3)))
            body = self.chain(task_env, depth - 1, True, False, max_len=3)
            if r.random() < 0.5:
                export = self._var_target(task_env, "n")
                # the initializer runs before the body: only imports are bound
                body = [b.block(
                    "var_set_number", {"name": export},
                    {"value": self.number(pre_body_env, 0)},
                )] + body
                collect = self.fresh("l")
                fields["export_var"] = export
                fields["collect_into"] = collect
                env[collect] = ("l", 0)
            return b.block(kind, fields, inputs, body={"body": body})

        def repetitions():
            return b.block(
                "repetitions",
                {"count": float(r.randint(1, 3))},
                body={"body": self.chain({}, depth - 1, in_worker, False,
                                         max_len=4)},
            )

        choices = [
            (2.5, set_number),
            (1.0, set_boolean),
            (1.0, set_text),
            (1.5, set_individual),
            (2.0, set_population),
            (2.5, emit_print),
            (1.0, plot),
            (0.5, comment),
        ]
        if depth > 0:
            choices += [(1.2, if_else), (1.0, repeat), (1.0, loop)]
            if not in_worker:
                choices.append((1.0, tasks))
            if at_top:
                choices.append((1.0, repetitions))
        return self.pick(choices)()

    def _var_target(self, env: dict, prefix: str) -> str:
        existing = [n for n, (t, _) in env.items() if t == prefix]
        if existing and self.r.random() < 0.4:
            return self.r.choice(existing)
        return self.fresh(prefix)

    def chain(self, env: dict, depth: int, in_worker: bool, at_top: bool,
              max_len: int) -> list[str]:
        length = self.r.randint(0 if not at_top else 2, max_len)
        return [
            self.statement(env, max(depth, 0), in_worker, at_top)
            for _ in range(length)
        ]


def random_program(seed: int, codegen_safe: bool = False) -> BlockProgram:
    """A structurally valid, halt-free, terminating random program."""
    r = random.Random(seed)
    gen = _Gen(r, codegen_safe)
    statements = gen.chain({}, depth=2, in_worker=False, at_top=True,
                           max_len=6)
    gen.b.chain(statements)
    # sometimes leave a value expression disconnected at top level, which
    # must round-trip yet be skipped by the interpreter
    if not codegen_safe and r.random() < 0.3:
        gen.number({}, 1)
    return gen.b.build()
