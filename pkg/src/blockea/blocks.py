"""Block-program AST: kinds, the registry, typed connections, programs.

A program is a forest of typed blocks. Value blocks plug into input ports
of matching type; statement blocks chain through `next` and fill the body
slots of C-shaped blocks. A kind either produces a value or participates
in statement sequencing, never both.

Programs are immutable after construction and safe to share across
threads read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping


class BlockModelError(ValueError):
    """Structural violation while building a program."""


class UnknownKind(BlockModelError):
    pass


class CycleDetected(BlockModelError):
    pass


class DanglingReference(BlockModelError):
    pass


class BadField(BlockModelError):
    pass


class ValueType(Enum):
    NUMBER = "Number"
    BOOLEAN = "Boolean"
    TEXT = "Text"
    INDIVIDUAL = "Individual"
    POPULATION = "Population"
    LIST_OF_NUMBER = "ListOfNumber"


@dataclass(frozen=True)
class FieldSpec:
    name: str
    kind: str  # "number" | "string" | "enum"
    default: float | str
    choices: tuple[str, ...] = ()


@dataclass(frozen=True)
class PortSpec:
    name: str
    type: ValueType


@dataclass(frozen=True)
class BlockKind:
    id: str
    group: str
    value_output: ValueType | None = None
    input_ports: tuple[PortSpec, ...] = ()
    statement_slots: tuple[str, ...] = ()
    fields: tuple[FieldSpec, ...] = ()

    def __post_init__(self):
        if self.value_output is not None and self.statement_slots:
            raise BlockModelError(f"kind {self.id}: value blocks cannot hold bodies")

    @property
    def is_statement(self) -> bool:
        return self.value_output is None

    def port(self, name: str) -> PortSpec | None:
        for p in self.input_ports:
            if p.name == name:
                return p
        return None

    def field_spec(self, name: str) -> FieldSpec | None:
        for f in self.fields:
            if f.name == name:
                return f
        return None


GROUPS: dict[str, str] = {
    # palette color per group
    "population": "#d5418d",
    "individuals": "#5ba55b",
    "fitness": "#00acc1",
    "primitives": "#2e7d8c",
    "logic": "#3a6ea5",
    "loops": "#3f51b5",
    "functions": "#a55ba5",
    "logging": "#8a8a8a",
    "multithreading": "#3e9fbf",
    "time": "#b87333",
}

_N = ValueType.NUMBER
_B = ValueType.BOOLEAN
_T = ValueType.TEXT
_I = ValueType.INDIVIDUAL
_P = ValueType.POPULATION
_L = ValueType.LIST_OF_NUMBER

_OBJECTIVE_FIELDS = (
    FieldSpec("objective", "enum", "onemax", ("onemax", "leading_ones", "jump")),
    FieldSpec("gap", "number", 2.0),
)

_TASK_IO_FIELDS = (
    # comma-separated parent variables copied by value into each task scope
    FieldSpec("imports", "string", ""),
    # task variable whose final Number value is collected...
    FieldSpec("export_var", "string", ""),
    # ...into this parent variable as a ListOfNumber (task order)
    FieldSpec("collect_into", "string", ""),
)


def _kind(id, group, out=None, ports=(), slots=(), fields=()):
    return BlockKind(
        id=id,
        group=group,
        value_output=out,
        input_ports=tuple(PortSpec(n, t) for n, t in ports),
        statement_slots=tuple(slots),
        fields=tuple(fields),
    )


def _build_registry() -> dict[str, BlockKind]:
    kinds = [
        # population
        _kind("population_create", "population", _P,
              ports=[("size", _N), ("bit_length", _N)]),
        _kind("population_empty", "population", _P),
        _kind("population_size", "population", _N, ports=[("population", _P)]),
        _kind("population_best", "population", _I,
              ports=[("population", _P)], fields=_OBJECTIVE_FIELDS),
        _kind("population_select_uniform", "population", _I,
              ports=[("population", _P)]),
        _kind("population_select_proportionate", "population", _I,
              ports=[("population", _P)], fields=_OBJECTIVE_FIELDS),
        _kind("population_add", "population", _P,
              ports=[("population", _P), ("individual", _I)]),
        _kind("population_merge", "population", _P,
              ports=[("first", _P), ("second", _P)]),
        _kind("population_sort", "population", _P,
              ports=[("population", _P)], fields=_OBJECTIVE_FIELDS),
        _kind("population_take", "population", _P,
              ports=[("population", _P), ("count", _N)]),
        # individuals
        _kind("individual_random", "individuals", _I, ports=[("bit_length", _N)]),
        _kind("individual_literal", "individuals", _I,
              fields=[FieldSpec("bits", "string", "0000")]),
        _kind("individual_length", "individuals", _N, ports=[("individual", _I)]),
        _kind("crossover_one_point", "individuals", _I,
              ports=[("first", _I), ("second", _I)]),
        _kind("crossover_two_point", "individuals", _I,
              ports=[("first", _I), ("second", _I)]),
        _kind("crossover_uniform", "individuals", _I,
              ports=[("first", _I), ("second", _I)]),
        _kind("mutate_per_bit", "individuals", _I,
              ports=[("individual", _I), ("probability", _N)]),
        _kind("mutate_k_bits", "individuals", _I,
              ports=[("individual", _I), ("count", _N)]),
        # fitness
        _kind("fitness_onemax", "fitness", _N, ports=[("individual", _I)]),
        _kind("fitness_leading_ones", "fitness", _N, ports=[("individual", _I)]),
        _kind("fitness_jump", "fitness", _N, ports=[("individual", _I)],
              fields=[FieldSpec("gap", "number", 2.0)]),
        _kind("diversity_mean_hamming", "fitness", _N, ports=[("population", _P)]),
        # primitives
        _kind("number_literal", "primitives", _N,
              fields=[FieldSpec("value", "number", 0.0)]),
        _kind("number_arith", "primitives", _N,
              ports=[("first", _N), ("second", _N)],
              fields=[FieldSpec("op", "enum", "plus",
                                ("plus", "minus", "times", "divide"))]),
        _kind("random_number", "primitives", _N,
              ports=[("low", _N), ("high", _N)]),
        _kind("text_literal", "primitives", _T,
              fields=[FieldSpec("value", "string", "")]),
        _kind("text_concat", "primitives", _T,
              ports=[("first", _T), ("second", _T)]),
        _kind("text_of_number", "primitives", _T, ports=[("value", _N)]),
        _kind("text_of_individual", "primitives", _T, ports=[("individual", _I)]),
        _kind("list_sum", "primitives", _N, ports=[("list", _L)]),
        _kind("list_length", "primitives", _N, ports=[("list", _L)]),
        # loops
        _kind("repeat_n", "loops", ports=[("times", _N)], slots=["body"]),
        _kind("evolutionary_loop", "loops", ports=[("until", _B)], slots=["body"]),
        _kind("ioh_loop", "loops", ports=[("until", _B)], slots=["body"]),
        _kind("generation_counter", "loops", _N),
        # logic
        _kind("bool_literal", "logic", _B,
              fields=[FieldSpec("value", "enum", "true", ("true", "false"))]),
        _kind("bool_not", "logic", _B, ports=[("value", _B)]),
        _kind("bool_op", "logic", _B,
              ports=[("first", _B), ("second", _B)],
              fields=[FieldSpec("op", "enum", "and", ("and", "or"))]),
        _kind("compare", "logic", _B,
              ports=[("first", _N), ("second", _N)],
              fields=[FieldSpec("op", "enum", "eq",
                                ("eq", "ne", "lt", "le", "gt", "ge"))]),
        _kind("if_else", "logic", ports=[("condition", _B)],
              slots=["then", "else"]),
        # functions
        _kind("repetitions", "functions",
              fields=[FieldSpec("count", "number", 1.0)], slots=["body"]),
        _kind("run_index", "functions", _N),
        # logging
        _kind("print", "logging", ports=[("value", _T)]),
        _kind("plot_point", "logging",
              ports=[("series", _T), ("x", _N), ("y", _N)],
              fields=[FieldSpec("style", "enum", "line",
                                ("scatter", "line", "bar"))]),
        _kind("comment", "logging", fields=[FieldSpec("text", "string", "")]),
        # multithreading
        _kind("run_tasks_sequential", "multithreading",
              ports=[("tasks", _N)], slots=["body"], fields=_TASK_IO_FIELDS),
        _kind("run_tasks_parallel", "multithreading",
              ports=[("tasks", _N)], slots=["body"], fields=_TASK_IO_FIELDS),
        _kind("run_tasks_pooled", "multithreading",
              ports=[("tasks", _N), ("workers", _N)], slots=["body"],
              fields=_TASK_IO_FIELDS),
        _kind("hardware_concurrency", "multithreading", _N),
        _kind("fibonacci", "multithreading", _N, ports=[("value", _N)]),
        # time
        _kind("sleep", "time", ports=[("seconds", _N)]),
        _kind("timer_read", "time", _N),
    ]
    # typed variable access; one get/set pair per value type keeps programs
    # statically checkable (see validate)
    for vt in ValueType:
        suffix = {
            ValueType.NUMBER: "number",
            ValueType.BOOLEAN: "boolean",
            ValueType.TEXT: "text",
            ValueType.INDIVIDUAL: "individual",
            ValueType.POPULATION: "population",
            ValueType.LIST_OF_NUMBER: "list",
        }[vt]
        name_field = FieldSpec("name", "string", "x")
        kinds.append(_kind(f"var_get_{suffix}", "primitives", vt,
                           fields=[name_field]))
        kinds.append(_kind(f"var_set_{suffix}", "primitives",
                           ports=[("value", vt)], fields=[name_field]))

    registry = {}
    for k in kinds:
        if k.id in registry:
            raise BlockModelError(f"duplicate kind id {k.id}")
        if k.group not in GROUPS:
            raise BlockModelError(f"kind {k.id}: unknown group {k.group}")
        registry[k.id] = k
    return registry


REGISTRY: dict[str, BlockKind] = _build_registry()

VAR_TYPE_SUFFIX: dict[ValueType, str] = {
    ValueType.NUMBER: "number",
    ValueType.BOOLEAN: "boolean",
    ValueType.TEXT: "text",
    ValueType.INDIVIDUAL: "individual",
    ValueType.POPULATION: "population",
    ValueType.LIST_OF_NUMBER: "list",
}


def kind_of(kind_id: str) -> BlockKind:
    try:
        return REGISTRY[kind_id]
    except KeyError:
        raise UnknownKind(f"unknown block kind {kind_id!r}") from None


# XML 1.0 cannot carry other control characters, even escaped
_LEGAL_CTRL = {"\t", "\n", "\r"}


def _check_field_value(kind: BlockKind, spec: FieldSpec, value) -> float | str:
    if spec.kind == "number":
        try:
            num = float(value)
        except (TypeError, ValueError):
            raise BadField(f"{kind.id}.{spec.name}: not a number: {value!r}") from None
        if num != num or num in (float("inf"), float("-inf")):
            raise BadField(f"{kind.id}.{spec.name}: number must be finite")
        return num
    if not isinstance(value, str):
        raise BadField(f"{kind.id}.{spec.name}: expected text, got {value!r}")
    if spec.kind == "enum" and value not in spec.choices:
        raise BadField(
            f"{kind.id}.{spec.name}: {value!r} not one of {spec.choices}"
        )
    if any(ord(c) < 0x20 and c not in _LEGAL_CTRL for c in value):
        raise BadField(f"{kind.id}.{spec.name}: control characters not allowed")
    return value


@dataclass(frozen=True)
class Block:
    uid: str
    kind: str
    field_values: Mapping[str, float | str] = field(default_factory=dict)
    input_connections: Mapping[str, str] = field(default_factory=dict)
    body_heads: Mapping[str, str] = field(default_factory=dict)
    next: str | None = None

    def __post_init__(self):
        k = kind_of(self.kind)
        leftover = dict(self.field_values)
        checked: dict[str, float | str] = {}
        for spec in k.fields:
            raw = leftover.pop(spec.name, spec.default)
            checked[spec.name] = _check_field_value(k, spec, raw)
        if leftover:
            raise BadField(f"{k.id}: unknown fields {sorted(leftover)}")
        object.__setattr__(self, "field_values", checked)
        object.__setattr__(self, "input_connections", dict(self.input_connections))
        object.__setattr__(self, "body_heads", dict(self.body_heads))
        for port in self.input_connections:
            if k.port(port) is None:
                raise BadField(f"{k.id}: no input port named {port!r}")
        for slot in self.body_heads:
            if slot not in k.statement_slots:
                raise BadField(f"{k.id}: no statement slot named {slot!r}")
        if self.next is not None and not k.is_statement:
            raise BadField(f"{k.id}: value blocks cannot chain to a next block")


def _normalized_block(
    uid: str,
    kind: str,
    field_values: Mapping[str, float | str] | None = None,
    input_connections: Mapping[str, str] | None = None,
    body_heads: Mapping[str, str] | None = None,
    next: str | None = None,
) -> Block:
    return Block(
        uid=uid,
        kind=kind,
        field_values=dict(field_values or {}),
        input_connections=dict(input_connections or {}),
        body_heads=dict(body_heads or {}),
        next=next,
    )


@dataclass(frozen=True)
class BlockProgram:
    """A validated forest of blocks; `roots` are the unreferenced tops."""

    blocks: Mapping[str, Block]
    roots: tuple[str, ...]

    def __iter__(self) -> Iterator[Block]:
        return iter(self.blocks.values())

    def block(self, uid: str) -> Block:
        return self.blocks[uid]

    def walk(self) -> Iterator[Block]:
        """Blocks in canonical order: roots in order, then depth-first with
        input ports before body slots before the next chain."""
        for root in self.roots:
            yield from self._walk_chain(root)

    def _walk_chain(self, head: str) -> Iterator[Block]:
        uid: str | None = head
        while uid is not None:
            block = self.blocks[uid]
            yield from self._walk_one(block)
            uid = block.next

    def _walk_one(self, block: Block) -> Iterator[Block]:
        yield block
        kind = kind_of(block.kind)
        for port in kind.input_ports:
            child = block.input_connections.get(port.name)
            if child is not None:
                yield from self._walk_chain(child)
        for slot in kind.statement_slots:
            head = block.body_heads.get(slot)
            if head is not None:
                yield from self._walk_chain(head)

    def structure_key(self):
        """Canonical structure, independent of uids and insertion order."""
        return tuple(self._key_chain(r) for r in self.roots)

    def _key_chain(self, head: str | None):
        out = []
        while head is not None:
            block = self.blocks[head]
            out.append(self._key_one(block))
            head = block.next
        return tuple(out)

    def _key_one(self, block: Block):
        kind = kind_of(block.kind)
        return (
            block.kind,
            tuple(block.field_values[f.name] for f in kind.fields),
            tuple(
                self._key_chain(block.input_connections.get(p.name))
                for p in kind.input_ports
            ),
            tuple(
                self._key_chain(block.body_heads.get(s))
                for s in kind.statement_slots
            ),
        )

    def structurally_equals(self, other: "BlockProgram") -> bool:
        return self.structure_key() == other.structure_key()


def assemble_program(blocks: list[Block]) -> BlockProgram:
    """Check structural invariants and derive roots (document order).

    Raises DanglingReference, CycleDetected, or BadField on violations.
    """
    by_uid: dict[str, Block] = {}
    for b in blocks:
        if b.uid in by_uid:
            raise BadField(f"duplicate block uid {b.uid!r}")
        by_uid[b.uid] = b

    referenced: dict[str, str] = {}  # child uid -> parent uid

    def refer(parent: Block, child_uid: str, what: str) -> None:
        if child_uid not in by_uid:
            raise DanglingReference(
                f"{parent.uid} ({parent.kind}) {what} references missing "
                f"block {child_uid!r}"
            )
        if child_uid in referenced:
            raise BadField(
                f"block {child_uid!r} is connected to two parents "
                f"({referenced[child_uid]} and {parent.uid})"
            )
        referenced[child_uid] = parent.uid

    for b in blocks:
        for port_name, child in b.input_connections.items():
            refer(b, child, f"port {port_name!r}")
            if kind_of(by_uid[child].kind).is_statement:
                raise BadField(
                    f"{b.uid}: port {port_name!r} holds statement block {child!r}"
                )
        for slot, head in b.body_heads.items():
            refer(b, head, f"slot {slot!r}")
            if not kind_of(by_uid[head].kind).is_statement:
                raise BadField(
                    f"{b.uid}: slot {slot!r} holds value block {head!r}"
                )
        if b.next is not None:
            refer(b, b.next, "next")
            if not kind_of(by_uid[b.next].kind).is_statement:
                raise BadField(f"{b.uid}: next chains to value block {b.next!r}")

    roots = tuple(b.uid for b in blocks if b.uid not in referenced)

    program = BlockProgram(blocks=by_uid, roots=roots)
    seen: set[str] = set()
    for block in program.walk():
        if block.uid in seen:
            raise CycleDetected(f"block {block.uid!r} reached twice")
        seen.add(block.uid)
    if len(seen) != len(by_uid):
        lost = sorted(set(by_uid) - seen)
        raise CycleDetected(f"blocks unreachable from any root (cycle): {lost}")
    return program


class ProgramBuilder:
    """Convenience for constructing programs in code (tests, examples)."""

    def __init__(self):
        self._blocks: list[Block] = []
        self._counter = 0

    def _uid(self) -> str:
        self._counter += 1
        return f"b{self._counter}"

    def block(
        self,
        kind: str,
        fields: Mapping[str, float | str] | None = None,
        inputs: Mapping[str, str] | None = None,
        body: Mapping[str, list[str]] | None = None,
    ) -> str:
        heads: dict[str, str] = {}
        if body:
            for slot, stmts in body.items():
                if stmts:
                    heads[slot] = self.chain(stmts)
        uid = self._uid()
        self._blocks.append(
            _normalized_block(uid, kind, fields, inputs, heads, None)
        )
        return uid

    def chain(self, uids: list[str]) -> str:
        """Link statements into a sequence; returns the head uid."""
        for prev, nxt in zip(uids, uids[1:]):
            self._relink(prev, nxt)
        return uids[0]

    def _relink(self, uid: str, next_uid: str) -> None:
        for i, b in enumerate(self._blocks):
            if b.uid == uid:
                self._blocks[i] = _normalized_block(
                    b.uid, b.kind, b.field_values, b.input_connections,
                    b.body_heads, next_uid,
                )
                return
        raise DanglingReference(f"no block {uid!r} in builder")

    def num(self, value: float) -> str:
        return self.block("number_literal", {"value": value})

    def text(self, value: str) -> str:
        return self.block("text_literal", {"value": value})

    def build(self) -> BlockProgram:
        return assemble_program(list(self._blocks))
