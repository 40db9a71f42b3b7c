"""Static diagnostics for block programs.

Deep checks (missing inputs, connection types, variable type consistency)
run only over executable roots and the blocks reachable from them:
value-output blocks left at top level are merely warned DisconnectedRoot
and skipped by the interpreter, mirroring a greyed-out fragment on the
editor canvas that must not stop the connected program from running.

A program with zero error diagnostics never raises a type error in the
interpreter (unbound-variable and value-domain halts remain possible).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .blocks import Block, BlockProgram, ValueType, VAR_TYPE_SUFFIX, kind_of

DISCONNECTED_ROOT = "DisconnectedRoot"
MISSING_INPUT = "MissingInput"
TYPE_MISMATCH = "TypeMismatch"

_SUFFIX_TO_TYPE = {suffix: vt for vt, suffix in VAR_TYPE_SUFFIX.items()}

_TASK_KINDS = ("run_tasks_sequential", "run_tasks_parallel", "run_tasks_pooled")


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "warning" | "error"
    code: str
    block_uid: str
    detail: str
    message: str

    @property
    def is_error(self) -> bool:
        return self.severity == "error"

    def __str__(self) -> str:
        return f"{self.severity}: {self.code} at {self.block_uid}: {self.message}"


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)


def executable_roots(program: BlockProgram) -> list[str]:
    return [r for r in program.roots if kind_of(program.block(r).kind).is_statement]


def _reachable(program: BlockProgram, root: str) -> Iterator[Block]:
    stack = [root]
    while stack:
        uid = stack.pop()
        block = program.block(uid)
        yield block
        kind = kind_of(block.kind)
        stack.extend(
            child for child in block.input_connections.values() if child
        )
        stack.extend(head for head in block.body_heads.values() if head)
        if block.next is not None:
            stack.append(block.next)


def _variable_uses(block: Block) -> Iterator[tuple[str, ValueType, str]]:
    """Yields (variable name, required type, what) for static consistency."""
    kind_id = block.kind
    if kind_id.startswith("var_get_") or kind_id.startswith("var_set_"):
        suffix = kind_id.rsplit("_", 1)[1]
        yield str(block.field_values["name"]), _SUFFIX_TO_TYPE[suffix], kind_id
    elif kind_id in _TASK_KINDS:
        export_var = str(block.field_values["export_var"])
        collect_into = str(block.field_values["collect_into"])
        if export_var:
            yield export_var, ValueType.NUMBER, "task export"
        if collect_into:
            yield collect_into, ValueType.LIST_OF_NUMBER, "task collect"


def validate(program: BlockProgram) -> list[Diagnostic]:
    diagnostics: list[Diagnostic] = []
    var_types: dict[str, tuple[ValueType, str]] = {}

    for root in program.roots:
        root_kind = kind_of(program.block(root).kind)
        if not root_kind.is_statement:
            diagnostics.append(
                Diagnostic(
                    "warning", DISCONNECTED_ROOT, root, "",
                    f"top-level {root_kind.id} block is not executable and "
                    "will be skipped",
                )
            )
            continue

        for block in _reachable(program, root):
            kind = kind_of(block.kind)
            for port in kind.input_ports:
                child_uid = block.input_connections.get(port.name)
                if child_uid is None:
                    diagnostics.append(
                        Diagnostic(
                            "error", MISSING_INPUT, block.uid, port.name,
                            f"{kind.id}: input {port.name!r} is empty",
                        )
                    )
                    continue
                child_kind = kind_of(program.block(child_uid).kind)
                if child_kind.value_output is not port.type:
                    got = (
                        child_kind.value_output.value
                        if child_kind.value_output
                        else "statement"
                    )
                    diagnostics.append(
                        Diagnostic(
                            "error", TYPE_MISMATCH, block.uid, port.name,
                            f"{kind.id}: input {port.name!r} wants "
                            f"{port.type.value}, got {got} from {child_kind.id}",
                        )
                    )
            for name, required, what in _variable_uses(block):
                seen = var_types.get(name)
                if seen is None:
                    var_types[name] = (required, what)
                elif seen[0] is not required:
                    diagnostics.append(
                        Diagnostic(
                            "error", TYPE_MISMATCH, block.uid, name,
                            f"variable {name!r} used as {required.value} here "
                            f"({what}) but as {seen[0].value} elsewhere "
                            f"({seen[1]})",
                        )
                    )
    return diagnostics
