"""Standalone bundle emission and differential equivalence."""

import subprocess
import sys

import pytest

from blockea.blocks import ProgramBuilder, REGISTRY
from blockea.codegen import (
    MAIN_NAME,
    RUNTIME_NAME,
    emit_standalone,
    emitter_coverage,
)
from blockea.events import render_output
from blockea.fuzz import random_program
from blockea.interpreter import interpret


def run_bundle(bundle, tmp_path, timeout=60):
    for name, text in bundle.items():
        (tmp_path / name).write_text(text, "utf-8")
    return subprocess.run(
        [sys.executable, "-S", "-E", MAIN_NAME],
        cwd=tmp_path,
        capture_output=True,
        text=True,
        timeout=timeout,
    )


def test_every_registered_kind_has_an_emitter():
    assert emitter_coverage() == []
    assert len(REGISTRY) > 50


def test_runtime_support_compiles():
    bundle = emit_standalone(ProgramBuilder().build(), 0)
    compile(bundle[RUNTIME_NAME], RUNTIME_NAME, "exec")
    compile(bundle[MAIN_NAME], MAIN_NAME, "exec")


def test_print_constant_bundle(tmp_path):
    b = ProgramBuilder()
    b.block("print", inputs={"value": b.text("hello bundle")})
    out = run_bundle(emit_standalone(b.build(), 0), tmp_path)
    assert out.returncode == 0
    assert out.stdout == "hello bundle\n"


def test_invalid_program_rejected():
    b = ProgramBuilder()
    b.block("if_else")
    with pytest.raises(ValueError):
        emit_standalone(b.build(), 0)


def test_bundle_halt_exits_nonzero(tmp_path):
    b = ProgramBuilder()
    b.block("print", inputs={"value": b.block(
        "text_of_number",
        inputs={"value": b.block("var_get_number", {"name": "ghost"})},
    )})
    out = run_bundle(emit_standalone(b.build(), 0), tmp_path)
    assert out.returncode == 3
    assert "UnboundVariable" in out.stderr


def test_comment_with_newline_is_sanitized(tmp_path):
    b = ProgramBuilder()
    first = b.block("comment", {"text": "line one\nline two"})
    second = b.block("print", inputs={"value": b.text("ok")})
    b.chain([first, second])
    out = run_bundle(emit_standalone(b.build(), 0), tmp_path)
    assert out.returncode == 0
    assert out.stdout == "ok\n"


def test_repetitions_bundle_matches_interpreter(tmp_path):
    from blockea.examples import build_simple_plotting

    program = build_simple_plotting()
    expected = render_output(interpret(program, 5).events)
    out = run_bundle(emit_standalone(program, 5), tmp_path)
    assert out.returncode == 0
    assert out.stdout.splitlines() == expected


@pytest.mark.parametrize("seed", range(12))
def test_differential_equivalence_sample(seed, tmp_path):
    program = random_program(seed * 101 + 7, codegen_safe=True)
    master_seed = seed * 13 + 1
    expected = render_output(interpret(program, master_seed).events)
    out = run_bundle(emit_standalone(program, master_seed), tmp_path)
    assert out.returncode == 0, out.stderr[-400:]
    assert out.stdout.splitlines() == expected
