"""Command-line front door: run, validate, export, examples, serve.

Exit codes: 0 success, 1 validation errors (validate subcommand),
2 parse/validate failure (run/export), 3 runtime halt, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import codegen
from .blocks import BlockModelError, BlockProgram
from .datalog import ExportError, derive_meta, export_csv, export_ioh, ioh_file_names
from .errors import Cancelled, RuntimeHalt, SpawnFailure, WorkerPanicked
from .events import Print
from .examples import EXAMPLES, example_xml
from .interpreter import interpret
from .runner import ThreadMode
from .validate import has_errors, validate
from .xmlio import XmlError, parse_xml

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_RUNTIME = 3
EXIT_IO = 4


def _read_program(path: str) -> BlockProgram:
    try:
        text = Path(path).read_text("utf-8")
    except OSError as e:
        raise _CliExit(EXIT_IO, f"cannot read {path}: {e}") from e
    try:
        return parse_xml(text)
    except (XmlError, BlockModelError) as e:
        raise _CliExit(EXIT_PARSE, f"invalid program {path}: {e}") from e


class _CliExit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _cmd_validate(args) -> int:
    program = _read_program(args.file)
    diagnostics = validate(program)
    for diag in diagnostics:
        print(diag)
    if has_errors(diagnostics):
        return EXIT_INVALID
    return EXIT_OK


def _checked(program: BlockProgram, path: str) -> None:
    diagnostics = validate(program)
    errors = [d for d in diagnostics if d.is_error]
    if errors:
        for diag in errors:
            print(diag, file=sys.stderr)
        raise _CliExit(EXIT_PARSE, f"{path} has {len(errors)} validation error(s)")


def _cmd_run(args) -> int:
    program = _read_program(args.file)
    _checked(program, args.file)
    try:
        mode = ThreadMode.parse(args.mode)
    except ValueError as e:
        raise _CliExit(EXIT_PARSE, str(e)) from e

    stdout_open = True

    def sink(event) -> None:
        # a closed pipe (e.g. `blockea run ... | head`) must not abort the
        # run; exports still get written
        nonlocal stdout_open
        if not stdout_open or not isinstance(event, Print):
            return
        try:
            print(event.text, flush=True)
        except BrokenPipeError:
            stdout_open = False
            devnull = os.open(os.devnull, os.O_WRONLY)
            os.dup2(devnull, sys.stdout.fileno())

    try:
        result = interpret(program, args.seed, sink, mode=mode)
    except (RuntimeHalt, Cancelled, WorkerPanicked, SpawnFailure) as e:
        raise _CliExit(EXIT_RUNTIME, f"run halted: {e}") from e

    formats = [f for f in (args.formats or "").split(",") if f]
    for fmt in formats:
        if fmt not in ("csv", "ioh"):
            raise _CliExit(EXIT_PARSE, f"unknown export format {fmt!r}")
    if not formats:
        return EXIT_OK

    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        stem = Path(args.file).stem.replace(".blockea", "")
        if "csv" in formats:
            (out_dir / f"{stem}.csv").write_text(export_csv(result.logs), "utf-8")
        if "ioh" in formats:
            meta = derive_meta(program, args.seed, len(result.logs), stem)
            try:
                info_text, dat_text = export_ioh(result.logs, meta)
            except ExportError as e:
                raise _CliExit(EXIT_RUNTIME, f"ioh export failed: {e}") from e
            info_name, dat_name = ioh_file_names(meta)
            (out_dir / info_name).write_text(info_text, "utf-8")
            (out_dir / dat_name).write_text(dat_text, "utf-8")
    except OSError as e:
        raise _CliExit(EXIT_IO, f"cannot write exports to {out_dir}: {e}") from e
    return EXIT_OK


def _cmd_export_code(args) -> int:
    program = _read_program(args.file)
    _checked(program, args.file)
    bundle = codegen.emit_standalone(program, args.seed)
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, text in bundle.items():
            (out_dir / name).write_text(text, "utf-8")
    except OSError as e:
        raise _CliExit(EXIT_IO, f"cannot write bundle to {out_dir}: {e}") from e
    print(f"wrote {', '.join(bundle)} to {out_dir}")
    return EXIT_OK


def _cmd_examples(args) -> int:
    if args.action == "list":
        for example in EXAMPLES.values():
            print(f"{example.name}\t{example.title}")
        return EXIT_OK
    try:
        sys.stdout.write(example_xml(args.name))
    except KeyError as e:
        raise _CliExit(EXIT_IO, str(e.args[0])) from e
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    try:
        uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    except OSError as e:
        raise _CliExit(EXIT_IO, f"cannot bind port {args.port}: {e}") from e
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockea",
        description="Run, check, and export block programs for "
        "evolutionary algorithms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a program and export data")
    run.add_argument("file")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--mode", default="seq", help="seq | all | pool:X")
    run.add_argument("--out", default=".", help="directory for export files")
    run.add_argument("--formats", default="", help="comma list of csv,ioh")
    run.set_defaults(fn=_cmd_run)

    val = sub.add_parser("validate", help="print diagnostics for a program")
    val.add_argument("file")
    val.set_defaults(fn=_cmd_validate)

    code = sub.add_parser("export-code", help="emit a standalone code bundle")
    code.add_argument("file")
    code.add_argument("--seed", type=int, default=0)
    code.add_argument("--out", default="bundle")
    code.set_defaults(fn=_cmd_export_code)

    ex = sub.add_parser("examples", help="list or print shipped examples")
    ex.add_argument("action", choices=["list", "get"])
    ex.add_argument("name", nargs="?")
    ex.set_defaults(fn=_cmd_examples)

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8977)
    serve.set_defaults(fn=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "examples" and args.action == "get" and not args.name:
        print("examples get requires a name", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.fn(args)
    except _CliExit as e:
        print(str(e), file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
