"""HTTP companion service for the browser editor.

Endpoints: validate, submit runs (returning immediately), stream run
events as newline-delimited JSON, cancel, export, the shipped examples,
and the block registry the editor builds its palette from. Runs live in
memory only; restarting the service forgets history.
"""

from __future__ import annotations

import itertools
import json
import multiprocessing
import threading
import time
from dataclasses import dataclass, field as dc_field

from fastapi import FastAPI, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse, StreamingResponse

from .blocks import GROUPS, REGISTRY, BlockModelError
from .datalog import (
    ExportError,
    derive_meta,
    export_csv,
    export_ioh,
    ioh_file_names,
)
from .errors import Cancelled, RuntimeHalt, SpawnFailure, WorkerPanicked
from .events import event_to_json_dict
from .examples import EXAMPLES, example_xml
from .interpreter import interpret
from .runner import ThreadMode
from .validate import has_errors, validate
from .xmlio import XmlError, parse_xml


@dataclass
class _Run:
    id: str
    state: str = "queued"  # queued -> running -> finished|failed|cancelled
    created_at: float = dc_field(default_factory=time.time)
    events: list = dc_field(default_factory=list)
    error: str = ""
    logs: tuple = ()
    program: object = None
    seed: int = 0
    cancel_token: object = None
    cond: threading.Condition = dc_field(default_factory=threading.Condition)

    def set_state(self, state: str) -> None:
        with self.cond:
            self.state = state
            self.cond.notify_all()

    @property
    def done(self) -> bool:
        return self.state in ("finished", "failed", "cancelled")


def _diag_json(diag) -> dict:
    return {
        "severity": diag.severity,
        "code": diag.code,
        "block": diag.block_uid,
        "detail": diag.detail,
        "message": diag.message,
    }


def _registry_json() -> dict:
    kinds = []
    for kind in REGISTRY.values():
        kinds.append(
            {
                "id": kind.id,
                "group": kind.group,
                "value_output": kind.value_output.value if kind.value_output else None,
                "input_ports": [
                    {"name": p.name, "type": p.type.value} for p in kind.input_ports
                ],
                "statement_slots": list(kind.statement_slots),
                "fields": [
                    {
                        "name": f.name,
                        "kind": f.kind,
                        "default": f.default,
                        "choices": list(f.choices),
                    }
                    for f in kind.fields
                ],
            }
        )
    return {
        "groups": [
            {"name": name, "color": color} for name, color in GROUPS.items()
        ],
        "kinds": kinds,
    }


def create_app() -> FastAPI:
    app = FastAPI(title="blockea", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    runs: dict[str, _Run] = {}
    run_ids = itertools.count(1)
    manager_holder: dict = {}
    state_lock = threading.Lock()

    def manager_event():
        # multiprocessing cancel tokens must be picklable: Manager proxies are
        with state_lock:
            if "manager" not in manager_holder:
                manager_holder["manager"] = multiprocessing.Manager()
            return manager_holder["manager"].Event()

    @app.get("/registry")
    def registry() -> JSONResponse:
        return JSONResponse(_registry_json())

    @app.get("/examples")
    def examples() -> JSONResponse:
        return JSONResponse(
            [{"name": e.name, "title": e.title} for e in EXAMPLES.values()]
        )

    @app.get("/examples/{name}")
    def example(name: str) -> Response:
        try:
            xml = example_xml(name)
        except KeyError:
            return JSONResponse({"error": f"no example named {name!r}"}, 404)
        return PlainTextResponse(xml, media_type="application/xml")

    @app.post("/programs/validate")
    async def validate_program(request: Request) -> JSONResponse:
        text = (await request.body()).decode("utf-8", "replace")
        try:
            program = parse_xml(text)
        except (XmlError, BlockModelError) as e:
            return JSONResponse({"error": str(e)}, 400)
        diagnostics = validate(program)
        return JSONResponse(
            {
                "valid": not has_errors(diagnostics),
                "diagnostics": [_diag_json(d) for d in diagnostics],
            }
        )

    @app.post("/runs")
    async def submit_run(
        request: Request,
        seed: int = Query(0),
        mode: str = Query("seq"),
    ) -> JSONResponse:
        text = (await request.body()).decode("utf-8", "replace")
        try:
            program = parse_xml(text)
        except (XmlError, BlockModelError) as e:
            return JSONResponse({"error": str(e)}, 400)
        diagnostics = validate(program)
        if has_errors(diagnostics):
            return JSONResponse(
                {
                    "error": "program has validation errors",
                    "diagnostics": [_diag_json(d) for d in diagnostics],
                },
                400,
            )
        try:
            thread_mode = ThreadMode.parse(mode)
        except ValueError as e:
            return JSONResponse({"error": str(e)}, 400)

        run = _Run(id=str(next(run_ids)), program=program, seed=seed)
        run.cancel_token = (
            threading.Event()
            if thread_mode.kind == "sequential"
            else manager_event()
        )
        runs[run.id] = run

        def execute() -> None:
            run.set_state("running")

            def sink(event) -> None:
                with run.cond:
                    run.events.append(event)
                    run.cond.notify_all()

            try:
                result = interpret(
                    program,
                    seed,
                    sink,
                    mode=thread_mode,
                    cancel=run.cancel_token,
                )
                run.logs = result.logs
                run.set_state("finished")
            except Cancelled:
                run.set_state("cancelled")
            except (RuntimeHalt, WorkerPanicked, SpawnFailure) as e:
                run.error = str(e)
                run.set_state("failed")
            except Exception as e:  # noqa: BLE001 - surfaced to the client
                run.error = f"internal error: {e}"
                run.set_state("failed")

        threading.Thread(target=execute, daemon=True).start()
        return JSONResponse({"id": run.id, "state": run.state})

    @app.get("/runs/{run_id}")
    def run_state(run_id: str) -> JSONResponse:
        run = runs.get(run_id)
        if run is None:
            return JSONResponse({"error": "unknown run"}, 404)
        return JSONResponse(
            {
                "id": run.id,
                "state": run.state,
                "created_at": run.created_at,
                "events": len(run.events),
                "error": run.error,
            }
        )

    @app.get("/runs/{run_id}/events")
    def run_events(run_id: str) -> Response:
        run = runs.get(run_id)
        if run is None:
            return JSONResponse({"error": "unknown run"}, 404)

        def stream():
            index = 0
            while True:
                with run.cond:
                    while index >= len(run.events) and not run.done:
                        run.cond.wait(timeout=0.5)
                    chunk = run.events[index:]
                    index += len(chunk)
                    done = run.done and index >= len(run.events)
                for event in chunk:
                    yield json.dumps(event_to_json_dict(event)) + "\n"
                if done:
                    payload = {"type": "end", "state": run.state}
                    if run.error:
                        payload["error"] = run.error
                    yield json.dumps(payload) + "\n"
                    return

        return StreamingResponse(stream(), media_type="application/x-ndjson")

    @app.post("/runs/{run_id}/cancel")
    def cancel_run(run_id: str) -> JSONResponse:
        run = runs.get(run_id)
        if run is None:
            return JSONResponse({"error": "unknown run"}, 404)
        if not run.done:
            run.cancel_token.set()
        return JSONResponse({"id": run.id, "state": run.state})

    @app.get("/runs/{run_id}/export")
    def export_run(run_id: str, format: str = Query("csv")) -> Response:
        run = runs.get(run_id)
        if run is None:
            return JSONResponse({"error": "unknown run"}, 404)
        if run.state != "finished":
            return JSONResponse(
                {"error": f"run is {run.state}, not finished"}, 409
            )
        if format == "csv":
            return PlainTextResponse(export_csv(run.logs), media_type="text/csv")
        if format == "ioh":
            meta = derive_meta(
                run.program, run.seed, len(run.logs), f"run-{run.id}"
            )
            try:
                info_text, dat_text = export_ioh(run.logs, meta)
            except ExportError as e:
                return JSONResponse({"error": str(e)}, 409)
            info_name, dat_name = ioh_file_names(meta)
            return JSONResponse(
                {
                    "info_name": info_name,
                    "info": info_text,
                    "dat_name": dat_name,
                    "dat": dat_text,
                }
            )
        return JSONResponse({"error": f"unknown format {format!r}"}, 400)

    @app.post("/programs/export-code")
    async def export_code(request: Request, seed: int = Query(0)) -> Response:
        from .codegen import emit_standalone

        text = (await request.body()).decode("utf-8", "replace")
        try:
            program = parse_xml(text)
        except (XmlError, BlockModelError) as e:
            return JSONResponse({"error": str(e)}, 400)
        diagnostics = validate(program)
        if has_errors(diagnostics):
            return JSONResponse({"error": "program has validation errors"}, 400)
        return JSONResponse(emit_standalone(program, seed))

    return app
