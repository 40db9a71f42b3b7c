"""Task batches in three modes: sequential, fully parallel, pool-limited.

Tasks are closed: a task is a module-level function plus a pickled
payload, so every worker operates on its own copies and results come
back by value. Workers are OS processes (a thread cannot give CPU-bound
block programs real parallelism in CPython), but the contract is the
same one the modes describe: isolation plus by-value marshalling.

Worker events are buffered per task and flushed to the shared sink in
task order, so logs are deterministic regardless of scheduling. In
sequential mode events additionally stream live, which produces the
exact same sink sequence.
"""

from __future__ import annotations

import multiprocessing
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .errors import Cancelled, RuntimeHalt, SpawnFailure, WorkerPanicked
from .events import Event, EventSink
from .values import format_number

DEFAULT_UNLIMITED_CAP = 256

TaskFn = Callable[[bytes, EventSink, Any], Any]


@dataclass(frozen=True)
class ThreadMode:
    kind: str  # "sequential" | "unlimited" | "pool"
    workers: int = 1

    def __post_init__(self):
        if self.kind not in ("sequential", "unlimited", "pool"):
            raise ValueError(f"unknown mode {self.kind!r}")
        if self.kind == "pool" and self.workers < 1:
            raise ValueError("pool mode needs at least one worker")

    @staticmethod
    def parse(text: str) -> "ThreadMode":
        """Accepts 'seq', 'all', or 'pool:X'."""
        if text == "seq":
            return SEQUENTIAL
        if text == "all":
            return UNLIMITED
        if text.startswith("pool:"):
            return ThreadMode("pool", int(text.split(":", 1)[1]))
        raise ValueError(f"unknown mode {text!r} (want seq | all | pool:X)")

    def label(self) -> str:
        if self.kind == "pool":
            return f"pool:{self.workers}"
        return {"sequential": "seq", "unlimited": "all"}[self.kind]


SEQUENTIAL = ThreadMode("sequential")
UNLIMITED = ThreadMode("unlimited")


def pool(workers: int) -> ThreadMode:
    return ThreadMode("pool", workers)


@dataclass(frozen=True)
class Task:
    fn: TaskFn
    payload: bytes


@dataclass(frozen=True)
class TaskResult:
    task_index: int
    value: Any
    events: tuple[Event, ...]


@dataclass
class _Outcome:
    value: Any = None
    events: list = field(default_factory=list)
    error: tuple[str, str, str] | None = None  # (category, reason, message)


def _invoke(fn: TaskFn, payload: bytes, cancel) -> _Outcome:
    out = _Outcome()
    try:
        out.value = fn(payload, out.events.append, cancel)
    except RuntimeHalt as e:
        out.error = ("halt", e.reason, e.message)
    except Cancelled:
        out.error = ("cancelled", "", "")
    except Exception as e:  # noqa: BLE001 - reported as WorkerPanicked
        out.error = ("panic", type(e).__name__, str(e))
    return out


def hardware_concurrency() -> int:
    return os.cpu_count() or 1


def _unlimited_cap() -> int:
    raw = os.environ.get("BLOCKEA_MAX_WORKERS", "")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return DEFAULT_UNLIMITED_CAP


def _mp_context():
    preferred = os.environ.get("BLOCKEA_MP_START", "")
    methods = multiprocessing.get_all_start_methods()
    if preferred and preferred in methods:
        return multiprocessing.get_context(preferred)
    return multiprocessing.get_context("fork" if "fork" in methods else "spawn")


def run_tasks(
    tasks: Sequence[Task],
    mode: ThreadMode,
    sink: EventSink | None = None,
    cancel=None,
) -> list[TaskResult]:
    """Run closed tasks, reporting results and events in task order.

    `cancel`, when given, must expose `is_set()` and be picklable for the
    parallel modes (a multiprocessing.Manager Event works; a plain
    threading.Event is fine for sequential mode).
    """
    if mode.kind == "sequential":
        outcomes = []
        for task in tasks:
            if sink is None:
                outcomes.append(_invoke(task.fn, task.payload, cancel))
                continue
            out = _Outcome()

            def emit(event: Event, _out=out) -> None:
                _out.events.append(event)
                sink(event)

            try:
                out.value = task.fn(task.payload, emit, cancel)
            except RuntimeHalt as e:
                out.error = ("halt", e.reason, e.message)
            except Cancelled:
                out.error = ("cancelled", "", "")
            except Exception as e:  # noqa: BLE001
                out.error = ("panic", type(e).__name__, str(e))
            outcomes.append(out)
        # events already streamed live when a sink was given
        return _finish(outcomes, sink=None, flush=False)

    if mode.kind == "unlimited":
        if not tasks:
            raise ValueError("unlimited mode needs at least one task")
        cap = _unlimited_cap()
        if len(tasks) > cap:
            raise SpawnFailure(
                f"{len(tasks)} tasks exceed the unlimited-mode cap of {cap} "
                "workers (set BLOCKEA_MAX_WORKERS to raise it)"
            )
        workers = len(tasks)
    else:
        workers = mode.workers

    try:
        with ProcessPoolExecutor(
            max_workers=workers, mp_context=_mp_context()
        ) as executor:
            futures = [
                executor.submit(_invoke, task.fn, task.payload, cancel)
                for task in tasks
            ]
            outcomes = [f.result() for f in futures]
    except OSError as e:
        raise SpawnFailure(f"could not start workers: {e}") from e
    return _finish(outcomes, sink, flush=True)


def _finish(
    outcomes: list[_Outcome], sink: EventSink | None, flush: bool
) -> list[TaskResult]:
    if flush and sink is not None:
        for out in outcomes:
            for event in out.events:
                sink(event)
    for index, out in enumerate(outcomes):
        if out.error is None:
            continue
        category, reason, message = out.error
        if category == "halt":
            raise RuntimeHalt(reason, message)
        if category == "cancelled":
            raise Cancelled()
        raise WorkerPanicked(index, f"{reason}: {message}")
    return [
        TaskResult(i, out.value, tuple(out.events))
        for i, out in enumerate(outcomes)
    ]


def fib(m: int) -> int:
    """Naive exponential-time Fibonacci; exists to generate CPU load."""
    if m < 0:
        raise ValueError(f"fibonacci argument must be >= 0, got {m}")
    if m < 2:
        return m
    return fib(m - 1) + fib(m - 2)


def _fib_task(payload: bytes, emit: EventSink, cancel) -> int:
    return fib(int.from_bytes(payload, "big"))


def _fib_payload(m: int) -> bytes:
    return m.to_bytes(4, "big")


def calibrate_fib(lo_ms: float = 100.0, hi_ms: float = 300.0) -> int:
    """Smallest argument whose naive evaluation takes at least lo_ms."""
    m = 15
    while True:
        start = time.perf_counter()
        fib(m)
        elapsed = (time.perf_counter() - start) * 1000.0
        if elapsed >= lo_ms:
            return m
        # naive fib grows by the golden ratio per step; jump when far away
        m += 2 if elapsed < lo_ms / 3 else 1


PERF_SEPARATOR = "-" * 48


def perf_experiment(
    i_max: int,
    m: int,
    pool_workers: int | None = None,
    task_counts: Sequence[int] | None = None,
) -> str:
    """Time i copies of the Fibonacci dummy task in all three modes.

    Returns CSV text: header `threads,num_iterations,num_threads,time`,
    one row per mode per i with labels `one thread` / `all threads` /
    `limited threads`, groups separated by a 48-dash line. `task_counts`
    restricts the i values (default 1..i_max).
    """
    if i_max < 1:
        raise ValueError(f"i_max must be >= 1, got {i_max}")
    workers = pool_workers if pool_workers is not None else hardware_concurrency()
    counts = list(task_counts) if task_counts is not None else list(range(1, i_max + 1))

    lines = ["threads,num_iterations,num_threads,time"]
    for group, i in enumerate(counts):
        tasks = [Task(_fib_task, _fib_payload(m)) for _ in range(i)]
        if group > 0:
            lines.append(PERF_SEPARATOR)
        for label, mode, threads in (
            ("one thread", SEQUENTIAL, 1),
            ("all threads", UNLIMITED, i),
            ("limited threads", pool(workers), workers),
        ):
            start = time.perf_counter()
            run_tasks(tasks, mode)
            elapsed_ms = (time.perf_counter() - start) * 1000.0
            lines.append(f"{label},{i},{threads},{format_number(elapsed_ms)}")
    return "\n".join(lines) + "\n"
