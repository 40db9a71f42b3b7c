"""Task batches: mode equivalence, ordering, isolation, pool bounds."""

import os
import pickle
import time

import pytest

from blockea.errors import SpawnFailure, WorkerPanicked
from blockea.events import Print
from blockea.runner import (
    PERF_SEPARATOR,
    SEQUENTIAL,
    Task,
    ThreadMode,
    UNLIMITED,
    fib,
    hardware_concurrency,
    perf_experiment,
    pool,
    run_tasks,
)


def fib_oracle(m):
    a, b = 0, 1
    for _ in range(m):
        a, b = b, a + b
    return a


def test_fib_against_iterative_oracle():
    assert fib(0) == 0
    assert fib(1) == 1
    assert fib(10) == 55
    assert fib(20) == 6765
    for m in range(15):
        assert fib(m) == fib_oracle(m)
    with pytest.raises(ValueError):
        fib(-1)


def _fib_task(payload, emit, cancel):
    return fib(pickle.loads(payload))


def _echo_task(payload, emit, cancel):
    index = pickle.loads(payload)
    emit(Print(-1, f"task {index}"))
    return index


def _mutating_task(payload, emit, cancel):
    data = pickle.loads(payload)
    data["values"].append(999)
    return data["values"]


def _timed_task(payload, emit, cancel):
    start = time.monotonic()
    fib(22)
    return (start, time.monotonic())


def _failing_task(payload, emit, cancel):
    index = pickle.loads(payload)
    emit(Print(-1, f"before {index}"))
    if index == 1:
        raise ValueError("boom")
    return index


def fib_tasks(count, m=15):
    return [Task(_fib_task, pickle.dumps(m)) for _ in range(count)]


def test_single_task_identical_across_modes():
    for mode in (SEQUENTIAL, UNLIMITED, pool(2)):
        [result] = run_tasks(fib_tasks(1), mode)
        assert result.task_index == 0
        assert result.value == 610


def test_thirty_tasks_sequential_vs_pool_identical():
    tasks = [Task(_fib_task, pickle.dumps(10 + (i % 5))) for i in range(30)]
    seq = run_tasks(tasks, SEQUENTIAL)
    pooled = run_tasks(tasks, pool(hardware_concurrency()))
    assert [r.value for r in seq] == [r.value for r in pooled]
    assert [r.task_index for r in pooled] == list(range(30))


def test_results_reported_in_submission_order():
    tasks = [Task(_echo_task, pickle.dumps(i)) for i in range(8)]
    results = run_tasks(tasks, pool(2))
    assert [r.value for r in results] == list(range(8))


def test_events_flushed_in_task_order():
    tasks = [Task(_echo_task, pickle.dumps(i)) for i in range(6)]
    for mode in (SEQUENTIAL, pool(3)):
        seen = []
        run_tasks(tasks, mode, seen.append)
        assert [e.text for e in seen] == [f"task {i}" for i in range(6)]


def test_pool_concurrency_bound():
    tasks = [Task(_timed_task, pickle.dumps(None)) for _ in range(5)]
    results = run_tasks(tasks, pool(2))
    intervals = [r.value for r in results]
    # sweep over start/stop instants: never more than 2 running at once
    points = sorted(
        [(start, 1) for start, _ in intervals]
        + [(stop, -1) for _, stop in intervals]
    )
    running = peak = 0
    for _, delta in points:
        running += delta
        peak = max(peak, running)
    assert peak <= 2


def test_worker_isolation_mutation_probe():
    original = {"values": [1, 2, 3]}
    tasks = [Task(_mutating_task, pickle.dumps(original)) for _ in range(2)]
    for mode in (SEQUENTIAL, UNLIMITED):
        results = run_tasks(tasks, mode)
        assert original["values"] == [1, 2, 3]
        assert all(r.value == [1, 2, 3, 999] for r in results)


def test_worker_panic_reports_index_and_others_complete():
    tasks = [Task(_failing_task, pickle.dumps(i)) for i in range(3)]
    for mode in (SEQUENTIAL, pool(2)):
        seen = []
        with pytest.raises(WorkerPanicked) as err:
            run_tasks(tasks, mode, seen.append)
        assert err.value.task_index == 1
        assert "boom" in str(err.value)
        # every task ran; events from all three were flushed
        assert [e.text for e in seen] == [f"before {i}" for i in range(3)]


def test_unlimited_cap(monkeypatch):
    monkeypatch.setenv("BLOCKEA_MAX_WORKERS", "4")
    with pytest.raises(SpawnFailure):
        run_tasks(fib_tasks(5, m=1), UNLIMITED)
    results = run_tasks(fib_tasks(4, m=1), UNLIMITED)
    assert len(results) == 4


def test_unlimited_requires_a_task():
    with pytest.raises(ValueError):
        run_tasks([], UNLIMITED)


def test_hardware_concurrency():
    cores = hardware_concurrency()
    assert cores >= 1
    # independent platform query
    import multiprocessing

    assert cores == multiprocessing.cpu_count()
    assert cores == (os.cpu_count() or 1)


def test_thread_mode_parse():
    assert ThreadMode.parse("seq") == SEQUENTIAL
    assert ThreadMode.parse("all") == UNLIMITED
    assert ThreadMode.parse("pool:3") == pool(3)
    with pytest.raises(ValueError):
        ThreadMode.parse("fancy")
    with pytest.raises(ValueError):
        ThreadMode.parse("pool:0")


def test_perf_experiment_csv_shape():
    csv = perf_experiment(2, m=5)
    lines = csv.splitlines()
    assert lines[0] == "threads,num_iterations,num_threads,time"
    cores = hardware_concurrency()
    assert lines[1].startswith("one thread,1,1,")
    assert lines[2].startswith("all threads,1,1,")
    assert lines[3].startswith(f"limited threads,1,{cores},")
    assert lines[4] == PERF_SEPARATOR == "-" * 48
    assert lines[5].startswith("one thread,2,1,")
    assert lines[6].startswith("all threads,2,2,")
    assert lines[7].startswith(f"limited threads,2,{cores},")
    assert len(lines) == 8
    # the time column is a parseable clock reading
    for row in (1, 2, 3, 5, 6, 7):
        assert float(lines[row].rsplit(",", 1)[1]) >= 0.0
