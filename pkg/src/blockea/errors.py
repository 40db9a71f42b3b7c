"""Errors shared between the interpreter and the task runner."""

from __future__ import annotations


class RuntimeHalt(Exception):
    """A run stopped because of an unrecoverable runtime condition."""

    def __init__(self, reason: str, message: str):
        super().__init__(f"{reason}: {message}")
        self.reason = reason
        self.message = message


class Cancelled(Exception):
    """A run was stopped from outside."""


class WorkerPanicked(Exception):
    """A task failed with an unexpected error; other tasks completed."""

    def __init__(self, task_index: int, message: str):
        super().__init__(f"task {task_index} failed: {message}")
        self.task_index = task_index
        self.message = message


class SpawnFailure(Exception):
    """The platform refused to start a worker (or the cap was exceeded)."""
