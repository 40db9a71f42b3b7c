"""Run events streamed from the interpreter to sinks, logs, and clients.

Events within one run are emitted in program order. `run_id` is -1 for
top-level statements executed outside any repetition run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .ea import Individual
from .values import format_number


@dataclass(frozen=True)
class Print:
    run_id: int
    text: str


@dataclass(frozen=True)
class PlotPoint:
    run_id: int
    series: str
    x: float
    y: float
    style: str  # scatter | line | bar


@dataclass(frozen=True)
class Record:
    run_id: int
    generation: int
    evaluations: int
    best_fitness: float


@dataclass(frozen=True)
class RunStarted:
    run_id: int


@dataclass(frozen=True)
class RunFinished:
    run_id: int
    best_individual: Individual | None
    best_fitness: float


Event = Union[Print, PlotPoint, Record, RunStarted, RunFinished]
EventSink = Callable[[Event], None]


def output_line(event: Event) -> str | None:
    """Stdout rendering shared with emitted standalone bundles.

    Print events render as their bare text; plot and record events as
    structured lines. Run markers are not part of the output protocol.
    """
    if isinstance(event, Print):
        return event.text
    if isinstance(event, PlotPoint):
        return (
            f"[plot] series={event.series} style={event.style} "
            f"x={format_number(event.x)} y={format_number(event.y)}"
        )
    if isinstance(event, Record):
        return (
            f"[record] generation={event.generation} "
            f"evaluations={event.evaluations} "
            f"best={format_number(event.best_fitness)}"
        )
    return None


def render_output(events) -> list[str]:
    lines = []
    for event in events:
        line = output_line(event)
        if line is not None:
            lines.append(line)
    return lines


def event_to_json_dict(event: Event) -> dict:
    if isinstance(event, Print):
        return {"type": "print", "run": event.run_id, "text": event.text}
    if isinstance(event, PlotPoint):
        return {
            "type": "plot",
            "run": event.run_id,
            "series": event.series,
            "x": event.x,
            "y": event.y,
            "style": event.style,
        }
    if isinstance(event, Record):
        return {
            "type": "record",
            "run": event.run_id,
            "generation": event.generation,
            "evaluations": event.evaluations,
            "best_fitness": event.best_fitness,
        }
    if isinstance(event, RunStarted):
        return {"type": "run_started", "run": event.run_id}
    return {
        "type": "run_finished",
        "run": event.run_id,
        "best_individual": (
            event.best_individual.text if event.best_individual else None
        ),
        "best_fitness": event.best_fitness,
    }
