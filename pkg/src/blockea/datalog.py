"""Run logs and their CSV / IOHAnalyzer-compatible exports.

The IOHAnalyzer layout is frozen by this module and the golden files in
the test suite (see docs/formats.md): a meta `.info` file naming suite,
function, dimension, algorithm, the dat filename and one
`evaluations:best` summary pair per run; and a raw `.dat` file that
repeats a quoted two-column header line before each run's block. Blocks
list best-so-far improvements; the final record of a run is always
included.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .blocks import BlockProgram
from .ea import Individual
from .events import Print, PlotPoint, Record, RunFinished, RunStarted
from .values import format_number


class ExportError(ValueError):
    pass


class MalformedStream(ExportError):
    pass


class EmptyLog(ExportError):
    pass


@dataclass(frozen=True)
class RunLog:
    run_id: int
    records: tuple[tuple[int, int, float], ...]  # (generation, evaluations, best)
    prints: tuple[str, ...]
    plot_points: tuple[tuple[str, float, float, str], ...]
    best_individual: Individual | None
    best_fitness: float


@dataclass(frozen=True)
class ExperimentMeta:
    function_name: str
    dimension: int
    algorithm_name: str
    master_seed: int
    run_count: int

    def __post_init__(self):
        if self.run_count < 1:
            raise ExportError(f"run_count must be >= 1, got {self.run_count}")


@dataclass
class _Partial:
    records: list = field(default_factory=list)
    prints: list = field(default_factory=list)
    plot_points: list = field(default_factory=list)
    finished: RunFinished | None = None


def collect(events) -> list[RunLog]:
    """Group a well-formed event stream into per-run logs.

    Any interleaving that preserves each run's internal order yields the
    same logs. Events with run_id -1 (top-level statements) belong to no
    run and are ignored here.
    """
    partials: dict[int, _Partial] = {}
    order: list[int] = []

    for event in events:
        run_id = event.run_id
        if run_id < 0:
            continue
        if isinstance(event, RunStarted):
            if run_id in partials:
                raise MalformedStream(f"run {run_id} started twice")
            partials[run_id] = _Partial()
            order.append(run_id)
            continue
        partial = partials.get(run_id)
        if partial is None:
            raise MalformedStream(f"event for run {run_id} before RunStarted")
        if partial.finished is not None:
            raise MalformedStream(f"event for run {run_id} after RunFinished")
        if isinstance(event, RunFinished):
            partial.finished = event
        elif isinstance(event, Record):
            if partial.records:
                _, last_evals, last_best = partial.records[-1]
                if event.evaluations <= last_evals:
                    raise MalformedStream(
                        f"run {run_id}: evaluations not increasing "
                        f"({event.evaluations} after {last_evals})"
                    )
                if event.best_fitness < last_best:
                    raise MalformedStream(
                        f"run {run_id}: best-so-far fitness decreased"
                    )
            partial.records.append(
                (event.generation, event.evaluations, event.best_fitness)
            )
        elif isinstance(event, Print):
            partial.prints.append(event.text)
        elif isinstance(event, PlotPoint):
            partial.plot_points.append(
                (event.series, event.x, event.y, event.style)
            )

    logs = []
    for run_id in sorted(order):
        partial = partials[run_id]
        if partial.finished is None:
            raise MalformedStream(f"run {run_id} never finished")
        logs.append(
            RunLog(
                run_id=run_id,
                records=tuple(partial.records),
                prints=tuple(partial.prints),
                plot_points=tuple(partial.plot_points),
                best_individual=partial.finished.best_individual,
                best_fitness=partial.finished.best_fitness,
            )
        )
    return logs


CSV_HEADER = "run,generation,evaluations,best_fitness"


def export_csv(logs) -> str:
    lines = [CSV_HEADER]
    for log in sorted(logs, key=lambda l: l.run_id):
        for generation, evaluations, best in log.records:
            lines.append(
                f"{log.run_id},{generation},{evaluations},{format_number(best)}"
            )
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> dict[int, list[tuple[int, int, float]]]:
    """Inverse of export_csv over record content, keyed by run id."""
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ExportError("missing CSV header")
    out: dict[int, list[tuple[int, int, float]]] = {}
    for line in lines[1:]:
        run, generation, evaluations, best = line.split(",")
        out.setdefault(int(run), []).append(
            (int(generation), int(evaluations), float(best))
        )
    return out


IOH_DAT_HEADER = '"function evaluation" "best-so-far f(x)"'


def ioh_file_names(meta: ExperimentMeta) -> tuple[str, str]:
    stem = f"{meta.function_name}_DIM{meta.dimension}"
    return f"{stem}.info", f"{stem}.dat"


def export_ioh(logs, meta: ExperimentMeta) -> tuple[str, str]:
    """Returns (info text, dat text) for an experiment's run logs."""
    logs = sorted(logs, key=lambda l: l.run_id)
    if not logs:
        raise EmptyLog("cannot export an experiment with no runs")
    for log in logs:
        if not log.records:
            raise EmptyLog(f"run {log.run_id} has no records")

    _, dat_name = ioh_file_names(meta)

    dat_lines = []
    summaries = []
    for log in logs:
        dat_lines.append(IOH_DAT_HEADER)
        best_seen = None
        rows = []
        for _, evaluations, best in log.records:
            if best_seen is None or best > best_seen:
                rows.append((evaluations, best))
                best_seen = best
        final_evals, final_best = log.records[-1][1], log.records[-1][2]
        if not rows or rows[-1][0] != final_evals:
            rows.append((final_evals, final_best))
        for evaluations, best in rows:
            dat_lines.append(f"{evaluations} {format_number(best)}")
        summaries.append(f"{final_evals}:{format_number(final_best)}")

    info_lines = [
        f"suite = 'BLOCKEA', funcName = '{meta.function_name}', "
        f"DIM = {meta.dimension}, algId = '{meta.algorithm_name}'",
        "%",
        f"{dat_name}, " + ", ".join(summaries),
    ]
    return "\n".join(info_lines) + "\n", "\n".join(dat_lines) + "\n"


_FITNESS_KIND_NAMES = {
    "fitness_onemax": "onemax",
    "fitness_leading_ones": "leading_ones",
    "fitness_jump": "jump",
}


def derive_meta(
    program: BlockProgram,
    master_seed: int,
    run_count: int,
    algorithm_name: str,
) -> ExperimentMeta:
    """Best-effort experiment metadata scanned from a program: the first
    objective used and the first literal bit length found."""
    function_name = "custom"
    for block in program.walk():
        if block.kind in _FITNESS_KIND_NAMES:
            function_name = _FITNESS_KIND_NAMES[block.kind]
            break
        objective = block.field_values.get("objective")
        if objective:
            function_name = str(objective)
            break

    dimension = 0
    for block in program.walk():
        child = block.input_connections.get("bit_length")
        if child is None:
            continue
        literal = program.block(child)
        if literal.kind == "number_literal":
            value = float(literal.field_values["value"])
            if value.is_integer():
                dimension = int(value)
                break

    return ExperimentMeta(
        function_name=function_name,
        dimension=dimension,
        algorithm_name=algorithm_name,
        master_seed=master_seed,
        run_count=max(run_count, 1),
    )
