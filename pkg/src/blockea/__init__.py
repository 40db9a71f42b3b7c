"""blockea: typed block programs for evolutionary algorithms.

Engine layers: block model and XML (blocks, xmlio, validate), runtime
(ea, fitness, rng, interpreter), experiment machinery (runner, datalog,
codegen), and the user-facing surfaces (cli, service, examples).
"""

from .blocks import (
    Block,
    BlockKind,
    BlockProgram,
    GROUPS,
    ProgramBuilder,
    REGISTRY,
    ValueType,
)
from .datalog import ExperimentMeta, RunLog, collect, export_csv, export_ioh
from .ea import Individual, Population
from .errors import Cancelled, RuntimeHalt, SpawnFailure, WorkerPanicked
from .events import Event, Print, PlotPoint, Record, RunFinished, RunStarted
from .interpreter import ExperimentResult, interpret
from .rng import RandomSource, derive_seed
from .runner import (
    SEQUENTIAL,
    Task,
    TaskResult,
    ThreadMode,
    UNLIMITED,
    hardware_concurrency,
    perf_experiment,
    pool,
    run_tasks,
)
from .validate import Diagnostic, has_errors, validate
from .xmlio import MalformedXml, parse_xml, serialize_xml

__version__ = "0.1.0"

__all__ = [
    "Block",
    "BlockKind",
    "BlockProgram",
    "Cancelled",
    "Diagnostic",
    "Event",
    "ExperimentMeta",
    "ExperimentResult",
    "GROUPS",
    "Individual",
    "MalformedXml",
    "PlotPoint",
    "Population",
    "Print",
    "ProgramBuilder",
    "REGISTRY",
    "RandomSource",
    "Record",
    "RunFinished",
    "RunLog",
    "RunStarted",
    "RuntimeHalt",
    "SEQUENTIAL",
    "SpawnFailure",
    "Task",
    "TaskResult",
    "ThreadMode",
    "UNLIMITED",
    "ValueType",
    "WorkerPanicked",
    "collect",
    "derive_seed",
    "export_csv",
    "export_ioh",
    "hardware_concurrency",
    "has_errors",
    "interpret",
    "parse_xml",
    "perf_experiment",
    "pool",
    "run_tasks",
    "serialize_xml",
    "validate",
]
