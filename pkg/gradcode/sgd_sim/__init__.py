from .simulator import (
    SimConfig,
    StragglerPattern,
    adversarial_straggler_hook,
    pick_stragglers,
    run_comparison,
    run_sim,
)
from .tasks import DatasetSpec, SyntheticTask, make_dataset
from .traces import TRACE_COLUMNS, SimTrace, write_bundle, write_trace_csv

__all__ = [
    "SimConfig",
    "StragglerPattern",
    "adversarial_straggler_hook",
    "pick_stragglers",
    "run_comparison",
    "run_sim",
    "DatasetSpec",
    "SyntheticTask",
    "make_dataset",
    "TRACE_COLUMNS",
    "SimTrace",
    "write_bundle",
    "write_trace_csv",
]
