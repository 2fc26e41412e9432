import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from gradcode.core.loads import load_report
from gradcode.core.models import GcScheme
from gradcode.utils import RationalUtils

logger = logging.getLogger(__name__)

TRACE_COLUMNS = [
    "iter",
    "wall_clock",
    "iteration_time",
    "recovered",
    "loss",
    "test_loss",
    "accuracy",
    "shortfall",
    "stragglers",
]


class SimTrace(BaseModel):
    """Per-iteration records of one simulated run."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    scheme: GcScheme
    seed: int
    records: pd.DataFrame
    recovery_histogram: np.ndarray
    delay_blocks: np.ndarray

    @property
    def final_wall_clock(self) -> float:
        return float(self.records["wall_clock"].iloc[-1]) if len(self.records) else 0.0

    def mean_recovered_fraction(self) -> float:
        return float(self.records["recovered"].mean()) / self.scheme.k

    def summary(self) -> Dict[str, object]:
        report = load_report(self.scheme)
        frame = self.records
        return {
            "name": self.name,
            "label": self.scheme.label,
            "n": self.scheme.n,
            "k": self.scheme.k,
            "s": self.scheme.params.s,
            "alpha": RationalUtils.format(self.scheme.params.alpha),
            "m": report.m,
            "l": RationalUtils.format(report.l),
            "iterations": int(len(frame)),
            "wall_clock": self.final_wall_clock,
            "mean_recovered": float(frame["recovered"].mean()) if len(frame) else 0.0,
            "shortfall_rounds": int((frame["shortfall"] > 0).sum()) if len(frame) else 0,
            "final_loss": float(frame["loss"].iloc[-1]) if len(frame) else None,
            "final_accuracy": (
                None if not len(frame) or pd.isna(frame["accuracy"].iloc[-1])
                else float(frame["accuracy"].iloc[-1])
            ),
            "seed": self.seed,
        }


def write_trace_csv(trace: SimTrace, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    trace.records.to_csv(path, index=False)
    logger.info("Saved trace %s to %s", trace.name, path)
    return path


def _file_name(name: str, used: set) -> str:
    base = "".join(c if c.isalnum() or c in "-_." else "_" for c in name) or "scheme"
    candidate, count = base, 1
    while candidate in used:
        count += 1
        candidate = f"{base}_{count}"
    used.add(candidate)
    return f"{candidate}.csv"


def write_bundle(
    traces: Sequence[SimTrace],
    directory: Path,
    extra: Optional[Dict[str, object]] = None,
) -> Path:
    """One CSV per scheme plus manifest.json describing the run."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    used: set = set()
    entries: List[Dict[str, object]] = []
    for trace in traces:
        file_name = _file_name(trace.name, used)
        write_trace_csv(trace, directory / file_name)
        entries.append({**trace.summary(), "file": file_name})
    manifest = {"schemes": entries, **(extra or {})}
    manifest_path = directory / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2))
    logger.info("Saved bundle of %d traces to %s", len(traces), directory)
    return manifest_path
