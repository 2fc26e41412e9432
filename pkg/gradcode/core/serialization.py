"""
JSON and table forms of a GcScheme.

All serialized indices are 1-based, matching the W_i / D_j names in rendered
tables; the in-memory model is 0-based.
"""
import json
from typing import Any, Dict

import pandas as pd

from gradcode.core.models import GcScheme, SchemeParams
from gradcode.utils import RationalUtils


def scheme_to_dict(scheme: GcScheme) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        "label": scheme.label,
        "n": scheme.n,
        "k": scheme.k,
        "alpha": RationalUtils.format(scheme.params.alpha),
        "s": scheme.params.s,
        "assignment": [[j + 1 for j in assigned] for assigned in scheme.assignment],
        "rows": [
            [[{"idx": j + 1, "coef": RationalUtils.coef_to_json(c)} for j, c in row] for row in worker_rows]
            for worker_rows in scheme.rows
        ],
    }
    if scheme.designated is not None:
        payload["designated"] = [[j + 1 for j in chosen] for chosen in scheme.designated]
    if scheme.partition_labels is not None:
        payload["partition_labels"] = [[w + 1 for w in lab] for lab in scheme.partition_labels]
    return payload


def scheme_from_dict(payload: Dict[str, Any]) -> GcScheme:
    params = SchemeParams(
        n=payload["n"], k=payload["k"], alpha=payload["alpha"], s=payload["s"]
    )
    designated = payload.get("designated")
    labels = payload.get("partition_labels")
    return GcScheme(
        label=payload["label"],
        params=params,
        assignment=tuple(tuple(j - 1 for j in assigned) for assigned in payload["assignment"]),
        rows=tuple(
            tuple(
                tuple((entry["idx"] - 1, RationalUtils.coef_from_json(entry["coef"])) for entry in row)
                for row in worker_rows
            )
            for worker_rows in payload["rows"]
        ),
        designated=None if designated is None else tuple(tuple(j - 1 for j in d) for d in designated),
        partition_labels=None if labels is None else tuple(tuple(w - 1 for w in lab) for lab in labels),
    )


def scheme_to_json(scheme: GcScheme, indent: int = 2) -> str:
    return json.dumps(scheme_to_dict(scheme), indent=indent)


def scheme_from_json(text: str) -> GcScheme:
    return scheme_from_dict(json.loads(text))


def assignment_frame(scheme: GcScheme) -> pd.DataFrame:
    """
    Worker x partition table of assignment cells.

    Cells are "1" for an assigned partition and "" otherwise. Balanced
    schemes mark partitions a worker does not transmit individually with
    "1x" and the individually transmitted ones with "1v".
    """
    columns = [f"D{j + 1}" for j in range(scheme.k)]
    index = [f"W{i + 1}" for i in range(scheme.n)]
    frame = pd.DataFrame("", index=index, columns=columns)
    for i, assigned in enumerate(scheme.assignment):
        chosen = set(scheme.designated[i]) if scheme.designated is not None else None
        for j in assigned:
            if chosen is None:
                frame.iat[i, j] = "1"
            else:
                frame.iat[i, j] = "1x" if j in chosen else "1v"
    return frame


def render_table(scheme: GcScheme) -> str:
    return assignment_frame(scheme).to_string()
