from .models import GcScheme, LoadReport, Row, SchemeLabel, SchemeParams, make_row, row_from_mapping
from .loads import load_report, validate
from .serialization import (
    assignment_frame,
    render_table,
    scheme_from_dict,
    scheme_from_json,
    scheme_to_dict,
    scheme_to_json,
)

__all__ = [
    "GcScheme",
    "LoadReport",
    "Row",
    "SchemeLabel",
    "SchemeParams",
    "make_row",
    "row_from_mapping",
    "load_report",
    "validate",
    "assignment_frame",
    "render_table",
    "scheme_from_dict",
    "scheme_from_json",
    "scheme_to_dict",
    "scheme_to_json",
]
