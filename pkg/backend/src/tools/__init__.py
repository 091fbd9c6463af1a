"""Output tools: CSV/JSON writers, SVG plots and the run log."""

from .csv_tools import emit_json, emit_text, format_value, frame_to_text, write_csv
from .logging_tools import log_run_event

__all__ = [
    "emit_json",
    "emit_text",
    "format_value",
    "frame_to_text",
    "write_csv",
    "log_run_event",
]
