"""CSV and JSON writers for command output."""

import json
import logging
import sys
import threading
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

import pandas as pd

logger = logging.getLogger(__name__)

# Thread lock for safe concurrent CSV writes
_csv_write_lock = threading.Lock()

_EXACT_FLOAT_LIMIT = 2**53


def format_value(value: Any) -> str:
    """Render a number for CSV output.

    Integers print as decimal strings; floats and Fractions that are integral
    below 2^53 print as integers, everything else as ``repr(float)``.
    """
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        value = float(value)
    if isinstance(value, float):
        if value.is_integer() and abs(value) < _EXACT_FLOAT_LIMIT:
            return str(int(value))
        return repr(value)
    return str(value)


def json_value(value: Any) -> Any:
    """JSON-safe number: integers beyond 53 bits become strings."""
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return value if abs(value) < _EXACT_FLOAT_LIMIT else str(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return json_value(value.numerator)
        return float(value)
    return value


def frame_to_text(df: pd.DataFrame, output_format: str = "csv") -> str:
    """Serialize a frame as CSV (header, LF endings) or a JSON array of records."""
    if output_format == "json":
        records = [
            {key: json_value(val) for key, val in record.items()}
            for record in df.to_dict(orient="records")
        ]
        return json.dumps(records, indent=2) + "\n"
    return df.to_csv(index=False, lineterminator="\n")


def emit_text(text: str, out: Optional[Path] = None, stream: Optional[TextIO] = None) -> None:
    """Write text to a file (creating parents) or to a stream."""
    if out is not None:
        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", newline="\n", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"Wrote {out}")
        return
    if stream is None:
        stream = sys.stdout
    stream.write(text)


def emit_json(payload: Any, out: Optional[Path] = None, stream: Optional[TextIO] = None) -> None:
    emit_text(json.dumps(payload, indent=2) + "\n", out, stream)


def write_csv(df: pd.DataFrame, path: Path) -> int:
    """Write a frame to CSV with LF line endings.

    Args:
        df: Frame whose numeric columns are already formatted strings where
            exact rendering matters.
        path: Output path; parents are created.

    Returns:
        Number of rows written.
    """
    path = Path(path)
    with _csv_write_lock:
        path.parent.mkdir(parents=True, exist_ok=True)
        df.to_csv(path, index=False, lineterminator="\n")
    logger.info(f"Wrote {len(df)} rows to {path}")
    return len(df)


def records_frame(records: List[Dict[str, Any]], columns: List[str]) -> pd.DataFrame:
    """Frame with a fixed column order, values rendered by ``format_value``."""
    rows = [{col: format_value(record[col]) for col in columns} for record in records]
    return pd.DataFrame(rows, columns=columns)
