"""Run log for simulation and verification runs."""

import logging
import threading
from datetime import datetime
from pathlib import Path
from typing import Optional

import pandas as pd

logger = logging.getLogger(__name__)

RUN_LOG_COLUMNS = ["log_id", "timestamp", "command", "check", "status", "detail"]

_log_lock = threading.Lock()


def log_run_event(
    log_file_path: Path,
    command: str,
    check: str,
    status: str,
    detail: Optional[str] = None,
) -> bool:
    """Append one row to the run log CSV, creating it if needed.

    Args:
        log_file_path: Path to ``run_log.csv``.
        command: Subcommand that produced the row.
        check: Check or stage name.
        status: Outcome, e.g. pass, fail, error or completed.
        detail: Optional free-text detail.

    Returns:
        True when the row was written. Failures are logged, never raised.
    """
    try:
        path = Path(log_file_path)
        now = datetime.now()
        log_entry = {
            "log_id": f"LOG-{now.strftime('%Y%m%d%H%M%S%f')}",
            "timestamp": now.isoformat(),
            "command": command,
            "check": check,
            "status": status,
            "detail": detail if detail is not None else "",
        }
        with _log_lock:
            if path.exists():
                df = pd.read_csv(path, dtype=str, keep_default_na=False)
                df = pd.concat([df, pd.DataFrame([log_entry])], ignore_index=True)
            else:
                df = pd.DataFrame([log_entry], columns=RUN_LOG_COLUMNS)
            path.parent.mkdir(parents=True, exist_ok=True)
            df.to_csv(path, index=False, lineterminator="\n")
        logger.debug(f"Logged {command}/{check}: {status}")
        return True
    except Exception as e:
        logger.error(f"Error writing run log: {e}", exc_info=True)
        return False
