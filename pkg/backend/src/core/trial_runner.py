"""Concurrent trial execution with a deterministic, index-ordered merge."""

import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from enum import Enum
from typing import Callable, Dict, List, Optional, TypeVar

from models.simulation import TrialSummary

logger = logging.getLogger(__name__)

R = TypeVar("R")
ProgressCallback = Callable[[int, str], None]


class TrialStatus(str, Enum):
    """Trial status enumeration."""

    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


class TrialRunner:
    """Runs independent trials on a thread pool and merges them by trial index.

    numpy's LAPACK calls release the GIL, so threads overlap the
    eigendecompositions. Results never depend on completion order.
    """

    def __init__(self, workers: int = 1):
        """Initialize TrialRunner.

        Args:
            workers: Maximum number of worker threads.
        """
        self.workers = max(1, int(workers))
        self._status: Dict[int, Dict] = {}
        self._lock = threading.Lock()

    def _set_status(self, trial: int, status: TrialStatus, error: Optional[str] = None) -> None:
        with self._lock:
            entry = self._status.setdefault(trial, {"trial": trial, "error": None, "seconds": None})
            entry["status"] = status
            if status == TrialStatus.RUNNING:
                entry["started"] = time.perf_counter()
            elif status in (TrialStatus.COMPLETED, TrialStatus.FAILED):
                entry["seconds"] = time.perf_counter() - entry.get("started", time.perf_counter())
            if error:
                entry["error"] = error

    def summary(self) -> TrialSummary:
        with self._lock:
            entries = list(self._status.values())
        failed = [e for e in entries if e["status"] == TrialStatus.FAILED]
        return TrialSummary(
            trials=len(entries),
            completed=sum(1 for e in entries if e["status"] == TrialStatus.COMPLETED),
            failed=len(failed),
            workers=self.workers,
            seconds=sum(e["seconds"] or 0.0 for e in entries),
            errors=[f"trial {e['trial']}: {e['error']}" for e in sorted(failed, key=lambda e: e["trial"])],
        )

    def run(
        self,
        trial_fn: Callable[[int], R],
        trials: int,
        progress_callback: Optional[ProgressCallback] = None,
    ) -> List[R]:
        """Run ``trial_fn(i)`` for i in 0..trials−1.

        Args:
            trial_fn: Pure function of the trial index.
            trials: Number of trials.
            progress_callback: Optional callback(progress_percent, message).

        Returns:
            Results in trial-index order.

        Raises:
            Exception: The error of the lowest-indexed failed trial, after all
                trials have finished.
        """
        with self._lock:
            self._status = {
                i: {"trial": i, "status": TrialStatus.PENDING, "error": None, "seconds": None}
                for i in range(trials)
            }
        results: Dict[int, R] = {}
        errors: Dict[int, BaseException] = {}
        completed_count = 0
        max_workers = min(self.workers, max(trials, 1))
        logger.info(f"Running {trials} trial(s) with {max_workers} worker(s)")

        def run_one(i: int) -> R:
            self._set_status(i, TrialStatus.RUNNING)
            return trial_fn(i)

        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            future_to_trial = {executor.submit(run_one, i): i for i in range(trials)}
            for future in as_completed(future_to_trial):
                i = future_to_trial[future]
                try:
                    results[i] = future.result()
                    self._set_status(i, TrialStatus.COMPLETED)
                except Exception as e:
                    logger.error(f"Trial {i} failed: {e}", exc_info=True)
                    errors[i] = e
                    self._set_status(i, TrialStatus.FAILED, str(e))

                completed_count += 1
                if progress_callback:
                    try:
                        progress_callback(
                            int(100 * completed_count / trials),
                            f"Completed {completed_count}/{trials}: trial {i}",
                        )
                    except Exception as e:
                        logger.warning(f"Progress callback failed: {e}")

        if errors:
            raise errors[min(errors)]
        logger.debug(f"All {trials} trial(s) completed")
        return [results[i] for i in range(trials)]
