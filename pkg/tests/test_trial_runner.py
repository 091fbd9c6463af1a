"""Tests for the concurrent trial runner."""

import threading
import time

import pytest

from core.trial_runner import TrialRunner


@pytest.mark.unit
class TestTrialRunner:
    def test_results_in_index_order(self):
        def trial(i):
            # later indices finish first
            time.sleep(0.01 * (5 - i))
            return i * i

        assert TrialRunner(workers=5).run(trial, 5) == [0, 1, 4, 9, 16]

    def test_worker_floor(self):
        assert TrialRunner(workers=0).workers == 1

    def test_progress_callback(self):
        progress = []
        TrialRunner(workers=2).run(lambda i: i, 4, lambda pct, msg: progress.append(pct))
        assert sorted(progress) == [25, 50, 75, 100]

    def test_failing_callback_does_not_abort(self):
        def callback(pct, msg):
            raise RuntimeError("display closed")

        assert TrialRunner(workers=2).run(lambda i: i, 3, callback) == [0, 1, 2]

    def test_lowest_index_error_after_all_trials(self):
        seen = []
        lock = threading.Lock()

        def trial(i):
            with lock:
                seen.append(i)
            if i in (2, 4):
                raise ValueError(f"trial {i} broke")
            return i

        runner = TrialRunner(workers=3)
        with pytest.raises(ValueError, match="trial 2 broke"):
            runner.run(trial, 6)
        assert sorted(seen) == list(range(6))
        summary = runner.summary()
        assert summary.failed == 2
        assert summary.completed == 4
        assert summary.errors[0].startswith("trial 2")

    def test_summary_after_clean_run(self):
        runner = TrialRunner(workers=2)
        runner.run(lambda i: i, 3)
        summary = runner.summary()
        assert (summary.trials, summary.completed, summary.failed) == (3, 3, 0)
        assert summary.workers == 2
        assert summary.seconds >= 0
        assert summary.errors == []
