"""
Battery runner for independent numerical jobs.

Contains the BatteryRunner class that evaluates a list of jobs on a thread
pool, with progress callbacks, an abort request and a tracker that records
which cases passed, failed or were skipped.
"""

import logging
import os
import re
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass

from ..errors import ConeLabError, ConfigError

logger = logging.getLogger(__name__)

THREADS_ENV = "CONELAB_THREADS"


class BatteryTracker:
    """
    Logger-like tracker of case outcomes during a battery run.

    Messages of the form "[case <id>] PASS|FAIL|SKIP ..." are recorded by case
    id; everything is forwarded to the module logger.
    """

    _CASE = re.compile(r"\[case (?P<id>[^\]]+)\]\s+(?P<status>PASS|FAIL|SKIP)\b\s*(?P<detail>.*)")

    def __init__(self):
        self.passed_cases = []
        self.failed_cases = []
        self.skipped_cases = []
        self.warnings = []

    def debug(self, msg):
        """Handle debug messages."""
        logger.debug(msg)

    def info(self, msg):
        """Handle info messages; PASS and SKIP lines are recorded."""
        case = self._parse(msg)
        if case and case["status"] == "PASS":
            self._record(self.passed_cases, case)
        elif case and case["status"] == "SKIP":
            self._record(self.skipped_cases, case)
        logger.info(msg)

    def warning(self, msg):
        """Handle warning messages."""
        self.warnings.append(msg)
        logger.warning(msg)

    def error(self, msg):
        """Handle error messages; the case, if named, counts as failed."""
        case = self._parse(msg)
        if case:
            self._record(self.failed_cases, case)
        else:
            self.failed_cases.append({"id": "unknown", "detail": msg})
        logger.error(msg)

    def _parse(self, msg):
        match = self._CASE.search(msg)
        return match.groupdict() if match else None

    @staticmethod
    def _record(bucket, case):
        if not any(c["id"] == case["id"] for c in bucket):
            bucket.append({"id": case["id"], "detail": case["detail"]})

    def summary(self):
        """
        Counts of recorded outcomes.

        Returns:
            dict: passed, failed, skipped and total counts
        """
        counts = {
            "passed": len(self.passed_cases),
            "failed": len(self.failed_cases),
            "skipped": len(self.skipped_cases),
        }
        counts["total"] = sum(counts.values())
        return counts


def resolve_threads(threads=None):
    """
    Worker count: the argument, else CONELAB_THREADS, else 1.

    Raises:
        ConfigError: Non-positive or non-integer value
    """
    source = "threads"
    if threads is None:
        raw = os.environ.get(THREADS_ENV)
        if raw is None:
            return 1
        threads, source = raw, THREADS_ENV
    try:
        value = int(threads)
    except (TypeError, ValueError):
        raise ConfigError(f"{source} must be an integer, got {threads!r}") from None
    if value < 1:
        raise ConfigError(f"{source} must be at least 1, got {value}")
    return value


@dataclass(frozen=True)
class BatteryOutcome:
    """
    Result of a battery run.

    Attributes:
        results (dict): job id -> return value, in job id order
        failures (dict): job id -> error message
        aborted (bool): The run stopped on request before all jobs ran
    """

    results: dict
    failures: dict
    aborted: bool

    @property
    def ok(self):
        return not self.failures and not self.aborted


class BatteryRunner:
    """
    Runs independent jobs on a thread pool.

    Jobs are (job_id, callable) pairs; each callable takes no arguments.
    Results are returned keyed by job id in sorted order, so the outcome
    does not depend on the number of workers or completion order.
    """

    def __init__(self, jobs, threads=None, tracker=None, on_progress=None, on_status=None):
        """
        Initialize the runner.

        Args:
            jobs (list): (job_id, callable) pairs with unique, sortable ids
            threads (int): Worker count, see resolve_threads
            tracker (BatteryTracker): Outcome tracker, a new one by default
            on_progress (callable): Called with the completed percentage (0-100)
            on_status (callable): Called with a status message
        """
        self.jobs = list(jobs)
        self.threads = resolve_threads(threads)
        self.tracker = tracker or BatteryTracker()
        self.on_progress = on_progress
        self.on_status = on_status
        self.abort_requested = False

    def request_abort(self):
        """
        Request that the run stop; running jobs finish, pending ones are skipped.
        """
        self.abort_requested = True

    def progress_hook(self, done, total):
        """
        Progress callback invoked after each completed job.

        Args:
            done (int): Completed jobs
            total (int): All jobs
        """
        if self.on_progress is not None:
            self.on_progress(int(100 * done / total) if total else 100)

    def _status(self, msg):
        if self.on_status is not None:
            self.on_status(msg)
        self.tracker.debug(msg)

    def _guarded(self, job_id, job):
        if self.abort_requested:
            self.tracker.info(f"[case {job_id}] SKIP aborted")
            return None, False
        return job(), True

    def run(self):
        """
        Evaluate every job.

        Returns:
            BatteryOutcome
        """
        total = len(self.jobs)
        results, failures = {}, {}
        self._status(f"running {total} jobs on {self.threads} threads")
        self.progress_hook(0, total)
        if self.abort_requested:
            return BatteryOutcome({}, {}, True)

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            futures = {pool.submit(self._guarded, job_id, job): job_id for job_id, job in self.jobs}
            done = 0
            for future in as_completed(futures):
                job_id = futures[future]
                try:
                    value, ran = future.result()
                    if ran:
                        results[job_id] = value
                        self.tracker.info(f"[case {job_id}] PASS")
                except ConeLabError as exc:
                    failures[job_id] = str(exc)
                    self.tracker.error(f"[case {job_id}] FAIL {exc}")
                done += 1
                self.progress_hook(done, total)

        ordered = {job_id: results[job_id] for job_id in sorted(results)}
        aborted = self.abort_requested and len(results) + len(failures) < total
        summary = self.tracker.summary()
        self._status(f"battery finished: {summary['passed']} passed, "
                     f"{summary['failed']} failed, {summary['skipped']} skipped")
        return BatteryOutcome(ordered, dict(sorted(failures.items())), aborted)
