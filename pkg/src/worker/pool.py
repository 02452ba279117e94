"""
Process pool for experiment runs.

Runs are independent, so they are fanned out to worker processes as JSON
task messages and collected back in task order.
"""

import logging
import signal
import threading
from concurrent.futures import CancelledError, Future, ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence

from src.config import get_config
from src.domain import RunSummary
from .tasks import RunTask, execute_payload

logger = logging.getLogger(__name__)


class PoolInterruptedError(Exception):
    """Raised when a batch is cancelled by SIGINT/SIGTERM."""

    def __init__(self, completed: int, total: int):
        self.completed = completed
        self.total = total
        super().__init__(f"Interrupted after {completed} of {total} runs")


class ExperimentWorkerPool:
    """
    Executes RunTasks, serially or on a ProcessPoolExecutor.

    Features:
    - Graceful shutdown on SIGTERM/SIGINT (pending runs are cancelled)
    - Results in task order, independent of the worker count
    - In-process execution when workers == 1
    """

    def __init__(self, workers: Optional[int] = None):
        self.workers = workers or get_config().WORKER_CONCURRENCY
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")
        self._stopping = threading.Event()
        self._futures: List[Future] = []

    def run(self, tasks: Sequence[RunTask]) -> List[RunSummary]:
        """Execute every task and return the summaries sorted by task order."""
        ordered = sorted(tasks, key=lambda t: t.order)
        payloads = [t.to_json() for t in ordered]
        self._stopping.clear()
        previous = self._setup_signal_handlers()
        try:
            if self.workers == 1 or len(payloads) <= 1:
                results = self._run_serial(payloads)
            else:
                results = self._run_parallel(payloads)
        finally:
            self._restore_signal_handlers(previous)
        return results

    def stop(self) -> None:
        """Stop after the runs in progress; pending ones are cancelled."""
        logger.info("Stopping experiment pool...")
        self._stopping.set()
        for future in self._futures:
            future.cancel()

    def _run_serial(self, payloads: List[str]) -> List[RunSummary]:
        results = []
        for payload in payloads:
            if self._stopping.is_set():
                raise PoolInterruptedError(len(results), len(payloads))
            results.append(execute_payload(payload))
        return results

    def _run_parallel(self, payloads: List[str]) -> List[RunSummary]:
        logger.info(f"Dispatching {len(payloads)} runs to {self.workers} worker processes")
        with ProcessPoolExecutor(max_workers=self.workers) as executor:
            self._futures = [executor.submit(execute_payload, p) for p in payloads]
            try:
                results = []
                for future in self._futures:
                    if future.cancelled():
                        continue
                    try:
                        results.append(future.result())
                    except CancelledError:
                        logger.debug("Run cancelled before it started")
            finally:
                futures, self._futures = self._futures, []
        if self._stopping.is_set() and len(results) < len(futures):
            raise PoolInterruptedError(len(results), len(payloads))
        return results

    def _setup_signal_handlers(self) -> Dict[int, object]:
        """Install SIGINT/SIGTERM handlers; only possible on the main thread."""
        if threading.current_thread() is not threading.main_thread():
            return {}

        def handler(signum, frame):
            logger.info(f"Received signal {signum}, cancelling pending runs...")
            self.stop()

        previous = {}
        for sig in (signal.SIGTERM, signal.SIGINT):
            previous[sig] = signal.signal(sig, handler)
        return previous

    @staticmethod
    def _restore_signal_handlers(previous: Dict[int, object]) -> None:
        for sig, old in previous.items():
            signal.signal(sig, old)
