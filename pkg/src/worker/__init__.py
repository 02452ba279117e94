# Worker layer
from .pool import ExperimentWorkerPool, PoolInterruptedError
from .tasks import RunTask, execute_payload, execute_task

__all__ = [
    "ExperimentWorkerPool",
    "PoolInterruptedError",
    "RunTask",
    "execute_payload",
    "execute_task",
]
