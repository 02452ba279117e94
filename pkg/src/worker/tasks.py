"""
Run tasks exchanged with worker processes.

A RunTask is a self-contained JSON message: the full experiment spec plus
the run index and, for sweeps, the (n_ring, setting) cell.
"""

import json
import logging
import time
from dataclasses import dataclass
from typing import Any, Dict, Optional

from src.domain import ExperimentSpec, RunSummary, SweepSetting
from src.persistence.serializers import spec_from_dict, spec_to_dict
from src.services.experiments import execute_run

logger = logging.getLogger(__name__)


@dataclass
class RunTask:
    """
    One simulation run to execute.

    `order` is the position of the task in its batch; results are returned
    in that order.
    """
    id: str
    run_index: int
    order: int
    spec: Dict[str, Any]
    created_at: float
    n_ring: Optional[int] = None
    setting: Optional[Dict[str, float]] = None

    def to_json(self) -> str:
        """Serialize task to JSON."""
        return json.dumps({
            "id": self.id,
            "run_index": self.run_index,
            "order": self.order,
            "spec": self.spec,
            "created_at": self.created_at,
            "n_ring": self.n_ring,
            "setting": self.setting,
        })

    @classmethod
    def from_json(cls, data: str) -> "RunTask":
        """Deserialize task from JSON."""
        obj = json.loads(data)
        return cls(
            id=obj["id"],
            run_index=obj["run_index"],
            order=obj["order"],
            spec=obj["spec"],
            created_at=obj["created_at"],
            n_ring=obj.get("n_ring"),
            setting=obj.get("setting"),
        )

    @classmethod
    def create(
        cls,
        spec: ExperimentSpec,
        run_index: int,
        n_ring: Optional[int] = None,
        setting: Optional[SweepSetting] = None,
        order: Optional[int] = None,
    ) -> "RunTask":
        """Factory method to create a new task."""
        cell = f":{n_ring}:{setting.label}" if setting is not None else ""
        return cls(
            id=f"{spec.label or spec.family}{cell}#{run_index}",
            run_index=run_index,
            order=run_index if order is None else order,
            spec=spec_to_dict(spec),
            created_at=time.time(),
            n_ring=n_ring,
            setting=None if setting is None else {
                "noise_left": setting.noise_left,
                "noise_right": setting.noise_right,
                "restitution": setting.restitution,
            },
        )

    def sweep_setting(self) -> Optional[SweepSetting]:
        if self.setting is None:
            return None
        return SweepSetting(**self.setting)


def execute_task(task: RunTask) -> RunSummary:
    spec = spec_from_dict(task.spec)
    logger.debug(f"Executing task {task.id}")
    return execute_run(spec, task.run_index, task.n_ring, task.sweep_setting())


def execute_payload(payload: str) -> RunSummary:
    """Entry point inside worker processes."""
    return execute_task(RunTask.from_json(payload))
