"""
State machine for the sighting case of a two-robot system.

Under a spin-then-charge controller the pair can only move forward through
the cases: nobody sees, then one robot sees, then both see. The machine
enforces that order so runs can be checked against it.
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from .enums import SightingCase


class InvalidTransitionError(Exception):
    """Raised when an invalid case transition is attempted."""

    def __init__(self, from_state: SightingCase, to_state: SightingCase):
        self.from_state = from_state
        self.to_state = to_state
        super().__init__(
            f"Invalid transition from {from_state.value} to {to_state.value}"
        )


class SightingStateMachine:
    """
    Case transitions for two robots.

    Valid transitions:
    - NONE_SEE → ONE_SEES: one robot's ray reaches the other
    - NONE_SEE → BOTH_SEE: both rays reach the other in the same step
    - ONE_SEES → BOTH_SEE: the second robot turns onto the first

    Terminal state: BOTH_SEE
    """

    TRANSITIONS: Dict[SightingCase, Set[SightingCase]] = {
        SightingCase.NONE_SEE: {
            SightingCase.ONE_SEES,
            SightingCase.BOTH_SEE,
        },
        SightingCase.ONE_SEES: {
            SightingCase.BOTH_SEE,
        },
        SightingCase.BOTH_SEE: set(),  # Terminal state
    }

    TERMINAL_STATES: Set[SightingCase] = {
        SightingCase.BOTH_SEE,
    }

    @staticmethod
    def case_for(sees_0: bool, sees_1: bool) -> SightingCase:
        """Case from the two sensor values."""
        if sees_0 and sees_1:
            return SightingCase.BOTH_SEE
        if sees_0 or sees_1:
            return SightingCase.ONE_SEES
        return SightingCase.NONE_SEE

    @classmethod
    def can_transition(cls, from_state: SightingCase, to_state: SightingCase) -> bool:
        """Check if a transition is valid."""
        return to_state in cls.TRANSITIONS.get(from_state, set())

    @classmethod
    def validate_transition(cls, from_state: SightingCase, to_state: SightingCase) -> None:
        """Validate a transition, raising an error if invalid."""
        if not cls.can_transition(from_state, to_state):
            raise InvalidTransitionError(from_state, to_state)

    @classmethod
    def transition(cls, from_state: SightingCase, to_state: SightingCase) -> SightingCase:
        """
        Perform a case transition.

        Returns the new case if valid, raises InvalidTransitionError otherwise.
        """
        cls.validate_transition(from_state, to_state)
        return to_state

    @classmethod
    def is_terminal(cls, state: SightingCase) -> bool:
        return state in cls.TERMINAL_STATES

    @classmethod
    def get_valid_transitions(cls, state: SightingCase) -> Set[SightingCase]:
        return cls.TRANSITIONS.get(state, set()).copy()

    @classmethod
    def get_transition_path(
        cls,
        from_state: SightingCase,
        to_state: SightingCase,
    ) -> Optional[List[SightingCase]]:
        """Shortest valid path between two cases (BFS), or None."""
        if from_state == to_state:
            return [from_state]

        queue = deque([(from_state, [from_state])])
        visited = {from_state}

        while queue:
            current, path = queue.popleft()
            for next_state in cls.TRANSITIONS.get(current, set()):
                if next_state == to_state:
                    return path + [next_state]
                if next_state not in visited:
                    visited.add(next_state)
                    queue.append((next_state, path + [next_state]))

        return None


@dataclass
class SightingTracker:
    """
    Follows the case of a two-robot run step by step.

    observe() records every case change and raises InvalidTransitionError
    when the run moves backwards through the cases.
    """
    history: List[Tuple[float, SightingCase]] = field(default_factory=list)

    @property
    def current(self) -> Optional[SightingCase]:
        return self.history[-1][1] if self.history else None

    def observe(self, t: float, sees_0: bool, sees_1: bool) -> SightingCase:
        case = SightingStateMachine.case_for(sees_0, sees_1)
        if self.current is None:
            self.history.append((t, case))
        elif case != self.current:
            SightingStateMachine.validate_transition(self.current, case)
            self.history.append((t, case))
        return case

    @property
    def visited(self) -> List[SightingCase]:
        return [case for _, case in self.history]
