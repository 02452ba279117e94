"""
Domain enums for swarm aggregation runs.

Values are upper-case strings because they appear verbatim in result files.
"""

from enum import Enum


class Verdict(str, Enum):
    """
    How a simulation run ended.

    - AGGREGATED: the union of padded discs became connected
    - TIMEOUT: the time budget ran out
    - STATIONARY: no robot moved during the stationarity window
    - PERIODIC: the swarm entered a repeating motion
    - ERROR: the run could not be built or diverged (experiments only)
    """
    AGGREGATED = "AGGREGATED"
    TIMEOUT = "TIMEOUT"
    STATIONARY = "STATIONARY"
    PERIODIC = "PERIODIC"
    ERROR = "ERROR"


class MovementClass(str, Enum):
    """
    Motion produced by one constant wheel command.

    - SF / SB: straight forwards / backwards
    - CF / CB: circular forwards / backwards
    - RS: rotation on the spot
    - SS: stand still
    """
    SF = "SF"
    SB = "SB"
    CF = "CF"
    CB = "CB"
    RS = "RS"
    SS = "SS"


class NoiseMode(str, Enum):
    """
    Wheel noise applied to controller commands.

    - NONE: commands are used as given
    - STATIC: one offset per robot and wheel, drawn at t = 0 and held
    """
    NONE = "NONE"
    STATIC = "STATIC"


class IcrKind(str, Enum):
    """Tag of an instantaneous-center-of-rotation radius."""
    FINITE = "FINITE"
    INFINITE = "INFINITE"
    SPIN = "SPIN"
    UNDEFINED = "UNDEFINED"


class PairFacing(str, Enum):
    """Orientation of the two robots in a deadlock pair."""
    AWAY = "AWAY"
    TOWARD = "TOWARD"


class RingHeading(str, Enum):
    """
    Heading rule for ring robots.

    - RADIAL_OUT: every ring robot faces away from the center
    - SEE_RIGHT_NEIGHBOR: every ring robot faces its clockwise neighbor
    """
    RADIAL_OUT = "RADIAL_OUT"
    SEE_RIGHT_NEIGHBOR = "SEE_RIGHT_NEIGHBOR"


class SightingCase(str, Enum):
    """
    Who sees whom in a two-robot system.

    - NONE_SEE: neither robot has the other in sight
    - ONE_SEES: exactly one robot has the other in sight
    - BOTH_SEE: both robots have each other in sight
    """
    NONE_SEE = "C3"
    ONE_SEES = "C2"
    BOTH_SEE = "C1"
