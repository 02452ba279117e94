"""
Movement classes of wheel commands and categories of bimodal controllers.

A command is classified by the signs of its tangential speed and turn rate,
so every point of the [-1, 1]^2 command square gets exactly one class.
"""

from itertools import product
from typing import List

from src.domain import BimodalController, ControllerCategory, MovementClass, WheelCommand
from src.domain.geometry import COMMAND_EPS


def classify(cmd: WheelCommand) -> MovementClass:
    """Movement class of one constant command."""
    v = (cmd.v_l + cmd.v_r) / 2.0
    turning = abs(cmd.v_r - cmd.v_l) > COMMAND_EPS
    if abs(v) <= COMMAND_EPS:
        return MovementClass.RS if turning else MovementClass.SS
    if not turning:
        return MovementClass.SF if v > 0 else MovementClass.SB
    return MovementClass.CF if v > 0 else MovementClass.CB


def categorize(u: BimodalController) -> ControllerCategory:
    """Category "A-B" from the classes of both modes."""
    return ControllerCategory(classify(u.mode_a), classify(u.mode_b))


def all_categories() -> List[ControllerCategory]:
    """The 36 categories, mode A major."""
    return [ControllerCategory(a, b) for a, b in product(MovementClass, repeat=2)]


def representative_command(cls: MovementClass, a: float = 0.6, b: float = 0.9) -> WheelCommand:
    """A concrete command of the given class built from magnitudes a != b."""
    return {
        MovementClass.SF: WheelCommand(a, a),
        MovementClass.SB: WheelCommand(-a, -a),
        MovementClass.CF: WheelCommand(a, b),
        MovementClass.CB: WheelCommand(-a, -b),
        MovementClass.RS: WheelCommand(-a, a),
        MovementClass.SS: WheelCommand(0.0, 0.0),
    }[cls]


def representative_controller(category: ControllerCategory) -> BimodalController:
    a = representative_command(category.mode_a)
    b = representative_command(category.mode_b)
    return BimodalController(a.v_l, a.v_r, b.v_l, b.v_r)
