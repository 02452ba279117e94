"""
Counterexample generators for controller categories.

Each generator builds an initial state on which some family of bimodal
controllers never aggregates. The registry maps a controller category to
the generator that defeats it.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, List, Optional

from src.domain import (
    BimodalController,
    ControllerCategory,
    MovementClass,
    MRState,
    PairFacing,
    RingHeading,
    Scenario,
    SimConfig,
    WorldParams,
)
from .kinematics import icr_radius
from .scenarios import (
    gen_blind,
    gen_collinear_backward,
    gen_deadlock_pairs,
    gen_near_miss_ring,
    gen_ring_center,
    minimal_ring_size,
    xx_cb_ring_bound,
)
from .taxonomy import categorize

logger = logging.getLogger(__name__)

DEFAULT_RING = 8


class CounterexampleGenerator(ABC):
    """
    Base class for counterexample generators.

    A generator turns a controller (and an optional robot count hint) into an
    initial state that keeps it from aggregating.
    """

    @property
    @abstractmethod
    def family(self) -> str:
        """Return the family name this generator is registered under."""
        pass

    @abstractmethod
    def build(
        self,
        controller: BimodalController,
        world: WorldParams,
        n: Optional[int] = None,
    ) -> MRState:
        """
        Build the initial state.

        Args:
            controller: Controller the state must defeat
            world: Physical parameters
            n: Requested robot count; generators round it to what they support

        Raises:
            ScenarioError: When the construction cannot be realized
        """
        pass


class GeneratorRegistry:
    """
    Registry for counterexample generators.

    Allows registration and lookup by family name or by controller category.
    """

    def __init__(self):
        self._generators: Dict[str, CounterexampleGenerator] = {}

    def register(self, generator: CounterexampleGenerator) -> None:
        """Register a generator."""
        self._generators[generator.family] = generator
        logger.debug(f"Registered counterexample generator: {generator.family}")

    def get_generator(self, family: str) -> Optional[CounterexampleGenerator]:
        """Get a generator by family name."""
        return self._generators.get(family)

    def list_families(self) -> List[str]:
        """List all registered families."""
        return list(self._generators.keys())

    def for_category(self, category: ControllerCategory) -> CounterexampleGenerator:
        """
        Generator that defeats every controller of a category.

        Raises KeyError if the needed family is not registered.
        """
        family = family_for_category(category)
        generator = self.get_generator(family)
        if generator is None:
            raise KeyError(f"No generator registered for family '{family}'")
        return generator


def family_for_category(category: ControllerCategory) -> str:
    """Name of the construction that defeats a category."""
    a, b = category.mode_a, category.mode_b
    if a == MovementClass.SS:
        return "blind"
    if b == MovementClass.SS:
        return "facing_pair"
    if b in (MovementClass.SF, MovementClass.CF):
        return "deadlock_pairs"
    if b == MovementClass.SB:
        return "collinear_backward"
    if b == MovementClass.CB:
        return "ring_see_neighbor"
    # Spinning on sight.
    if a == MovementClass.RS:
        return "blind"
    if a in (MovementClass.SB, MovementClass.CB):
        return "ring_radial_out"
    return "ring_near_miss"


# ============================================
# BUILT-IN GENERATORS
# ============================================

class BlindGenerator(CounterexampleGenerator):
    """
    Robots side by side, all facing the same way, 20 cm apart.

    Nobody sees anybody, so a controller that stands still (or spins in place)
    without a sighting keeps them apart.
    """

    @property
    def family(self) -> str:
        return "blind"

    def build(self, controller, world, n=None):
        return gen_blind(max(n or 2, 2), 20.0, world)


class FacingPairGenerator(CounterexampleGenerator):
    """Two robots 20 cm apart facing each other; both see and stop."""

    @property
    def family(self) -> str:
        return "facing_pair"

    def build(self, controller, world, n=None):
        return gen_collinear_backward(1, 20.0, world)


class DeadlockPairsGenerator(CounterexampleGenerator):
    """Touching pairs facing each other, 10 cm between pairs: forward motion is blocked."""

    @property
    def family(self) -> str:
        return "deadlock_pairs"

    def build(self, controller, world, n=None):
        return gen_deadlock_pairs(max((n or 4) // 2, 2), PairFacing.TOWARD, 10.0, world)


class CollinearBackwardGenerator(CounterexampleGenerator):
    """Two facing groups on a line; backing away splits them for good."""

    @property
    def family(self) -> str:
        return "collinear_backward"

    def build(self, controller, world, n=None):
        return gen_collinear_backward(max((n or 2) // 2, 1), 20.0, world)


class NeighborRingGenerator(CounterexampleGenerator):
    """
    Touching ring whose robots look at their clockwise neighbor.

    Backing into the other neighbor is blocked; the center robot keeps
    circling inside. The ring is sized from the mode-B circle radius.
    """

    @property
    def family(self) -> str:
        return "ring_see_neighbor"

    def build(self, controller, world, n=None):
        radius = icr_radius(controller.mode_b, world)
        if not radius.is_finite:
            raise ValueError("Mode B must drive a circle")
        needed = minimal_ring_size(xx_cb_ring_bound(radius.value, world), world)
        n_ring = max(7, needed, (n - 1) if n else 0)
        return gen_ring_center(
            n_ring, RingHeading.SEE_RIGHT_NEIGHBOR, world=world, mode_b_radius=radius.value
        )


class RadialRingGenerator(CounterexampleGenerator):
    """Outward-facing touching ring around a spinning center robot."""

    @property
    def family(self) -> str:
        return "ring_radial_out"

    def build(self, controller, world, n=None):
        n_ring = max((n - 1) if n else DEFAULT_RING, 7)
        return gen_ring_center(n_ring, RingHeading.RADIAL_OUT, world=world)


class NearMissRingGenerator(CounterexampleGenerator):
    """Touching ring looking just past each neighbor; driving forward is blocked."""

    @property
    def family(self) -> str:
        return "ring_near_miss"

    def build(self, controller, world, n=None):
        n_ring = max((n - 1) if n else DEFAULT_RING, 7)
        return gen_near_miss_ring(n_ring, world)


def create_default_registry() -> GeneratorRegistry:
    """Create a registry with all built-in generators."""
    registry = GeneratorRegistry()

    registry.register(BlindGenerator())
    registry.register(FacingPairGenerator())
    registry.register(DeadlockPairsGenerator())
    registry.register(CollinearBackwardGenerator())
    registry.register(NeighborRingGenerator())
    registry.register(RadialRingGenerator())
    registry.register(NearMissRingGenerator())

    return registry


@dataclass(frozen=True)
class Counterexample:
    category: ControllerCategory
    family: str
    scenario: Scenario


def build_counterexample(
    controller: BimodalController,
    world: Optional[WorldParams] = None,
    n: Optional[int] = None,
    sim: Optional[SimConfig] = None,
    registry: Optional[GeneratorRegistry] = None,
) -> Counterexample:
    """Scenario on which `controller` provably does not aggregate, with the generator used."""
    world = world or WorldParams()
    registry = registry or create_default_registry()
    category = categorize(controller)
    generator = registry.for_category(category)
    state = generator.build(controller, world, n)
    logger.info(f"Built '{generator.family}' counterexample for {category} ({state.n} robots)")
    scenario = Scenario(
        initial=state,
        controller=controller,
        sim=sim or SimConfig(),
        label=f"counterexample {category} ({generator.family})",
    )
    return Counterexample(category, generator.family, scenario)
