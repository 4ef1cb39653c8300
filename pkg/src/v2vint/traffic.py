"""Vehicle placements on the four arms and congestion classification."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

import numpy as np

from .errors import ParameterError
from .geometry import ARMS, Arm, IntersectionGeometry
from .transmission import RadioParams

DEFAULT_MIN_GAP_FT = 1.5


class LOS(str, Enum):
    SPARSE_AB = "SPARSE_AB"
    MILD_CD = "MILD_CD"
    DENSE_EF = "DENSE_EF"


def classify_los(h: float) -> LOS:
    """Map mean spacing to a level-of-service band; 50 and 100 ft are MILD_CD."""
    if not h > 0:
        raise ParameterError(f"spacing must be > 0, got {h}")
    if h > 100:
        return LOS.SPARSE_AB
    if h >= 50:
        return LOS.MILD_CD
    return LOS.DENSE_EF


@dataclass(frozen=True)
class ArmPlacement:
    arm: Arm
    positions_ft: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "arm", Arm(self.arm))
        pos = tuple(float(p) for p in self.positions_ft)
        if any(p < 0 for p in pos):
            raise ParameterError("positions must be >= 0 (upstream of the stop line)")
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise ParameterError("positions must be strictly increasing")
        object.__setattr__(self, "positions_ft", pos)

    def __len__(self):
        return len(self.positions_ft)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.positions_ft, dtype=float)


def uniform_placement(h: float, n: int, arm: Arm = Arm.N) -> ArmPlacement:
    if not h > 0:
        raise ParameterError(f"spacing must be > 0, got {h}")
    if n < 0:
        raise ParameterError(f"vehicle count must be >= 0, got {n}")
    return ArmPlacement(arm, tuple(j * h for j in range(n)))


def stochastic_gaps(mean_h: float, min_gap: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """Shifted-exponential gaps with minimum ``min_gap`` and mean ``mean_h``."""
    return min_gap + rng.exponential(mean_h - min_gap, size=count)


def stochastic_placement(mean_h: float, min_gap: float = DEFAULT_MIN_GAP_FT, n: int = 0,
                         seed: int = 0, arm: Arm = Arm.N) -> ArmPlacement:
    """Queue of ``n`` vehicles with i.i.d. shifted-exponential gaps, the first at the stop line."""
    if not (min_gap > 0 and mean_h > min_gap):
        raise ParameterError(f"need mean_h > min_gap > 0, got mean_h={mean_h}, min_gap={min_gap}")
    if n < 0:
        raise ParameterError(f"vehicle count must be >= 0, got {n}")
    if n == 0:
        return ArmPlacement(arm, ())
    rng = np.random.default_rng(seed)
    gaps = stochastic_gaps(mean_h, min_gap, n - 1, rng)
    positions = np.concatenate(([0.0], np.cumsum(gaps)))
    return ArmPlacement(arm, tuple(positions.tolist()))


def arm_seeds(seed: int) -> dict[Arm, int]:
    """Independent per-arm seeds derived from one master seed."""
    children = np.random.SeedSequence(seed).generate_state(len(ARMS))
    return {arm: int(s) for arm, s in zip(ARMS, children)}


@dataclass(frozen=True)
class PlacementScenario:
    """One snapshot: geometry, per-arm queues and the receiver.

    Every vehicle other than the receiver transmits (flooding), so there is
    no per-vehicle transmit flag.
    """

    geometry: IntersectionGeometry
    arms: Mapping[Arm, ArmPlacement]
    mean_spacing_ft: float
    receiver: tuple[Arm, int] = (Arm.N, 0)
    radio: RadioParams = field(default_factory=RadioParams)

    def __post_init__(self):
        arms = {Arm(a): p for a, p in self.arms.items()}
        for a in ARMS:
            arms.setdefault(a, ArmPlacement(a, ()))
        for a, p in arms.items():
            if p.arm != a:
                raise ParameterError(f"placement for arm {p.arm.value} stored under {a.value}")
        object.__setattr__(self, "arms", arms)
        r_arm, r_idx = Arm(self.receiver[0]), int(self.receiver[1])
        object.__setattr__(self, "receiver", (r_arm, r_idx))
        if not 0 <= r_idx < len(arms[r_arm]):
            raise ParameterError(f"receiver {r_arm.value}[{r_idx}] is not in the placement")

    @property
    def receiver_position_ft(self) -> float:
        arm, idx = self.receiver
        return self.arms[arm].positions_ft[idx]

    def vehicle_counts(self) -> dict[Arm, int]:
        return {a: len(p) for a, p in self.arms.items()}


def uniform_scenario(geom: IntersectionGeometry, h: float, n_per_arm: Mapping[Arm, int] | int,
                     radio: RadioParams | None = None) -> PlacementScenario:
    if isinstance(n_per_arm, int):
        n_per_arm = {a: n_per_arm for a in ARMS}
    arms = {Arm(a): uniform_placement(h, n, Arm(a)) for a, n in n_per_arm.items()}
    return PlacementScenario(geom, arms, h, radio=radio or RadioParams())


def stochastic_scenario(geom: IntersectionGeometry, mean_h: float, n_per_arm: Mapping[Arm, int] | int,
                        seed: int, min_gap: float = DEFAULT_MIN_GAP_FT,
                        radio: RadioParams | None = None) -> PlacementScenario:
    if isinstance(n_per_arm, int):
        n_per_arm = {a: n_per_arm for a in ARMS}
    seeds = arm_seeds(seed)
    arms = {Arm(a): stochastic_placement(mean_h, min_gap, n, seeds[Arm(a)], Arm(a))
            for a, n in n_per_arm.items()}
    return PlacementScenario(geom, arms, mean_h, radio=radio or RadioParams())


def realized_mean_spacing(scenario: PlacementScenario) -> float:
    """Mean gap between consecutive vehicles, pooled over all arms."""
    gaps = [np.diff(p.as_array()) for p in scenario.arms.values() if len(p) > 1]
    if not gaps:
        return float(scenario.mean_spacing_ft)
    return float(np.concatenate(gaps).mean())
