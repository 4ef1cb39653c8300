"""Intersection and sight-triangle geometry.

Two distance models live here.  The *printed* (``PAPER``) model uses the closed-form
squared distances for vehicles on the cross arms (law of cosines) and on the
opposing arm (``D**2 + (D + jh)**2``).  The *coordinate* model places every
vehicle as a point in the plane:

* intersection centre at the origin,
* receiver arm along +y, opposing arm along -y,
* the two cross arms at +alpha (east) and -alpha (west) from +y,
* every stop line at ``D / 2`` from the centre.

Angles are degrees at the API boundary and radians internally.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import ConstraintError, DegenerateGeometryError, DomainError, InfeasibleGeometryError, ParameterError

DESIGN_D_RANGE = (28.0, 125.0)
DESIGN_ALPHA_RANGE = (60.0, 90.0)
MIN_GAP_TIME_S = 3.0
FT_PER_S_PER_MPH = 1.47


class Arm(str, Enum):
    N = "N"
    S = "S"
    E = "E"
    W = "W"


ARMS = (Arm.N, Arm.S, Arm.E, Arm.W)


@dataclass(frozen=True)
class IntersectionGeometry:
    diameter_ft: float
    alpha_deg: float = 90.0
    lanes_per_arm: int = 1
    lane_width_ft: float = 12.0
    arm_length_ft: float = 2000.0
    # None -> lanes_per_arm // 2, i.e. lane 3 of the four-lane layout
    reference_lane_index: Optional[int] = None

    def __post_init__(self):
        if not self.diameter_ft > 0:
            raise ParameterError(f"diameter_ft must be > 0, got {self.diameter_ft}")
        if self.alpha_deg in (0, 180):
            raise DegenerateGeometryError(f"alpha_deg={self.alpha_deg} collapses the intersection")
        if not 0 < self.alpha_deg < 180:
            raise ParameterError(f"alpha_deg must lie in (0, 180), got {self.alpha_deg}")
        if int(self.lanes_per_arm) != self.lanes_per_arm or self.lanes_per_arm < 1:
            raise ParameterError(f"lanes_per_arm must be an integer >= 1, got {self.lanes_per_arm}")
        if not self.lane_width_ft > 0:
            raise ParameterError(f"lane_width_ft must be > 0, got {self.lane_width_ft}")
        if not self.arm_length_ft > 0:
            raise ParameterError(f"arm_length_ft must be > 0, got {self.arm_length_ft}")
        ref = self.reference_lane_index
        if ref is not None and not 0 <= ref < self.lanes_per_arm:
            raise ParameterError(f"reference_lane_index {ref} out of range for {self.lanes_per_arm} lanes")

    @property
    def alpha_rad(self) -> float:
        return math.radians(self.alpha_deg)

    @property
    def ref_lane(self) -> int:
        if self.reference_lane_index is not None:
            return self.reference_lane_index
        return self.lanes_per_arm // 2

    @property
    def in_design_range(self) -> bool:
        lo, hi = DESIGN_D_RANGE
        alo, ahi = DESIGN_ALPHA_RANGE
        return lo <= self.diameter_ft <= hi and alo <= self.alpha_deg <= ahi


@dataclass(frozen=True)
class SightTriangle:
    leg_a_ft: float
    leg_b_ft: float
    leg_c_ft: float
    posted_speed_mph: float
    gap_time_s: float

    def __post_init__(self):
        if min(self.leg_a_ft, self.leg_b_ft, self.leg_c_ft) <= 0:
            raise ParameterError("sight triangle legs must be positive")
        if self.gap_time_s < MIN_GAP_TIME_S:
            raise ConstraintError(f"gap time {self.gap_time_s} s violates t_g >= 3 sec")

    @property
    def alpha_deg(self) -> float:
        return angle_from_legs(self.leg_a_ft, self.leg_b_ft, self.leg_c_ft)


def cross_sq(upstream_ft, D, alpha_rad):
    """Law-of-cosines squared distance to a cross-arm point ``upstream_ft``
    beyond its stop line, receiver at its own stop line."""
    half = D / 2.0
    far = half + upstream_ft
    return half * half + far * far - 2.0 * half * far * np.cos(alpha_rad)


def opposing_sq(upstream_ft, D):
    return D * D + (D + upstream_ft) ** 2


def cross_arm_distance_sq(j, h, geom: IntersectionGeometry):
    """Squared receiver distance of vehicle ``j`` on a cross (east/west) arm."""
    if np.any(np.asarray(j) < 0) or np.any(np.asarray(h) <= 0):
        raise DomainError("need j >= 0 and h > 0")
    return cross_sq(np.asarray(j) * h, geom.diameter_ft, geom.alpha_rad)


def opposing_arm_distance_sq(j, h, geom: IntersectionGeometry):
    """Squared receiver distance of vehicle ``j`` on the opposing arm, printed form:
    ``D**2 + (D + j*h)**2``.  See :func:`coordinate_distance_sq` for the
    straight-across alternative."""
    if np.any(np.asarray(j) < 0) or np.any(np.asarray(h) <= 0):
        raise DomainError("need j >= 0 and h > 0")
    return opposing_sq(np.asarray(j) * h, geom.diameter_ft)


def arm_direction(arm: Arm, alpha_deg: float) -> np.ndarray:
    """Unit vector pointing from the centre outward along ``arm``."""
    bearing = {
        Arm.N: 0.0,
        Arm.E: alpha_deg,
        Arm.S: 180.0,
        Arm.W: -alpha_deg,
    }[Arm(arm)]
    b = math.radians(bearing)
    return np.array([math.sin(b), math.cos(b)])


def vehicle_point(arm: Arm, upstream_ft, geom: IntersectionGeometry) -> np.ndarray:
    """Plane coordinates of vehicles ``upstream_ft`` behind the stop line of ``arm``.

    Returns shape ``(..., 2)``.
    """
    r = geom.diameter_ft / 2.0 + np.asarray(upstream_ft, dtype=float)
    return r[..., None] * arm_direction(arm, geom.alpha_deg)


def coordinate_distance_sq(arm: Arm, upstream_ft, geom: IntersectionGeometry,
                           receiver_arm: Arm = Arm.N, receiver_upstream_ft: float = 0.0):
    rx = vehicle_point(receiver_arm, receiver_upstream_ft, geom)
    d = vehicle_point(arm, upstream_ft, geom) - rx
    return np.sum(d * d, axis=-1)


def lane_horizontal_angles(geom: IntersectionGeometry, reference_distance_ft: float) -> list[float]:
    """Horizontal angle (radians) of each lane centreline seen from the receiver.

    Lane ``m`` is offset laterally by ``(m - ref) * lane_width`` from the
    reference lane, so the reference lane itself sits at angle 0.
    """
    if not reference_distance_ft > 0:
        raise DomainError(f"reference distance must be > 0, got {reference_distance_ft}")
    ref = geom.ref_lane
    return [math.atan((m - ref) * geom.lane_width_ft / reference_distance_ft)
            for m in range(geom.lanes_per_arm)]


def sight_leg_length(posted_speed_mph: float, gap_time_s: float) -> float:
    """Approach leg a (or b) of the sight triangle: 1.47 * V * t_g, in feet."""
    if not posted_speed_mph > 0:
        raise ParameterError(f"posted speed must be > 0, got {posted_speed_mph}")
    if gap_time_s < MIN_GAP_TIME_S:
        raise ConstraintError(f"gap time {gap_time_s} s violates t_g >= 3 sec")
    return FT_PER_S_PER_MPH * posted_speed_mph * gap_time_s


def angle_from_legs(a: float, b: float, c: float) -> float:
    """Angle opposite leg ``c``, in degrees."""
    if min(a, b, c) <= 0:
        raise ParameterError("legs must be positive")
    num = a * a + b * b - c * c
    den = 2.0 * a * b
    if abs(num) > den * (1 + 1e-12):
        raise InfeasibleGeometryError(
            f"legs a={a}, b={b}, c={c} violate the triangle inequality")
    return math.degrees(math.acos(max(-1.0, min(1.0, num / den))))


_TABLE1 = (
    (25, 280, 60),
    (30, 355, 65),
    (35, 415, 70),
    (40, 470, 75),
    (45, 530, 78),
    (50, 590, 80),
    (55, 645, 85),
    (60, 705, 88),
)


def table1_data() -> list[tuple[float, float, float]]:
    """AASHTO corner sight distance table: (speed mph, leg c ft, alpha deg)."""
    return [tuple(float(v) for v in row) for row in _TABLE1]


def implied_gap_time(speed_mph: float, c_ft: float, alpha_deg: float) -> float:
    """Gap time t_g that reproduces (c, alpha) with equal legs a = b.

    From c**2 = 2 a**2 (1 - cos alpha) and a = 1.47 V t_g.
    """
    a = c_ft / math.sqrt(2.0 * (1.0 - math.cos(math.radians(alpha_deg))))
    return a / (FT_PER_S_PER_MPH * speed_mph)
