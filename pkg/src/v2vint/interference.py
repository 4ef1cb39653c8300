"""Interference at a receiver sitting at the north stop line.

Every quantity is the unit-power surrogate ``sum x**-2`` over interferers
(free-space exponent 2), in ft**-2.

Several closed forms exist side by side:

* ``exact_interference`` sums over actual vehicle positions, using either the
  printed per-arm distance formulas or plane coordinates.
* ``per_arm_finite_sums`` evaluates the four per-arm series with a finite
  number of vehicles, with their j = 0 constants in printed form.
* ``proposition1_bound`` gives the n -> infinity bound either in printed form
  (``PRINTED``) or re-derived term by term so that every term is ft**-2
  (``DERIVED``).
* ``orthogonal_bound_fitted`` / ``nonorthogonal_bound_fitted`` replace the
  polygamma functions by regression fits.

The bound helpers prefixed ``*_array`` take numpy arrays for ``h`` and ``D``
so the grid optimiser can evaluate a whole row at once.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping, Sequence

import numpy as np

from . import specfun
from .errors import (DegenerateGeometryError, DomainError, OutOfFitRangeWarning,
                     ParameterError, SingularityError, UnsupportedAngleError)
from .geometry import ARMS, Arm, IntersectionGeometry, coordinate_distance_sq, cross_sq, opposing_sq
from .traffic import PlacementScenario

PI2_6 = math.pi ** 2 / 6.0
#: "effectively infinite" arm
MAX_EFFECTIVE_VEHICLES = 100_000
#: D/h range spanned by the box 1.5 < h <= 86, 28 <= D <= 125 (printed as [0.33, 83.33])
FIT_RATIO_RANGE = (28.0 / 86.0, 125.0 / 1.5)


class Mode(str, Enum):
    EXACT = "EXACT"
    FINITE_PAPER_DISTANCES = "FINITE_PAPER_DISTANCES"
    BOUND_PRINTED = "BOUND_PRINTED"
    BOUND_DERIVED = "BOUND_DERIVED"
    BOUND_FITTED = "BOUND_FITTED"


class DistanceModel(str, Enum):
    PAPER = "PAPER"
    COORDINATE = "COORDINATE"


class BoundMode(str, Enum):
    PRINTED = "PRINTED"
    DERIVED = "DERIVED"


@dataclass(frozen=True)
class InterferenceBreakdown:
    north: float
    south: float
    east: float
    west: float
    mode: Mode
    total: float = field(default=None)

    def __post_init__(self):
        parts = (self.north, self.south, self.east, self.west)
        if any(p < 0 for p in parts):
            raise DomainError(f"negative interference component in {parts}")
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "total", math.fsum(parts))

    def __float__(self):
        return self.total

    def by_arm(self) -> dict[Arm, float]:
        return {Arm.N: self.north, Arm.S: self.south, Arm.E: self.east, Arm.W: self.west}


def _one_minus_cos(alpha_deg):
    alpha_deg = np.asarray(alpha_deg, dtype=float)
    if np.any(alpha_deg <= 0) or np.any(alpha_deg >= 180):
        raise DegenerateGeometryError(f"alpha must lie strictly inside (0, 180) degrees, got {alpha_deg}")
    omc = 1.0 - np.cos(np.radians(alpha_deg))
    if np.any(omc == 0):
        raise DegenerateGeometryError("1 - cos(alpha) vanishes")
    return omc


def effective_vehicle_count(h: float, arm_length_ft: float) -> int:
    """Vehicles per arm standing in for an infinitely long arm."""
    return int(min(MAX_EFFECTIVE_VEHICLES, max(1, math.floor(arm_length_ft / h))))


def tail_bound(n: int, h: float) -> float:
    """Upper bound on what all four per-arm series lose by stopping at j = n - 1.

    Each arm's tail is at most sum_{j >= n} (j h)**-2 <= 1 / ((n - 1) h**2).
    """
    if n < 2:
        return math.inf
    return 4.0 / ((n - 1) * h * h)


# --------------------------------------------------------------------------
# exact summation


def _arm_distance_sq(scenario: PlacementScenario, arm: Arm, model: DistanceModel,
                     receiver_offset_ft: float = 0.0) -> np.ndarray:
    geom = scenario.geometry
    r_arm, r_idx = scenario.receiver
    pos = scenario.arms[arm].as_array()
    if arm == r_arm:
        pos = np.delete(pos, r_idx)
    if pos.size == 0:
        return pos
    p_r = scenario.receiver_position_ft + receiver_offset_ft
    if model is DistanceModel.COORDINATE:
        return coordinate_distance_sq(arm, pos, geom, r_arm, p_r)
    if arm == Arm.N:
        return (pos - p_r) ** 2
    if arm == Arm.S:
        return opposing_sq(pos, geom.diameter_ft)
    return cross_sq(pos, geom.diameter_ft, geom.alpha_rad)


def exact_interference(scenario: PlacementScenario,
                       distance_model: DistanceModel = DistanceModel.PAPER,
                       receiver_offset_ft: float = 0.0) -> InterferenceBreakdown:
    """Sum of squared inverse distances from every non-receiver vehicle.

    ``receiver_offset_ft`` moves the receiver that far upstream along its
    arm while every other vehicle stays put.  ``PAPER`` distances are defined
    relative to a receiver at the north stop line, so that mode rejects any
    other receiver placement.
    """
    model = DistanceModel(distance_model)
    if receiver_offset_ft < 0:
        raise ParameterError("receiver offset must be >= 0")
    if model is DistanceModel.PAPER:
        r_arm, _ = scenario.receiver
        if r_arm != Arm.N or scenario.receiver_position_ft + receiver_offset_ft != 0.0:
            raise DomainError("PAPER distances assume the receiver at the north stop line; "
                              "use COORDINATE distances for displaced receivers")
    parts = {}
    for arm in ARMS:
        d2 = _arm_distance_sq(scenario, arm, model, receiver_offset_ft)
        if d2.size and np.min(d2) <= 1e-18:
            raise SingularityError(f"an interferer on arm {arm.value} coincides with the receiver")
        parts[arm] = float(np.sum(1.0 / d2)) if d2.size else 0.0
    return InterferenceBreakdown(parts[Arm.N], parts[Arm.S], parts[Arm.E], parts[Arm.W], Mode.EXACT)


# --------------------------------------------------------------------------
# finite per-arm series


def j0_constant_west(D: float, alpha_deg: float) -> float:
    """Leading constant of the printed west-arm series: 1 / (D**2 (2 - 2 cos alpha))."""
    return 1.0 / (D * D * 2.0 * float(_one_minus_cos(alpha_deg)))


def j0_constant_east(D: float, alpha_deg: float) -> float:
    """The printed east-arm series carries the west constant twice."""
    return 2.0 * j0_constant_west(D, alpha_deg)


def j0_exact_cross(D: float, alpha_deg: float) -> float:
    """True inverse squared distance of a cross-arm stop-line vehicle: 2 / (D**2 (1 - cos alpha))."""
    return 2.0 / (D * D * float(_one_minus_cos(alpha_deg)))


def per_arm_finite_sums(h: float, geom: IntersectionGeometry,
                        n_per_arm: Mapping[Arm, int]) -> InterferenceBreakdown:
    """The four per-arm series with finite vehicle counts, printed constants.

    The receiver is vehicle 0 of the north arm, so the north series runs over
    j = 1 .. n_N - 1; the other arms include their stop-line vehicle through
    the leading constant.
    """
    if not h > 0:
        raise DomainError(f"spacing must be > 0, got {h}")
    n = {Arm(a): int(v) for a, v in n_per_arm.items()}
    for a in ARMS:
        n.setdefault(a, 0)
        if n[a] < 0:
            raise ParameterError(f"vehicle count on arm {a.value} is negative")
    if n[Arm.N] < 1:
        raise ParameterError("receiver missing: the north arm needs at least one vehicle")
    D = geom.diameter_ft
    omc = float(_one_minus_cos(geom.alpha_deg))

    def js(count):
        return np.arange(1, count, dtype=float)

    north = float(np.sum(1.0 / js(n[Arm.N]) ** 2)) / (h * h)
    south = 0.0
    if n[Arm.S] >= 1:
        south = 1.0 / D ** 2 + float(np.sum(1.0 / (D + js(n[Arm.S]) * h) ** 2))

    def cross_series(count):
        jh = js(count) * h
        return float(np.sum(1.0 / (jh * jh + jh * D * omc)))

    west = j0_constant_west(D, geom.alpha_deg) + cross_series(n[Arm.W]) if n[Arm.W] >= 1 else 0.0
    east = j0_constant_east(D, geom.alpha_deg) + cross_series(n[Arm.E]) if n[Arm.E] >= 1 else 0.0
    return InterferenceBreakdown(north, south, east, west, Mode.FINITE_PAPER_DISTANCES)


# --------------------------------------------------------------------------
# n -> infinity bounds


def bound_terms_array(h, D, alpha_deg, mode: BoundMode):
    """(north, south, east, west) bound terms, broadcasting over h and D."""
    mode = BoundMode(mode)
    h = np.asarray(h, dtype=float)
    D = np.asarray(D, dtype=float)
    if np.any(h <= 0) or np.any(D <= 0):
        raise DomainError("need h > 0 and D > 0")
    omc = _one_minus_cos(alpha_deg)
    ratio = D / h
    north = PI2_6 / (h * h)
    south = 1.0 / (D * D) + specfun.psi1(ratio) / (h * h)
    c = ratio * omc
    if mode is BoundMode.PRINTED:
        gamma = specfun.PRINTED_EULER_GAMMA
        east = 1.0 / (D * D / 2.0 * omc)
        west = (1.0 / (0.5 * D ** 3 * h * omc ** 2) * (specfun.psi(c) + 1.0 / c + gamma)) ** 2
        # printed form has one squared digamma term and the stop-line constant
        # once; they are booked to west and east respectively
    else:
        gamma = specfun.EULER_GAMMA
        # sum_{j>=1} 1/(jh (jh + D omc)) = (psi(c) + 1/c + gamma) / (h D omc)
        west = 2.0 / (D * D * omc) + (specfun.psi(c) + 1.0 / c + gamma) / (h * D * omc)
        east = west
    return north, south, east, west


def proposition1_bound(h: float, geom: IntersectionGeometry,
                       mode: BoundMode = BoundMode.DERIVED) -> InterferenceBreakdown:
    mode = BoundMode(mode)
    n, s, e, w = (float(t) for t in bound_terms_array(h, geom.diameter_ft, geom.alpha_deg, mode))
    tag = Mode.BOUND_PRINTED if mode is BoundMode.PRINTED else Mode.BOUND_DERIVED
    return InterferenceBreakdown(n, s, e, w, tag)


def proposition1_total_array(h, D, alpha_deg, mode: BoundMode):
    n, s, e, w = bound_terms_array(h, D, alpha_deg, mode)
    return n + s + e + w


def orthogonal_printed_array(h, D):
    """Orthogonal bound in printed form for alpha = 90 degrees."""
    h = np.asarray(h, dtype=float)
    D = np.asarray(D, dtype=float)
    ratio = D / h
    third = (2.0 / (D ** 3 * h) * (specfun.PRINTED_EULER_GAMMA + 1.0 / ratio + specfun.psi(ratio))) ** 2
    return 3.0 / D ** 2 + (PI2_6 + specfun.psi1(ratio)) / h ** 2 + third


def orthogonal_bound(h: float, D: float, mode: BoundMode = BoundMode.PRINTED) -> float:
    if not (h > 0 and D > 0):
        raise DomainError("need h > 0 and D > 0")
    if BoundMode(mode) is BoundMode.PRINTED:
        return float(orthogonal_printed_array(h, D))
    return float(proposition1_total_array(h, D, 90.0, BoundMode.DERIVED))


# --------------------------------------------------------------------------
# fitted bounds


@dataclass(frozen=True)
class BoundCoefficients:
    """Coefficients of one fitted bound

        const/D**2 + (pi**2/6 + a (D/h)**b)/h**2
        + lead_num / (lead_den D**3 h) * (slope h/D + c ln(D/h (1 - cos alpha)) + d)**2
    """

    alpha_deg: float
    const_term_count: float
    lead_numerator: float
    lead_denominator: float
    slope_h_over_D: float
    log_coef: float
    inner_offset: float
    trig_power_coef: float = 1.3003
    trig_power_exp: float = -1.067
    # the orthogonal fit takes ln(D/h) without the cosine factor
    log_arg_scaled: bool = True


def _nonorth(alpha, const_den, lead_den, slope, log_coef, offset):
    return BoundCoefficients(alpha, 1.0 + 1.0 / const_den, 1.0, lead_den, slope, log_coef, offset)


BOUND_COEFFICIENTS: dict[float, BoundCoefficients] = {
    60.0: BoundCoefficients(60.0, 5.0, 8.0, 1.0, 2.0, 1.0461, -0.024),
    65.0: _nonorth(65.0, 0.2887, 0.1666, 0.5774, 1.0498, 0.0068),
    70.0: _nonorth(70.0, 0.3289, 0.02165, 0.6579, 1.0556, 0.0459),
    75.0: _nonorth(75.0, 0.3705, 0.02746, 0.7412, 1.0617, 0.0896),
    78.0: _nonorth(78.0, 0.3706, 0.02747, 0.7921, 1.0638, 0.1265),
    80.0: _nonorth(80.0, 0.4131, 0.03414, 0.8263, 1.066, 0.1479),
    85.0: _nonorth(85.0, 0.4564, 0.04166, 0.9128, 1.0727, 0.2016),
    88.0: _nonorth(88.0, 0.4825, 0.04657, 0.9651, 1.0774, 0.2380),
    90.0: BoundCoefficients(90.0, 3.0, 2.0, 1.0, 1.0, 1.0799, 0.2658, log_arg_scaled=False),
}
SUPPORTED_ALPHAS = tuple(sorted(BOUND_COEFFICIENTS))


def coefficients_for(alpha_deg: float) -> BoundCoefficients:
    try:
        return BOUND_COEFFICIENTS[float(alpha_deg)]
    except (KeyError, TypeError, ValueError):
        supported = ", ".join(f"{a:g}" for a in SUPPORTED_ALPHAS)
        raise UnsupportedAngleError(
            f"no fitted bound for alpha={alpha_deg}; supported angles: {supported}") from None


def in_fit_range(h, D) -> np.ndarray:
    ratio = np.asarray(D, dtype=float) / np.asarray(h, dtype=float)
    lo, hi = FIT_RATIO_RANGE
    return (ratio >= lo * (1 - 1e-12)) & (ratio <= hi * (1 + 1e-12))


def fitted_bound_array(h, D, alpha_deg: float = 90.0, warn: bool = True):
    coef = coefficients_for(alpha_deg)
    h = np.asarray(h, dtype=float)
    D = np.asarray(D, dtype=float)
    if np.any(h <= 0) or np.any(D <= 0):
        raise DomainError("need h > 0 and D > 0")
    if warn and not np.all(in_fit_range(h, D)):
        lo, hi = FIT_RATIO_RANGE
        warnings.warn(f"D/h outside the fitted range [{lo:.4g}, {hi:.4g}]",
                      OutOfFitRangeWarning, stacklevel=2)
    ratio = D / h
    log_arg = ratio * (1.0 - math.cos(math.radians(coef.alpha_deg))) if coef.log_arg_scaled else ratio
    inner = coef.slope_h_over_D / ratio + coef.log_coef * np.log(log_arg) + coef.inner_offset
    lead = coef.lead_numerator / (coef.lead_denominator * D ** 3 * h)
    return (coef.const_term_count / D ** 2
            + (PI2_6 + coef.trig_power_coef * ratio ** coef.trig_power_exp) / h ** 2
            + lead * inner ** 2)


def orthogonal_bound_fitted(h: float, D: float) -> float:
    return float(fitted_bound_array(h, D, 90.0))


def nonorthogonal_bound_fitted(h: float, D: float, alpha_deg: float) -> float:
    coefficients_for(alpha_deg)
    return float(fitted_bound_array(h, D, alpha_deg))


BoundFn = Callable[..., np.ndarray]


def bound_function(name: str) -> BoundFn:
    """Vectorised ``f(h, D, alpha_deg)`` for a bound family: printed, derived or fitted."""
    name = name.lower()
    if name == "fitted":
        return lambda h, D, alpha_deg=90.0: fitted_bound_array(h, D, alpha_deg, warn=False)
    if name == "printed":
        return lambda h, D, alpha_deg=90.0: proposition1_total_array(h, D, alpha_deg, BoundMode.PRINTED)
    if name == "derived":
        return lambda h, D, alpha_deg=90.0: proposition1_total_array(h, D, alpha_deg, BoundMode.DERIVED)
    raise ParameterError(f"unknown bound family {name!r}; expected printed, derived or fitted")


# --------------------------------------------------------------------------
# multiple lanes


def multilane_factor(thetas: Sequence[float], reference_index: int, unit_numerators: bool = False) -> float:
    """1 + sum over non-reference lanes of ((2 - th_m**2) / (2 - th_ref**2))**2.

    ``unit_numerators`` swaps the 2s for 1s (the compact closed form).
    """
    if len(thetas) == 0:
        raise ParameterError("need at least one lane angle")
    if not 0 <= reference_index < len(thetas):
        raise ParameterError(f"reference index {reference_index} out of range")
    th = np.asarray(thetas, dtype=float)
    if np.any(np.abs(th) >= math.pi / 2):
        raise DomainError("lane angles must satisfy |theta| < pi/2")
    k = 1.0 if unit_numerators else 2.0
    den = k - th[reference_index] ** 2
    if den == 0:
        raise DomainError("reference lane angle makes the ratio singular")
    ratios = (k - np.delete(th, reference_index) ** 2) / den
    return 1.0 + math.fsum(ratios ** 2)


def multilane_interference(base, thetas: Sequence[float], reference_index: int,
                           unit_numerators: bool = False) -> float:
    return float(base) * multilane_factor(thetas, reference_index, unit_numerators)
