"""Worst-case V2V interference at road intersections.

Closed-form interference bounds under flooding, their fitted approximations,
the resulting SINR transmission-range bound, and desk-scale experiments that
check the bounds against per-vehicle summation.
"""
from .errors import (ConstraintError, DegenerateGeometryError, DomainError, InfeasibleGeometryError,
                     OutOfFitRangeWarning, ParameterError, SingularityError, UnsupportedAngleError)
from .geometry import ARMS, Arm, IntersectionGeometry, SightTriangle
from .interference import (BoundMode, DistanceModel, InterferenceBreakdown, Mode, exact_interference,
                           multilane_factor, nonorthogonal_bound_fitted, orthogonal_bound,
                           orthogonal_bound_fitted, per_arm_finite_sums, proposition1_bound)
from .optimize import OptResult, optimize_bound
from .specfun import digamma, hurwitz_zeta2, psi, psi1, trigamma
from .traffic import PlacementScenario, stochastic_scenario, uniform_scenario
from .transmission import RadioParams, Sense, naive_range, sinr_check, transmission_range_bound

__version__ = "0.1.0"
