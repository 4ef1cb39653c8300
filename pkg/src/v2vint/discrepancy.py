"""Side-by-side evaluation of formula variants that ought to agree but do not.

Each row pairs two formulas at one (h, D, alpha) point and gives the signed
relative gap ``(value_a - value_b) / |value_b|``.
"""
from __future__ import annotations

import math
from dataclasses import astuple, dataclass

from . import interference as itf
from .geometry import Arm, IntersectionGeometry, coordinate_distance_sq, opposing_sq
from .interference import BoundMode, DistanceModel
from .io import write_csv
from .traffic import uniform_scenario
from .transmission import DEFAULT_BETA, naive_range, transmission_range_bound

HEADER = ("formula_a", "formula_b", "h", "D", "alpha_deg", "value_a", "value_b", "rel_gap")


@dataclass(frozen=True)
class DiscrepancyRow:
    formula_a: str
    formula_b: str
    h: float
    D: float
    alpha_deg: float
    value_a: float
    value_b: float

    @property
    def rel_gap(self) -> float:
        if self.value_b == 0:
            return math.inf if self.value_a else 0.0
        return (self.value_a - self.value_b) / abs(self.value_b)

    def as_row(self):
        return (*astuple(self), self.rel_gap)


def _alpha_family(h, D):
    """Interference at alpha = 90 and 60 for each formula family."""

    def exact(model):
        def f(alpha):
            geom = IntersectionGeometry(D, alpha)
            n = itf.effective_vehicle_count(h, geom.arm_length_ft)
            return itf.exact_interference(uniform_scenario(geom, h, n), model).total
        return f

    return {
        "general_printed": lambda a: itf.proposition1_bound(h, IntersectionGeometry(D, a), BoundMode.PRINTED).total,
        "general_derived": lambda a: itf.proposition1_bound(h, IntersectionGeometry(D, a), BoundMode.DERIVED).total,
        "fitted": lambda a: float(itf.fitted_bound_array(h, D, a)),
        "exact_printed_distances": exact(DistanceModel.PAPER),
        "exact_coordinate": exact(DistanceModel.COORDINATE),
    }


def discrepancy_report(h: float = 30.0, D: float = 60.0, beta: float = DEFAULT_BETA) -> list[DiscrepancyRow]:
    rows = []
    add = lambda a, b, alpha, va, vb: rows.append(DiscrepancyRow(a, b, h, D, alpha, float(va), float(vb)))

    orth = itf.orthogonal_bound(h, D, BoundMode.PRINTED)
    add("orthogonal_printed", "orthogonal_derived", 90.0, orth, itf.orthogonal_bound(h, D, BoundMode.DERIVED))
    add("orthogonal_printed", "general_printed@alpha=90", 90.0, orth,
        itf.proposition1_bound(h, IntersectionGeometry(D, 90.0), BoundMode.PRINTED).total)
    add("orthogonal_fitted", "orthogonal_printed", 90.0, itf.orthogonal_bound_fitted(h, D), orth)
    add("orthogonal_printed_constant_3_over_D2", "derived_constant_5_over_D2", 90.0, 3.0 / D ** 2, 5.0 / D ** 2)

    for alpha in (60.0, 90.0):
        add("west_series_j0_constant", "east_series_j0_constant", alpha,
            itf.j0_constant_west(D, alpha), itf.j0_constant_east(D, alpha))
        add("east_series_j0_constant", "east_bound_j0_constant", alpha,
            itf.j0_constant_east(D, alpha), itf.j0_exact_cross(D, alpha))

    add("south_series_j0", "south_distance_j0", 90.0, 1.0 / D ** 2, 1.0 / opposing_sq(0.0, D))
    geom = IntersectionGeometry(D, 90.0)
    add("opposing_dist_sq_printed_j1", "opposing_dist_sq_coordinate_j1", 90.0,
        opposing_sq(h, D), float(coordinate_distance_sq(Arm.S, h, geom)))

    add("range_bound_r_b", "naive_sinr_radius", 90.0,
        transmission_range_bound(beta, orth).r_b_ft, naive_range(beta, orth))

    for name, f in _alpha_family(h, D).items():
        add(f"{name}@alpha=90", f"{name}@alpha=60", 90.0, f(90.0), f(60.0))
    return rows


def write_discrepancy_csv(path, rows=None, fmt=None) -> str:
    rows = discrepancy_report() if rows is None else rows
    kwargs = {"fmt": fmt} if fmt else {}
    return write_csv(path, HEADER, (r.as_row() for r in rows), **kwargs)
