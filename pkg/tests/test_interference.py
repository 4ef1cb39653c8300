import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_coordinate, brute_printed, fitted_75, fitted_orthogonal
from v2vint.errors import (DegenerateGeometryError, DomainError, OutOfFitRangeWarning, ParameterError,
                           SingularityError, UnsupportedAngleError)
from v2vint.geometry import ARMS, Arm, IntersectionGeometry, lane_horizontal_angles
from v2vint.interference import (BOUND_COEFFICIENTS, SUPPORTED_ALPHAS, BoundMode, DistanceModel,
                                 InterferenceBreakdown, Mode, bound_function, exact_interference,
                                 j0_constant_east, j0_constant_west, j0_exact_cross, multilane_factor,
                                 multilane_interference, nonorthogonal_bound_fitted, orthogonal_bound,
                                 orthogonal_bound_fitted, per_arm_finite_sums, proposition1_bound,
                                 tail_bound)
from v2vint.traffic import ArmPlacement, PlacementScenario, uniform_placement, uniform_scenario

PI2_6 = math.pi ** 2 / 6
EG = 0.5772156649015329


def positions_of(sc):
    return {a.value: list(p.positions_ft) for a, p in sc.arms.items()}


def test_exact_no_interferers():
    sc = PlacementScenario(IntersectionGeometry(40), {Arm.N: uniform_placement(50, 1)}, 50)
    assert exact_interference(sc).total == 0


def test_exact_single_interferer_own_arm():
    sc = PlacementScenario(IntersectionGeometry(40), {Arm.N: ArmPlacement(Arm.N, (0, 10))}, 10)
    for model in DistanceModel:
        assert exact_interference(sc, model).total == pytest.approx(0.01, rel=1e-15)


def test_exact_orthogonal_reference_scenario():
    sc = uniform_scenario(IntersectionGeometry(40, 90), 50, 50)
    mp = mpmath.mp
    with mp.workprec(120):
        terms = [mpmath.mpf(1) / (j * 50) ** 2 for j in range(1, 50)]
        terms += [1 / (mpmath.mpf(40) ** 2 + (40 + j * 50) ** 2) for j in range(50)]
        terms += [2 / (mpmath.mpf(20) ** 2 + (20 + j * 50) ** 2) for j in range(50)]
        oracle = float(mpmath.fsum(terms))
    assert exact_interference(sc).total == pytest.approx(oracle, rel=1e-10)


@pytest.mark.parametrize("model", list(DistanceModel))
def test_exact_matches_brute_force_random(model):
    rng = np.random.default_rng(1234)
    for _ in range(20):
        D = float(rng.uniform(20, 130))
        alpha = float(rng.uniform(30, 150))
        pos = {}
        for a in "NSEW":
            n = int(rng.integers(1 if a == "N" else 0, 300))
            pos[a] = np.cumsum(np.r_[0.0, rng.uniform(1.5, 100, max(n - 1, 0))])[:n].tolist()
        sc = PlacementScenario(IntersectionGeometry(D, alpha),
                               {Arm(a): ArmPlacement(Arm(a), p) for a, p in pos.items()}, 50)
        got = exact_interference(sc, model)
        ref = brute_printed(pos, D, alpha) if model is DistanceModel.PAPER else brute_coordinate(pos, D, alpha)
        for a in ARMS:
            assert getattr(got, {"N": "north", "S": "south", "E": "east", "W": "west"}[a.value]) == \
                pytest.approx(ref[a.value], rel=1e-10, abs=1e-300)


def test_exact_coordinate_receiver_off_north():
    sc = PlacementScenario(IntersectionGeometry(50, 70),
                           {a: uniform_placement(30, 10, a) for a in ARMS}, 30, receiver=(Arm.E, 3))
    ref = brute_coordinate(positions_of(sc), 50, 70, receiver=("E", 3))
    assert exact_interference(sc, DistanceModel.COORDINATE).total == pytest.approx(math.fsum(ref.values()),
                                                                                   rel=1e-12)
    with pytest.raises(DomainError):
        exact_interference(sc, DistanceModel.PAPER)


def test_exact_singularity():
    sc = PlacementScenario(IntersectionGeometry(40),
                           {Arm.N: ArmPlacement(Arm.N, (0, 10))}, 10)
    with pytest.raises(SingularityError):
        exact_interference(sc, DistanceModel.COORDINATE, receiver_offset_ft=10.0)


def test_breakdown_partition_and_nonnegativity():
    b = InterferenceBreakdown(0.1, 0.2, 0.3, 0.4, Mode.EXACT)
    assert b.total == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(DomainError):
        InterferenceBreakdown(-1e-9, 0, 0, 0, Mode.EXACT)


def test_finite_sums_receiver_only():
    b = per_arm_finite_sums(50, IntersectionGeometry(40), {Arm.N: 1})
    assert b.total == 0


def test_finite_sums_south_stop_line_constant():
    b = per_arm_finite_sums(50, IntersectionGeometry(40), {Arm.N: 1, Arm.S: 1})
    # the printed south series opens with 1/D**2 ...
    assert b.south == pytest.approx(1 / 1600, rel=1e-15)
    # ... while the per-vehicle distance of that stop-line vehicle gives 1/(2 D**2)
    sc = PlacementScenario(IntersectionGeometry(40), {Arm.N: uniform_placement(50, 1),
                                                     Arm.S: uniform_placement(50, 1, Arm.S)}, 50)
    assert exact_interference(sc).south == pytest.approx(1 / 3200, rel=1e-15)


def test_finite_sums_receiver_missing():
    with pytest.raises(ParameterError, match="receiver missing"):
        per_arm_finite_sums(50, IntersectionGeometry(40), {Arm.N: 0, Arm.S: 3})


def test_finite_sums_term_by_term():
    h, D, n = 50.0, 40.0, 200
    b = per_arm_finite_sums(h, IntersectionGeometry(D, 90), {a: n for a in ARMS})
    c = 1 / (D * D * 2)
    cross = math.fsum(1 / ((j * h) ** 2 + j * h * D) for j in range(1, n))
    assert b.north == pytest.approx(math.fsum(1 / (j * h) ** 2 for j in range(1, n)), rel=1e-13)
    assert b.south == pytest.approx(1 / D ** 2 + math.fsum(1 / (D + j * h) ** 2 for j in range(1, n)), rel=1e-13)
    assert b.west == pytest.approx(c + cross, rel=1e-13)
    assert b.east == pytest.approx(2 * c + cross, rel=1e-13)


def test_j0_constants():
    D = 60.0
    assert j0_constant_west(D, 90) == pytest.approx(1 / (2 * D * D))
    assert j0_constant_east(D, 90) == pytest.approx(1 / (D * D))
    assert j0_exact_cross(D, 90) == pytest.approx(2 / (D * D))
    # the exact stop-line cross vehicle at 60 degrees sits D/2 away
    assert j0_exact_cross(D, 60) == pytest.approx(1 / (D / 2) ** 2)


def test_derived_bound_components_against_mpmath():
    h, D = 50.0, 40.0
    b = proposition1_bound(h, IntersectionGeometry(D, 90), BoundMode.DERIVED)
    r = D / h
    assert b.north == pytest.approx(PI2_6 / h ** 2, rel=1e-14)
    assert b.south == pytest.approx(1 / D ** 2 + float(mpmath.psi(1, r)) / h ** 2, rel=1e-13)
    west = 2 / D ** 2 + (float(mpmath.digamma(r)) + 1 / r + EG) / (h * D)
    assert b.west == pytest.approx(west, rel=1e-13)
    assert b.east == b.west


def _series_with_tail(f, start, tail_integral, N=200_000):
    """sum_{j>=start} f(j): direct to N, then integral from N+1 plus half the first omitted term."""
    j = np.arange(start, N + 1, dtype=float)
    a = N + 1.0
    return math.fsum(f(j).tolist()) + tail_integral(a) + 0.5 * f(np.array([a]))[0]


@settings(max_examples=40, deadline=None)
@given(st.floats(1.5, 200), st.floats(10, 200), st.floats(30, 150))
def test_derived_series_matches_direct_summation(h, D, alpha):
    omc = 1 - math.cos(math.radians(alpha))
    b = proposition1_bound(h, IntersectionGeometry(D, alpha), BoundMode.DERIVED)
    k = D * omc
    cross = _series_with_tail(lambda j: 1 / ((j * h) ** 2 + j * h * k), 1,
                              lambda a: math.log1p(k / (h * a)) / (h * k))
    south = _series_with_tail(lambda j: 1 / (D + j * h) ** 2, 0, lambda a: 1 / (h * (D + h * a)))
    assert b.west == pytest.approx(2 / (D * D * omc) + cross, rel=1e-9)
    assert b.south == pytest.approx(1 / D ** 2 + south, rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.floats(1.5, 200), st.floats(10, 200), st.floats(30, 150))
def test_bound_contains_north_term(h, D, alpha):
    geom = IntersectionGeometry(D, alpha)
    assert proposition1_bound(h, geom, BoundMode.DERIVED).total >= PI2_6 / h ** 2
    assert orthogonal_bound(h, D, BoundMode.PRINTED) >= PI2_6 / h ** 2


def test_derived_dominates_finite_sums_reference_point():
    geom = IntersectionGeometry(40, 90)
    fin = per_arm_finite_sums(50, geom, {a: 100_000 for a in ARMS}).total
    assert proposition1_bound(50, geom, BoundMode.DERIVED).total >= fin


def test_convergence_within_tail_bound():
    geom = IntersectionGeometry(60, 75)
    h = 15.0
    small = per_arm_finite_sums(h, geom, {a: 1_000 for a in ARMS}).total
    large = per_arm_finite_sums(h, geom, {a: 100_000 for a in ARMS}).total
    assert 0 <= large - small <= tail_bound(1_000, h)


def test_orthogonal_printed_direct_evaluation():
    h, D = 30.0, 60.0
    r = D / h
    with mpmath.workdps(30):
        third = (2 / (mpmath.mpf(D) ** 3 * h) * (mpmath.mpf("0.5772") + h / D + mpmath.digamma(r))) ** 2
        oracle = 3 / mpmath.mpf(D) ** 2 + (mpmath.pi ** 2 / 6 + mpmath.psi(1, r)) / h ** 2 + third
    assert orthogonal_bound(h, D, BoundMode.PRINTED) == pytest.approx(float(oracle), rel=1e-13)


def test_orthogonal_derived_is_general_at_ninety():
    assert orthogonal_bound(30, 60, BoundMode.DERIVED) == \
        proposition1_bound(30, IntersectionGeometry(60, 90), BoundMode.DERIVED).total


def test_printed_general_close_to_orthogonal_printed():
    a = proposition1_bound(30, IntersectionGeometry(60, 90), BoundMode.PRINTED).total
    assert a == pytest.approx(orthogonal_bound(30, 60, BoundMode.PRINTED), rel=1e-12)


def test_bound_rejects_degenerate_angle():
    with pytest.raises(DegenerateGeometryError):
        from v2vint.interference import bound_terms_array
        bound_terms_array(30.0, 60.0, 0.0, BoundMode.DERIVED)


def test_fitted_orthogonal_unit_ratio():
    h = 40.0
    # at D/h = 1 the fitted trigamma term is exactly 1.3003 / h**2
    val = orthogonal_bound_fitted(h, h)
    rest = 3 / h ** 2 + PI2_6 / h ** 2 + 2 / h ** 4 * (0.2658 + 1) ** 2
    assert val - rest == pytest.approx(1.3003 / h ** 2, rel=1e-10)


@pytest.mark.parametrize("h,D", [(30, 60), (86, 125), (5, 28), (50, 40)])
def test_fitted_orthogonal_oracle(h, D):
    assert orthogonal_bound_fitted(h, D) == pytest.approx(fitted_orthogonal(h, D), rel=1e-13)


def test_fitted_seventy_five_oracle():
    assert nonorthogonal_bound_fitted(30, 60, 75) == pytest.approx(fitted_75(30, 60), rel=1e-13)


def test_fitted_sixty_zero_log():
    alpha = 60.0
    omc = 1 - math.cos(math.radians(alpha))
    h = 20.0
    D = h / omc  # D/h (1 - cos) = 1
    inner = 2 * h / D - 0.024
    expected = 5 / D ** 2 + (PI2_6 + 1.3003 * (D / h) ** -1.067) / h ** 2 + 8 / (D ** 3 * h) * inner ** 2
    assert nonorthogonal_bound_fitted(h, D, alpha) == pytest.approx(expected, rel=1e-12)


def test_unsupported_angle_lists_supported():
    with pytest.raises(UnsupportedAngleError, match="60, 65, 70, 75, 78, 80, 85, 88, 90"):
        nonorthogonal_bound_fitted(30, 60, 59)


def test_coefficient_table_angles():
    assert SUPPORTED_ALPHAS == (60, 65, 70, 75, 78, 80, 85, 88, 90)
    for c in BOUND_COEFFICIENTS.values():
        assert c.trig_power_coef == 1.3003 and c.trig_power_exp == -1.067


def test_fit_range_warning():
    with pytest.warns(OutOfFitRangeWarning):
        orthogonal_bound_fitted(1.0, 125.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        orthogonal_bound_fitted(30, 60)


def test_bound_function_families():
    for name in ("printed", "derived", "fitted"):
        f = bound_function(name)
        out = f(30.0, np.array([40.0, 60.0]), 75.0)
        assert out.shape == (2,)
    with pytest.raises(ParameterError):
        bound_function("nope")


def test_multilane_single_lane_unchanged():
    assert multilane_factor([0.0], 0) == 1.0
    assert multilane_interference(0.004, [0.3], 0) == 0.004


def test_multilane_equal_angles():
    base = proposition1_bound(30, IntersectionGeometry(60), BoundMode.DERIVED)
    assert multilane_interference(base, [0.2] * 4, 2) == 4 * base.total
    assert multilane_factor([0.2] * 4, 1) == 4.0


def test_multilane_from_lane_angles():
    geom = IntersectionGeometry(40, lanes_per_arm=4, lane_width_ft=12)
    th = lane_horizontal_angles(geom, 40)
    expected = 1 + sum(((2 - t ** 2) / 2) ** 2 for i, t in enumerate(th) if i != 2)
    assert multilane_factor(th, 2) == pytest.approx(expected, rel=1e-15)
    literal = 1 + sum((1 - t ** 2) ** 2 for i, t in enumerate(th) if i != 2)
    assert multilane_factor(th, 2, unit_numerators=True) == pytest.approx(literal, rel=1e-15)


def test_multilane_errors():
    with pytest.raises(ParameterError):
        multilane_factor([], 0)
    with pytest.raises(ParameterError):
        multilane_factor([0.1], 3)
    with pytest.raises(DomainError):
        multilane_factor([2.0, 0.0], 1)


@settings(max_examples=100, deadline=None)
@given(st.floats(10, 200), st.floats(1.5, 100), st.floats(30, 150))
def test_coordinate_total_decreases_with_spacing(D, h, alpha):
    geom = IntersectionGeometry(D, alpha)
    a = exact_interference(uniform_scenario(geom, h, 30), DistanceModel.COORDINATE).total
    b = exact_interference(uniform_scenario(geom, h * 1.1, 30), DistanceModel.COORDINATE).total
    assert b < a


def test_coordinate_total_nonincreasing_in_alpha():
    vals = [exact_interference(uniform_scenario(IntersectionGeometry(40, a), 30, 50),
                               DistanceModel.COORDINATE).total for a in range(60, 121, 5)]
    assert all(b <= a for a, b in zip(vals, vals[1:]))
