import csv
import json
import math

import pytest

from oracles import brute_coordinate
from v2vint.errors import DomainError, OutOfFitRangeWarning, ParameterError, SingularityError, UnsupportedAngleError
from v2vint import experiments as ex
from v2vint.experiments import (DEFAULT_H_VALUES, PUBLISHED_FIT_COEFFICIENTS, SWEEP_HEADER, SweepSpec, Swept,
                                default_ratio_grid, ground_truth_experiment, mape,
                                receiver_offset_study, refit_approximations, run_sweep)
from v2vint.geometry import Arm, IntersectionGeometry
from v2vint.interference import DistanceModel, Mode, exact_interference
from v2vint.traffic import PlacementScenario, uniform_placement, uniform_scenario


def test_h_sweep_row_count():
    spec = SweepSpec(Swept.H, DEFAULT_H_VALUES, modes=(Mode.BOUND_DERIVED, Mode.BOUND_FITTED))
    # h above 120 puts D/h = 40/h below the fitted range
    with pytest.warns(OutOfFitRangeWarning):
        rows = run_sweep(spec)
    assert len(DEFAULT_H_VALUES) == 33
    assert len(rows) == 66
    assert sum(r.mode is Mode.BOUND_FITTED for r in rows) == 33


def test_sweep_writes_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    spec = SweepSpec(Swept.D, (30, 60, 90), modes=(Mode.EXACT,), output_path=str(out), vehicles_per_arm=50)
    rows = run_sweep(spec)
    parsed = list(csv.reader(out.open()))
    assert tuple(parsed[0]) == SWEEP_HEADER
    assert len(parsed) == 4
    assert float(parsed[1][3]) == rows[0].lambda_ft_neg2


def test_sweep_validation():
    with pytest.raises(UnsupportedAngleError):
        SweepSpec(Swept.ALPHA, (59, 60), modes=(Mode.BOUND_FITTED,))
    SweepSpec(Swept.ALPHA, (59, 60), modes=(Mode.BOUND_DERIVED,))
    with pytest.raises(ParameterError):
        SweepSpec(Swept.H, (20, 10))
    with pytest.raises(ParameterError):
        SweepSpec(Swept.H, ())


def test_mape_examples():
    t = [1.0, 2.0, 4.0]
    assert mape(t, t).mape_percent == 0
    assert mape(t, [1.1 * v for v in t]).mape_percent == pytest.approx(10.0, rel=1e-12)
    with pytest.raises(DomainError):
        mape([0.0, 1.0], [1.0, 1.0])
    with pytest.raises(ParameterError):
        mape([1.0], [1.0, 2.0])


def test_ground_truth_deterministic():
    a = ground_truth_experiment(ex.Testbed.ORTHOGONAL, 40, seed=5)
    b = ground_truth_experiment(ex.Testbed.ORTHOGONAL, 40, seed=5)
    assert a == b
    assert a != ground_truth_experiment(ex.Testbed.ORTHOGONAL, 40, seed=6)
    assert a.timestep_count == 40


def test_ground_truth_nonorthogonal_runs():
    rep = ground_truth_experiment(ex.Testbed.NONORTHOGONAL, 20, seed=1)
    assert rep.mape_percent > 0 and math.isfinite(rep.mape_percent)


def test_offset_zero_equals_base():
    sc = uniform_scenario(IntersectionGeometry(40, 90), 40, 20)
    rows = receiver_offset_study(sc, [0.0, 50.0, 100.0])
    assert rows[0].lambda_ft_neg2 == exact_interference(sc, DistanceModel.COORDINATE).total


def test_offset_all_arms_against_oracle():
    # spacing 40 keeps the displaced receiver off the other queued vehicles
    sc = uniform_scenario(IntersectionGeometry(40, 90), 40, 20)
    pos = {a.value: list(p.positions_ft) for a, p in sc.arms.items()}
    rows = receiver_offset_study(sc, [0.0, 50.0, 100.0])
    for r in rows:
        ref = math.fsum(brute_coordinate(pos, 40, 90, receiver_offset=r.offset_ft).values())
        assert r.lambda_ft_neg2 == pytest.approx(ref, rel=1e-12)
    assert rows[0].non_increase_ok
    flags = [r.lambda_ft_neg2 <= p.lambda_ft_neg2 for p, r in zip(rows, rows[1:])]
    assert [r.non_increase_ok for r in rows[1:]] == flags


def test_offset_onto_queued_vehicle_is_singular():
    sc = uniform_scenario(IntersectionGeometry(40, 90), 50, 20)
    with pytest.raises(SingularityError):
        receiver_offset_study(sc, [0.0, 50.0])


def test_offset_receiver_arm_only():
    sc = PlacementScenario(IntersectionGeometry(40), {Arm.N: uniform_placement(50, 20)}, 50)
    rows = receiver_offset_study(sc, [0.0, 25.0, 75.0])
    pos = {"N": list(sc.arms[Arm.N].positions_ft)}
    for r in rows:
        assert r.lambda_ft_neg2 == pytest.approx(math.fsum(brute_coordinate(pos, 40, 90, receiver_offset=r.offset_ft).values()))
    assert rows[1].lambda_ft_neg2 > rows[0].lambda_ft_neg2


def test_offset_errors():
    sc = uniform_scenario(IntersectionGeometry(40), 50, 5)
    with pytest.raises(ParameterError):
        receiver_offset_study(sc, [0.0, 5000.0])
    with pytest.raises(ParameterError):
        receiver_offset_study(sc, [10.0, 5.0])


def test_refit_report():
    rep = refit_approximations()
    assert rep.grid_points == 200
    assert rep.power_r2 >= 0.95 and rep.log_r2 >= 0.95
    assert rep.published == PUBLISHED_FIT_COEFFICIENTS
    assert rep.gaps["power_a"] == pytest.approx(rep.power_a - 1.3003)
    assert len(rep.per_alpha) == 8
    json.loads(rep.to_json())


def test_refit_degenerate_grid():
    with pytest.raises(ParameterError):
        refit_approximations([1.0] * 100)
    with pytest.raises(ParameterError):
        refit_approximations([1.0, 2.0])


def test_ratio_grid_endpoints():
    g = default_ratio_grid()
    assert g[0] == pytest.approx(0.33) and g[-1] == pytest.approx(83.33)
    assert len(g) == 200
