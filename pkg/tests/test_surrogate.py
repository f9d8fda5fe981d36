import math
from dataclasses import replace

import numpy as np
import pytest

from gearevo.evolution import EvolutionConfig, evolve
from gearevo.geometry import Placement, place_sequence
from gearevo.surrogate import (InfeasibleMechanismError, RigModel, ScoreImportError,
                               achievable_ratios, attach_scores, calibration_sweep,
                               check_calibration, distance_for_ratio, distance_score,
                               import_scores, is_unimodal, read_measurements)

L, C = Placement.LINEAR, Placement.COAXIAL


@pytest.fixture(scope="module")
def run():
    return evolve(EvolutionConfig(encoding="rnn", pop_size=30, generations=10, seed=4))[0]


def test_rig_validation():
    with pytest.raises(ValueError):
        RigModel(friction_loss_per_mesh=1.0)
    with pytest.raises(ValueError):
        RigModel(spool_radius=0)


def test_hand_computed_distance():
    rig = RigModel()
    # ratio 1, one mesh: torque 0.92 >= 0.2, rope = 2*pi*25 mm
    expected = 2 * math.pi * 25 / 25.4
    assert distance_for_ratio(1.0, 1, rig) == pytest.approx(expected, rel=1e-15)
    m = place_sequence([(3, L), (3, L)])
    assert distance_score(m, rig) == pytest.approx(expected, rel=1e-15)


def test_stall_threshold():
    rig = RigModel()
    s = rig.stall_ratio(2)
    assert s == pytest.approx(0.92 ** 2 / 0.2)
    assert distance_for_ratio(s * 0.999, 2, rig) > 0
    assert distance_for_ratio(s * 1.001, 2, rig) == 0


def test_monotone_stall():
    rig = RigModel()
    for m in range(6):
        ratios, dist = calibration_sweep(rig, m, points=500)
        stalled = np.flatnonzero(dist == 0)
        assert stalled.size and np.all(np.diff(stalled) == 1) and stalled[-1] == len(dist) - 1


def test_calibration_verdicts():
    for m, v in check_calibration().items():
        assert v["unimodal"] and v["interior_peak"] and v["stalls_at_max_ratio"], m
        assert v["in_range"]


def test_spec_default_constants_stall_everywhere():
    # the uncalibrated constants stall even at unit ratio, hence the recalibration
    old = RigModel(spool_radius=10.0, required_tension=0.18)
    assert distance_for_ratio(1.0, 1, old) == 0.0


def test_unimodal_helper():
    assert is_unimodal([0, 1, 2, 2, 1, 0, 0])
    assert not is_unimodal([0, 2, 1, 2])


def test_scores_in_range_over_catalog_trains():
    rig = RigModel()
    for m in range(4):
        for r in achievable_ratios([5, 10, 15, 20, 25, 30], m):
            d = distance_for_ratio(r, m, rig)
            assert 0 <= d <= 35


def test_clamped_to_track():
    rig = RigModel(required_tension=1e-6)
    assert distance_for_ratio(9.0, 0, rig) == 35.0


def test_infeasible_refused():
    with pytest.raises(InfeasibleMechanismError):
        distance_score(place_sequence([(6, L)] * 6))


def test_deterministic():
    m = place_sequence([(6, L), (2, L), (6, C), (2, L)])
    assert distance_score(m) == distance_score(m)


def test_attach_scores_annotates_every_entry(run):
    scored = attach_scores(run)
    assert len(scored) == len(run)
    for before, after in zip(run, scored):
        assert after.score_source in ("surrogate", "unscored")
        assert (after.distance_in is not None) == before.mechanism.feasibility.feasible
        assert replace(after, distance_in=None, trials_in=None, score_source=None) == before


def test_scoring_does_not_touch_evolution(run):
    attach_scores(run)
    again = evolve(EvolutionConfig(encoding="rnn", pop_size=30, generations=10, seed=4))[0]
    assert [e.genome for e in again] == [e.genome for e in run]


def test_import_overrides(run):
    scored = attach_scores(run)
    rows = read_measurements("generation,trial1_in,trial2_in,trial3_in\n0,10,12,14\n3,1,2,3\n")
    assert rows == [(0, (10.0, 12.0, 14.0)), (3, (1.0, 2.0, 3.0))]
    imported = import_scores(scored, rows)
    assert imported[0].distance_in == 12.0 and imported[0].trials_in == (10.0, 12.0, 14.0)
    assert imported[0].score_source == "measured"
    assert imported[1] == scored[1]
    again = import_scores(imported, [(0, (5.0, 5.0, 5.0))])
    assert again[0].distance_in == 5.0


def test_import_unknown_generation(run):
    with pytest.raises(ScoreImportError, match=r"\[77, 99\]"):
        import_scores(run, [(99, (1.0,)), (0, (1.0,)), (77, (2.0,))])


def test_measurement_parse_errors():
    with pytest.raises(ScoreImportError):
        read_measurements("0,1,2\nx,1,2\n")
    with pytest.raises(ScoreImportError):
        read_measurements("0\n")
