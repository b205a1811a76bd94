import math
from dataclasses import replace

import numpy as np
import pytest

from vacaperture.affordance import Modality, Task, group_summary, perceptual_threshold
from vacaperture.errors import DomainError
from vacaperture.psychometrics import fit_psychometric
from vacaperture.simulate import (
    PROTOCOL_WIDTHS,
    SimConfig,
    SyntheticObserver,
    round_trip_check,
    simulate_action_trials,
    simulate_adjustments,
    simulate_cohort,
)
from vacaperture.vac import VacParams, vac_adjust_threshold

VR = SimConfig(modality=Modality.VR)


def test_observer_invariants():
    obs = SyntheticObserver(body_width=40.0, critical_ratio=0.85)
    assert obs.latent_action_threshold == pytest.approx(0.85 * 40.0, rel=1e-12)
    with pytest.raises(DomainError):
        SyntheticObserver(body_width=0.0, critical_ratio=1.0)
    with pytest.raises(DomainError):
        SyntheticObserver(body_width=30.0, critical_ratio=1.0, adjustment_noise_sd=-1)


def test_presentation_order():
    order = SimConfig().presentation_order()
    assert order == list(PROTOCOL_WIDTHS) + list(PROTOCOL_WIDTHS[::-1])


def test_step_data_from_infinite_slope():
    obs = SyntheticObserver(35.0, 1.0, response_slope=math.inf)
    trials = simulate_action_trials(obs, SimConfig())
    assert [t.passed for t in trials] == [t.aperture_width >= 35.0 for t in trials]
    assert [t.order_index for t in trials] == list(range(18))


def test_action_recovery():
    obs = SyntheticObserver(30.0, 1.0, response_slope=0.8)
    fit = fit_psychometric(simulate_action_trials(obs, SimConfig(seed=4, passes=200)))
    assert fit.pse == pytest.approx(30.0, abs=1.0)


def test_vr_inflates_action_threshold():
    obs = SyntheticObserver(28.12, 1.0, response_slope=math.inf)
    trials = simulate_action_trials(obs, VR)
    first_pass = min(t.aperture_width for t in trials if t.passed)
    assert first_pass == 40.0  # 28.12 * 35.29 / 28.12 = 35.29 -> first protocol width above is 40


def test_critical_ratio_invariance():
    cfg = SimConfig(seed=21, passes=200)
    ratios = []
    for body in (35.0, 50.0):
        obs = SyntheticObserver(body, 0.8, response_slope=1.0)
        ratios.append(fit_psychometric(simulate_action_trials(obs, cfg)).pse / body)
    assert ratios[0] == pytest.approx(ratios[1], rel=0.03)


def test_determinism():
    obs = SyntheticObserver(35.0, 1.0, response_slope=0.5, adjustment_noise_sd=2.0)
    assert simulate_action_trials(obs, SimConfig(seed=3)) == simulate_action_trials(obs, SimConfig(seed=3))
    assert simulate_adjustments(obs, VR) == simulate_adjustments(obs, VR)
    assert simulate_action_trials(obs, SimConfig(seed=3)) != simulate_action_trials(obs, SimConfig(seed=4))


def test_adjustments_zero_noise_ur():
    obs = SyntheticObserver(35.0, 0.9)
    adj = simulate_adjustments(obs, SimConfig())
    assert adj.task is Task.UR_PRE
    assert adj.widths == pytest.approx([31.5] * 10, rel=1e-12)


def test_adjustments_zero_noise_vr_inflated():
    obs = SyntheticObserver(30.0, 1.0)
    cfg = replace(VR, vr_action_inflation=1.0)
    adj = simulate_adjustments(obs, cfg)
    # recorded/intended ~ 1 / 0.8673 for ~35 cm apertures at 2.5 m
    assert adj.widths[0] / 30.0 == pytest.approx(1 / 0.867, rel=2e-3)
    assert adj.task is Task.VR_PRE
    with pytest.raises(DomainError):
        simulate_adjustments(obs, cfg, task=Task.UR_PRE)


def test_noisy_adjustments_within_two_se():
    obs = SyntheticObserver(35.0, 0.9, adjustment_noise_sd=2.0)
    cfg = SimConfig(seed=8, n_adjustments=40)
    adj = simulate_adjustments(obs, cfg)
    s = group_summary(adj.widths)
    assert abs(perceptual_threshold(adj) - 31.5) < 2 * s.standard_error


def test_round_trip_zero_noise():
    obs = SyntheticObserver(32.0, 1.0, safety_margin=1.2)
    assert round_trip_check(obs, VR).max_abs_error < 0.01


def test_round_trip_beta_zero():
    obs = SyntheticObserver(32.0, 1.0, adjustment_noise_sd=1.0)
    report = round_trip_check(obs, replace(VR, vac=VacParams(0.0)))
    assert report.recorded == pytest.approx(report.intended, abs=1e-3)
    assert report.max_abs_error < 0.01


def test_round_trip_noisy():
    obs = SyntheticObserver(32.0, 1.0, adjustment_noise_sd=3.0)
    report = round_trip_check(obs, replace(VR, seed=12, n_adjustments=30))
    assert abs(report.mean_error) < 0.1
    # the noise survives: recovered widths vary as much as intended ones
    assert np.std(report.recovered) == pytest.approx(np.std(report.intended), rel=1e-3)
    with pytest.raises(DomainError):
        round_trip_check(obs, SimConfig())


def test_end_to_end_ratio_recovery():
    obs = SyntheticObserver(32.0, 1.0, response_slope=2.0, safety_margin=1.25)
    cfg = SimConfig(seed=5, modality=Modality.VR, widths=tuple(float(w) for w in range(20, 61)), passes=100)
    action = fit_psychometric(simulate_action_trials(obs, cfg)).pse
    adj = simulate_adjustments(obs, cfg)
    raw = perceptual_threshold(adj) / action
    corrected = [vac_adjust_threshold(w, 2.5, cfg.observer_frame, cfg.vac) for w in adj.widths]
    adjusted = perceptual_threshold(corrected) / action
    assert adjusted == pytest.approx(1.25, rel=0.03)
    assert raw > 1.25 / 0.88


def test_cohort_shapes_and_determinism():
    cohort = simulate_cohort(3, seed=1)
    assert len(cohort.action_trials) == 6
    assert len(cohort.adjustments) == 12
    assert {a.task for a in cohort.adjustments} == set(Task)
    again = simulate_cohort(3, seed=1)
    assert again.adjustments == cohort.adjustments
    assert again.action_trials == cohort.action_trials
