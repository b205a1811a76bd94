"""Synthetic observers with planted thresholds, used as ground truth for the pipeline.

A simulated participant in VR widens the depicted aperture until its
*perceived* width matches what they judge passable, so recorded VR widths are
the inverse VAC transform of the intended width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .affordance import AdjustmentSet, Modality, Task, perceptual_threshold
from .errors import DomainError
from .geometry import ObserverFrame
from .psychometrics import BinaryTrial, psychometric_curve
from .vac import VacParams, vac_adjust_threshold, vac_inverse_width

PROTOCOL_WIDTHS = tuple(float(w) for w in range(20, 61, 5))
# Ratio of the reported VR and UR group-mean action thresholds.
VR_ACTION_INFLATION = 35.29 / 28.12


@dataclass(frozen=True)
class SyntheticObserver:
    body_width: float
    critical_ratio: float
    response_slope: float = 1.0
    adjustment_noise_sd: float = 0.0
    safety_margin: float = 1.0

    def __post_init__(self):
        for name in ("body_width", "critical_ratio", "response_slope", "safety_margin"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.adjustment_noise_sd < 0:
            raise DomainError("adjustment_noise_sd must be non-negative")

    @property
    def latent_action_threshold(self) -> float:
        return self.critical_ratio * self.body_width


@dataclass(frozen=True)
class SimConfig:
    """Protocol and environment for one simulated session.

    ``widths`` are the distinct aperture widths (cm); each is presented
    ``passes`` times, alternating ascending and descending sweeps.
    """

    seed: int = 0
    widths: tuple[float, ...] = PROTOCOL_WIDTHS
    passes: int = 2
    n_adjustments: int = 10
    modality: Modality = Modality.UR
    vac: VacParams = field(default_factory=VacParams)
    observer_frame: ObserverFrame = field(default_factory=ObserverFrame)
    viewing_distance: float = 2.5
    vr_action_inflation: float = VR_ACTION_INFLATION

    def __post_init__(self):
        object.__setattr__(self, "modality", Modality(self.modality))
        if self.passes < 1 or self.n_adjustments < 1:
            raise DomainError("passes and n_adjustments must be at least 1")
        if not self.vr_action_inflation > 0:
            raise DomainError("vr_action_inflation must be positive")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def presentation_order(self) -> list[float]:
        ascending = sorted(self.widths)
        order = []
        for i in range(self.passes):
            order.extend(ascending if i % 2 == 0 else ascending[::-1])
        return order


def effective_action_threshold(observer: SyntheticObserver, config: SimConfig) -> float:
    """Latent action threshold in the configured modality."""
    threshold = observer.latent_action_threshold
    if config.modality is Modality.VR:
        threshold *= config.vr_action_inflation
    return threshold


def simulate_action_trials(
    observer: SyntheticObserver, config: SimConfig, rng: np.random.Generator | None = None
) -> list[BinaryTrial]:
    """Draw pass/fail outcomes from a logistic around the latent threshold.

    An infinite ``response_slope`` gives deterministic step data.
    """
    rng = config.rng() if rng is None else rng
    threshold = effective_action_threshold(observer, config)
    widths = np.array(config.presentation_order())
    if math.isinf(observer.response_slope):
        passed = widths >= threshold
    else:
        passed = rng.random(widths.size) < psychometric_curve(widths, threshold, observer.response_slope)
    return [BinaryTrial(float(w), bool(p), i) for i, (w, p) in enumerate(zip(widths, passed))]


def intended_widths(
    observer: SyntheticObserver, config: SimConfig, rng: np.random.Generator | None = None
) -> np.ndarray:
    """Perceived widths (cm) the observer aims for on each adjustment trial."""
    rng = config.rng() if rng is None else rng
    target = observer.safety_margin * effective_action_threshold(observer, config)
    widths = np.full(config.n_adjustments, target)
    if observer.adjustment_noise_sd > 0:
        widths += rng.normal(0.0, observer.adjustment_noise_sd, config.n_adjustments)
    return widths


def simulate_adjustments(
    observer: SyntheticObserver,
    config: SimConfig,
    task: Task | None = None,
    participant_id="sim",
    rng: np.random.Generator | None = None,
) -> AdjustmentSet:
    """Recorded adjustment widths (cm) for one perception task."""
    if task is None:
        task = Task.VR_PRE if config.modality is Modality.VR else Task.UR_PRE
    task = Task(task)
    if task.modality is not config.modality:
        raise DomainError(f"task {task.value} does not belong to modality {config.modality.value}")
    intended = intended_widths(observer, config, rng)
    if config.modality is Modality.VR:
        recorded = [
            vac_inverse_width(w, config.viewing_distance, config.observer_frame, config.vac) for w in intended
        ]
    else:
        recorded = list(intended)
    return AdjustmentSet(participant_id, task, tuple(recorded), body_width=observer.body_width)


@dataclass(frozen=True)
class RoundTripReport:
    intended: tuple[float, ...]
    recorded: tuple[float, ...]
    recovered: tuple[float, ...]
    max_abs_error: float
    mean_error: float


def round_trip_check(observer: SyntheticObserver, config: SimConfig) -> RoundTripReport:
    """Simulate VR adjustments, undo them with the forward VAC map, compare to intent."""
    if config.modality is not Modality.VR:
        raise DomainError("round_trip_check needs a VR configuration")
    intended = intended_widths(observer, config)
    recorded = simulate_adjustments(observer, config).widths
    recovered = np.array(
        [vac_adjust_threshold(w, config.viewing_distance, config.observer_frame, config.vac) for w in recorded]
    )
    err = recovered - intended
    return RoundTripReport(
        tuple(float(v) for v in intended),
        tuple(recorded),
        tuple(float(v) for v in recovered),
        float(np.max(np.abs(err))),
        float(np.mean(err)),
    )


DEFAULT_SAFETY_MARGINS = {
    Task.UR_PRE: 1.11,
    Task.VR_PRE: 1.15,
    Task.VR_POST: 1.07,
    Task.UR_POST: 1.20,
}


@dataclass
class SimulatedCohort:
    action_trials: dict = field(default_factory=dict)  # (pid, Modality) -> list[BinaryTrial]
    adjustments: list = field(default_factory=list)  # list[AdjustmentSet]
    observers: dict = field(default_factory=dict)  # pid -> SyntheticObserver


def simulate_cohort(
    n_participants: int,
    seed: int = 0,
    safety_margins: dict | None = None,
    body_width_mean: float = 35.0,
    body_width_sd: float = 4.0,
    critical_ratio: float = 0.8,
    response_slope: float = 1.0,
    adjustment_noise_sd: float = 1.5,
    base_config: SimConfig | None = None,
) -> SimulatedCohort:
    """A full UR/VR session for ``n_participants`` observers from one seed.

    Each participant gets an independent generator spawned from ``seed``.
    """
    margins = {Task(k): v for k, v in (safety_margins or DEFAULT_SAFETY_MARGINS).items()}
    base = base_config or SimConfig()
    seeds = np.random.SeedSequence(seed).spawn(n_participants)
    cohort = SimulatedCohort()
    width_digits = max(3, len(str(n_participants)))
    for i, child in enumerate(seeds):
        rng = np.random.default_rng(child)
        pid = f"P{i + 1:0{width_digits}d}"
        body = max(10.0, rng.normal(body_width_mean, body_width_sd))
        observer = SyntheticObserver(body, critical_ratio, response_slope, adjustment_noise_sd)
        cohort.observers[pid] = observer
        for modality in Modality:
            cfg = replace(base, modality=modality)
            cohort.action_trials[(pid, modality)] = simulate_action_trials(observer, cfg, rng)
        for task, margin in margins.items():
            cfg = replace(base, modality=task.modality)
            cohort.adjustments.append(
                simulate_adjustments(replace(observer, safety_margin=margin), cfg, task, pid, rng)
            )
    return cohort


def recovered_ratio(adjustments: AdjustmentSet, action_threshold: float) -> float:
    return perceptual_threshold(adjustments) / action_threshold
