"""Perceptual thresholds, affordance ratios and the statistics used to compare them."""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

import numpy as np
from scipy import stats

from .errors import DomainError, InputShapeError, InsufficientData
from .geometry import ObserverFrame
from .vac import VacParams, vac_adjust_threshold

DEFAULT_EQUIVALENCE_BOUND = 0.1


class Modality(str, enum.Enum):
    UR = "UR"
    VR = "VR"


class Task(str, enum.Enum):
    UR_PRE = "UR_PRE"
    VR_PRE = "VR_PRE"
    VR_POST = "VR_POST"
    UR_POST = "UR_POST"

    @property
    def modality(self) -> Modality:
        return Modality(self.value.split("_")[0])


@dataclass(frozen=True)
class AdjustmentSet:
    participant_id: Hashable
    task: Task
    widths: tuple[float, ...]
    body_width: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "task", Task(self.task))
        object.__setattr__(self, "widths", tuple(float(w) for w in self.widths))
        if any(not w > 0 for w in self.widths):
            raise DomainError("adjusted widths must be positive")


@dataclass(frozen=True)
class AffordanceRecord:
    """One participant's thresholds (cm) and ratios, keyed by perception task.

    Each perception task is paired with the action threshold of its own
    modality. ``ratios_adjusted`` equals ``ratios_raw`` until
    :func:`adjusted_record` has been applied.
    """

    participant_id: Hashable
    action_threshold_ur: float
    action_threshold_vr: float
    perceptual_thresholds: Mapping[Task, float]
    adjusted_perceptual_thresholds: Mapping[Task, float] = field(default_factory=dict)
    ratios_raw: Mapping[Task, float] = field(default_factory=dict)
    ratios_adjusted: Mapping[Task, float] = field(default_factory=dict)
    body_width: float | None = None

    def action_for(self, task: Task) -> float:
        return self.action_threshold_ur if Task(task).modality is Modality.UR else self.action_threshold_vr


def make_record(
    participant_id: Hashable,
    action_threshold_ur: float,
    action_threshold_vr: float,
    perceptual_thresholds: Mapping[Task | str, float],
    body_width: float | None = None,
) -> AffordanceRecord:
    perceptual = {Task(t): float(v) for t, v in perceptual_thresholds.items()}
    record = AffordanceRecord(
        participant_id,
        float(action_threshold_ur),
        float(action_threshold_vr),
        perceptual,
        body_width=body_width,
    )
    ratios = {t: affordance_ratio(v, record.action_for(t)) for t, v in perceptual.items()}
    return dataclasses.replace(
        record,
        adjusted_perceptual_thresholds=dict(perceptual),
        ratios_raw=ratios,
        ratios_adjusted=dict(ratios),
    )


@dataclass(frozen=True)
class GroupSummary:
    mean: float
    standard_error: float
    ci95_low: float
    ci95_high: float
    n: int


@dataclass(frozen=True)
class PairedDifference:
    mean_diff: float
    se: float
    t: float
    p: float
    df: int


@dataclass(frozen=True)
class TostResult:
    t_lower: float
    t_upper: float
    p_lower: float
    p_upper: float
    equivalent: bool
    effect_size_g: float
    bounds: tuple[float, float]


def perceptual_threshold(adjustments: AdjustmentSet | Sequence[float]) -> float:
    """Mean adjusted width in cm."""
    widths = adjustments.widths if isinstance(adjustments, AdjustmentSet) else tuple(adjustments)
    if len(widths) == 0:
        raise InsufficientData("no adjusted widths")
    return math.fsum(widths) / len(widths)


def affordance_ratio(perceptual: float, action: float) -> float:
    if not action > 0:
        raise DomainError(f"action threshold must be positive, got {action}")
    return perceptual / action


def adjusted_record(
    record: AffordanceRecord,
    observer: ObserverFrame,
    vac_params: VacParams,
    viewing_distance: float,
) -> AffordanceRecord:
    """Replace VR perceptual thresholds by their VAC-corrected perceived widths.

    UR tasks are carried through unchanged.
    """
    vr_tasks = [t for t in record.perceptual_thresholds if t.modality is Modality.VR]
    if not vr_tasks:
        raise InsufficientData(f"participant {record.participant_id!r} has no VR perceptual thresholds")
    adjusted = {}
    for task, value in record.perceptual_thresholds.items():
        if task.modality is Modality.VR:
            adjusted[task] = vac_adjust_threshold(value, viewing_distance, observer, vac_params)
        else:
            adjusted[task] = value
    ratios = {t: affordance_ratio(v, record.action_for(t)) for t, v in adjusted.items()}
    return dataclasses.replace(record, adjusted_perceptual_thresholds=adjusted, ratios_adjusted=ratios)


def adjust_group_means(
    perceptual_means: Mapping[Task | str, float],
    action_ur: float,
    action_vr: float,
    observer: ObserverFrame,
    vac_params: VacParams,
    viewing_distance: float,
) -> AffordanceRecord:
    """Apply the VAC correction to group-mean thresholds rather than per participant."""
    record = make_record("group_mean", action_ur, action_vr, perceptual_means)
    return adjusted_record(record, observer, vac_params, viewing_distance)


def group_summary(values: Sequence[float]) -> GroupSummary:
    """Mean, standard error and two-sided 95% t interval."""
    x = np.asarray(values, dtype=float)
    n = x.size
    if n < 2:
        raise InsufficientData("need at least two values for a standard error")
    mean = float(x.mean())
    se = float(x.std(ddof=1) / math.sqrt(n))
    half = float(stats.t.ppf(0.975, n - 1)) * se
    return GroupSummary(mean, se, mean - half, mean + half, n)


def _paired(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise InputShapeError(f"paired samples must be 1-D and equal length, got {a.shape} and {b.shape}")
    if a.size < 2:
        raise InsufficientData("need at least two pairs")
    d = a - b
    return d, float(d.mean()), float(d.std(ddof=1)), d.size


def _t_stat(numerator: float, se: float) -> float:
    if se > 0:
        return numerator / se
    if numerator == 0:
        return 0.0
    return math.copysign(math.inf, numerator)


def paired_difference(a: Sequence[float], b: Sequence[float]) -> PairedDifference:
    """Paired t statistics for ``a - b`` with a two-sided p value."""
    d, mean, sd, n = _paired(a, b)
    se = sd / math.sqrt(n)
    t = _t_stat(mean, se)
    p = float(2.0 * stats.t.sf(abs(t), n - 1))
    return PairedDifference(mean, se, t, p, n - 1)


def hedges_g_paired(a: Sequence[float], b: Sequence[float]) -> float:
    """Standardised mean of ``a - b`` with the small-sample correction."""
    d, mean, sd, n = _paired(a, b)
    df = n - 1
    correction = 1.0 - 3.0 / (4.0 * df - 1.0)
    if sd == 0:
        return 0.0 if mean == 0 else math.copysign(math.inf, mean)
    return correction * mean / sd


def tost_equivalence(
    a: Sequence[float],
    b: Sequence[float],
    bounds: float | tuple[float, float] = DEFAULT_EQUIVALENCE_BOUND,
    alpha: float = 0.05,
) -> TostResult:
    """Two one-sided paired t tests of ``a - b`` against ``(low, high)``.

    A scalar ``bounds`` means ``(-bounds, +bounds)``. Equivalence is declared
    when both one-sided p values fall below ``alpha``.
    """
    if np.isscalar(bounds):
        low, high = -float(bounds), float(bounds)
    else:
        low, high = (float(v) for v in bounds)
    if not (low < 0 < high):
        raise DomainError(f"equivalence bounds must straddle zero, got ({low}, {high})")
    d, mean, sd, n = _paired(a, b)
    df = n - 1
    se = sd / math.sqrt(n)
    t_lower = _t_stat(mean - low, se)
    t_upper = _t_stat(mean - high, se)
    p_lower = float(stats.t.sf(t_lower, df))
    p_upper = float(stats.t.cdf(t_upper, df))
    return TostResult(
        t_lower=t_lower,
        t_upper=t_upper,
        p_lower=p_lower,
        p_upper=p_upper,
        equivalent=bool(p_lower < alpha and p_upper < alpha),
        effect_size_g=hedges_g_paired(a, b),
        bounds=(low, high),
    )


def summarize_records(records: Sequence[AffordanceRecord], adjusted: bool = False) -> dict[Task, GroupSummary]:
    """Group summaries of per-participant ratios for every task all records share."""
    if not records:
        raise InsufficientData("no records")
    key = "ratios_adjusted" if adjusted else "ratios_raw"
    tasks = set.intersection(*(set(getattr(r, key)) for r in records))
    return {t: group_summary([getattr(r, key)[t] for r in records]) for t in Task if t in tasks}
