"""Maximum-likelihood passability curves for binary aperture trials.

The model is a four-parameter logistic in aperture width ``w``::

    p(pass | w) = guess + (1 - guess - lapse) / (1 + exp(-slope * (w - pse)))

``pse`` is the action threshold. Fitting runs a fixed grid of
``(pse, slope)`` starts, then bounded Nelder-Mead from the best few, so the
result is deterministic for identical inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import optimize
from scipy.special import expit

from .errors import DomainError, FitQualityError, InsufficientData, MonotonicityError, NoTransition

GUESS_MAX = 0.05
LAPSE_MAX = 0.06
SLOPE_MAX = 10.0  # per cm; caps the slope under perfect separation
SLOPE_MIN = 1e-3
_P_FLOOR = 1e-12


@dataclass(frozen=True)
class BinaryTrial:
    aperture_width: float
    passed: bool
    order_index: int = 0

    def __post_init__(self):
        if not self.aperture_width > 0:
            raise DomainError(f"aperture width must be positive, got {self.aperture_width}")


@dataclass(frozen=True)
class PsychometricFit:
    pse: float
    slope: float
    guess_rate: float
    lapse_rate: float
    log_likelihood: float
    converged: bool
    n_trials: int = 0


@dataclass(frozen=True)
class FitOptions:
    """Knobs for :func:`fit_psychometric`.

    ``guess_max``/``lapse_max`` may be set to 0 to fix the asymptotes.
    """

    n_pse_starts: int = 21
    slope_starts: tuple[float, ...] = (0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2, 6.4)
    start_guess: float = 0.01
    start_lapse: float = 0.01
    n_refine: int = 3
    guess_max: float = GUESS_MAX
    lapse_max: float = LAPSE_MAX
    slope_max: float = SLOPE_MAX
    xatol: float = 1e-7
    fatol: float = 1e-10
    maxiter: int = 5000

    def __post_init__(self):
        if not (0 <= self.guess_max <= GUESS_MAX and 0 <= self.lapse_max <= LAPSE_MAX):
            raise DomainError("guess/lapse bounds must lie within [0, 0.05] and [0, 0.06]")
        if not SLOPE_MIN < self.slope_max <= SLOPE_MAX:
            raise DomainError(f"slope_max must lie in ({SLOPE_MIN}, {SLOPE_MAX}]")


def psychometric_curve(width, pse, slope, guess_rate=0.0, lapse_rate=0.0):
    """Pass probability at ``width`` (scalar or array)."""
    core = expit(slope * (np.asarray(width, dtype=float) - pse))
    return guess_rate + (1.0 - guess_rate - lapse_rate) * core


def _aggregate(trials: Sequence[BinaryTrial]):
    widths = np.array([t.aperture_width for t in trials], dtype=float)
    passed = np.array([bool(t.passed) for t in trials], dtype=float)
    levels, inverse = np.unique(widths, return_inverse=True)
    n = np.bincount(inverse).astype(float)
    k = np.bincount(inverse, weights=passed)
    return widths, passed, levels, n, k


def _check_trials(trials: Sequence[BinaryTrial]):
    if len(trials) == 0:
        raise InsufficientData("no trials")
    widths, passed, levels, n, k = _aggregate(trials)
    if passed.all() or not passed.any():
        raise NoTransition("all trials share one outcome")
    if levels.size < 2:
        raise InsufficientData("need at least two distinct aperture widths")
    if widths[passed == 1].mean() <= widths[passed == 0].mean():
        raise MonotonicityError("passes are not concentrated at wider apertures")
    return levels, n, k


def binomial_log_likelihood(levels, n, k, pse, slope, guess_rate, lapse_rate) -> float:
    """Bernoulli log-likelihood of ``k`` passes out of ``n`` at each width level."""
    p = np.clip(psychometric_curve(levels, pse, slope, guess_rate, lapse_rate), _P_FLOOR, 1.0 - _P_FLOOR)
    return float(np.sum(k * np.log(p) + (n - k) * np.log1p(-p)))


def log_likelihood(trials: Sequence[BinaryTrial], pse, slope, guess_rate=0.0, lapse_rate=0.0) -> float:
    _, _, levels, n, k = _aggregate(trials)
    return binomial_log_likelihood(levels, n, k, pse, slope, guess_rate, lapse_rate)


def start_grid(trials: Sequence[BinaryTrial], options: FitOptions | None = None):
    """The fixed ``(pse, slope, guess, lapse)`` start points searched before refinement."""
    options = options or FitOptions()
    levels = np.unique([t.aperture_width for t in trials])
    guess = min(options.start_guess, options.guess_max)
    lapse = min(options.start_lapse, options.lapse_max)
    pses = np.linspace(levels[0], levels[-1], options.n_pse_starts)
    slopes = [s for s in options.slope_starts if s <= options.slope_max] or [options.slope_max]
    return [(float(p), float(s), guess, lapse) for p in pses for s in slopes]


def fit_psychometric(trials: Sequence[BinaryTrial], options: FitOptions | None = None) -> PsychometricFit:
    """Maximum-likelihood logistic fit with bounded guess and lapse rates.

    Raises:
        NoTransition: every trial passed, or every trial failed.
        InsufficientData: fewer than two distinct widths.
        MonotonicityError: passes cluster at narrower widths than fails.
    """
    options = options or FitOptions()
    trials = list(trials)
    levels, n, k = _check_trials(trials)

    # Work in widths centred on the stimulus range so the optimizer's initial
    # simplex does not depend on absolute width (keeps fits shift-equivariant).
    center = float(levels.mean())
    span = float(levels[-1] - levels[0])
    rel = levels - center
    bounds = [
        (rel[0] - span, rel[-1] + span),
        (np.log(SLOPE_MIN), np.log(options.slope_max)),
        (0.0, options.guess_max),
        (0.0, options.lapse_max),
    ]

    def nll(theta):
        pse_c, log_slope, guess, lapse = theta
        return -binomial_log_likelihood(rel, n, k, pse_c, np.exp(log_slope), guess, lapse)

    starts = []
    for pse, slope, guess, lapse in start_grid(trials, options):
        theta = np.array([pse - center, np.log(slope), guess, lapse])
        starts.append((nll(theta), theta))
    starts.sort(key=lambda item: item[0])

    best = None
    for _, theta0 in starts[: options.n_refine]:
        res = optimize.minimize(
            nll,
            theta0,
            method="Nelder-Mead",
            bounds=bounds,
            options={"xatol": options.xatol, "fatol": options.fatol, "maxiter": options.maxiter, "maxfev": options.maxiter * 2},
        )
        if best is None or res.fun < best.fun:
            best = res

    pse_c, log_slope, guess, lapse = best.x
    return PsychometricFit(
        pse=float(pse_c + center),
        slope=float(np.exp(log_slope)),
        guess_rate=float(guess),
        lapse_rate=float(lapse),
        log_likelihood=float(-best.fun),
        converged=bool(best.success),
        n_trials=len(trials),
    )


def predict_pass_probability(fit: PsychometricFit, width):
    return psychometric_curve(width, fit.pse, fit.slope, fit.guess_rate, fit.lapse_rate)


def action_threshold(fit: PsychometricFit) -> float:
    """Action threshold in cm: the PSE of a converged fit."""
    if not fit.converged:
        raise FitQualityError("psychometric fit did not converge")
    return fit.pse


def trials_from_arrays(widths: Iterable[float], passed: Iterable[bool]) -> list[BinaryTrial]:
    return [BinaryTrial(float(w), bool(p), i) for i, (w, p) in enumerate(zip(widths, passed))]
