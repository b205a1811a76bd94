"""Depth compression from the vergence-accommodation conflict (VAC).

A head-mounted display pulls vergence inward by a constant offset ``beta``.
Because on-screen disparity is unchanged, the vergence angle specifying each
point grows by the same ``beta``; the point is then seen along its original
visual direction but at the shorter distance that the larger angle implies.

Two distance-recovery rules are supported:

``HALVED``
    ``l = (ipd/2) / tan(rho_hat/2)`` with ``rho_hat`` the full vergence angle.
    This is exact at ``beta = 0`` and is the default.
``LITERAL``
    ``l = (ipd/2) / tan(rho_hat)``. Kept for comparison only; it places an
    unperturbed point at roughly half its true distance.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import DomainError, SolverError
from .geometry import ApertureScene, ObserverFrame, PlanarPoint, binocular_parallax

DEFAULT_BETA_DEG = 0.22
INVERSE_XTOL_M = 1e-6


class VacMode(str, enum.Enum):
    HALVED = "HALVED"
    LITERAL = "LITERAL"


@dataclass(frozen=True)
class VacParams:
    beta: float = DEFAULT_BETA_DEG
    mode: VacMode = VacMode.HALVED

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise DomainError(f"beta must be a finite non-negative angle, got {self.beta}")
        # accept plain strings such as "halved"
        object.__setattr__(self, "mode", VacMode(str(getattr(self.mode, "value", self.mode)).upper()))


@dataclass(frozen=True)
class PerceivedAperture:
    left_pole_perceived: PlanarPoint
    right_pole_perceived: PlanarPoint
    width: float
    depth_distance: float
    compression_ratio: float


def perturb_parallax(rho: float, params: VacParams) -> float:
    """Add the vergence offset to a full vergence angle (degrees)."""
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    return rho + params.beta


def _perceived_distance(rho_hat_deg: float, ipd: float, mode: VacMode) -> float:
    rho_hat = math.radians(rho_hat_deg)
    angle = rho_hat / 2.0 if mode is VacMode.HALVED else rho_hat
    if not 0.0 < angle < math.pi / 2.0:
        raise DomainError(f"perturbed vergence angle {rho_hat_deg} deg is degenerate in {mode.value} mode")
    return (ipd / 2.0) / math.tan(angle)


def perceived_point(depicted: PlanarPoint, observer: ObserverFrame, params: VacParams) -> PlanarPoint:
    """Where ``depicted`` is seen once the vergence offset is applied.

    The result lies on the ray from the cyclopean eye through ``depicted``.
    """
    origin = observer.cyclopean_origin
    offset = depicted - origin
    distance = offset.norm()
    rho_hat = perturb_parallax(binocular_parallax(depicted, observer), params)
    seen = _perceived_distance(rho_hat, observer.ipd, params.mode)
    scale = seen / distance
    return PlanarPoint(origin.x + scale * offset.x, origin.z + scale * offset.z)


def perceived_aperture(scene: ApertureScene, observer: ObserverFrame, params: VacParams) -> PerceivedAperture:
    left = perceived_point(scene.left_pole, observer, params)
    right = perceived_point(scene.right_pole, observer, params)
    depth = (left.z + right.z) / 2.0
    return PerceivedAperture(
        left_pole_perceived=left,
        right_pole_perceived=right,
        width=left.distance_to(right),
        depth_distance=depth,
        compression_ratio=depth / scene.viewing_distance,
    )


def vac_adjust_threshold(
    measured_width: float, viewing_distance: float, observer: ObserverFrame, params: VacParams
) -> float:
    """Perceived width (cm) of a symmetric aperture measured at ``measured_width`` cm.

    ``viewing_distance`` is in meters.
    """
    if not measured_width > 0:
        raise DomainError(f"measured width must be positive, got {measured_width}")
    scene = ApertureScene.symmetric(measured_width / 100.0, viewing_distance)
    return perceived_aperture(scene, observer, params).width * 100.0


def vac_inverse_width(
    target_perceived_width: float, viewing_distance: float, observer: ObserverFrame, params: VacParams
) -> float:
    """Depicted width (cm) that is perceived as ``target_perceived_width`` cm.

    Solved by bisection on the depicted width, to ``INVERSE_XTOL_M`` meters.

    Raises:
        SolverError: if no sign change exists in [0.1, 10] times the target.
    """
    if not target_perceived_width > 0:
        raise DomainError(f"target width must be positive, got {target_perceived_width}")
    target_m = target_perceived_width / 100.0

    def residual(depicted_m):
        scene = ApertureScene.symmetric(depicted_m, viewing_distance)
        return perceived_aperture(scene, observer, params).width - target_m

    lo, hi = 0.1 * target_m, 10.0 * target_m
    try:
        f_lo, f_hi = residual(lo), residual(hi)
    except DomainError as exc:
        raise SolverError(f"cannot evaluate bracket [{lo}, {hi}] m: {exc}") from exc
    if f_lo == 0.0:
        return lo * 100.0
    if f_hi == 0.0:
        return hi * 100.0
    if f_lo * f_hi > 0:
        raise SolverError(
            f"no depicted width in [{lo * 100:.4g}, {hi * 100:.4g}] cm is perceived as "
            f"{target_perceived_width:.4g} cm"
        )
    root = optimize.bisect(residual, lo, hi, xtol=INVERSE_XTOL_M, rtol=4 * np.finfo(float).eps)
    return root * 100.0


def compression_ratio_at(viewing_distance: float, observer: ObserverFrame, params: VacParams) -> float:
    """Perceived over depicted distance for a point straight ahead."""
    if not viewing_distance > 0:
        raise DomainError(f"viewing_distance must be positive, got {viewing_distance}")
    origin = observer.cyclopean_origin
    depicted = PlanarPoint(origin.x, origin.z + viewing_distance)
    seen = perceived_point(depicted, observer, params)
    return seen.distance_to(origin) / viewing_distance


def lateral_compression_counterfactual(threshold_ur: float, threshold_vr: float) -> float:
    """Lateral scale factor that alone would turn the UR threshold into the VR one."""
    if not (threshold_ur > 0 and threshold_vr > 0):
        raise DomainError("thresholds must be positive")
    return threshold_ur / threshold_vr


def distance_curves(
    width: float,
    distance_range: tuple[float, float],
    step: float,
    observer: ObserverFrame,
    params: VacParams,
) -> list[tuple[float, float, float]]:
    """Sweep viewing distance for a fixed aperture.

    Args:
        width: depicted aperture width in cm.
        distance_range: inclusive (min, max) viewing distance in meters.
        step: distance increment in meters.

    Returns:
        ``(viewing_distance_m, perceived_distance_m, perceived_width_m)`` rows.
    """
    lo, hi = distance_range
    if not (lo > 0 and hi >= lo and step > 0):
        raise DomainError(f"invalid distance sweep {distance_range} with step {step}")
    n_steps = int(math.floor((hi - lo) / step + 1e-9))
    distances = lo + step * np.arange(n_steps + 1)
    rows = []
    for d in distances:
        d = float(d)
        seen = perceived_aperture(ApertureScene.symmetric(width / 100.0, d), observer, params)
        rows.append((d, seen.depth_distance, seen.width))
    return rows
