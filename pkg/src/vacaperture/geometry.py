"""Ground-plane and binocular viewing geometry for an upright observer.

Coordinates live in the horizontal plane through the eyes: ``x`` is lateral
(positive to the right) and ``z`` is depth (positive away from the observer),
both in meters. Angles cross the public API in degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError

DEFAULT_IPD_M = 0.063
DEFAULT_EYE_HEIGHT_M = 1.7


@dataclass(frozen=True)
class PlanarPoint:
    x: float
    z: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.z)):
            raise DomainError(f"point components must be finite, got ({self.x}, {self.z})")

    def __sub__(self, other: PlanarPoint) -> PlanarPoint:
        return PlanarPoint(self.x - other.x, self.z - other.z)

    def norm(self) -> float:
        return math.hypot(self.x, self.z)

    def distance_to(self, other: PlanarPoint) -> float:
        return (self - other).norm()


@dataclass(frozen=True)
class ObserverFrame:
    """Where the observer's eyes are and how far apart.

    ``cyclopean_origin`` is the point midway between the eyes; perceived
    visual directions are rays from it.
    """

    ipd: float = DEFAULT_IPD_M
    eye_height: float = DEFAULT_EYE_HEIGHT_M
    cyclopean_origin: PlanarPoint = field(default_factory=lambda: PlanarPoint(0.0, 0.0))

    def __post_init__(self):
        if not self.ipd > 0:
            raise DomainError(f"ipd must be positive, got {self.ipd}")
        if not self.eye_height > 0:
            raise DomainError(f"eye_height must be positive, got {self.eye_height}")


@dataclass(frozen=True)
class ApertureScene:
    """Two vertical poles standing in a frontoparallel line at ``viewing_distance``."""

    left_pole: PlanarPoint
    right_pole: PlanarPoint
    viewing_distance: float

    def __post_init__(self):
        if not self.viewing_distance > 0:
            raise DomainError(f"viewing_distance must be positive, got {self.viewing_distance}")
        if not self.left_pole.x < self.right_pole.x:
            raise DomainError("left pole must lie to the left of the right pole")
        for pole in (self.left_pole, self.right_pole):
            if not math.isclose(pole.z, self.viewing_distance, rel_tol=1e-12, abs_tol=1e-12):
                raise DomainError(
                    f"pole depth {pole.z} differs from viewing distance {self.viewing_distance}"
                )

    @classmethod
    def symmetric(cls, width: float, viewing_distance: float, center_x: float = 0.0) -> ApertureScene:
        """Aperture of ``width`` meters centred on ``center_x``."""
        if not width > 0:
            raise DomainError(f"aperture width must be positive, got {width}")
        half = width / 2.0
        return cls(
            PlanarPoint(center_x - half, viewing_distance),
            PlanarPoint(center_x + half, viewing_distance),
            viewing_distance,
        )

    @property
    def width(self) -> float:
        return self.right_pole.x - self.left_pole.x


def _check_acute(angle: float, name: str) -> None:
    if not 0.0 < angle < 90.0:
        raise DomainError(f"{name} must lie in (0, 90) degrees, got {angle}")


def declination_angle(eye_height: float, distance: float) -> float:
    """Angle below the horizon to the base of an object ``distance`` away, in degrees."""
    if not (eye_height > 0 and distance > 0):
        raise DomainError("eye_height and distance must both be positive")
    return math.degrees(math.atan(eye_height / distance))


def visual_angle_of_width(width: float, distance: float) -> float:
    """Full visual angle (degrees) subtended by a frontoparallel extent centred on the line of sight."""
    if not distance > 0:
        raise DomainError(f"distance must be positive, got {distance}")
    if width < 0:
        raise DomainError(f"width must be non-negative, got {width}")
    return math.degrees(2.0 * math.atan((width / 2.0) / distance))


def width_from_eyeheight_scaling(eye_height: float, alpha: float, gamma: float) -> float:
    """Width implied by eye height, visual angle ``alpha`` and declination ``gamma``.

    Inverts the pair ``visual_angle_of_width`` / ``declination_angle``:
    ``W = H * 2 tan(alpha/2) / tan(gamma)``.
    """
    if not eye_height > 0:
        raise DomainError(f"eye_height must be positive, got {eye_height}")
    if not 0.0 <= alpha < 180.0:
        raise DomainError(f"alpha must lie in [0, 180) degrees, got {alpha}")
    _check_acute(gamma, "gamma")
    return eye_height * 2.0 * math.tan(math.radians(alpha) / 2.0) / math.tan(math.radians(gamma))


def perceived_width_ratio(gamma: float, gamma_perturbed: float) -> float:
    """Perceived-over-actual width when the declination angle changes from ``gamma``."""
    _check_acute(gamma, "gamma")
    _check_acute(gamma_perturbed, "gamma_perturbed")
    return math.tan(math.radians(gamma_perturbed)) / math.tan(math.radians(gamma))


def required_eyeheight_ratio(threshold_vr: float, threshold_ur: float) -> float:
    """Eye-height scale factor that alone would explain a VR threshold increase.

    With fixed distance, ``tan(gamma)`` is proportional to eye height, so the
    threshold ratio is read directly as perturbed over physical eye height.
    """
    if not (threshold_vr > 0 and threshold_ur > 0):
        raise DomainError("thresholds must be positive")
    return threshold_vr / threshold_ur


def binocular_parallax(point: PlanarPoint, observer: ObserverFrame) -> float:
    """Full vergence angle (degrees) needed to fixate ``point``."""
    distance = point.distance_to(observer.cyclopean_origin)
    if distance == 0.0:
        raise DomainError("point coincides with the cyclopean origin")
    return math.degrees(2.0 * math.atan((observer.ipd / 2.0) / distance))
