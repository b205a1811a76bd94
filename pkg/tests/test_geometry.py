import math

import pytest
from hypothesis import given, strategies as st

from vacaperture.errors import DomainError
from vacaperture.geometry import (
    ApertureScene,
    ObserverFrame,
    PlanarPoint,
    binocular_parallax,
    declination_angle,
    perceived_width_ratio,
    required_eyeheight_ratio,
    visual_angle_of_width,
    width_from_eyeheight_scaling,
)

positive = st.floats(min_value=0.05, max_value=50.0, allow_nan=False)


def test_declination_angle_examples():
    assert declination_angle(1.7, 1.7) == pytest.approx(45.0, abs=1e-12)
    assert declination_angle(1.7, 2.5) == pytest.approx(34.2157, abs=1e-4)
    far = [declination_angle(1.7, d) for d in (10.0, 100.0, 1e4, 1e6)]
    assert all(a > b for a, b in zip(far, far[1:]))
    assert far[-1] < 1e-3


@pytest.mark.parametrize("h, d", [(0, 1), (-1, 1), (1, 0), (1, -2)])
def test_declination_angle_domain(h, d):
    with pytest.raises(DomainError):
        declination_angle(h, d)


@pytest.mark.parametrize(
    "width, expected",
    [(0.0, 0.0), (0.30, 6.867260724901044), (0.4656, 10.64008220054785)],
)
def test_visual_angle_of_width(width, expected):
    # expected values: 2*atan(w/2/2.5) evaluated by hand
    assert visual_angle_of_width(width, 2.5) == pytest.approx(expected, abs=1e-9)


def test_visual_angle_rejects_bad_distance():
    with pytest.raises(DomainError):
        visual_angle_of_width(0.3, 0.0)


def test_width_from_eyeheight_scaling_examples():
    gamma = declination_angle(1.7, 2.5)
    assert width_from_eyeheight_scaling(1.7, visual_angle_of_width(0.30, 2.5), gamma) == pytest.approx(0.30, rel=1e-12)
    assert width_from_eyeheight_scaling(1.7, 0.0, gamma) == 0.0
    assert width_from_eyeheight_scaling(1.7, 6.867260724901044, 34.21570213243741) == pytest.approx(0.30, abs=1e-9)
    assert width_from_eyeheight_scaling(1.7, 10.64008220054785, 34.21570213243741) == pytest.approx(0.4656, abs=1e-9)


@pytest.mark.parametrize("gamma", [0.0, 90.0, -5.0, 120.0])
def test_width_from_eyeheight_scaling_gamma_domain(gamma):
    with pytest.raises(DomainError):
        width_from_eyeheight_scaling(1.7, 5.0, gamma)


@given(h=positive, d=positive, w=positive)
def test_eyeheight_round_trip(h, d, w):
    got = width_from_eyeheight_scaling(h, visual_angle_of_width(w, d), declination_angle(h, d))
    assert got == pytest.approx(w, rel=1e-9)


def test_perceived_width_ratio():
    assert perceived_width_ratio(34.2157, 34.2157) == 1.0
    # tan(44.77336 deg) / tan(34.21570 deg) computed directly
    assert perceived_width_ratio(34.21570213243741, 44.77336056281984) == pytest.approx(1.459, abs=1e-6)
    with pytest.raises(DomainError):
        perceived_width_ratio(0.0, 10.0)


@given(st.floats(0.5, 89.5), st.floats(0.5, 89.5))
def test_perceived_width_ratio_reciprocal_and_monotone(g1, g2):
    assert perceived_width_ratio(g1, g2) * perceived_width_ratio(g2, g1) == pytest.approx(1.0, rel=1e-12)
    if g2 > g1:
        assert perceived_width_ratio(g1, g2) > 1.0


def test_required_eyeheight_ratio():
    ratio = required_eyeheight_ratio(45.56, 31.23)
    assert ratio == pytest.approx(1.459, abs=5e-4)
    assert round(ratio, 2) == 1.46
    assert 1.7 * ratio == pytest.approx(2.48, abs=5e-3)
    assert required_eyeheight_ratio(31.23, 31.23) == 1.0
    with pytest.raises(DomainError):
        required_eyeheight_ratio(0.0, 31.23)


def test_binocular_parallax_examples():
    obs = ObserverFrame(ipd=0.063)
    assert binocular_parallax(PlanarPoint(0, 2.5), obs) == pytest.approx(1.4437772422724136, abs=1e-12)
    assert binocular_parallax(PlanarPoint(0.2328, 2.5), obs) == pytest.approx(1.4375585768020518, abs=1e-12)
    assert binocular_parallax(PlanarPoint(-0.1, 2.5), obs) == binocular_parallax(PlanarPoint(0.1, 2.5), obs)
    with pytest.raises(DomainError):
        binocular_parallax(PlanarPoint(0, 0), obs)


def test_parallax_uses_shifted_origin():
    obs = ObserverFrame(ipd=0.063, cyclopean_origin=PlanarPoint(1.0, -0.5))
    assert binocular_parallax(PlanarPoint(1.0, 2.0), obs) == pytest.approx(1.4437772422724136, abs=1e-12)


@given(st.floats(0.1, 20), st.floats(0.01, 5))
def test_monotone_in_distance(d, extra):
    obs = ObserverFrame()
    assert declination_angle(1.7, d + extra) < declination_angle(1.7, d)
    assert binocular_parallax(PlanarPoint(0, d + extra), obs) < binocular_parallax(PlanarPoint(0, d), obs)


def test_frame_and_scene_validation():
    with pytest.raises(DomainError):
        ObserverFrame(ipd=0)
    with pytest.raises(DomainError):
        ObserverFrame(eye_height=-1)
    with pytest.raises(DomainError):
        PlanarPoint(math.nan, 1.0)
    with pytest.raises(DomainError):
        ApertureScene(PlanarPoint(0.2, 2.5), PlanarPoint(-0.2, 2.5), 2.5)
    with pytest.raises(DomainError):
        ApertureScene(PlanarPoint(-0.2, 2.4), PlanarPoint(0.2, 2.5), 2.5)
    scene = ApertureScene.symmetric(0.4656, 2.5)
    assert scene.width == pytest.approx(0.4656)
    assert scene.left_pole == PlanarPoint(-0.2328, 2.5)
