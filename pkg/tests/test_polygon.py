import math

import numpy as np
import pytest

from shortening_solitons.errors import PolygonError
from shortening_solitons.models import AffineMap, Closed, OpenWindow, Polygon, SolitonSpec
from shortening_solitons.polygon import (
    apply_affine,
    center_of_mass,
    closed_from_curve,
    eigenpolygon,
    f2_energy,
    grad_f2,
    length,
    midpoint_map,
    sample_polygon,
    shorten_T,
    soliton_recursion,
    verify_soliton,
)
from shortening_solitons.soliton import affine_family

from conftest import random_closed_vertices

INTRO = SolitonSpec(B=np.diag([-4.0, -9.0]), d=[0.0, 0.0], v=[1.0, 1.0], w=[0.0, 0.0])
LISSAJOUS = SolitonSpec(B=np.diag([-16.0, -81.0]), d=[0.0, 0.0], v=[0.0, 1.0], w=[4.0, 0.0])
SQUARE = Polygon.closed([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])


def test_polygon_validation():
    with pytest.raises(PolygonError):
        Polygon.closed([[0.0, 0.0], [1.0, 0.0]])
    with pytest.raises(PolygonError):
        Polygon(np.zeros((3, 2)), OpenWindow(0, 3))
    with pytest.raises(PolygonError):
        Polygon(np.zeros((3, 2)), Closed(4))
    with pytest.raises(PolygonError):
        Polygon.open([[0.0, 0.0]])


def test_shorten_square_halves_it():
    result = shorten_T(SQUARE)
    assert result.is_closed and result.count == 4
    np.testing.assert_allclose(result.vertices, 0.5 * SQUARE.vertices, atol=1e-15)


def test_midpoint_square():
    result = midpoint_map(SQUARE)
    np.testing.assert_allclose(result.vertices[0], [0.5, 0.5])
    np.testing.assert_allclose(result.vertices[3], [0.5, -0.5])


def test_t_is_shifted_midpoint_squared_closed(rng):
    x = Polygon.closed(random_closed_vertices(rng, 9))
    twice = midpoint_map(midpoint_map(x)).vertices
    np.testing.assert_allclose(shorten_T(x).vertices, np.roll(twice, 1, axis=0), atol=1e-14)


def test_t_is_shifted_midpoint_squared_open(rng):
    x = Polygon.open(rng.normal(size=(8, 2)), j_min=-3)
    twice = midpoint_map(midpoint_map(x))
    shortened = shorten_T(x)
    assert twice.topology == OpenWindow(-3, 2)
    assert shortened.topology == OpenWindow(-2, 3)
    np.testing.assert_allclose(shortened.vertices, twice.vertices, atol=1e-14)


def test_linear_polygons_are_fixed():
    js = np.arange(-4, 6, dtype=float)
    x = Polygon.open(np.column_stack((2.0 * js + 1.0, -0.5 * js)), j_min=-4)
    for alpha in (0.25, 0.1, -0.7):
        shortened = shorten_T(x, alpha)
        np.testing.assert_allclose(shortened.vertices, x.vertices[1:-1], atol=1e-13)


def test_shorten_errors():
    with pytest.raises(PolygonError):
        shorten_T(SQUARE, alpha=0.0)
    with pytest.raises(PolygonError):
        shorten_T(Polygon.open(np.zeros((3, 2))))
    with pytest.raises(PolygonError):
        midpoint_map(Polygon.open(np.zeros((2, 2))))


def test_affine_equivariance(rng):
    for _ in range(20):
        x = Polygon.closed(random_closed_vertices(rng, 7))
        affine = AffineMap(rng.normal(size=(2, 2)), rng.normal(size=2))
        np.testing.assert_allclose(
            shorten_T(apply_affine(x, affine)).vertices,
            apply_affine(shorten_T(x), affine).vertices,
            atol=1e-12,
        )


def test_eigenpolygons():
    for N in range(3, 17):
        for k in range(N):
            z, mu = eigenpolygon(N, k)
            assert mu == pytest.approx(0.5 * (1 + math.cos(2 * math.pi * k / N)), abs=1e-15)
            assert np.max(np.abs(shorten_T(z).vertices - mu * z.vertices)) <= 1e-12


def test_eigenpolygon_errors():
    with pytest.raises(PolygonError):
        eigenpolygon(2, 0)
    with pytest.raises(ValueError):
        eigenpolygon(5, 5)


def test_length_decreases_and_center_is_kept(rng):
    for _ in range(100):
        N = int(rng.integers(3, 33))
        x = Polygon.closed(random_closed_vertices(rng, N))
        assert length(midpoint_map(x)) <= length(x) + 1e-12
        assert length(shorten_T(x)) <= length(x) + 1e-12
        assert np.max(np.abs(center_of_mass(shorten_T(x)) - center_of_mass(x))) <= 1e-12


def test_grad_f2_matches_finite_differences(rng):
    x = Polygon.closed(random_closed_vertices(rng, 6))
    gradient = grad_f2(x).vertices
    h = 1e-6
    for j in range(x.count):
        for i in range(2):
            bumped = x.vertices.copy()
            bumped[j, i] += h
            lowered = x.vertices.copy()
            lowered[j, i] -= h
            numeric = (f2_energy(x.with_vertices(bumped)) - f2_energy(x.with_vertices(lowered))) / (2 * h)
            assert numeric == pytest.approx(gradient[j, i], abs=1e-7)


def test_closed_measures_need_closed_polygon():
    x = Polygon.open(np.zeros((4, 2)))
    for measure in (length, f2_energy, grad_f2, center_of_mass):
        with pytest.raises(PolygonError):
            measure(x)


def test_sample_polygon_window():
    x = sample_polygon(INTRO, 0.0, 0.4, -2, 3)
    assert x.topology == OpenWindow(-2, 3)
    np.testing.assert_allclose(x.vertices[0], [math.cos(-1.6), math.cos(-2.4)], atol=1e-12)
    with pytest.raises(ValueError):
        sample_polygon(INTRO, 0.0, 0.0, 0, 3)
    with pytest.raises(PolygonError):
        sample_polygon(INTRO, 0.0, 0.1, 3, 3)


def test_intro_polygon_is_a_soliton():
    x = sample_polygon(INTRO, 0.0, 0.4, 0, 16)
    report = verify_soliton(x)
    assert report.max_residual <= 1e-10
    assert not report.rank_deficient
    np.testing.assert_allclose(report.fitted_map.A, affine_family(INTRO, 0.4).A, atol=1e-9)
    assert verify_soliton(x, affine_family(INTRO, 0.4)).max_residual <= 1e-12


def test_random_polygon_is_not_a_soliton(rng):
    x = Polygon.closed(random_closed_vertices(rng, 12))
    report = verify_soliton(x)
    assert report.max_residual > 1e-3
    assert report.argmax_index in set(x.indices.tolist())


def test_degenerate_polygon_is_flagged():
    js = np.arange(6, dtype=float)
    report = verify_soliton(Polygon.open(np.column_stack((js, 2.0 * js))))
    assert report.rank_deficient
    assert report.max_residual <= 1e-12


def test_verify_needs_enough_vertices():
    with pytest.raises(PolygonError):
        verify_soliton(Polygon.open(np.zeros((4, 2))))


@pytest.mark.parametrize("spec, s", [(INTRO, 0.4), (LISSAJOUS, 6.3 / 64)])
def test_recursion_matches_sampled_polygon(spec, s):
    sampled = sample_polygon(spec, 0.0, s, -20, 20)
    affine = affine_family(spec, s)
    rebuilt = soliton_recursion(affine, sampled.vertices[20], sampled.vertices[21], 0, -20, 20)
    assert rebuilt.topology == sampled.topology
    np.testing.assert_allclose(rebuilt.vertices, sampled.vertices, atol=1e-6)


def test_recursion_errors():
    with pytest.raises(PolygonError):
        soliton_recursion(AffineMap.identity(2), [0.0, 0.0], [1.0, 0.0], 5, 0, 5)


def test_closed_polygon_from_periodic_soliton():
    x = closed_from_curve(LISSAJOUS, 24)
    assert x.is_closed and x.count == 24
    report = verify_soliton(x, affine_family(LISSAJOUS, 2 * math.pi / 24))
    assert report.max_residual <= 1e-10
