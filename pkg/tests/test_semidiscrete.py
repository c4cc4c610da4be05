import numpy as np
import pytest

from shortening_solitons.errors import PolygonError
from shortening_solitons.models import Polygon, SolitonSpec
from shortening_solitons.polygon import center_of_mass, eigenpolygon, shorten_T
from shortening_solitons.semidiscrete import (
    euler_step,
    evolve_closed,
    f2_monotone_check,
    flow_residual,
    mode_rates,
    soliton_flow_map,
    soliton_flow_residual,
)
from shortening_solitons.soliton import sample_curve

from conftest import random_closed_vertices

INTRO = SolitonSpec(B=np.diag([-4.0, -9.0]), d=[0.0, 0.0], v=[1.0, 1.0], w=[0.0, 0.0])
LISSAJOUS = SolitonSpec(B=np.diag([-16.0, -81.0]), d=[0.0, 0.0], v=[0.0, 1.0], w=[4.0, 0.0])
SPIRAL = SolitonSpec(B=[[-15.91, -2.4], [2.4, -15.91]], d=[0.0, 0.0], v=[1.0, 0.0], w=[0.3, 4.0])
PARABOLA = SolitonSpec(B=np.zeros((2, 2)), d=[0.0, 2.0], v=[0.0, 0.0], w=[1.0, 0.0])


def _rk4_lattice(vertices, s, step, closed=True):
    """Direct classical RK4 for dx_j/ds = x_{j-1} - 2 x_j + x_{j+1}; open windows keep their ends fixed."""

    def rhs(x):
        if closed:
            return np.roll(x, 1, axis=0) - 2.0 * x + np.roll(x, -1, axis=0)
        out = np.zeros_like(x)
        out[1:-1] = x[:-2] - 2.0 * x[1:-1] + x[2:]
        return out

    x = np.array(vertices, dtype=float)
    steps = int(round(s / step))
    for _ in range(steps):
        k1 = rhs(x)
        k2 = rhs(x + 0.5 * step * k1)
        k3 = rhs(x + 0.5 * step * k2)
        k4 = rhs(x + step * k3)
        x = x + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return x


def test_zero_time_returns_input(rng):
    x = Polygon.closed(random_closed_vertices(rng, 10))
    assert np.array_equal(evolve_closed(x, 0.0).vertices, x.vertices)


def test_evolve_rejects_bad_input(rng):
    x = Polygon.closed(random_closed_vertices(rng, 5))
    with pytest.raises(ValueError):
        evolve_closed(x, -0.1)
    with pytest.raises(PolygonError):
        evolve_closed(Polygon.open(np.zeros((5, 2))), 1.0)


def test_eigenpolygon_decays_at_its_mode_rate():
    N, k, s = 12, 3, 0.7
    z, _ = eigenpolygon(N, k)
    rate = mode_rates(N)[k]
    np.testing.assert_allclose(evolve_closed(z, s).vertices, np.exp(rate * s) * z.vertices, atol=1e-13)


def test_eigenpolygon_matches_direct_integration():
    z, _ = eigenpolygon(12, 5)
    direct = _rk4_lattice(z.vertices, 0.5, 1e-4)
    np.testing.assert_allclose(evolve_closed(z, 0.5).vertices, direct, atol=1e-8)


@pytest.mark.parametrize("N", [3, 8, 17, 32])
def test_spectral_matches_direct_integration(rng, N):
    x = Polygon.closed(random_closed_vertices(rng, N))
    direct = _rk4_lattice(x.vertices, 0.3, 1e-4)
    np.testing.assert_allclose(evolve_closed(x, 0.3).vertices, direct, atol=1e-8)


@pytest.mark.parametrize("N", [3, 4, 7, 16, 31])
def test_evolution_solves_the_flow(rng, N):
    x = Polygon.closed(random_closed_vertices(rng, N))
    assert flow_residual(x, 0.5, 1e-5) <= 1e-6


def test_flow_residual_needs_s_at_least_h(rng):
    x = Polygon.closed(random_closed_vertices(rng, 6))
    with pytest.raises(ValueError):
        flow_residual(x, 0.0, 1e-5)


def test_semigroup(rng):
    x = Polygon.closed(random_closed_vertices(rng, 9))
    np.testing.assert_allclose(
        evolve_closed(evolve_closed(x, 0.3), 0.4).vertices, evolve_closed(x, 0.7).vertices, atol=1e-13
    )


@pytest.mark.parametrize("alpha", [0.25, 0.1, 0.6])
def test_euler_step_is_t_alpha(rng, alpha):
    x = Polygon.closed(random_closed_vertices(rng, 8))
    np.testing.assert_array_equal(euler_step(x, alpha).vertices, shorten_T(x, alpha).vertices)


def test_energy_decreases_and_center_is_kept(rng):
    grid = np.linspace(0.0, 3.0, 13)
    for _ in range(100):
        N = int(rng.integers(3, 33))
        x = Polygon.closed(random_closed_vertices(rng, N))
        energies = f2_monotone_check(x, grid)
        assert all(later <= earlier + 1e-12 for earlier, later in zip(energies, energies[1:]))
        drift = center_of_mass(evolve_closed(x, 1.3)) - center_of_mass(x)
        assert np.max(np.abs(drift)) <= 1e-12


def test_f2_monotone_check_grid_validation(rng):
    x = Polygon.closed(random_closed_vertices(rng, 5))
    with pytest.raises(ValueError):
        f2_monotone_check(x, [0.5, 0.1])


@pytest.mark.parametrize("spec", [INTRO, LISSAJOUS, SPIRAL, PARABOLA], ids=["intro", "1a", "2a", "5"])
def test_soliton_curves_stay_solitons_under_the_flow(spec):
    residual = soliton_flow_residual(spec, np.linspace(0.0, 1.0, 21), np.linspace(-1.0, 1.0, 21))
    assert residual <= 1e-6


def test_parabola_flow_map():
    for s in (0.0, 0.5, 1.0):
        flow = soliton_flow_map(PARABOLA, s)
        np.testing.assert_allclose(flow.A, np.eye(2), atol=1e-14)
        np.testing.assert_allclose(flow.b, [0.0, 2.0 * s], atol=1e-13)


def test_intro_flow_map_is_diagonal():
    s = 0.8
    flow = soliton_flow_map(INTRO, s)
    # A_1 = 4 (A(1) - I) = diag(2 (cos 2 - 1), 2 (cos 3 - 1))
    expected = np.diag(np.exp(s * 2.0 * (np.cos([2.0, 3.0]) - 1.0)))
    np.testing.assert_allclose(flow.A, expected, atol=1e-13)
    np.testing.assert_allclose(flow.b, [0.0, 0.0], atol=1e-14)


def test_intro_flow_map_matches_direct_integration():
    # the sampled lattice c(j), |j| <= 30, flows like the infinite one near its middle
    s = 0.8
    ts = np.arange(-30, 31, dtype=float)
    lattice = sample_curve(INTRO, ts)
    direct = _rk4_lattice(lattice, s, 1e-3, closed=False)
    flow = soliton_flow_map(INTRO, s)
    middle = np.abs(ts) <= 5
    np.testing.assert_allclose(direct[middle], flow.apply(lattice[middle]), atol=1e-8)


def test_flow_map_rejects_negative_time():
    with pytest.raises(ValueError):
        soliton_flow_map(INTRO, -1.0)
