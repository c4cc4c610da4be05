"""The semidiscrete flow dx_j/ds = x_{j-1} - 2 x_j + x_{j+1}.

On closed N-gons the right hand side is circulant, so every discrete Fourier mode k
decays independently with rate -4 sin^2(pi k / N).
"""
from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy import fft

from .errors import SolitonValidationError
from .matfun import mat_exp, phi1
from .models import AffineMap, Polygon, SolitonSpec
from .polygon import f2_energy, laplacian, require_closed
from .soliton import affine_family, sample_curve

FLOW_FD_STEP = 1e-5
FLOW_VALIDATION_RTOL = 1e-6
FLOW_CHECK_TIMES = np.linspace(-2.0, 2.0, 9)


def mode_rates(N: int) -> np.ndarray:
    """Eigenvalues 2 cos(2 pi k/N) - 2 of the circulant stencil for k = 0..N//2."""
    k = np.arange(N // 2 + 1)
    return -4.0 * np.sin(np.pi * k / N) ** 2


def evolve_closed(x: Polygon, s: float) -> Polygon:
    require_closed(x, "evolve_closed")
    if s < 0:
        raise ValueError(f"s must be non-negative (backward flow is ill-posed), got {s}")
    if s == 0:
        return x
    N = x.count
    spectrum = fft.rfft(x.vertices, axis=0)
    spectrum *= np.exp(mode_rates(N) * s)[:, None]
    return x.with_vertices(fft.irfft(spectrum, n=N, axis=0))


def euler_step(x: Polygon, alpha: float) -> Polygon:
    """One explicit Euler step of length alpha; coincides with T_alpha."""
    require_closed(x, "euler_step")
    return x.with_vertices(x.vertices + alpha * laplacian(x))


def flow_residual(x: Polygon, s: float, h: float) -> float:
    require_closed(x, "flow_residual")
    if h <= 0:
        raise ValueError(f"h must be positive, got {h}")
    if s < h:
        raise ValueError(f"s must be at least h so that s - h >= 0, got s={s}, h={h}")
    before = evolve_closed(x, s - h).vertices
    after = evolve_closed(x, s + h).vertices
    current = evolve_closed(x, s)
    derivative = (after - before) / (2.0 * h)
    return float(np.max(np.linalg.norm(derivative - laplacian(current), axis=1)))


def _flow_generator(spec: SolitonSpec) -> tuple[np.ndarray, np.ndarray]:
    # c(t-1) - 2c(t) + c(t+1) = 4 (c_1(t) - c(t)) = A_1 c(t) + b_1
    unit = affine_family(spec, 1.0)
    A1 = 4.0 * (unit.A - np.eye(spec.dim))
    b1 = 4.0 * unit.b
    return A1, b1


def _flow_map(A1: np.ndarray, b1: np.ndarray, s: float) -> AffineMap:
    # b~(s) = int_0^s exp(A_1 sigma) b_1 dsigma = s phi_1(A_1 s) b_1
    return AffineMap(mat_exp(A1 * s), s * (phi1(A1 * s) @ b1))


def soliton_flow_residual(
    spec: SolitonSpec,
    s_values: Sequence[float],
    t_values: Sequence[float],
    h: float = FLOW_FD_STEP,
) -> float:
    """Largest relative residual of d/ds c~_s(t) = c~_s(t-1) - 2 c~_s(t) + c~_s(t+1)."""
    A1, b1 = _flow_generator(spec)
    ts = np.asarray(t_values, dtype=float)
    curve = sample_curve(spec, np.concatenate((ts - 1.0, ts, ts + 1.0)))
    before, center, after = curve[: ts.size], curve[ts.size : 2 * ts.size], curve[2 * ts.size :]

    worst = 0.0
    for s in s_values:
        if s < 0:
            raise ValueError(f"s must be non-negative, got {s}")
        if s >= h:
            lower, upper = _flow_map(A1, b1, s - h), _flow_map(A1, b1, s + h)
            derivative = (upper.apply(center) - lower.apply(center)) / (2.0 * h)
        else:
            f0, f1, f2 = (_flow_map(A1, b1, s + k * h).apply(center) for k in range(3))
            derivative = (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h)
        current = _flow_map(A1, b1, s)
        rhs = current.apply(before) - 2.0 * current.apply(center) + current.apply(after)
        scale = 1.0 + float(np.max(np.linalg.norm(current.apply(center), axis=1)))
        worst = max(worst, float(np.max(np.linalg.norm(derivative - rhs, axis=1))) / scale)
    return worst


def soliton_flow_map(spec: SolitonSpec, s: float, validate: bool = True) -> AffineMap:
    """(A~(s), b~(s)) with c~_s = A~(s) c + b~(s) solving the semidiscrete flow."""
    if s < 0:
        raise ValueError(f"s must be non-negative, got {s}")
    A1, b1 = _flow_generator(spec)
    result = _flow_map(A1, b1, s)
    if validate:
        residual = soliton_flow_residual(spec, [s], FLOW_CHECK_TIMES)
        if residual > FLOW_VALIDATION_RTOL:
            raise SolitonValidationError(
                f"A~(s) c + b~(s) does not follow the flow at s={s}: residual {residual:.3e}"
            )
    return result


def f2_monotone_check(x: Polygon, s_grid: Sequence[float]) -> list[float]:
    """F_2 along the flow; the values are non-increasing for any closed polygon."""
    require_closed(x, "f2_monotone_check")
    grid = np.asarray(s_grid, dtype=float)
    if grid.size and (grid[0] < 0 or np.any(np.diff(grid) < 0)):
        raise ValueError("s_grid must be non-negative and increasing")
    return [f2_energy(evolve_closed(x, float(s))) for s in grid]
