"""Soliton curves: solutions of c'' = B c + d and their affine families.

A curve c is a soliton of the shortening map when the shortened curves
c_s(t) = (c(t - s) + 2 c(t) + c(t + s)) / 4 are affine images A(s) c(t) + b(s) of it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

from .errors import IntegratorValidationError, SolitonValidationError
from .matfun import CoSi, co_si, co_si_sum
from .models import AffineMap, SolitonSpec

CLASSIFY_RTOL = 1e-9
INTEGRATOR_STEP = 1e-3
RICHARDSON_RTOL = 1e-8
VALIDATION_RTOL = 1e-8
VALIDATION_TIMES = np.linspace(-4.0, 4.0, 33)
ODE_RESIDUAL_STEP = 1e-4


class CaseTag(str, Enum):
    HOMOGENEOUS = "Homogeneous"
    SOLVABLE_SHIFT = "SolvableShift"
    NILPOTENT_AUGMENTED = "NilpotentAugmented"
    PURE_TRANSLATION = "PureTranslation"
    MIXED_SPLIT = "MixedSplit"


@dataclass(frozen=True)
class InhomogeneityCase:
    """range_part is B d_*, the share of d absorbed by the shift d_*."""

    tag: CaseTag
    d_star: np.ndarray | None = None
    kernel_part: np.ndarray | None = None
    d_n: float | None = None
    range_part: np.ndarray | None = None


def _is_shift_block(B: np.ndarray) -> bool:
    n = B.shape[0]
    return n >= 2 and np.array_equal(B, np.eye(n, k=1))


def classify(spec: SolitonSpec) -> InhomogeneityCase:
    B, d = spec.B, spec.d
    if not np.any(d):
        return InhomogeneityCase(CaseTag.HOMOGENEOUS)
    if not np.any(B):
        return InhomogeneityCase(CaseTag.PURE_TRANSLATION)
    if _is_shift_block(B):
        # d = N d_* + d_n e_n with d_* = (0, d_1, ..., d_{n-1})
        d_star = np.concatenate(([0.0], d[:-1]))
        return InhomogeneityCase(
            CaseTag.NILPOTENT_AUGMENTED,
            d_star=d_star,
            d_n=float(d[-1]),
            range_part=np.concatenate((d[:-1], [0.0])),
        )

    d_star, *_ = np.linalg.lstsq(B, d, rcond=None)
    residual = float(np.linalg.norm(B @ d_star - d))
    if residual <= CLASSIFY_RTOL * (1.0 + float(np.linalg.norm(d))):
        return InhomogeneityCase(CaseTag.SOLVABLE_SHIFT, d_star=d_star, range_part=d)
    kernel_part = d - B @ d_star
    return InhomogeneityCase(
        CaseTag.MIXED_SPLIT, d_star=d_star, kernel_part=kernel_part, range_part=d - kernel_part
    )


def _nilpotent_particular(n: int, t: float) -> tuple[np.ndarray, np.ndarray]:
    """c_*(t) = (t^{2n}/(2n)!, ..., t^2/2!) and its derivative."""
    orders = 2 * np.arange(n, 0, -1)
    position = np.array([t**m / math.factorial(m) for m in orders])
    velocity = np.array([t ** (m - 1) / math.factorial(m - 1) for m in orders])
    return position, velocity


def _augmented_generator(B: np.ndarray, forcing: np.ndarray) -> np.ndarray:
    """M with z' = M z for z = (q, q', 1, tau, tau^2/2) and q'' = B q + (tau^2/2) forcing."""
    n = B.shape[0]
    size = 2 * n + 3
    M = np.zeros((size, size))
    M[:n, n : 2 * n] = np.eye(n)
    M[n : 2 * n, :n] = B
    M[n : 2 * n, 2 * n + 2] = forcing
    M[2 * n + 1, 2 * n] = 1.0
    M[2 * n + 2, 2 * n + 1] = 1.0
    return M


def _rk4_step_matrix(M: np.ndarray, h: float) -> np.ndarray:
    # one classical RK4 step of a linear autonomous system is sum_{k<=4} (hM)^k/k!
    hM = M * h
    R = np.eye(M.shape[0])
    term = np.eye(M.shape[0])
    for k in range(1, 5):
        term = term @ hM / k
        R = R + term
    return R


def _rk4_on_grid(M: np.ndarray, t: float, step: float) -> np.ndarray:
    """RK4 from zero data over the grid 0, +-step, +-2 step, ... and one partial step to t.

    Nearby t share the grid part, so their values differ only through the last step.
    """
    direction = 1.0 if t >= 0 else -1.0
    full_steps = int(abs(t) // step)
    rest = t - direction * full_steps * step
    z = np.zeros(M.shape[0])
    z[M.shape[0] - 3] = 1.0
    z = np.linalg.matrix_power(_rk4_step_matrix(M, direction * step), full_steps) @ z
    return _rk4_step_matrix(M, rest) @ z


def _mixed_particular(
    B: np.ndarray, kernel_part: np.ndarray, t: float
) -> tuple[np.ndarray, np.ndarray]:
    """Solution of p'' = B p + k, p(0) = p'(0) = 0, as (t^2/2) k + q(t)."""
    n = B.shape[0]
    lead = 0.5 * t * t * kernel_part
    lead_velocity = t * kernel_part
    forcing = B @ kernel_part
    if not np.any(forcing):
        return lead, lead_velocity

    M = _augmented_generator(B, forcing)
    coarse = _rk4_on_grid(M, t, INTEGRATOR_STEP)
    fine = _rk4_on_grid(M, t, 0.5 * INTEGRATOR_STEP)
    error = float(np.linalg.norm(fine[: 2 * n] - coarse[: 2 * n])) / 15.0
    if error > RICHARDSON_RTOL * (1.0 + float(np.linalg.norm(fine[: 2 * n]))):
        raise IntegratorValidationError(
            f"RK4 step-halving estimate {error:.3e} exceeds tolerance at t={t}"
        )
    return lead + fine[:n], lead_velocity + fine[n : 2 * n]


def _curve_from(
    spec: SolitonSpec, case: InhomogeneityCase, values: CoSi, t: float
) -> tuple[np.ndarray, np.ndarray]:
    """c(t) and c'(t) given co_B, si_B and cm_B at t."""
    B, d, v, w = spec.B, spec.d, spec.v, spec.w
    if case.tag is CaseTag.PURE_TRANSLATION:
        return 0.5 * t * t * d + t * w + v, t * d + w

    position = values.co @ v + values.si @ w
    velocity = B @ values.si @ v + values.co @ w
    if case.range_part is not None:
        # (co - I) d_* = cm B d_*
        position = position + values.cm @ case.range_part
        velocity = velocity + values.si @ case.range_part

    if case.tag is CaseTag.NILPOTENT_AUGMENTED:
        extra, extra_velocity = _nilpotent_particular(spec.dim, t)
        position = position + case.d_n * extra
        velocity = velocity + case.d_n * extra_velocity
    elif case.tag is CaseTag.MIXED_SPLIT:
        extra, extra_velocity = _mixed_particular(B, case.kernel_part, t)
        position = position + extra
        velocity = velocity + extra_velocity
    return position, velocity


def _curve_state(
    spec: SolitonSpec, t: float, case: InhomogeneityCase
) -> tuple[np.ndarray, np.ndarray]:
    t = float(t)
    return _curve_from(spec, case, co_si(spec.B, t), t)


def eval_curve(spec: SolitonSpec, t: float) -> np.ndarray:
    return _curve_state(spec, t, classify(spec))[0]


def curve_velocity(spec: SolitonSpec, t: float) -> np.ndarray:
    return _curve_state(spec, t, classify(spec))[1]


def sample_curve(spec: SolitonSpec, ts: Iterable[float]) -> np.ndarray:
    """Stacked c(t) for every t, shape (len(ts), n)."""
    case = classify(spec)
    points = [_curve_state(spec, t, case)[0] for t in ts]
    return np.array(points, dtype=float).reshape(len(points), spec.dim)


def affine_family(spec: SolitonSpec, s: float, alpha: float = 0.25) -> AffineMap:
    """(A(s), b(s)) with c_s(t) = A(s) c(t) + b(s); alpha != 1/4 gives the T_alpha family.

    A(s) = (I + co_B(s))/2. b(s) is read off at t = 0 and checked for t-independence on
    VALIDATION_TIMES, which covers every inhomogeneity case with one code path.
    """
    s = float(s)
    n = spec.dim
    A = 0.5 * (np.eye(n) + co_si(spec.B, s).co)

    ts = VALIDATION_TIMES
    window = sample_curve(spec, np.concatenate((ts - s, ts, ts + s)))
    before, center, after = window[: ts.size], window[ts.size : 2 * ts.size], window[2 * ts.size :]
    shortened = 0.25 * (before + 2.0 * center + after)

    c0 = eval_curve(spec, 0.0)
    cs0 = 0.25 * (eval_curve(spec, -s) + 2.0 * c0 + eval_curve(spec, s))
    b = cs0 - A @ c0

    residual = float(np.max(np.linalg.norm(shortened - (center @ A.T + b), axis=1)))
    scale = 1.0 + float(np.max(np.linalg.norm(window, axis=1)))
    if residual > VALIDATION_RTOL * scale:
        raise SolitonValidationError(
            f"c_s is not an affine image of c at s={s}: residual {residual:.3e}"
        )

    return AffineMap(4.0 * alpha * A - (4.0 * alpha - 1.0) * np.eye(n), 4.0 * alpha * b)


def wave_family(spec: SolitonSpec, s: float, t: float) -> np.ndarray:
    """(c(t - s) + c(t + s)) / 4; solves the wave equation in (s, t)."""
    case = classify(spec)
    return 0.25 * (_curve_state(spec, t - s, case)[0] + _curve_state(spec, t + s, case)[0])


def energy(spec: SolitonSpec, t: float) -> float:
    """|c'|^2/2 + U(c) with U(x) = -<Bx, x>/2 - <d, x>; conserved when B is symmetric."""
    position, velocity = _curve_state(spec, t, classify(spec))
    potential = -0.5 * float(position @ spec.B @ position) - float(spec.d @ position)
    return 0.5 * float(velocity @ velocity) + potential


def ode_residual(spec: SolitonSpec, ts: Iterable[float], h: float = ODE_RESIDUAL_STEP) -> float:
    """Largest relative mismatch between the central second difference of c and B c + d.

    The neighbours c(t +- h) are built from co_B, si_B, cm_B at t and h with the addition
    rules, so all three points share the rounding of the matrix functions at t.
    """
    case = classify(spec)
    B = spec.B
    step = co_si(B, h)
    worst = 0.0
    for t in ts:
        t = float(t)
        values = co_si(B, t)
        before = _curve_from(spec, case, co_si_sum(B, values, step.negated()), t - h)[0]
        center = _curve_from(spec, case, values, t)[0]
        after = _curve_from(spec, case, co_si_sum(B, values, step), t + h)[0]
        second = (after - 2.0 * center + before) / (h * h)
        rhs = spec.B @ center + spec.d
        mismatch = float(np.linalg.norm(second - rhs)) / (1.0 + float(np.linalg.norm(rhs)))
        worst = max(worst, mismatch)
    return worst
