"""Matrix-analytic kernel.

co_B(t) = sum_k t^{2k}/(2k)! B^k and si_B(t) = sum_k t^{2k+1}/(2k+1)! B^k solve
X'' = B X with (X(0), X'(0)) = (I, 0) and (0, I). For a scalar b they reduce to
cos/cosh and sin/sinh with the argument sqrt(|b|) t.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SeriesConvergenceError
from .models import as_square_matrix

TOL_SERIES = 1e-10
SERIES_TERM_FLOOR = 1e-16
MAX_SERIES_TERMS = 200
MAX_ABS_T = 1e6
EXP_SCALED_NORM = 0.5


@dataclass(frozen=True)
class CoSi:
    """co_B(t), si_B(t) and cm_B(t) = sum_k t^{2k+2}/(2k+2)! B^k, so that co = I + B cm."""

    co: np.ndarray
    si: np.ndarray
    cm: np.ndarray

    def negated(self) -> CoSi:
        """Values at -t."""
        return CoSi(co=self.co, si=-self.si, cm=self.cm)


def co_si_sum(B: np.ndarray, first: CoSi, second: CoSi) -> CoSi:
    """Values at t1 + t2 from the values at t1 and t2 (addition rules)."""
    return CoSi(
        co=first.co @ second.co + B @ first.si @ second.si,
        si=first.si @ second.co + first.co @ second.si,
        cm=first.cm + second.cm + B @ first.cm @ second.cm + first.si @ second.si,
    )


def inf_norm(values: np.ndarray) -> float:
    array = np.asarray(values, dtype=float)
    if array.ndim == 1:
        return float(np.max(np.abs(array))) if array.size else 0.0
    return float(np.linalg.norm(array, ord=np.inf))


def _sum_even_series(first: np.ndarray, step: np.ndarray, offset: int) -> np.ndarray:
    term = first
    total = first.copy()
    for k in range(MAX_SERIES_TERMS):
        if inf_norm(term) <= SERIES_TERM_FLOOR * inf_norm(total):
            return total
        term = term @ step / ((2 * k + offset) * (2 * k + offset + 1))
        total = total + term
    raise SeriesConvergenceError(
        f"series did not converge within {MAX_SERIES_TERMS} terms (overflow-scale input?)"
    )


def co_si(B, t: float) -> CoSi:
    """Return co_B(t), si_B(t) and cm_B(t).

    The argument is halved until ||B|| t^2 <= 1, the series is summed there, and the
    result is squared back with co(2t) = co(t)^2 + B si(t)^2, si(2t) = 2 si(t) co(t),
    cm(2t) = 2 cm(t) + B cm(t)^2 + si(t)^2.
    """
    B = as_square_matrix(B, "B")
    t = float(t)
    if not math.isfinite(t) or abs(t) >= MAX_ABS_T:
        raise ValueError(f"|t| must be finite and below {MAX_ABS_T:g}, got {t}")
    n = B.shape[0]
    norm_b = inf_norm(B)
    tau = t
    halvings = 0
    while norm_b * tau * tau > 1.0:
        tau /= 2.0
        halvings += 1

    step = B * (tau * tau)
    co = _sum_even_series(np.eye(n), step, offset=1)
    si = _sum_even_series(tau * np.eye(n), step, offset=2)
    cm = _sum_even_series(0.5 * tau * tau * np.eye(n), step, offset=3)
    for _ in range(halvings):
        co, si, cm = co @ co + B @ si @ si, 2.0 * si @ co, 2.0 * cm + B @ cm @ cm + si @ si

    if not all(np.all(np.isfinite(m)) for m in (co, si, cm)):
        raise SeriesConvergenceError(f"co_B/si_B overflowed at t={t}")
    return CoSi(co=co, si=si, cm=cm)


def scalar_cos_sin(b, t):
    """Closed forms of co_b(t), si_b(t) for scalar b; broadcasts over arrays.

    b > 0: (cosh(sqrt(b) t), sinh(sqrt(b) t)/sqrt(b)); b < 0: the cos/sin analogue;
    b = 0: (1, t). si is written as t * sinc so the three branches join continuously.
    """
    b_arr = np.asarray(b, dtype=float)
    t_arr = np.asarray(t, dtype=float)
    arg = np.sqrt(np.abs(b_arr)) * t_arr
    positive = b_arr > 0
    safe_arg = np.where(arg == 0.0, 1.0, arg)
    with np.errstate(over="ignore"):
        sinhc = np.where(arg == 0.0, 1.0, np.sinh(safe_arg) / safe_arg)
        co = np.where(positive, np.cosh(arg), np.cos(arg))
        si = np.where(positive, sinhc, np.sinc(arg / np.pi)) * t_arr
    if co.ndim == 0:
        return float(co), float(si)
    return co, si


def mat_exp(M) -> np.ndarray:
    """exp(M) by scaling and squaring around a Taylor core."""
    M = as_square_matrix(M, "M", max_dim=None)
    n = M.shape[0]
    norm = inf_norm(M)
    squarings = 0
    if norm > EXP_SCALED_NORM:
        squarings = int(math.ceil(math.log2(norm / EXP_SCALED_NORM)))
    scaled = M / (2.0**squarings)

    term = np.eye(n)
    result = np.eye(n)
    for k in range(1, MAX_SERIES_TERMS + 1):
        term = term @ scaled / k
        result = result + term
        if inf_norm(term) <= SERIES_TERM_FLOOR * inf_norm(result):
            break
    else:
        raise SeriesConvergenceError("exponential series did not converge")

    for _ in range(squarings):
        result = result @ result
    if not np.all(np.isfinite(result)):
        raise SeriesConvergenceError("matrix exponential overflowed")
    return result


def phi1(M) -> np.ndarray:
    """phi_1(M) = sum_k M^k/(k+1)! = (exp(M) - I) M^{-1}; defined for singular M too."""
    M = as_square_matrix(M, "M", max_dim=None)
    n = M.shape[0]
    if inf_norm(M) > 1.0:
        # exp([[M, I], [0, 0]]) carries phi_1(M) in its upper right block.
        block = np.zeros((2 * n, 2 * n))
        block[:n, :n] = M
        block[:n, n:] = np.eye(n)
        return mat_exp(block)[:n, n:]

    term = np.eye(n)
    result = np.eye(n)
    for k in range(1, MAX_SERIES_TERMS + 1):
        term = term @ M / (k + 1)
        result = result + term
        if inf_norm(term) <= SERIES_TERM_FLOOR * inf_norm(result):
            return result
    raise SeriesConvergenceError("phi_1 series did not converge")


def block_generator(B, t: float = 1.0) -> np.ndarray:
    """[[0, I], [B, 0]] * t, whose exponential is [[co, si], [B si, co]]."""
    B = as_square_matrix(B, "B")
    n = B.shape[0]
    block = np.zeros((2 * n, 2 * n))
    block[:n, n:] = np.eye(n)
    block[n:, :n] = B
    return block * float(t)

