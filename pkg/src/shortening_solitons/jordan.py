"""Which matrices D are of the form f(B, s) = (I + co_B(s)) / 2.

The answer only depends on the Jordan structure of D: every block J_m(lambda) with a
real negative eigenvalue must occur an even number of times. Jordan data is taken as
input; it is never computed from a raw matrix.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import JordanSpecError
from .matfun import scalar_cos_sin


@dataclass(frozen=True)
class JordanBlock:
    """J_m(eigenvalue) for imag == 0, else the real block J_{2m}(eigenvalue, imag)."""

    eigenvalue: float
    size: int = 1
    imag: float = 0.0

    def __post_init__(self) -> None:
        if self.size < 1:
            raise JordanSpecError(f"block size must be at least 1, got {self.size}")
        if not (np.isfinite(self.eigenvalue) and np.isfinite(self.imag)):
            raise JordanSpecError("block eigenvalues must be finite")
        # alpha +- i beta is one conjugate pair; store beta > 0
        object.__setattr__(self, "imag", abs(float(self.imag)))
        object.__setattr__(self, "eigenvalue", float(self.eigenvalue))

    @property
    def is_complex(self) -> bool:
        return self.imag != 0.0

    @property
    def dimension(self) -> int:
        return 2 * self.size if self.is_complex else self.size


@dataclass(frozen=True)
class JordanSpec:
    blocks: tuple[JordanBlock, ...]

    def __post_init__(self) -> None:
        if not self.blocks:
            raise JordanSpecError("a Jordan specification needs at least one block")
        object.__setattr__(self, "blocks", tuple(self.blocks))

    @classmethod
    def diagonal(cls, values: Sequence[float]) -> JordanSpec:
        return cls(tuple(JordanBlock(value) for value in values))

    @property
    def dimension(self) -> int:
        return sum(block.dimension for block in self.blocks)


def in_image(target: JordanSpec) -> bool:
    for block in target.blocks:
        if not block.is_complex and block.eigenvalue == 0.0:
            raise JordanSpecError("target must be invertible (zero eigenvalue present)")
    negative_blocks = Counter(
        (block.eigenvalue, block.size)
        for block in target.blocks
        if not block.is_complex and block.eigenvalue < 0.0
    )
    return all(count % 2 == 0 for count in negative_blocks.values())


def f_scalar(b, s):
    """(1 + cos_b(s)) / 2; broadcasts over arrays."""
    co, _ = scalar_cos_sin(b, s)
    return 0.5 * (1.0 + co)


def invert_f_scalar(lam: float, s: float = 1.0) -> float:
    """b with (1 + cos_b(s)) / 2 = lam, for lam >= 0."""
    if lam < 0:
        raise ValueError(f"lambda must be non-negative to be reached by a 1x1 block, got {lam}")
    if s == 0:
        raise ValueError("s must be non-zero")
    y = 2.0 * lam - 1.0
    if y >= 1.0:
        return float(np.arccosh(y) ** 2 / s**2)
    return float(-(np.arccos(y) ** 2) / s**2)


def invert_f_diagonal(values: Sequence[float], s: float = 1.0) -> np.ndarray:
    """Diagonal B with (I + co_B(s)) / 2 = diag(values); every value must be >= 0."""
    return np.diag([invert_f_scalar(value, s) for value in values])


@dataclass(frozen=True)
class GridSpec:
    start: float
    stop: float
    num: int

    def values(self) -> np.ndarray:
        if self.num < 2:
            raise ValueError(f"a grid needs at least 2 points, got {self.num}")
        return np.linspace(self.start, self.stop, self.num)


@dataclass(frozen=True)
class ImageScanResult:
    residual: float
    b: tuple[float, ...]
    s: float


def _best_entry(target: float, b_values: np.ndarray, f_row: np.ndarray, s: float) -> tuple[float, float]:
    """Closest b on the grid, polished by root finding wherever the grid brackets the target."""
    diff = f_row - target
    index = int(np.argmin(np.abs(diff)))
    best_b, best_residual = float(b_values[index]), float(abs(diff[index]))
    for lo in np.flatnonzero(diff[:-1] * diff[1:] <= 0):
        root = brentq(lambda b: f_scalar(b, s) - target, b_values[lo], b_values[lo + 1], xtol=1e-14)
        residual = abs(f_scalar(root, s) - target)
        if residual < best_residual:
            best_b, best_residual = float(root), float(residual)
    return best_b, best_residual


def brute_force_image_scan(
    target_diag: Sequence[float], b_grid: GridSpec, s_grid: GridSpec
) -> ImageScanResult:
    """min over diagonal B = diag(b_i) and s of max_i |f(b_i, s) - D_ii|.

    Independent of in_image and invert_f_scalar: the grid is scanned directly.
    """
    target = np.asarray(target_diag, dtype=float)
    if target.shape != (2,):
        raise ValueError(f"target must be a 2x2 diagonal, got {target.shape[0]} entries")
    b_values = b_grid.values()
    s_values = s_grid.values()
    table = f_scalar(b_values[None, :], s_values[:, None])

    coarse = np.max(np.min(np.abs(table[:, :, None] - target[None, None, :]), axis=1), axis=1)
    s_index = int(np.argmin(coarse))
    s = float(s_values[s_index])
    entries = [_best_entry(value, b_values, table[s_index], s) for value in target]
    return ImageScanResult(
        residual=max(residual for _, residual in entries),
        b=tuple(b for b, _ in entries),
        s=s,
    )
