from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DimensionError, PolygonError

MAX_DIM = 16


def _frozen_array(values, name: str, ndim: int) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.ndim != ndim:
        raise DimensionError(f"{name} must be {ndim}-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise DimensionError(f"{name} must contain only finite entries")
    array.flags.writeable = False
    return array


def as_square_matrix(values, name: str = "matrix", max_dim: int | None = MAX_DIM) -> np.ndarray:
    matrix = _frozen_array(values, name, 2)
    rows, cols = matrix.shape
    if rows != cols or rows < 1:
        raise DimensionError(f"{name} must be square, got shape {matrix.shape}")
    if max_dim is not None and rows > max_dim:
        raise DimensionError(f"{name} dimension {rows} exceeds the supported maximum {max_dim}")
    return matrix


def as_vector(values, name: str = "vector", dim: int | None = None) -> np.ndarray:
    vector = _frozen_array(values, name, 1)
    if dim is not None and vector.shape[0] != dim:
        raise DimensionError(f"{name} must have length {dim}, got {vector.shape[0]}")
    return vector


@dataclass(frozen=True)
class AffineMap:
    """x -> A x + b."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        A = as_square_matrix(self.A, "A", max_dim=None)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", as_vector(self.b, "b", A.shape[0]))

    @classmethod
    def identity(cls, dim: int) -> AffineMap:
        return cls(np.eye(dim), np.zeros(dim))

    @classmethod
    def scaling(cls, factor: float, dim: int) -> AffineMap:
        return cls(factor * np.eye(dim), np.zeros(dim))

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Apply to a single point (n,) or to stacked points (m, n)."""
        return np.asarray(points, dtype=float) @ self.A.T + self.b


@dataclass(frozen=True)
class SolitonSpec:
    """Initial value problem c'' = B c + d, c(0) = v, c'(0) = w."""

    B: np.ndarray
    d: np.ndarray
    v: np.ndarray
    w: np.ndarray

    def __post_init__(self) -> None:
        B = as_square_matrix(self.B, "B")
        n = B.shape[0]
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "d", as_vector(self.d, "d", n))
        object.__setattr__(self, "v", as_vector(self.v, "v", n))
        object.__setattr__(self, "w", as_vector(self.w, "w", n))

    @property
    def dim(self) -> int:
        return self.B.shape[0]


@dataclass(frozen=True)
class Closed:
    n_vertices: int


@dataclass(frozen=True)
class OpenWindow:
    j_min: int
    j_max: int

    @property
    def count(self) -> int:
        return self.j_max - self.j_min + 1


Topology = Union[Closed, OpenWindow]


@dataclass(frozen=True)
class Polygon:
    """A closed N-gon or a finite window x_{j_min}, ..., x_{j_max} of an infinite polygon."""

    vertices: np.ndarray
    topology: Topology

    def __post_init__(self) -> None:
        vertices = _frozen_array(self.vertices, "vertices", 2)
        count = vertices.shape[0]
        if count < 2:
            raise PolygonError(f"a polygon needs at least 2 vertices, got {count}")
        if vertices.shape[1] < 1:
            raise PolygonError("vertices must have at least one coordinate")
        topology = self.topology
        if isinstance(topology, Closed):
            if topology.n_vertices != count:
                raise PolygonError(
                    f"Closed({topology.n_vertices}) does not match {count} vertices"
                )
            if count < 3:
                raise PolygonError(f"a closed polygon needs at least 3 vertices, got {count}")
        elif isinstance(topology, OpenWindow):
            if topology.j_min >= topology.j_max:
                raise PolygonError(
                    f"window must satisfy j_min < j_max, got ({topology.j_min}, {topology.j_max})"
                )
            if topology.count != count:
                raise PolygonError(
                    f"window ({topology.j_min}, {topology.j_max}) holds {topology.count} "
                    f"vertices, got {count}"
                )
        else:
            raise PolygonError(f"unknown topology {topology!r}")
        object.__setattr__(self, "vertices", vertices)

    @classmethod
    def closed(cls, vertices: Sequence) -> Polygon:
        array = np.asarray(vertices, dtype=float)
        return cls(array, Closed(array.shape[0]))

    @classmethod
    def open(cls, vertices: Sequence, j_min: int = 0) -> Polygon:
        array = np.asarray(vertices, dtype=float)
        return cls(array, OpenWindow(j_min, j_min + array.shape[0] - 1))

    @property
    def is_closed(self) -> bool:
        return isinstance(self.topology, Closed)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def count(self) -> int:
        return self.vertices.shape[0]

    @property
    def indices(self) -> np.ndarray:
        if isinstance(self.topology, Closed):
            return np.arange(self.count)
        return np.arange(self.topology.j_min, self.topology.j_max + 1)

    def with_vertices(self, vertices: np.ndarray) -> Polygon:
        """Same topology, new vertex values."""
        return Polygon(vertices, self.topology)
