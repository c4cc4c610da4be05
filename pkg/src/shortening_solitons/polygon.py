from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PolygonError
from .models import AffineMap, Closed, OpenWindow, Polygon, SolitonSpec, as_vector
from .soliton import sample_curve

MIN_VERIFY_VERTICES = 5


@dataclass(frozen=True)
class SolitonResidualReport:
    max_residual: float
    argmax_index: int
    fitted_map: AffineMap
    rank_deficient: bool = False


def require_closed(x: Polygon, operation: str) -> None:
    if not x.is_closed:
        raise PolygonError(f"{operation} needs a closed polygon, got {x.topology}")


def laplacian(x: Polygon) -> np.ndarray:
    """x_{j-1} - 2 x_j + x_{j+1} at every vertex that has both neighbours."""
    v = x.vertices
    if x.is_closed:
        return np.roll(v, 1, axis=0) - 2.0 * v + np.roll(v, -1, axis=0)
    return v[:-2] - 2.0 * v[1:-1] + v[2:]


def midpoint_map(x: Polygon) -> Polygon:
    """M(x)_j = (x_j + x_{j+1}) / 2."""
    v = x.vertices
    if x.is_closed:
        return x.with_vertices(0.5 * (v + np.roll(v, -1, axis=0)))
    if x.count < 3:
        raise PolygonError(f"midpoint_map needs an open window of at least 3 vertices, got {x.count}")
    window = x.topology
    return Polygon(0.5 * (v[:-1] + v[1:]), OpenWindow(window.j_min, window.j_max - 1))


def shorten_T(x: Polygon, alpha: float = 0.25) -> Polygon:
    """T_alpha(x)_j = alpha x_{j-1} + (1 - 2 alpha) x_j + alpha x_{j+1}; alpha = 1/4 is T."""
    if alpha == 0:
        raise PolygonError("alpha must be non-zero")
    if x.is_closed:
        return x.with_vertices(x.vertices + alpha * laplacian(x))
    if x.count < 4:
        raise PolygonError(f"shorten_T needs an open window of at least 4 vertices, got {x.count}")
    window = x.topology
    shortened = x.vertices[1:-1] + alpha * laplacian(x)
    return Polygon(shortened, OpenWindow(window.j_min + 1, window.j_max - 1))


def apply_affine(x: Polygon, affine: AffineMap) -> Polygon:
    return x.with_vertices(affine.apply(x.vertices))


def sample_polygon(spec: SolitonSpec, a: float, s: float, j_min: int, j_max: int) -> Polygon:
    """x_j = c(a + s j) for j_min <= j <= j_max."""
    if s <= 0:
        raise ValueError(f"s must be positive, got {s}")
    if j_min >= j_max:
        raise PolygonError(f"window must satisfy j_min < j_max, got ({j_min}, {j_max})")
    indices = np.arange(j_min, j_max + 1)
    return Polygon(sample_curve(spec, a + s * indices), OpenWindow(j_min, j_max))


def closed_from_curve(
    spec: SolitonSpec, n_vertices: int, t0: float = 0.0, period: float = 2.0 * np.pi
) -> Polygon:
    """Closed N-gon c(t0 + j period / N) of a curve with the given period."""
    if n_vertices < 3:
        raise PolygonError(f"a closed polygon needs at least 3 vertices, got {n_vertices}")
    ts = t0 + period * np.arange(n_vertices) / n_vertices
    return Polygon(sample_curve(spec, ts), Closed(n_vertices))


def soliton_recursion(
    affine: AffineMap, u, v, j0: int, j_min: int, j_max: int
) -> Polygon:
    """The polygon with x_{j0} = u, x_{j0+1} = v and T(x)_j = A x_j + b.

    Both directions use x_{j+-1} = 2(2A - I) x_j - x_{j-+1} + 4b.
    """
    if not j_min <= j0 < j0 + 1 <= j_max:
        raise PolygonError(f"need j_min <= j0 < j0 + 1 <= j_max, got {j_min}, {j0}, {j_max}")
    n = affine.dim
    u = as_vector(u, "u", n)
    v = as_vector(v, "v", n)
    step = 2.0 * (2.0 * affine.A - np.eye(n))
    shift = 4.0 * affine.b

    vertices = np.zeros((j_max - j_min + 1, n))
    vertices[j0 - j_min] = u
    vertices[j0 + 1 - j_min] = v
    for j in range(j0 + 1, j_max):
        k = j - j_min
        vertices[k + 1] = step @ vertices[k] - vertices[k - 1] + shift
    for j in range(j0, j_min, -1):
        k = j - j_min
        vertices[k - 1] = step @ vertices[k] - vertices[k + 1] + shift
    return Polygon(vertices, OpenWindow(j_min, j_max))


def eigenpolygon(N: int, k: int) -> tuple[Polygon, float]:
    """Regular N-gon z_j = exp(2 pi i j k / N) in (Re, Im) coordinates and its T-eigenvalue."""
    if N < 3:
        raise PolygonError(f"N must be at least 3, got {N}")
    if not 0 <= k < N:
        raise ValueError(f"k must satisfy 0 <= k < {N}, got {k}")
    angles = 2.0 * np.pi * np.arange(N) * k / N
    vertices = np.column_stack((np.cos(angles), np.sin(angles)))
    mu = 0.5 * (1.0 + np.cos(2.0 * np.pi * k / N))
    return Polygon.closed(vertices), float(mu)


def length(x: Polygon) -> float:
    require_closed(x, "length")
    edges = np.roll(x.vertices, -1, axis=0) - x.vertices
    return float(np.sum(np.linalg.norm(edges, axis=1)))


def f2_energy(x: Polygon) -> float:
    """F_2(x) = sum ||x_{j+1} - x_j||^2 / 2."""
    require_closed(x, "f2_energy")
    edges = np.roll(x.vertices, -1, axis=0) - x.vertices
    return 0.5 * float(np.sum(edges * edges))


def grad_f2(x: Polygon) -> Polygon:
    require_closed(x, "grad_f2")
    return x.with_vertices(-laplacian(x))


def center_of_mass(x: Polygon) -> np.ndarray:
    require_closed(x, "center_of_mass")
    return x.vertices.mean(axis=0)


def verify_soliton(x: Polygon, affine: AffineMap | None = None) -> SolitonResidualReport:
    """Residual of T(x)_j = A x_j + b over the vertices that have both neighbours.

    Without a map, (A, b) is fitted by least squares first; a rank-deficient design
    (affinely degenerate vertices) is flagged, the residual is reported either way.
    """
    if x.count < MIN_VERIFY_VERTICES:
        raise PolygonError(
            f"verify_soliton needs at least {MIN_VERIFY_VERTICES} vertices, got {x.count}"
        )
    targets = shorten_T(x).vertices
    if x.is_closed:
        sources, indices = x.vertices, x.indices
    else:
        sources, indices = x.vertices[1:-1], x.indices[1:-1]

    rank_deficient = False
    if affine is None:
        n = x.dim
        design = np.hstack((sources, np.ones((sources.shape[0], 1))))
        solution, _, rank, _ = np.linalg.lstsq(design, targets, rcond=None)
        affine = AffineMap(solution[:n].T, solution[n])
        rank_deficient = bool(rank < n + 1)
    elif affine.dim != x.dim:
        raise PolygonError(f"map dimension {affine.dim} does not match polygon dimension {x.dim}")

    residuals = np.linalg.norm(targets - affine.apply(sources), axis=1)
    worst = int(np.argmax(residuals))
    return SolitonResidualReport(
        max_residual=float(residuals[worst]),
        argmax_index=int(indices[worst]),
        fitted_map=affine,
        rank_deficient=rank_deficient,
    )
