"""Catalogue of planar solitons with the parameters of their reference figures."""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import PresetError, SolitonValidationError
from .models import Polygon, SolitonSpec
from .polygon import sample_polygon, verify_soliton
from .soliton import affine_family, ode_residual, sample_curve

PRESET_IDS = ("intro", "1a", "1b", "1c", "2a", "2b", "2c", "3", "3fig", "4", "5", "6")
CASE_1C_VARIANTS = {
    "exp": {"b2": 1.0, "v2": 1.0, "w2": 1.0},
    "cosh": {"b2": 1.0, "v2": 1.0, "w2": 0.0},
    "sin": {"b2": -1.0, "v2": 0.0, "w2": 1.0},
}
REQUIRED_PARAMS = {
    "intro": ("b1", "b2", "v1", "v2", "w1", "w2", "s_demo"),
    "1a": ("lambda1", "lambda2", "v1", "v2", "w1", "w2"),
    "1b": ("lambda1", "lambda2", "v1", "v2", "w1", "w2"),
    "1c": ("b2", "v2", "w2"),
    "2a": ("u1", "u2", "h11", "h12", "h21", "h22"),
    "2b": ("u1", "u2", "h11", "h12", "h21", "h22"),
    "2c": ("u1", "u2", "h11", "h12", "h21", "h22"),
    "3": ("d2", "a3", "a2", "a1", "a0"),
    "3fig": ("d2", "a3", "a2", "a1", "a0"),
    "4": ("b", "v1", "v2", "w1", "w2"),
    "5": ("d2", "w1"),
    "6": ("b", "d1", "v2", "w2"),
}
STANDARD_VERTICES = 20
STANDARD_DIVISIONS = 64
CHECK_STEPS = (0.1, 0.4, 1.0)
CHECK_RTOL = 1e-6
ODE_CHECK_RTOL = 1e-5
ODE_CHECK_POINTS = 101


@dataclass(frozen=True)
class ZooPreset:
    case_id: str
    params: Mapping[str, float]
    t_range: tuple[float, float]
    figure: str
    variant: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))
        t_min, t_max = self.t_range
        if not (np.isfinite(t_min) and np.isfinite(t_max) and t_min < t_max):
            raise PresetError(f"invalid t_range {self.t_range} for preset {self.case_id}")


def _require(preset: ZooPreset) -> Mapping[str, float]:
    required = REQUIRED_PARAMS.get(preset.case_id)
    if required is None:
        raise PresetError(f"Unknown preset {preset.case_id!r}; expected one of {', '.join(PRESET_IDS)}")
    missing = [name for name in required if name not in preset.params]
    if missing:
        raise PresetError(f"Preset {preset.case_id} is missing params: {', '.join(missing)}")
    return preset.params


def _similarity_spec(p: Mapping[str, float]) -> SolitonSpec:
    # z'' = mu z with mu = w^2, z(t) = h1 exp(wt) + h2 exp(-wt)
    w = complex(p["u1"], p["u2"])
    h1 = complex(p["h11"], p["h12"])
    h2 = complex(p["h21"], p["h22"])
    mu = w * w
    start = h1 + h2
    velocity = w * (h1 - h2)
    return SolitonSpec(
        B=[[mu.real, -mu.imag], [mu.imag, mu.real]],
        d=[0.0, 0.0],
        v=[start.real, start.imag],
        w=[velocity.real, velocity.imag],
    )


def to_spec(preset: ZooPreset) -> SolitonSpec:
    p = _require(preset)
    case = preset.case_id
    if case == "intro":
        return SolitonSpec(
            B=np.diag([p["b1"], p["b2"]]), d=[0.0, 0.0], v=[p["v1"], p["v2"]], w=[p["w1"], p["w2"]]
        )
    if case in ("1a", "1b"):
        l1, l2 = p["lambda1"], p["lambda2"]
        # (1a): both coordinates oscillate; (1b): the second one is cosh/sinh
        b2 = -(l2**2) if case == "1a" else l2**2
        return SolitonSpec(
            B=np.diag([-(l1**2), b2]),
            d=[0.0, 0.0],
            v=[p["v1"], p["v2"]],
            w=[p["w1"] * l1, p["w2"] * l2],
        )
    if case == "1c":
        return SolitonSpec(B=np.diag([0.0, p["b2"]]), d=[0.0, 0.0], v=[0.0, p["v2"]], w=[1.0, p["w2"]])
    if case in ("2a", "2b", "2c"):
        return _similarity_spec(p)
    if case in ("3", "3fig"):
        # first coordinate is the quartic d2 t^4/24 + a3 t^3/6 + a2 t^2/2 + a1 t + a0
        return SolitonSpec(
            B=[[0.0, 1.0], [0.0, 0.0]],
            d=[0.0, p["d2"]],
            v=[p["a0"], p["a2"]],
            w=[p["a1"], p["a3"]],
        )
    if case == "4":
        b = p["b"]
        return SolitonSpec(B=[[b, 1.0], [0.0, b]], d=[0.0, 0.0], v=[p["v1"], p["v2"]], w=[p["w1"], p["w2"]])
    if case == "5":
        return SolitonSpec(B=np.zeros((2, 2)), d=[0.0, p["d2"]], v=[0.0, 0.0], w=[p["w1"], 0.0])
    return SolitonSpec(
        B=np.diag([0.0, p["b"]]), d=[p["d1"], 0.0], v=[0.0, p["v2"]], w=[0.0, p["w2"]]
    )


def case_1c(variant: str = "sin") -> ZooPreset:
    """c(t) = (t, y(t)) with y one of exp, cosh, sin."""
    if variant not in CASE_1C_VARIANTS:
        raise PresetError(f"Unknown 1c variant {variant!r}; expected one of {', '.join(CASE_1C_VARIANTS)}")
    return ZooPreset("1c", CASE_1C_VARIANTS[variant], (-3.0, 3.0), f"Scaling, Case (1c), y = {variant}", variant)


def _case_3(case_id: str, figure: str) -> ZooPreset:
    params = {"d2": 0.1, "a3": 0.2, "a2": -4.0, "a1": -1.0, "a0": 0.0}
    return ZooPreset(case_id, params, (-30.0, 25.0), figure)


def preset_table() -> list[ZooPreset]:
    return [
        ZooPreset(
            "intro",
            {"b1": -4.0, "b2": -9.0, "v1": 1.0, "v2": 1.0, "w1": 0.0, "w2": 0.0, "s_demo": 0.4},
            (0.0, 6.3),
            "Introduction, c(t) = (cos 2t, cos 3t)",
        ),
        ZooPreset(
            "1a",
            {"lambda1": 4.0, "lambda2": 9.0, "w1": 1.0, "v2": 1.0, "w2": 0.0, "v1": 0.0},
            (0.0, 6.3),
            "Scaling, Case (1a)",
        ),
        ZooPreset(
            "1b",
            {"lambda1": 8.0, "lambda2": 1.0, "v2": 1.0, "w1": 1.0, "v1": 0.0, "w2": 0.0},
            (-1.3, 1.3),
            "Scaling, Case (1b)",
        ),
        case_1c("sin"),
        ZooPreset(
            "2a",
            {"u1": 0.3, "u2": 4.0, "h11": 1.0, "h12": 0.0, "h21": 0.0, "h22": 0.0},
            (-3.0, 3.0),
            "Spira mirabilis, rotate and scale, Case (2a)",
        ),
        ZooPreset(
            "2b",
            {"u1": 1.0, "u2": 20.0, "h11": 0.5, "h12": 0.0, "h21": 0.5, "h22": 0.0},
            (0.0, 1.2),
            "Rotate and scale, Case (2b)",
        ),
        ZooPreset(
            "2c",
            {"u1": 1.0, "u2": 20.0, "h11": 1.0, "h12": 0.0, "h21": 1.3, "h22": 0.0},
            (-0.57, 0.885),
            "Rotate and scale, Case (2c)",
        ),
        _case_3("3", "Shear, Case (3), soliton"),
        _case_3("3fig", "Shear, Case (3), printed curve"),
        ZooPreset(
            "4",
            {"b": -1.0, "v1": 1.0, "v2": -0.1, "w1": -10.0, "w2": 1.0},
            (-30.0, 40.0),
            "Shear and scaling, Case (4)",
        ),
        ZooPreset("5", {"d2": 2.0, "w1": 1.0}, (-3.0, 3.0), "Translation, Case (5)"),
        ZooPreset(
            "6", {"b": -1.0, "d1": 2.0, "v2": 0.0, "w2": 1.0}, (-10.0, 10.0), "Translation and scaling, Case (6)"
        ),
    ]


def get_preset(case_id: str) -> ZooPreset:
    for preset in preset_table():
        if preset.case_id == case_id:
            return preset
    raise PresetError(f"Unknown preset {case_id!r}; expected one of {', '.join(PRESET_IDS)}")


def figure_curve(preset: ZooPreset, ts: np.ndarray) -> np.ndarray:
    """Points as drawn in the figure: the printed quartic (q(t), t) for 3fig, else c(t)."""
    ts = np.asarray(ts, dtype=float)
    if preset.case_id != "3fig":
        return sample_curve(to_spec(preset), ts)
    p = _require(preset)
    quartic = p["d2"] * ts**4 / 24 + p["a3"] * ts**3 / 6 + p["a2"] * ts**2 / 2 + p["a1"] * ts + p["a0"]
    return np.column_stack((quartic, ts))


def emit_samples(preset: ZooPreset, n_points: int) -> list[tuple[float, np.ndarray]]:
    if n_points < 2:
        raise ValueError(f"n_points must be at least 2, got {n_points}")
    t_min, t_max = preset.t_range
    ts = np.linspace(t_min, t_max, n_points)
    ts[0], ts[-1] = t_min, t_max
    points = figure_curve(preset, ts)
    return [(float(t), point) for t, point in zip(ts, points)]


def standard_step(preset: ZooPreset) -> float:
    t_min, t_max = preset.t_range
    return (t_max - t_min) / STANDARD_DIVISIONS


def standard_polygon(preset: ZooPreset, figure: bool = False) -> Polygon:
    """20 vertices c(t_min + j (t_max - t_min)/64); figure=True samples the drawn curve."""
    t_min = preset.t_range[0]
    step = standard_step(preset)
    if not figure:
        return sample_polygon(to_spec(preset), t_min, step, 0, STANDARD_VERTICES - 1)
    ts = t_min + step * np.arange(STANDARD_VERTICES)
    return Polygon.open(figure_curve(preset, ts), j_min=0)


@dataclass(frozen=True)
class PresetCheck:
    case_id: str
    ode_residual: float
    family_ok: bool
    verify_residual: float
    verify_scale: float
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.ode_residual <= ODE_CHECK_RTOL
            and self.family_ok
            and self.verify_residual <= CHECK_RTOL * self.verify_scale
        )


def check_preset(preset: ZooPreset) -> PresetCheck:
    """Cross-check a preset: ODE residual, affine family, and the polygon soliton verifier."""
    spec = to_spec(preset)
    t_min, t_max = preset.t_range
    residual = ode_residual(spec, np.linspace(t_min, t_max, ODE_CHECK_POINTS))

    notes: list[str] = []
    for s in CHECK_STEPS:
        try:
            affine_family(spec, s)
        except SolitonValidationError as exc:
            notes.append(str(exc))

    polygon = standard_polygon(preset)
    report = verify_soliton(polygon)
    if report.rank_deficient:
        notes.append("fitted map is not unique (affinely degenerate vertices)")
    scale = 1.0 + float(np.max(np.linalg.norm(polygon.vertices, axis=1)))
    return PresetCheck(
        case_id=preset.case_id,
        ode_residual=residual,
        family_ok=not any("not an affine image" in note for note in notes),
        verify_residual=report.max_residual,
        verify_scale=scale,
        notes=notes,
    )
