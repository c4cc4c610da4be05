from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import yaml

DEFAULT_CONFIG_PATH = Path("my_config") / "config.yaml"


@dataclass(frozen=True)
class Settings:
    default_points: int
    verify_tol: float
    default_alpha: float
    float_digits: int
    svg_stroke_fraction: float
    svg_size: int
    output_dir: str

    @classmethod
    def defaults(cls) -> Settings:
        return cls(
            default_points=1000,
            verify_tol=1e-6,
            default_alpha=0.25,
            float_digits=17,
            svg_stroke_fraction=0.005,
            svg_size=800,
            output_dir="data",
        )


def _is_number(value: object) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def load_config(config_path: Path | None = None) -> Settings:
    """Read Settings from YAML; a missing file at the default location means built-in defaults."""
    if config_path is None:
        if not DEFAULT_CONFIG_PATH.exists():
            return Settings.defaults()
        config_path = DEFAULT_CONFIG_PATH
    if not config_path.exists():
        raise SystemExit(f"Config file not found: {config_path}")
    raw_config = yaml.safe_load(config_path.read_text()) or {}
    if not isinstance(raw_config, dict):
        raise SystemExit("Config file must contain a YAML object at the top level.")

    defaults = Settings.defaults()
    default_points = raw_config.get("default_points", defaults.default_points)
    verify_tol = raw_config.get("verify_tol", defaults.verify_tol)
    default_alpha = raw_config.get("default_alpha", defaults.default_alpha)
    float_digits = raw_config.get("float_digits", defaults.float_digits)
    svg_stroke_fraction = raw_config.get("svg_stroke_fraction", defaults.svg_stroke_fraction)
    svg_size = raw_config.get("svg_size", defaults.svg_size)
    output_dir = raw_config.get("output_dir", defaults.output_dir)

    if not isinstance(default_points, int) or isinstance(default_points, bool) or default_points < 2:
        raise SystemExit("default_points must be an integer >= 2")
    if not _is_number(verify_tol) or verify_tol <= 0:
        raise SystemExit("verify_tol must be a number > 0")
    if not _is_number(default_alpha) or default_alpha == 0:
        raise SystemExit("default_alpha must be a non-zero number")
    if not isinstance(float_digits, int) or not 1 <= float_digits <= 17:
        raise SystemExit("float_digits must be an integer between 1 and 17")
    if not _is_number(svg_stroke_fraction) or not 0 < svg_stroke_fraction < 1:
        raise SystemExit("svg_stroke_fraction must be a number in (0, 1)")
    if not isinstance(svg_size, int) or svg_size < 1:
        raise SystemExit("svg_size must be an integer >= 1")
    if not isinstance(output_dir, str) or not output_dir.strip():
        raise SystemExit("output_dir must be a non-empty string")

    return Settings(
        default_points=default_points,
        verify_tol=float(verify_tol),
        default_alpha=float(default_alpha),
        float_digits=float_digits,
        svg_stroke_fraction=float(svg_stroke_fraction),
        svg_size=svg_size,
        output_dir=output_dir,
    )
