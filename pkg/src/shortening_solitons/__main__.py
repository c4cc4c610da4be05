from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
from tqdm import tqdm

from utils.tables import TextTable

from .config import Settings, load_config
from .errors import SolitonLibError
from .models import AffineMap, Polygon
from .output import (
    polygon_csv,
    preset_file_stem,
    read_polygon_csv,
    render_svg,
    report_json,
    samples_csv,
    write_text,
)
from .polygon import eigenpolygon, midpoint_map, shorten_T, soliton_recursion, verify_soliton
from .semidiscrete import evolve_closed
from .zoo import CASE_1C_VARIANTS, PRESET_IDS, ZooPreset, case_1c, check_preset, emit_samples, get_preset, preset_table

EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
MIN_SHORTEN_WINDOW = 3


def _parse_args(argv: list[str] | None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="shortening-solitons",
        description="Discrete curve shortening, its affine solitons and the planar soliton zoo",
    )
    parser.add_argument("--config", type=Path, default=None, help="Path to YAML config file")
    sub = parser.add_subparsers(dest="command", required=True)

    zoo = sub.add_parser("zoo", help="Sample a zoo preset as CSV or SVG")
    zoo.add_argument("preset", help=f"one of {', '.join(PRESET_IDS)} or 'all'")
    zoo.add_argument("--points", type=int, default=None, help="number of samples")
    zoo.add_argument("--format", choices=("csv", "svg"), default="csv")
    zoo.add_argument("--variant", choices=tuple(CASE_1C_VARIANTS), default="sin", help="curve of case 1c")
    zoo.add_argument("--out", type=Path, default=None, help="output file (stdout if omitted)")
    zoo.add_argument("--out-dir", type=Path, default=None, help="output directory for 'all'")

    shorten = sub.add_parser("shorten", help="Apply T_alpha (or the midpoint map) to a CSV polygon")
    shorten.add_argument("input", type=Path)
    shorten.add_argument("--alpha", type=float, default=None)
    shorten.add_argument("--iterations", type=int, default=1)
    shorten.add_argument("--midpoint", action="store_true", help="apply M instead of T_alpha")
    shorten.add_argument("--out", type=Path, default=None)

    evolve = sub.add_parser("evolve", help="Run the semidiscrete flow on a closed CSV polygon")
    evolve.add_argument("input", type=Path)
    evolve.add_argument("--s", type=float, required=True, help="flow time")
    evolve.add_argument("--out", type=Path, default=None)

    verify = sub.add_parser("verify", help="Check T(x)_j = A x_j + b and print the report as JSON")
    verify.add_argument("input", type=Path)
    verify.add_argument(
        "--map",
        default=None,
        help='JSON {"A": [[...]], "b": [...]}, a JSON file, or "scale MU"; fitted if omitted',
    )
    verify.add_argument("--tol", type=float, default=None)

    eigen = sub.add_parser("eigen", help="Regular eigenpolygon z_j = exp(2 pi i j k / N)")
    eigen.add_argument("N", type=int)
    eigen.add_argument("k", type=int)
    eigen.add_argument("--format", choices=("csv", "svg"), default="csv")
    eigen.add_argument("--out", type=Path, default=None)

    recursion = sub.add_parser("recursion", help="Soliton polygon from two vertices and (A, b)")
    recursion.add_argument("--A", dest="matrix", required=True, help="JSON matrix")
    recursion.add_argument("--b", dest="shift", required=True, help="JSON vector")
    recursion.add_argument("--u", required=True, help="JSON vector x_{j0}")
    recursion.add_argument("--v", required=True, help="JSON vector x_{j0+1}")
    recursion.add_argument("--j0", type=int, default=0)
    recursion.add_argument("--range", type=int, nargs=2, metavar=("JMIN", "JMAX"), required=True)
    recursion.add_argument("--out", type=Path, default=None)

    check = sub.add_parser("check", help="Cross-check zoo presets against the soliton verifier")
    check.add_argument("preset", nargs="?", default="all")

    return parser.parse_args(argv)


def _resolve_preset(preset_id: str, variant: str = "sin") -> ZooPreset:
    if preset_id == "1c":
        return case_1c(variant)
    return get_preset(preset_id)


def _render_preset(preset: ZooPreset, n_points: int, fmt: str, settings: Settings) -> str:
    samples = emit_samples(preset, n_points)
    if fmt == "csv":
        return samples_csv(samples, settings.float_digits)
    points = np.array([point for _, point in samples])
    return render_svg(
        points,
        stroke_fraction=settings.svg_stroke_fraction,
        size=settings.svg_size,
        title=preset.figure,
    )


def _render_polygon(polygon: Polygon, fmt: str, settings: Settings, title: str) -> str:
    if fmt == "csv":
        return polygon_csv(polygon, digits=settings.float_digits)
    return render_svg(
        polygon.vertices,
        closed=polygon.is_closed,
        stroke_fraction=settings.svg_stroke_fraction,
        size=settings.svg_size,
        title=title,
    )


def cmd_zoo(args: argparse.Namespace, settings: Settings) -> None:
    n_points = args.points if args.points is not None else settings.default_points
    if args.preset != "all":
        preset = _resolve_preset(args.preset, args.variant)
        path = write_text(args.out, _render_preset(preset, n_points, args.format, settings))
        if path is not None:
            print(f"Wrote {preset.case_id} ({n_points} points) to {path}", file=sys.stderr)
        return

    out_dir = args.out_dir or Path(settings.output_dir)
    presets = preset_table() + [case_1c(v) for v in CASE_1C_VARIANTS if v != "sin"]
    for rank, preset in enumerate(tqdm(presets, desc="Writing presets", file=sys.stderr), start=1):
        stem = preset_file_stem(rank, preset.case_id, preset.figure)
        write_text(out_dir / f"{stem}.{args.format}", _render_preset(preset, n_points, args.format, settings))
    print(f"Saved {len(presets)} presets to {out_dir}", file=sys.stderr)


def cmd_shorten(args: argparse.Namespace, settings: Settings) -> None:
    alpha = args.alpha if args.alpha is not None else settings.default_alpha
    if args.iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {args.iterations}")
    polygon = read_polygon_csv(args.input)
    if not polygon.is_closed:
        shrink = 1 if args.midpoint else 2
        remaining = polygon.count - shrink * args.iterations
        if remaining < MIN_SHORTEN_WINDOW:
            raise ValueError(
                f"open window of {polygon.count} vertices would shrink to {remaining} "
                f"after {args.iterations} iterations (minimum {MIN_SHORTEN_WINDOW})"
            )
    for _ in range(args.iterations):
        polygon = midpoint_map(polygon) if args.midpoint else shorten_T(polygon, alpha)
    write_text(args.out, polygon_csv(polygon, digits=settings.float_digits))


def cmd_evolve(args: argparse.Namespace, settings: Settings) -> None:
    polygon = evolve_closed(read_polygon_csv(args.input), args.s)
    write_text(args.out, polygon_csv(polygon, digits=settings.float_digits))


def _parse_map(text: str, dim: int) -> AffineMap:
    parts = text.split()
    if parts and parts[0] == "scale":
        if len(parts) != 2:
            raise ValueError(f'expected "scale MU", got {text!r}')
        return AffineMap.scaling(float(parts[1]), dim)
    candidate = Path(text)
    raw = json.loads(candidate.read_text() if candidate.suffix == ".json" else text)
    if not isinstance(raw, dict) or "A" not in raw or "b" not in raw:
        raise ValueError('map JSON must be an object with keys "A" and "b"')
    return AffineMap(raw["A"], raw["b"])


def cmd_verify(args: argparse.Namespace, settings: Settings) -> None:
    tol = args.tol if args.tol is not None else settings.verify_tol
    polygon = read_polygon_csv(args.input)
    affine = _parse_map(args.map, polygon.dim) if args.map else None
    report = verify_soliton(polygon, affine)
    print(report_json(report))
    if report.rank_deficient:
        print("Fitted map is not unique: vertices are affinely degenerate.", file=sys.stderr)
    if report.max_residual > tol:
        print(f"Not a soliton: residual {report.max_residual:.3e} > {tol:.1e}", file=sys.stderr)
        raise SystemExit(EXIT_VERIFY_FAILED)


def cmd_eigen(args: argparse.Namespace, settings: Settings) -> None:
    polygon, mu = eigenpolygon(args.N, args.k)
    print(f"mu = {mu!r}", file=sys.stderr)
    write_text(args.out, _render_polygon(polygon, args.format, settings, f"z^({args.k}), N={args.N}"))


def cmd_recursion(args: argparse.Namespace, settings: Settings) -> None:
    affine = AffineMap(json.loads(args.matrix), json.loads(args.shift))
    j_min, j_max = args.range
    polygon = soliton_recursion(affine, json.loads(args.u), json.loads(args.v), args.j0, j_min, j_max)
    write_text(args.out, polygon_csv(polygon, digits=settings.float_digits))


def cmd_check(args: argparse.Namespace, settings: Settings) -> None:
    presets = preset_table() if args.preset == "all" else [get_preset(args.preset)]
    table = TextTable(("preset", "ode residual", "family", "verify residual", "status"))
    failures = 0
    for preset in tqdm(presets, desc="Checking presets", file=sys.stderr):
        result = check_preset(preset)
        failures += not result.passed
        table.add(
            preset.case_id,
            f"{result.ode_residual:.2e}",
            "ok" if result.family_ok else "FAILED",
            f"{result.verify_residual:.2e}",
            "pass" if result.passed else "FAIL",
        )
        for note in result.notes:
            print(f"{preset.case_id}: {note}", file=sys.stderr)
    print(table.render_psql(title="Zoo cross-check"))
    if failures:
        print(f"{failures} of {len(presets)} presets failed.", file=sys.stderr)
        raise SystemExit(EXIT_VERIFY_FAILED)


COMMANDS = {
    "zoo": cmd_zoo,
    "shorten": cmd_shorten,
    "evolve": cmd_evolve,
    "verify": cmd_verify,
    "eigen": cmd_eigen,
    "recursion": cmd_recursion,
    "check": cmd_check,
}


def main(argv: list[str] | None = None) -> None:
    args = _parse_args(argv)
    try:
        settings = load_config(args.config)
    except SystemExit as exc:
        # load_config stops with a message; config problems are usage errors
        print(f"error: {exc.code}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE) from exc
    try:
        COMMANDS[args.command](args, settings)
    except (SolitonLibError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE) from exc


if __name__ == "__main__":
    main()
