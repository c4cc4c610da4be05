import pytest

from shortening_solitons.config import Settings, load_config


def test_defaults_without_config_file(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert load_config() == Settings.defaults()


def test_partial_config_keeps_other_defaults(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("verify_tol: 1.0e-9\nsvg_size: 300\n")
    settings = load_config(path)
    assert settings.verify_tol == 1e-9
    assert settings.svg_size == 300
    assert settings.default_points == Settings.defaults().default_points


@pytest.mark.parametrize(
    "body, message",
    [
        ("- 1\n- 2\n", "YAML object"),
        ("default_points: 1\n", "default_points"),
        ("verify_tol: -1\n", "verify_tol"),
        ("default_alpha: 0\n", "default_alpha"),
        ("float_digits: 30\n", "float_digits"),
        ("svg_stroke_fraction: 2\n", "svg_stroke_fraction"),
        ("output_dir: ''\n", "output_dir"),
        ("default_points: true\n", "default_points"),
    ],
)
def test_invalid_values(tmp_path, body, message):
    path = tmp_path / "config.yaml"
    path.write_text(body)
    with pytest.raises(SystemExit) as info:
        load_config(path)
    assert message in str(info.value.code)
