import warnings

import pytest

from formlink_figures.cli import main
from formlink_figures.spec import FigureSpec, SpecError
from formlink_figures.render import render

from conftest import make_spec, write

INPUTS_BY_KIND = {
    "radius_curve": ["radius"],
    "rate_set": ["rates"],
    "trajectories": ["states", "powers"],
    "error_series": ["errors"],
    "power_series": ["powers"],
    "mc_trend": ["montecarlo"],
}


@pytest.mark.parametrize("kind,names", sorted(INPUTS_BY_KIND.items()))
def test_every_kind_renders_a_png(tmp_path, sample_csvs, kind, names):
    spec_path = make_spec(tmp_path, kind, {n: sample_csvs[n] for n in names},
                          output=f"{kind}.png", reference_value=3.0)
    assert main(["--spec", str(spec_path)]) == 0
    out = tmp_path / f"{kind}.png"
    assert out.exists()
    data = out.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(data) > 1000


@pytest.mark.parametrize("kind,names", sorted(INPUTS_BY_KIND.items()))
def test_rerender_is_byte_identical(tmp_path, sample_csvs, kind, names):
    spec_path = make_spec(tmp_path, kind, {n: sample_csvs[n] for n in names},
                          output=f"{kind}.png")
    spec = FigureSpec.from_file(spec_path)
    render(spec)
    first = spec.output.read_bytes()
    render(spec)
    assert spec.output.read_bytes() == first


def test_missing_column_names_the_column(tmp_path, sample_csvs, capsys):
    bad = write(tmp_path / "bad_errors.csv", ["step", "time_s", "max_pos_error_m"],
                [[0, 0.0, 1.0]])
    spec_path = make_spec(tmp_path, "error_series", {"errors": bad})
    assert main(["--spec", str(spec_path)]) == 1
    assert "max_vel_error_mps" in capsys.readouterr().err


def test_empty_rows_yield_empty_axes_and_success(tmp_path):
    empty = write(tmp_path / "empty.csv",
                  ["step", "time_s", "max_pos_error_m", "max_vel_error_mps"], [])
    spec_path = make_spec(tmp_path, "error_series", {"errors": empty}, output="empty.png")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert main(["--spec", str(spec_path)]) == 0
    assert any("no data rows" in str(w.message) for w in caught)
    assert (tmp_path / "empty.png").exists()


def test_unknown_kind_rejected(tmp_path, sample_csvs):
    spec_path = tmp_path / "s.json"
    spec_path.write_text('{"kind": "pie", "inputs": {}, "output": "x.png"}')
    with pytest.raises(SpecError):
        FigureSpec.from_file(spec_path)
    assert main(["--spec", str(spec_path)]) == 1


def test_missing_input_entry_rejected(tmp_path):
    spec_path = tmp_path / "s.json"
    spec_path.write_text('{"kind": "trajectories", "inputs": {"states": "a.csv"}, "output": "x.png"}')
    with pytest.raises(SpecError, match="powers"):
        FigureSpec.from_file(spec_path)


def test_unit_scaling_changes_output(tmp_path, sample_csvs):
    base = make_spec(tmp_path, "error_series", {"errors": sample_csvs["errors"]},
                     output="a.png")
    scaled = make_spec(tmp_path, "error_series", {"errors": sample_csvs["errors"]},
                       output="b.png", y_scale=100.0)
    # rewrite the scaled spec under a different json name to avoid collision
    render(FigureSpec.from_file(base))
    render(FigureSpec.from_file(scaled))
    assert (tmp_path / "a.png").read_bytes() != (tmp_path / "b.png").read_bytes()


def test_nonnumeric_cell_rejected(tmp_path):
    bad = write(tmp_path / "bad.csv",
                ["step", "time_s", "max_pos_error_m", "max_vel_error_mps"],
                [[0, 0.0, "oops", 0.0]])
    spec_path = make_spec(tmp_path, "error_series", {"errors": bad})
    with pytest.raises(SpecError, match="max_pos_error_m"):
        render(FigureSpec.from_file(spec_path))
