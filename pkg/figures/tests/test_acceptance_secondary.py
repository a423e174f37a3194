"""End-to-end acceptance: render every figure kind from real CLI outputs.

Drives the installed ``formlink`` CLI (the external interface) on the
bundled six-UAV scenario at a reduced horizon, then renders all six figure
kinds and checks byte-identical rerendering. Skipped when the CLI or the
bundled configs are unavailable.
"""

import pathlib
import shutil
import subprocess

import pytest

from formlink_figures.cli import main
from formlink_figures.spec import FigureSpec
from formlink_figures.render import render

from conftest import make_spec

PRIMARY_ROOT = pathlib.Path(__file__).resolve().parents[2]
CONFIG_DIR = PRIMARY_ROOT / "configs"

pytestmark = pytest.mark.skipif(
    shutil.which("formlink") is None or not CONFIG_DIR.is_dir(),
    reason="formlink CLI or bundled configs not available",
)


def run_cli(*args):
    subprocess.run(["formlink", *args], check=True, capture_output=True)


@pytest.fixture(scope="module")
def cli_outputs(tmp_path_factory):
    base = tmp_path_factory.mktemp("cli")
    scenario = (CONFIG_DIR / "six_uav.yaml").read_text()
    short = base / "six_uav_short.yaml"
    short.write_text(scenario.replace("horizon_steps: 2000", "horizon_steps: 120"))
    sweep = (CONFIG_DIR / "monte_carlo.yaml").read_text()
    short_sweep = base / "sweep_short.yaml"
    short_sweep.write_text(sweep.replace("horizon_steps: 2000", "horizon_steps: 120"))

    run_cli("radius", "--config", str(CONFIG_DIR / "table1.yaml"), "--out", str(base / "radius"))
    run_cli("rates", "--config", str(CONFIG_DIR / "rate_plan.yaml"), "--out", str(base / "rates"))
    run_cli("simulate", "--config", str(short), "--seed", "0", "--out", str(base / "sim"))
    run_cli("montecarlo", "--config", str(short_sweep), "--runs", "2", "--seed", "0",
            "--out", str(base / "mc"))
    return {
        "radius": base / "radius" / "radius.csv",
        "rates": base / "rates" / "rates.csv",
        "states": base / "sim" / "states.csv",
        "powers": base / "sim" / "powers.csv",
        "errors": base / "sim" / "errors.csv",
        "montecarlo": base / "mc" / "montecarlo.csv",
    }


KIND_INPUTS = {
    "radius_curve": ["radius"],
    "rate_set": ["rates"],
    "trajectories": ["states", "powers"],
    "error_series": ["errors"],
    "power_series": ["powers"],
    "mc_trend": ["montecarlo"],
}


def test_all_kinds_render_from_real_outputs(tmp_path, cli_outputs):
    rendered = []
    for kind, names in sorted(KIND_INPUTS.items()):
        spec_path = make_spec(
            tmp_path, kind, {n: cli_outputs[n] for n in names},
            output=f"{kind}.png", reference_value=3.0,
        )
        assert main(["--spec", str(spec_path)]) == 0
        out = tmp_path / f"{kind}.png"
        assert out.exists() and out.stat().st_size > 1000
        rendered.append(kind)
    assert len(rendered) == len(KIND_INPUTS)


def test_rerendering_real_outputs_is_byte_identical(tmp_path, cli_outputs):
    for kind, names in sorted(KIND_INPUTS.items()):
        spec_path = make_spec(
            tmp_path, kind, {n: cli_outputs[n] for n in names},
            output=f"{kind}.png", reference_value=3.0,
        )
        spec = FigureSpec.from_file(spec_path)
        render(spec)
        first = spec.output.read_bytes()
        render(spec)
        assert spec.output.read_bytes() == first, f"{kind} rerender differs"
