"""Figure specifications: JSON files naming inputs, kind, and output."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["FigureSpec", "SpecError", "KINDS", "read_columns"]

# figure kind -> {input name: required columns}
KINDS = {
    "radius_curve": {"radius": ["bandwidth_hz", "rate_bps", "radius_m"]},
    "rate_set": {"rates": ["tau", "rate_bps", "psi1", "psi2"]},
    "trajectories": {
        "states": ["step", "time_s", "agent", "pos_x_m", "pos_y_m"],
        "powers": ["window", "step", "agent", "power_w", "comm_radius_m"],
    },
    "error_series": {"errors": ["step", "time_s", "max_pos_error_m", "max_vel_error_mps"]},
    "power_series": {"powers": ["window", "step", "time_s", "agent", "power_w"]},
    "mc_trend": {"montecarlo": ["tau", "rate_bps", "mean_error_m", "mean_power_w"]},
}


class SpecError(Exception):
    """Invalid figure specification or nonconforming input CSV."""


@dataclass
class FigureSpec:
    kind: str
    inputs: dict
    output: Path
    title: str = ""
    x_label: str = ""
    y_label: str = ""
    reference_value: float | None = None
    x_scale: float = 1.0
    y_scale: float = 1.0
    dpi: int = 120
    circle_count: int = 8  # communication circles drawn on trajectory plots

    @classmethod
    def from_file(cls, path) -> "FigureSpec":
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise SpecError(f"figure spec not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise SpecError(f"figure spec {path} is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise SpecError("figure spec must be a JSON object")
        kind = raw.get("kind")
        if kind not in KINDS:
            raise SpecError(f"unknown figure kind {kind!r}; expected one of {sorted(KINDS)}")
        inputs = raw.get("inputs")
        if not isinstance(inputs, dict):
            raise SpecError("figure spec needs an 'inputs' mapping")
        missing = [name for name in KINDS[kind] if name not in inputs]
        if missing:
            raise SpecError(f"figure kind {kind!r} needs inputs {missing}")
        output = raw.get("output")
        if not output:
            raise SpecError("figure spec needs an 'output' path")
        base = path.parent
        return cls(
            kind=kind,
            inputs={name: base / p if not Path(p).is_absolute() else Path(p)
                    for name, p in inputs.items()},
            output=base / output if not Path(output).is_absolute() else Path(output),
            title=str(raw.get("title", "")),
            x_label=str(raw.get("x_label", "")),
            y_label=str(raw.get("y_label", "")),
            reference_value=(None if raw.get("reference_value") is None
                             else float(raw["reference_value"])),
            x_scale=float(raw.get("x_scale", 1.0)),
            y_scale=float(raw.get("y_scale", 1.0)),
            dpi=int(raw.get("dpi", 120)),
            circle_count=int(raw.get("circle_count", 8)),
        )


def read_columns(path: Path, required: list) -> dict:
    """Load a CSV as {column: list of floats}, enforcing required columns."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            for column in required:
                if column not in header:
                    raise SpecError(f"input {path} is missing required column '{column}'")
            rows = list(reader)
    except FileNotFoundError as exc:
        raise SpecError(f"input CSV not found: {path}") from exc
    out = {column: [] for column in header}
    for row in rows:
        for column in header:
            value = row[column]
            try:
                out[column].append(float(value))
            except (TypeError, ValueError) as exc:
                raise SpecError(f"non-numeric value {value!r} in column '{column}' of {path}") from exc
    return out
