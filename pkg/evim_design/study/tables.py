"""
Comparison tables and speed-trend curves of a study, built with pandas.

CSV output keeps full float precision so it reads back to the same numbers;
the text table rounds each row the way the published comparison tables do.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import pandas as pd
from django.db import models

from motor.spec import SlotShape

from .runner import ScenarioOutcome, StudyReport


class TableFormat(models.TextChoices):
    CSV = "csv", "CSV"
    TEXT = "text", "Aligned text"


@dataclass(frozen=True)
class TableRow:
    field: str
    label: str
    digits: int
    scale: float = 1.0


DESIGN_TABLE_ROWS: tuple[TableRow, ...] = (
    TableRow("core_length", "L (m)", 4),
    TableRow("stator_outer_diameter", "D_o (m)", 4),
    TableRow("stator_inner_diameter", "D (m)", 4),
    TableRow("mass", "W (kg)", 2),
    TableRow("volume", "V (m³)", 4),
    TableRow("cost", "C ($)", 1),
    TableRow("inertia", "J (kg m²)", 4),
    TableRow("efficiency", "η (%)", 2, 100.0),
    TableRow("power_factor", "pf", 3),
    TableRow("temperature_rise", "T (°C)", 2),
    TableRow("breakdown_torque_max", "T_pm (N m)", 3),
    TableRow("breakdown_torque_base", "T_pb (N m)", 2),
    TableRow("stator_slot_width", "W_s (m)", 4),
    TableRow("stator_slot_depth", "d_s (m)", 4),
    TableRow("rotor_slot_width", "W_r (m)", 4),
    TableRow("rotor_slot_depth", "d_r (m)", 4),
)
# round rotor slots have one size
ROUND_SLOT_ROW = TableRow("rotor_slot_width", "W_r=d_r (m)", 4)

COLUMN_NAMES = ["P", "Nominal speed (rpm)"]
INDEX_NAME = "parameter"

CURVE_PARAMETERS: tuple[str, ...] = (
    "stator_inner_diameter",
    "core_length",
    "volume",
    "mass",
    "inertia",
    "cost",
    "breakdown_torque_max",
    "breakdown_torque_base",
    "efficiency",
    "power_factor",
)
CURVE_COLUMNS = ["rated_speed", "value", "pole_count"]


def table_rows(rotor_slot_shape: SlotShape) -> tuple[TableRow, ...]:
    if SlotShape(rotor_slot_shape) != SlotShape.ROUND:
        return DESIGN_TABLE_ROWS
    return (*DESIGN_TABLE_ROWS[:-2], ROUND_SLOT_ROW)


# ---------------------------
# Design tables
# ---------------------------


def _columns(outcomes: Sequence[ScenarioOutcome]) -> list[ScenarioOutcome]:
    return sorted(
        outcomes, key=lambda o: (o.scenario.pole_count, o.scenario.rated_speed)
    )


def design_table(
    outcomes: Iterable[ScenarioOutcome],
    rotor_slot_shape: SlotShape = SlotShape.RECTANGULAR,
) -> pd.DataFrame:
    """
    Parameters as rows, one column per (pole count, rated speed) of the given
    rotor slot shape. Missing designs show as NaN.
    """
    shape = SlotShape(rotor_slot_shape)
    selected = _columns(
        [o for o in outcomes if o.scenario.rotor_slot_shape == shape]
    )
    rows = table_rows(shape)
    index = pd.Index([row.label for row in rows], name=INDEX_NAME)
    columns = pd.MultiIndex.from_arrays(
        [
            [o.scenario.pole_count for o in selected],
            [o.scenario.rated_speed for o in selected],
        ],
        names=COLUMN_NAMES,
    )
    if not selected:
        return pd.DataFrame(index=index, columns=columns, dtype=float)
    data = [
        [o.value(row.field) * row.scale for o in selected] for row in rows
    ]
    return pd.DataFrame(data, index=index, columns=columns, dtype=float)


def _text_table(frame: pd.DataFrame, rows: Sequence[TableRow]) -> str:
    digits = {row.label: row.digits for row in rows}
    formatted = frame.apply(
        lambda series: series.map(
            lambda v: "-" if math.isnan(v) else f"{v:.{digits[series.name]}f}"
        ),
        axis=1,
    )
    formatted.columns = pd.MultiIndex.from_tuples(
        [(str(p), f"{s:g}") for p, s in frame.columns], names=COLUMN_NAMES
    )
    return formatted.to_string()


def emit_design_table(
    report: StudyReport,
    fmt: str = TableFormat.CSV,
    rotor_slot_shape: SlotShape = SlotShape.RECTANGULAR,
) -> str:
    """Returns an empty string when the study has no column of that shape."""
    if fmt not in TableFormat.values:
        raise ValueError(f"Unknown table format: {fmt}")
    outcomes = report.grid_outcomes()
    frame = design_table(outcomes, rotor_slot_shape)
    if frame.columns.empty:
        return ""
    if fmt == TableFormat.CSV:
        return frame.to_csv(lineterminator="\n")

    shape = SlotShape(rotor_slot_shape)
    lines = [
        f"Rectangular stator slots, {shape.label.lower()} rotor slots",
        "",
        _text_table(frame, table_rows(shape)),
    ]
    infeasible = [
        o
        for o in _columns(outcomes)
        if o.scenario.rotor_slot_shape == shape and not o.feasible
    ]
    if infeasible:
        lines.append("")
        for o in infeasible:
            reason = ", ".join(o.violated) or o.error or "no design"
            lines.append(f"Infeasible: {o.scenario.label} ({reason})")
    return "\n".join(lines) + "\n"


def parse_design_table(text: str) -> pd.DataFrame:
    """Reads a CSV design table back into the frame ``design_table`` builds."""
    frame = pd.read_csv(
        io.StringIO(text),
        header=[0, 1],
        index_col=0,
        float_precision="round_trip",
    )
    frame.columns = pd.MultiIndex.from_tuples(
        [(int(p), float(s)) for p, s in frame.columns], names=COLUMN_NAMES
    )
    frame.index.name = INDEX_NAME
    return frame.astype(float)


# ---------------------------
# Speed-trend curves
# ---------------------------


def curve_file_name(parameter: str, pole_count: int) -> str:
    return f"curves_{parameter}_{pole_count}p.csv"


def curve_frames(report: StudyReport) -> dict[str, pd.DataFrame]:
    """One frame per parameter and pole count, one row per swept speed."""
    by_poles: dict[int, list[ScenarioOutcome]] = {}
    for scenario in report.curve_scenarios:
        by_poles.setdefault(scenario.pole_count, []).append(
            report.outcome(scenario)
        )
    frames: dict[str, pd.DataFrame] = {}
    for pole_count in sorted(by_poles):
        outcomes = sorted(by_poles[pole_count], key=lambda o: o.scenario.rated_speed)
        for parameter in CURVE_PARAMETERS:
            frames[curve_file_name(parameter, pole_count)] = pd.DataFrame(
                {
                    "rated_speed": [o.scenario.rated_speed for o in outcomes],
                    "value": [o.value(parameter) for o in outcomes],
                    "pole_count": [pole_count] * len(outcomes),
                },
                columns=CURVE_COLUMNS,
            )
    return frames


def emit_speed_curves(report: StudyReport, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, frame in curve_frames(report).items():
        path = out / name
        frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
        written.append(path)
    return written
