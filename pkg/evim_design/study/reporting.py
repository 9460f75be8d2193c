"""
``study.json``: the study report as a JSON document, and back.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from motor import constants as C
from motor.spec import SlotShape

from .runner import (
    Scenario,
    ScenarioOutcome,
    Selection,
    SelectionPolicy,
    StudyReport,
)

STUDY_FILE_NAME = "study.json"


def _scenario(data: dict[str, Any]) -> Scenario:
    return Scenario(
        pole_count=int(data["pole_count"]),
        rotor_slot_shape=SlotShape(data["rotor_slot_shape"]),
        rated_speed=float(data["rated_speed"]),
        label=data.get("label", ""),
    )


def study_to_dict(report: StudyReport) -> dict[str, Any]:
    outcomes = sorted(report.outcomes.values(), key=lambda o: o.scenario.key)
    return {
        "schema_version": C.REPORT_SCHEMA_VERSION,
        "policy": SelectionPolicy(report.policy).value,
        "scenarios": [s.as_dict() for s in report.scenarios],
        "curve_scenarios": [s.as_dict() for s in report.curve_scenarios],
        "outcomes": [o.as_dict() for o in outcomes],
        "best": report.best.as_dict() if report.best is not None else None,
    }


def study_from_dict(data: dict[str, Any]) -> StudyReport:
    outcomes = {}
    for item in data.get("outcomes", []):
        scenario = _scenario(item["scenario"])
        objective = item.get("objective")
        outcomes[scenario.key] = ScenarioOutcome(
            scenario=scenario,
            feasible=bool(item["feasible"]),
            values={k: float(v) for k, v in item.get("values", {}).items()},
            objective=math.inf if objective is None else float(objective),
            evaluations=int(item.get("evaluations", 0)),
            violated=tuple(item.get("violated", ())),
            error=item.get("error", ""),
        )
    best = data.get("best")
    selection = None
    if best:
        selection = Selection(
            scenario=_scenario(best["scenario"]),
            policy=SelectionPolicy(best["policy"]),
            rationale=best["rationale"],
            agrees_with_published=bool(best["agrees_with_published"]),
        )
    return StudyReport(
        scenarios=tuple(_scenario(s) for s in data.get("scenarios", [])),
        curve_scenarios=tuple(_scenario(s) for s in data.get("curve_scenarios", [])),
        outcomes=outcomes,
        policy=SelectionPolicy(data.get("policy", SelectionPolicy.EFFICIENCY)),
        best=selection,
    )


def save_study(report: StudyReport, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / STUDY_FILE_NAME
    path.write_text(
        json.dumps(study_to_dict(report), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    return path


def load_study(path: str | Path) -> StudyReport:
    """``path`` is a study output directory or the ``study.json`` inside it."""
    target = Path(path)
    if target.is_dir():
        target = target / STUDY_FILE_NAME
    return study_from_dict(json.loads(target.read_text(encoding="utf-8")))
