"""
JSON-ready views of performance reports and optimization results, and the
optimization trace as a table.
"""

from __future__ import annotations

from dataclasses import asdict
from typing import Any, Optional, TypedDict

import pandas as pd

from . import constants as C
from .constraints import ConstraintReport
from .optimizer import OptimizationResult
from .performance import PerformanceReport
from .spec import DESIGN_VARIABLES


class LossPayload(TypedDict):
    core: float
    core_hysteresis: float
    core_eddy: float
    core_by_order: dict[str, float]
    stator_ohmic: float
    rotor_ohmic: float
    ohmic: float
    mechanical: float
    stray_pulsation: float
    stray_skew: float
    stray_zigzag: float
    stray_bar_leakage: float
    total: float


def _losses(report: PerformanceReport) -> LossPayload:
    losses = report.losses
    return {
        "core": losses.core.total,
        "core_hysteresis": losses.core.hysteresis,
        "core_eddy": losses.core.eddy,
        "core_by_order": {
            str(order): value for order, value in losses.core.by_order().items()
        },
        "stator_ohmic": losses.stator_ohmic,
        "rotor_ohmic": losses.rotor_ohmic,
        "ohmic": losses.ohmic,
        "mechanical": losses.mechanical,
        "stray_pulsation": losses.stray.pulsation,
        "stray_skew": losses.stray.skew,
        "stray_zigzag": losses.stray.zigzag,
        "stray_bar_leakage": losses.stray.bar_leakage,
        "total": losses.total,
    }


def report_to_dict(
    report: PerformanceReport,
    constraint_report: Optional[ConstraintReport] = None,
) -> dict[str, Any]:
    """Stable snake_case document in SI units."""
    geometry = asdict(report.geometry)
    geometry["rotor_slot_shape"] = report.geometry.rotor_slot_shape.value
    data: dict[str, Any] = {
        "schema_version": C.REPORT_SCHEMA_VERSION,
        "design": report.design.as_dict(),
        **report.scalars(),
        "rated_torque_literal": report.rated_torque_literal,
        "breakdown_torque_literal": report.breakdown_torque_literal,
        "max_power_slip": report.max_power_slip,
        "losses": _losses(report),
        "mass": {**asdict(report.mass), "total": report.mass.total},
        "cost": {**asdict(report.cost), "total": report.cost.total},
        "flux_density": asdict(report.flux),
        "geometry": geometry,
        "winding": asdict(report.winding),
        "circuits": [c.as_dict() for c in report.circuits.values()],
        "harmonics": [s.as_dict() for s in report.solutions.values()],
    }
    if constraint_report is not None:
        data["constraints"] = constraint_report.as_dict()
    return data


def result_to_dict(
    result: OptimizationResult, include_report: bool = True
) -> dict[str, Any]:
    data: dict[str, Any] = {
        "schema_version": C.REPORT_SCHEMA_VERSION,
        "feasible": result.feasible,
        "best_objective": result.best_objective,
        "evaluations": result.evaluations,
        "termination": result.termination.value,
        "penalty_mu": result.penalty_mu,
        "start_index": result.start_index,
        "best_x": dict(zip(DESIGN_VARIABLES, map(float, result.best_x))),
    }
    if result.failure is not None:
        data["failure"] = result.failure.as_dict()
    if include_report and result.best_report is not None:
        data["report"] = report_to_dict(result.best_report, result.constraint_report)
    elif result.constraint_report is not None:
        data["constraints"] = result.constraint_report.as_dict()
    return data


def trace_frame(result: OptimizationResult) -> pd.DataFrame:
    rows = [
        {
            "iteration": entry.iteration,
            "move_kind": entry.move_kind.value,
            "objective": entry.objective,
            "step_scale": entry.step_scale,
            "penalty_mu": entry.penalty_mu,
            **dict(zip(DESIGN_VARIABLES, entry.x)),
        }
        for entry in result.trace
    ]
    columns = [
        "iteration",
        "move_kind",
        "objective",
        "step_scale",
        "penalty_mu",
        *DESIGN_VARIABLES,
    ]
    return pd.DataFrame(rows, columns=columns)
