"""
The comparison study: pole counts times rotor slot shapes times rated
speeds, each scenario optimized independently, plus the optional speed
sweeps behind the trend curves and the best-design selection.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Optional, Sequence

from django.db import models

from motor.constraints import apply_overrides, default_constraints
from motor.exceptions import MotorDesignError, NoFeasibleScenario
from motor.optimizer import HJConfig, OptimizationResult, optimize_design
from motor.spec import (
    MaterialCatalog,
    MotorSpec,
    SlotShape,
    default_slot_counts,
)

logger = logging.getLogger(__name__)

DEFAULT_POLE_COUNTS: tuple[int, ...] = (2, 4)
DEFAULT_ROTOR_SLOT_SHAPES: tuple[SlotShape, ...] = (
    SlotShape.RECTANGULAR,
    SlotShape.ROUND,
)
DEFAULT_RATED_SPEEDS: tuple[float, ...] = (1600.0, 1800.0, 2000.0)
# plotted sweep ranges of the trend curves [rpm]
DEFAULT_CURVE_SPEEDS: dict[int, tuple[float, ...]] = {
    2: tuple(float(s) for s in range(1400, 2801, 200)),
    4: tuple(float(s) for s in range(1400, 2101, 100)),
}

# Published pick: 2-pole, rectangular stator and rotor slots, 1800 rpm.
PUBLISHED_CHOICE: tuple[int, str, float] = (2, SlotShape.RECTANGULAR.value, 1800.0)


class SelectionPolicy(models.TextChoices):
    EFFICIENCY = "efficiency", "Highest efficiency"
    MASS = "mass", "Lowest mass"
    COST = "cost", "Lowest cost"


# Values carried from each optimized design into tables, curves and
# study.json, keyed the way the rest of the study refers to them.
TABULAR_FIELDS: dict[str, str] = {
    "core_length": "design.core_length",
    "stator_outer_diameter": "geometry.stator_outer_diameter",
    "stator_inner_diameter": "design.stator_inner_diameter",
    "mass": "mass.total",
    "volume": "mass.active_volume",
    "cost": "cost.total",
    "inertia": "inertia",
    "efficiency": "efficiency",
    "power_factor": "power_factor",
    "temperature_rise": "temperature_rise",
    "breakdown_torque_max": "breakdown_torque_max",
    "breakdown_torque_base": "breakdown_torque_base",
    "stator_slot_width": "design.stator_slot_width",
    "stator_slot_depth": "design.stator_slot_depth",
    "rotor_slot_width": "design.rotor_slot_width",
    "rotor_slot_depth": "design.rotor_slot_depth",
}


# ---------------------------
# Scenarios and configuration
# ---------------------------


@dataclass(frozen=True)
class Scenario:
    pole_count: int
    rotor_slot_shape: SlotShape
    rated_speed: float
    label: str = ""

    def __post_init__(self) -> None:
        if self.pole_count not in DEFAULT_POLE_COUNTS:
            raise ValueError(f"Unsupported pole count: {self.pole_count}")
        if not self.rated_speed > 0:
            raise ValueError("rated_speed must be > 0")
        object.__setattr__(self, "rotor_slot_shape", SlotShape(self.rotor_slot_shape))
        if not self.label:
            object.__setattr__(
                self,
                "label",
                f"{self.pole_count}p-{self.rotor_slot_shape.value}-{self.rated_speed:g}",
            )

    @property
    def key(self) -> tuple[int, str, float]:
        return (self.pole_count, self.rotor_slot_shape.value, self.rated_speed)

    def as_dict(self) -> dict[str, Any]:
        return {
            "pole_count": self.pole_count,
            "rotor_slot_shape": self.rotor_slot_shape.value,
            "rated_speed": self.rated_speed,
            "label": self.label,
        }


@dataclass(frozen=True)
class StudyConfig:
    """
    ``base_spec`` supplies everything a scenario does not set itself:
    ratings, maximum speed, harmonic spectrum and model options.
    """

    base_spec: MotorSpec = field(default_factory=MotorSpec)
    materials: MaterialCatalog = field(default_factory=MaterialCatalog)
    hj: HJConfig = field(default_factory=HJConfig)
    pole_counts: tuple[int, ...] = DEFAULT_POLE_COUNTS
    rotor_slot_shapes: tuple[SlotShape, ...] = DEFAULT_ROTOR_SLOT_SHAPES
    rated_speeds: tuple[float, ...] = DEFAULT_RATED_SPEEDS
    curves: bool = False
    curve_speeds: Mapping[int, tuple[float, ...]] = field(
        default_factory=lambda: dict(DEFAULT_CURVE_SPEEDS)
    )
    constraint_overrides: Mapping[str, Mapping[str, object]] = field(
        default_factory=dict
    )
    policy: SelectionPolicy = SelectionPolicy.EFFICIENCY
    threads: int = 1

    def spec_for(self, scenario: Scenario) -> MotorSpec:
        stator_slots, rotor_slots = default_slot_counts(scenario.pole_count)
        return replace(
            self.base_spec,
            pole_count=scenario.pole_count,
            rated_speed=scenario.rated_speed,
            stator_slots=stator_slots,
            rotor_slots=rotor_slots,
            rotor_slot_shape=scenario.rotor_slot_shape,
        )


def scenario_grid(config: StudyConfig) -> list[Scenario]:
    return [
        Scenario(pole_count, shape, float(speed))
        for pole_count in config.pole_counts
        for shape in config.rotor_slot_shapes
        for speed in config.rated_speeds
    ]


def curve_scenarios(config: StudyConfig) -> list[Scenario]:
    """Trend sweeps use rectangular stator and rotor slots."""
    if not config.curves:
        return []
    return [
        Scenario(pole_count, SlotShape.RECTANGULAR, float(speed))
        for pole_count in config.pole_counts
        for speed in config.curve_speeds.get(pole_count, ())
    ]


# ---------------------------
# Outcomes
# ---------------------------


def _lookup(report: Any, path: str) -> float:
    value = report
    for part in path.split("."):
        value = getattr(value, part)
    return float(value)


@dataclass(frozen=True, eq=False)
class ScenarioOutcome:
    """
    One optimized scenario. ``values`` holds the tabular fields of the best
    design; it is empty when no design could be evaluated. ``result`` is
    absent for outcomes read back from a saved study.
    """

    scenario: Scenario
    feasible: bool
    values: Mapping[str, float] = field(default_factory=dict)
    objective: float = math.inf
    evaluations: int = 0
    violated: tuple[str, ...] = ()
    error: str = ""
    result: Optional[OptimizationResult] = None

    @classmethod
    def from_result(
        cls, scenario: Scenario, result: OptimizationResult
    ) -> ScenarioOutcome:
        values: dict[str, float] = {}
        if result.best_report is not None:
            values = {
                name: _lookup(result.best_report, path)
                for name, path in TABULAR_FIELDS.items()
            }
        violated = (
            tuple(result.constraint_report.violated())
            if result.constraint_report is not None
            else ()
        )
        return cls(
            scenario=scenario,
            feasible=result.feasible,
            values=values,
            objective=result.best_objective,
            evaluations=result.evaluations,
            violated=violated,
            error=result.failure.message if result.failure is not None else "",
            result=result,
        )

    def value(self, name: str) -> float:
        return self.values.get(name, math.nan)

    def as_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario.as_dict(),
            "feasible": self.feasible,
            "objective": self.objective if math.isfinite(self.objective) else None,
            "evaluations": self.evaluations,
            "violated": list(self.violated),
            "error": self.error,
            "values": dict(self.values),
        }


@dataclass(frozen=True)
class Selection:
    scenario: Scenario
    policy: SelectionPolicy
    rationale: str
    agrees_with_published: bool

    def as_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario.as_dict(),
            "policy": self.policy.value,
            "rationale": self.rationale,
            "agrees_with_published": self.agrees_with_published,
        }


@dataclass(frozen=True)
class StudyReport:
    """
    Outcomes keyed by scenario. ``scenarios`` are the table columns,
    ``curve_scenarios`` the trend sweeps; a scenario in both ran once.
    """

    scenarios: tuple[Scenario, ...]
    curve_scenarios: tuple[Scenario, ...]
    outcomes: Mapping[tuple[int, str, float], ScenarioOutcome]
    policy: SelectionPolicy = SelectionPolicy.EFFICIENCY
    best: Optional[Selection] = None

    def outcome(self, scenario: Scenario) -> ScenarioOutcome:
        return self.outcomes[scenario.key]

    def grid_outcomes(self) -> list[ScenarioOutcome]:
        return [self.outcomes[s.key] for s in self.scenarios]

    @property
    def is_empty(self) -> bool:
        return not self.scenarios and not self.curve_scenarios


# ---------------------------
# Running
# ---------------------------


def run_scenario(config: StudyConfig, scenario: Scenario) -> ScenarioOutcome:
    """Never raises for model failures; they are recorded on the outcome."""
    try:
        spec = config.spec_for(scenario)
        constraints = apply_overrides(
            default_constraints(spec), config.constraint_overrides
        )
        result = optimize_design(
            spec, config.materials, replace(config.hj, threads=1), constraints
        )
    except (MotorDesignError, ValueError) as e:
        logger.exception("Scenario %s failed", scenario.label)
        return ScenarioOutcome(scenario=scenario, feasible=False, error=str(e))

    outcome = ScenarioOutcome.from_result(scenario, result)
    if outcome.feasible:
        logger.info(
            "Scenario %s: efficiency %.4f after %d evaluations",
            scenario.label,
            outcome.value("efficiency"),
            outcome.evaluations,
        )
    else:
        logger.warning(
            "Scenario %s infeasible (%s)",
            scenario.label,
            ", ".join(outcome.violated) or outcome.error or "no design",
        )
    return outcome


def run_study(config: StudyConfig) -> StudyReport:
    """
    Optimizes every scenario of the grid and of the curve sweeps. The report
    depends on the configuration only, not on scheduling order.
    """
    grid = scenario_grid(config)
    sweeps = curve_scenarios(config)
    unique: dict[tuple[int, str, float], Scenario] = {}
    for scenario in [*grid, *sweeps]:
        unique.setdefault(scenario.key, scenario)
    pending = sorted(unique.values(), key=lambda s: s.key)

    if not pending:
        logger.warning("Study has no scenarios to run")
        return StudyReport((), (), {}, config.policy)

    logger.info(
        "Running %d scenarios on %d threads", len(pending), config.threads
    )
    workers = max(min(config.threads, len(pending)), 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        outcomes = list(pool.map(lambda s: run_scenario(config, s), pending))

    report = StudyReport(
        scenarios=tuple(grid),
        curve_scenarios=tuple(sweeps),
        outcomes={o.scenario.key: o for o in outcomes},
        policy=config.policy,
    )
    if not grid:
        return report
    try:
        best = select_best(report, config.policy)
    except NoFeasibleScenario:
        logger.warning("No feasible scenario in the study")
        return report
    return replace(report, best=best)


# ---------------------------
# Best-design selection
# ---------------------------


def _policy_key(policy: SelectionPolicy, outcome: ScenarioOutcome) -> tuple:
    eta = -outcome.value("efficiency")
    mass = outcome.value("mass")
    cost = outcome.value("cost")
    ranked = {
        SelectionPolicy.EFFICIENCY: (eta, mass, cost),
        SelectionPolicy.MASS: (mass, eta, cost),
        SelectionPolicy.COST: (cost, eta, mass),
    }[SelectionPolicy(policy)]
    return (*ranked, outcome.scenario.key)


def select_best(
    report: StudyReport, policy: SelectionPolicy = SelectionPolicy.EFFICIENCY
) -> Selection:
    """
    Picks the best feasible scenario of the grid. The default policy ranks by
    efficiency, then lower mass, then lower cost.

    Raises:
        NoFeasibleScenario: no scenario of the grid is feasible.
    """
    policy = SelectionPolicy(policy)
    candidates = sorted(
        (o for o in report.grid_outcomes() if o.feasible and o.values),
        key=lambda o: _policy_key(policy, o),
    )
    if not candidates:
        raise NoFeasibleScenario("no feasible scenario in the study")

    best = candidates[0]
    agrees = best.scenario.key == PUBLISHED_CHOICE
    lines = [f"Policy: {policy.label.lower()}, ties broken by the remaining metrics."]
    for rank, outcome in enumerate(candidates, start=1):
        lines.append(
            f"{rank}. {outcome.scenario.label}: "
            f"efficiency {100 * outcome.value('efficiency'):.2f} %, "
            f"mass {outcome.value('mass'):.2f} kg, "
            f"cost {outcome.value('cost'):.1f} $"
        )
    excluded = [o.scenario.label for o in report.grid_outcomes() if not o.feasible]
    if excluded:
        lines.append(f"Infeasible: {', '.join(excluded)}.")
    pole_count, shape, speed = PUBLISHED_CHOICE
    verdict = "agrees" if agrees else "differs"
    lines.append(
        f"Choice {verdict} with the published design "
        f"({pole_count}-pole, {shape} rotor slots, {speed:g} rpm)."
    )
    return Selection(best.scenario, policy, "\n".join(lines), agrees)
