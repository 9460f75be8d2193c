from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Mapping, Optional, Sequence, Union

from django.db import models

from . import constants as C
from .exceptions import InfeasibleDesign, UnknownField
from .performance import SCALAR_FIELDS, PerformanceReport
from .spec import MotorSpec

logger = logging.getLogger(__name__)

DEFAULT_PENALTY_MU: float = 100.0
MASS_CAP: float = 47.0  # [kg]


class ConstraintKind(models.TextChoices):
    MIN = "min", "Lower bound"
    MAX = "max", "Upper bound"


@dataclass(frozen=True)
class ConstraintSpec:
    name: str
    kind: ConstraintKind
    bound: float
    field: str
    weight: float = 1.0
    enabled: bool = True

    def __post_init__(self) -> None:
        if not self.weight > 0:
            raise ValueError(f"{self.name}: weight must be > 0")
        if self.bound != self.bound or abs(self.bound) == float("inf"):
            raise ValueError(f"{self.name}: bound must be finite")

    def violation(self, value: float) -> float:
        if self.kind == ConstraintKind.MIN:
            excess = self.bound - value
        else:
            excess = value - self.bound
        if excess <= C.CONSTRAINT_TOLERANCE * abs(self.bound):
            return 0.0
        return excess


@dataclass(frozen=True)
class ConstraintOutcome:
    name: str
    kind: ConstraintKind
    value: Optional[float]
    bound: float
    violation: float
    normalized_violation: float
    weight: float

    def as_dict(self) -> dict[str, object]:
        return {
            "name": self.name,
            "kind": self.kind.value,
            "value": self.value,
            "bound": self.bound,
            "violation": self.violation,
            "normalized_violation": self.normalized_violation,
        }


@dataclass(frozen=True)
class ConstraintReport:
    outcomes: tuple[ConstraintOutcome, ...]
    feasible: bool
    penalty: float

    def outcome(self, name: str) -> ConstraintOutcome:
        for item in self.outcomes:
            if item.name == name:
                return item
        raise KeyError(name)

    def violated(self) -> list[str]:
        return [o.name for o in self.outcomes if o.violation > 0]

    def as_dict(self) -> dict[str, object]:
        return {
            "feasible": self.feasible,
            "penalty": self.penalty,
            "constraints": [o.as_dict() for o in self.outcomes],
        }


def default_constraints(spec: MotorSpec) -> list[ConstraintSpec]:
    """
    Engineering limits of the traction motor. The mass cap bounds the frame
    size, which efficiency alone would keep growing; the cost cap is listed
    but disabled.
    """
    return [
        ConstraintSpec("power_factor", ConstraintKind.MIN, 0.85, "power_factor"),
        ConstraintSpec(
            "temperature_rise", ConstraintKind.MAX, 75.0, "temperature_rise"
        ),
        ConstraintSpec(
            "rated_torque", ConstraintKind.MIN, spec.rated_torque, "rated_torque"
        ),
        ConstraintSpec(
            "breakdown_ratio", ConstraintKind.MIN, 1.5, "breakdown_ratio"
        ),
        ConstraintSpec(
            "breakdown_torque_max",
            ConstraintKind.MIN,
            3.5,
            "breakdown_torque_max",
        ),
        ConstraintSpec("tip_speed", ConstraintKind.MAX, 120.0, "tip_speed_at_max"),
        ConstraintSpec(
            "rotor_time_constant", ConstraintKind.MAX, 4.0, "rotor_time_constant"
        ),
        ConstraintSpec(
            "tooth_flux_density", ConstraintKind.MAX, 1.2, "tooth_flux_density"
        ),
        ConstraintSpec(
            "cost_cap", ConstraintKind.MAX, 300.0, "total_cost", enabled=False
        ),
        ConstraintSpec(
            "mass_cap", ConstraintKind.MAX, MASS_CAP, "total_mass"
        ),
    ]


def apply_overrides(
    constraints: Sequence[ConstraintSpec],
    overrides: Mapping[str, Mapping[str, object]],
) -> list[ConstraintSpec]:
    """Replaces bound, weight or enabled flag by constraint name."""
    by_name = {c.name: c for c in constraints}
    unknown = sorted(set(overrides) - set(by_name))
    if unknown:
        raise UnknownField(f"unknown constraints: {', '.join(unknown)}")
    return [
        replace(c, **dict(overrides[c.name])) if c.name in overrides else c
        for c in constraints
    ]


def penalty(cr: ConstraintReport, mu: float) -> float:
    return mu * sum(
        o.weight * o.normalized_violation**2 for o in cr.outcomes
    )


def evaluate_constraints(
    report: Union[PerformanceReport, InfeasibleDesign],
    constraints: Sequence[ConstraintSpec],
    mu: float = DEFAULT_PENALTY_MU,
) -> ConstraintReport:
    """
    Checks every enabled constraint against ``report``. Bounds are closed.

    An ``InfeasibleDesign`` stands in for a report that could not be built:
    every constraint is then violated at the capped normalized value.

    Raises:
        UnknownField: a constraint refers to a field the report lacks.
    """
    outcomes = []
    for spec in constraints:
        if not spec.enabled:
            continue
        if spec.field not in SCALAR_FIELDS:
            raise UnknownField(f"{spec.name}: no report field {spec.field!r}")
        scale = abs(spec.bound)
        if isinstance(report, InfeasibleDesign):
            value = None
            normalized = C.VIOLATION_CAP
            violation = normalized * scale
        else:
            value = report.value_of(spec.field)
            violation = spec.violation(value)
            normalized = violation / scale if scale else violation
        outcomes.append(
            ConstraintOutcome(
                name=spec.name,
                kind=ConstraintKind(spec.kind),
                value=value,
                bound=spec.bound,
                violation=violation,
                normalized_violation=normalized,
                weight=spec.weight,
            )
        )
    partial = ConstraintReport(tuple(outcomes), feasible=True, penalty=0.0)
    feasible = all(o.violation == 0 for o in outcomes)
    return replace(partial, feasible=feasible, penalty=penalty(partial, mu))
