from __future__ import annotations

from django.db import models


class Stage(models.IntegerChoices):
    """
    Pipeline stage at which a design evaluation failed.

    The ordinal is part of the optimizer contract: an infeasible design maps
    to ``INFEASIBLE_OBJECTIVE + stage`` so later failures rank worse than
    earlier ones.
    """

    GEOMETRY = 1, "geometry"
    WINDING = 2, "winding"
    RATED_POINT = 3, "rated_point"
    NON_PHYSICAL = 4, "non_physical"


class MotorDesignError(Exception):
    """Base class of every domain error raised by the motor model."""

    code: str = "motor_design_error"

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message

    def as_dict(self) -> dict[str, object]:
        return {"code": self.code, "detail": self.message}


class GeometryInfeasible(MotorDesignError):
    code = "geometry_infeasible"


class WindingInfeasible(MotorDesignError):
    code = "winding_infeasible"


class NoRatedPoint(MotorDesignError):
    code = "no_rated_point"


class NonPhysical(MotorDesignError):
    code = "non_physical"


class SingularCircuit(MotorDesignError):
    code = "singular_circuit"


class UnknownField(MotorDesignError):
    code = "unknown_field"


class NoFeasibleScenario(MotorDesignError):
    code = "no_feasible_scenario"


class InfeasibleDesign(MotorDesignError):
    """
    Raised by ``evaluate_design`` when any pipeline stage fails.

    It wraps the original error and remembers the failing stage, so callers
    (the optimizer, the study runner, the API) can treat the outcome as data.
    """

    code = "infeasible_design"

    def __init__(self, stage: Stage, cause: MotorDesignError) -> None:
        super().__init__(f"{Stage(stage).label}: {cause.message}")
        self.stage = Stage(stage)
        self.cause = cause

    def as_dict(self) -> dict[str, object]:
        return {
            "code": self.code,
            "stage": self.stage.label,
            "cause": self.cause.code,
            "detail": self.cause.message,
        }
