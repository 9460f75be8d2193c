from motor.constraints import default_constraints
from motor.optimizer import HJConfig
from motor.spec import MotorSpec, SlotShape
from study.runner import Scenario, ScenarioOutcome, StudyReport

TINY_HJ = HJConfig(max_evaluations=20, min_step_fraction=0.01, start_fractions=(0.5,))

# with every limit off the mid-box start is already feasible
ALL_CONSTRAINTS_OFF = {
    c.name: {"enabled": False} for c in default_constraints(MotorSpec.default())
}


def outcome(
    pole_count=2,
    shape=SlotShape.RECTANGULAR,
    speed=1800.0,
    *,
    efficiency=0.85,
    mass=40.0,
    cost=150.0,
    feasible=True,
    **values,
):
    scenario = Scenario(pole_count, shape, speed)
    if not feasible and not values:
        return ScenarioOutcome(
            scenario=scenario, feasible=False, violated=("power_factor",)
        )
    return ScenarioOutcome(
        scenario=scenario,
        feasible=feasible,
        values={"efficiency": efficiency, "mass": mass, "cost": cost, **values},
        objective=-efficiency,
        evaluations=100,
    )


def study_of(grid, curves=()):
    """Report over ``grid`` outcomes plus ``curves`` outcomes of the sweeps."""
    grid, curves = list(grid), list(curves)
    return StudyReport(
        scenarios=tuple(o.scenario for o in grid),
        curve_scenarios=tuple(o.scenario for o in curves),
        outcomes={o.scenario.key: o for o in [*curves, *grid]},
    )
