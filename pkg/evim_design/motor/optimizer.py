"""
Hooke-Jeeves pattern search over the box-bounded design variables.

``hooke_jeeves`` is generic over any objective on a numpy vector. The motor
layer on top (``objective_factory``, ``optimize_design``) turns a spec into
a penalized objective, runs several deterministic starts concurrently and
escalates the penalty weight when a run converges to an infeasible point.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np
from django.db import models

from . import constants as C
from .constraints import (
    DEFAULT_PENALTY_MU,
    ConstraintReport,
    ConstraintSpec,
    default_constraints,
    evaluate_constraints,
)
from .exceptions import InfeasibleDesign
from .performance import PerformanceReport, evaluate_design
from .spec import (
    DESIGN_VARIABLES,
    ROTOR_SLOT_DEPTH_INDEX,
    DesignVector,
    MaterialCatalog,
    MotorSpec,
    SlotShape,
    VariableBounds,
    default_bounds,
)

logger = logging.getLogger(__name__)

Objective = Callable[[np.ndarray], float]


class MoveKind(models.TextChoices):
    EXPLORATORY = "exploratory", "Exploratory"
    PATTERN = "pattern", "Pattern"
    REDUCE = "reduce", "Reduce"


class Termination(models.TextChoices):
    STEP_TOLERANCE = "step_tolerance", "Step tolerance"
    EVAL_BUDGET = "eval_budget", "Evaluation budget"


@dataclass(frozen=True)
class HJConfig:
    initial_step_fraction: float = 0.10
    step_reduction: float = 0.5
    min_step_fraction: float = 1e-4
    max_evaluations: int = 20_000
    pattern_acceleration: float = 1.0
    penalty_mu: float = DEFAULT_PENALTY_MU
    penalty_doublings: int = 6
    start_fractions: tuple[float, ...] = (0.3, 0.4, 0.5, 0.6, 0.7)
    threads: Optional[int] = None

    def __post_init__(self) -> None:
        if not 0 < self.step_reduction < 1:
            raise ValueError("step_reduction must lie in (0, 1)")
        if not 0 < self.min_step_fraction < self.initial_step_fraction:
            raise ValueError(
                "min_step_fraction must be positive and below initial_step_fraction"
            )
        if self.max_evaluations < 1:
            raise ValueError("max_evaluations must be >= 1")
        if self.pattern_acceleration < 1:
            raise ValueError("pattern_acceleration must be >= 1")
        if not self.penalty_mu > 0:
            raise ValueError("penalty_mu must be > 0")
        if self.penalty_doublings < 0:
            raise ValueError("penalty_doublings must be >= 0")


@dataclass(frozen=True)
class TraceEntry:
    iteration: int
    x: tuple[float, ...]
    objective: float
    step_scale: float
    move_kind: MoveKind
    penalty_mu: float = DEFAULT_PENALTY_MU


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    best_x: np.ndarray
    best_objective: float
    feasible: bool
    evaluations: int
    termination: Termination
    trace: tuple[TraceEntry, ...] = ()
    best_design: Optional[DesignVector] = None
    best_report: Optional[PerformanceReport] = None
    constraint_report: Optional[ConstraintReport] = None
    penalty_mu: float = DEFAULT_PENALTY_MU
    start_index: int = 0
    failure: Optional[InfeasibleDesign] = field(default=None, compare=False)


class _BudgetExhausted(Exception):
    pass


class _CountingObjective:
    """Caches values by point and stops the search once the budget is used."""

    def __init__(self, f: Objective, budget: int) -> None:
        self.f = f
        self.budget = budget
        self.evaluations = 0
        self._cache: dict[tuple[float, ...], float] = {}

    def __call__(self, x: np.ndarray) -> float:
        key = tuple(float(v) for v in x)
        if key in self._cache:
            return self._cache[key]
        if self.evaluations >= self.budget:
            raise _BudgetExhausted
        self.evaluations += 1
        value = float(self.f(np.array(key)))
        if math.isnan(value):
            value = math.inf
        self._cache[key] = value
        return value


# ---------------------------
# Pattern search
# ---------------------------


def exploratory_search(
    f: Objective,
    x: np.ndarray,
    steps: np.ndarray,
    *,
    fx: Optional[float] = None,
    lower: Optional[np.ndarray] = None,
    upper: Optional[np.ndarray] = None,
    active: Optional[Sequence[bool]] = None,
) -> tuple[np.ndarray, float]:
    """
    One coordinate sweep in declared order: ``+step`` first, then ``-step``,
    keeping a move only when it strictly lowers ``f``.
    """
    point = np.array(x, dtype=float)
    best = f(point) if fx is None else fx
    for i in range(point.size):
        if active is not None and not active[i]:
            continue
        base = point[i]
        for candidate in (base + steps[i], base - steps[i]):
            if lower is not None:
                candidate = max(candidate, lower[i])
            if upper is not None:
                candidate = min(candidate, upper[i])
            if candidate == base:
                continue
            point[i] = candidate
            value = f(point)
            if value < best:
                best = value
                break
            point[i] = base
    return point, best


def hooke_jeeves(
    f: Objective,
    x0: Sequence[float],
    bounds: VariableBounds,
    cfg: Optional[HJConfig] = None,
    active: Optional[Sequence[bool]] = None,
    *,
    penalty_mu: float = DEFAULT_PENALTY_MU,
    is_feasible: Optional[Callable[[np.ndarray], bool]] = None,
) -> OptimizationResult:
    """
    Minimizes ``f`` over ``bounds`` starting from ``x0``.

    Variables whose ``active`` flag is false stay at their ``x0`` value.
    Without ``is_feasible`` the problem is taken as unconstrained and any
    finite incumbent counts as feasible.
    """
    cfg = cfg or HJConfig()
    lower = bounds.lower_array()
    upper = bounds.upper_array()
    span = bounds.span()
    mask = (
        np.ones(span.size, dtype=bool)
        if active is None
        else np.asarray(active, dtype=bool)
    )
    steps = np.where(mask, cfg.initial_step_fraction * span, 0.0)
    min_steps = cfg.min_step_fraction * span
    scale = 1.0

    counted = _CountingObjective(f, cfg.max_evaluations)
    trace: list[TraceEntry] = []

    def record(x: np.ndarray, value: float, kind: MoveKind) -> None:
        trace.append(
            TraceEntry(
                iteration=len(trace),
                x=tuple(float(v) for v in x),
                objective=value,
                step_scale=scale,
                move_kind=kind,
                penalty_mu=penalty_mu,
            )
        )

    def explore(x: np.ndarray, fx: float) -> tuple[np.ndarray, float]:
        return exploratory_search(
            counted, x, steps, fx=fx, lower=lower, upper=upper, active=mask
        )

    base = bounds.clamp(np.asarray(x0, dtype=float))
    termination = Termination.EVAL_BUDGET
    try:
        f_base = counted(base)
        record(base, f_base, MoveKind.EXPLORATORY)
        while True:
            if np.all(steps[mask] < min_steps[mask]):
                termination = Termination.STEP_TOLERANCE
                break
            x_new, f_new = explore(base, f_base)
            if not f_new < f_base:
                steps = steps * cfg.step_reduction
                scale *= cfg.step_reduction
                record(base, f_base, MoveKind.REDUCE)
                continue
            record(x_new, f_new, MoveKind.EXPLORATORY)
            while True:
                pattern = bounds.clamp(
                    x_new + cfg.pattern_acceleration * (x_new - base)
                )
                base, f_base = x_new, f_new
                x_try, f_try = explore(pattern, counted(pattern))
                if not f_try < f_base:
                    break
                x_new, f_new = x_try, f_try
                record(x_new, f_new, MoveKind.PATTERN)
    except _BudgetExhausted:
        termination = Termination.EVAL_BUDGET

    best = trace[-1] if trace else None
    if best is None:
        return OptimizationResult(
            best_x=base,
            best_objective=math.inf,
            feasible=False,
            evaluations=counted.evaluations,
            termination=termination,
            penalty_mu=penalty_mu,
        )
    best_x = np.array(best.x)
    if is_feasible is None:
        feasible = math.isfinite(best.objective)
    else:
        feasible = bool(is_feasible(best_x))
    return OptimizationResult(
        best_x=best_x,
        best_objective=best.objective,
        feasible=feasible,
        evaluations=counted.evaluations,
        termination=termination,
        trace=tuple(trace),
        penalty_mu=penalty_mu,
    )


def grid_oracle(
    f: Objective,
    bounds: VariableBounds,
    active_vars: Sequence[int],
    resolution: int,
    frozen: Sequence[float],
) -> tuple[np.ndarray, float]:
    """
    Exhaustive grid search over at most three variables, the rest frozen.

    The first grid point (lexicographic by index) with the lowest value wins.
    """
    if len(active_vars) > 3:
        raise ValueError("grid_oracle takes at most 3 active variables")
    if resolution < 5:
        raise ValueError("resolution must be >= 5")
    axes = [
        np.linspace(bounds.lower[i], bounds.upper[i], resolution)
        for i in active_vars
    ]
    point = np.array(frozen, dtype=float)
    best_x = point.copy()
    best_value = math.inf
    for index in itertools.product(range(resolution), repeat=len(active_vars)):
        for var, axis, k in zip(active_vars, axes, index):
            point[var] = axis[k]
        value = float(f(point))
        if value < best_value:
            best_value = value
            best_x = point.copy()
    return best_x, best_value


# ---------------------------
# Motor objective
# ---------------------------


def objective_factory(
    spec: MotorSpec,
    materials: Optional[MaterialCatalog] = None,
    constraints: Optional[Sequence[ConstraintSpec]] = None,
    mu: float = DEFAULT_PENALTY_MU,
) -> Objective:
    """Returns ``x -> -efficiency + penalty``; failed designs rank by stage."""
    materials = materials or MaterialCatalog()
    constraints = tuple(
        default_constraints(spec) if constraints is None else constraints
    )

    def objective(x: np.ndarray) -> float:
        try:
            report = evaluate_design(spec, DesignVector.from_array(x), materials)
        except InfeasibleDesign as e:
            return C.INFEASIBLE_OBJECTIVE + int(e.stage)
        cr = evaluate_constraints(report, constraints, mu)
        return -report.efficiency + cr.penalty

    return objective


def active_variables(spec: MotorSpec) -> list[bool]:
    """Round rotor slots have a single size, so d_r follows W_r."""
    mask = [True] * len(DESIGN_VARIABLES)
    if spec.rotor_slot_shape == SlotShape.ROUND:
        mask[ROTOR_SLOT_DEPTH_INDEX] = False
    return mask


def _describe(
    spec: MotorSpec,
    materials: MaterialCatalog,
    constraints: Sequence[ConstraintSpec],
    result: OptimizationResult,
) -> OptimizationResult:
    design = DesignVector.from_array(result.best_x).tied_for(spec.rotor_slot_shape)
    try:
        report = evaluate_design(spec, design, materials)
    except InfeasibleDesign as e:
        cr = evaluate_constraints(e, constraints, result.penalty_mu)
        return replace(
            result,
            feasible=False,
            best_design=design,
            constraint_report=cr,
            failure=e,
        )
    cr = evaluate_constraints(report, constraints, result.penalty_mu)
    return replace(
        result,
        feasible=cr.feasible,
        best_design=design,
        best_report=report,
        constraint_report=cr,
    )


def _run_start(
    spec: MotorSpec,
    materials: MaterialCatalog,
    constraints: Sequence[ConstraintSpec],
    bounds: VariableBounds,
    cfg: HJConfig,
    index: int,
    x0: np.ndarray,
) -> OptimizationResult:
    mask = active_variables(spec)
    mu = cfg.penalty_mu
    x = x0
    used = 0
    doublings = 0
    while True:
        f = objective_factory(spec, materials, constraints, mu)
        run_cfg = replace(cfg, max_evaluations=max(cfg.max_evaluations - used, 1))
        run = hooke_jeeves(f, x, bounds, run_cfg, mask, penalty_mu=mu)
        used += run.evaluations
        # only the final-mu run's trace is kept
        result = _describe(
            spec,
            materials,
            constraints,
            replace(run, evaluations=used, start_index=index),
        )
        if (
            result.feasible
            or doublings >= cfg.penalty_doublings
            or run.termination == Termination.EVAL_BUDGET
            or used >= cfg.max_evaluations
        ):
            return result
        doublings += 1
        mu *= 2.0
        x = run.best_x
        logger.debug(
            "start %d converged infeasible, penalty weight raised to %g",
            index,
            mu,
        )


def starting_points(
    spec: MotorSpec, bounds: VariableBounds, fractions: Sequence[float]
) -> list[np.ndarray]:
    points = []
    for fraction in fractions:
        x = bounds.at_fraction(fraction)
        if spec.rotor_slot_shape == SlotShape.ROUND:
            x[ROTOR_SLOT_DEPTH_INDEX] = x[DESIGN_VARIABLES.index("rotor_slot_width")]
        points.append(x)
    return points


def optimize_design(
    spec: MotorSpec,
    materials: Optional[MaterialCatalog] = None,
    cfg: Optional[HJConfig] = None,
    constraints: Optional[Sequence[ConstraintSpec]] = None,
    bounds: Optional[VariableBounds] = None,
) -> OptimizationResult:
    """
    Maximizes efficiency under the constraints from every configured start
    and returns the best run: feasible first, then lowest objective, then
    lowest start index.
    """
    materials = materials or MaterialCatalog()
    cfg = cfg or HJConfig()
    constraints = tuple(
        default_constraints(spec) if constraints is None else constraints
    )
    bounds = bounds or default_bounds(spec)
    starts = starting_points(spec, bounds, cfg.start_fractions)
    logger.info(
        "Optimizing %d-pole %s rotor at %g rpm from %d starts",
        spec.pole_count,
        spec.rotor_slot_shape.value,
        spec.rated_speed,
        len(starts),
    )

    workers = max(min(cfg.threads or 1, len(starts)), 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(
                _run_start, spec, materials, constraints, bounds, cfg, i, x0
            )
            for i, x0 in enumerate(starts)
        ]
        results = [future.result() for future in futures]

    best = min(
        results,
        key=lambda r: (not r.feasible, r.best_objective, r.start_index),
    )
    logger.info(
        "Best start %d: objective %.6f, feasible=%s, %s after %d evaluations",
        best.start_index,
        best.best_objective,
        best.feasible,
        best.termination.label,
        best.evaluations,
    )
    return best
