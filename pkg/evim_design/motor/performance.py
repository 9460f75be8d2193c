"""
Loss model, efficiency, torques, thermal rise and inertia constant of one
design, and ``evaluate_design``, which composes the whole pipeline into a
``PerformanceReport``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

from . import constants as C
from .circuit import (
    HarmonicCircuit,
    OperatingSolution,
    WindingSpec,
    max_power_slip,
    peak_torque,
    solve_rated_slip,
    solve_spectrum,
    synthesize_circuits,
    synthesize_winding,
)
from .exceptions import (
    GeometryInfeasible,
    InfeasibleDesign,
    MotorDesignError,
    NonPhysical,
    NoRatedPoint,
    SingularCircuit,
    Stage,
    UnknownField,
    WindingInfeasible,
)
from .geometry import (
    CostBreakdown,
    DerivedGeometry,
    MassBreakdown,
    derive_geometry,
    mass_and_volume,
    material_cost,
    rotor_inertia,
    rotor_tip_speed,
)
from .spec import (
    BreakdownModel,
    DesignVector,
    HarmonicEntry,
    HarmonicSpectrum,
    MaterialCatalog,
    MotorSpec,
    base_frequency,
    max_frequency,
    validate_design,
)

logger = logging.getLogger(__name__)

CORE_PARTS: tuple[str, ...] = (
    "stator_teeth",
    "stator_yoke",
    "rotor_teeth",
    "rotor_yoke",
)


# ---------------------------
# Core losses
# ---------------------------


@dataclass(frozen=True)
class FluxSolution:
    """Fundamental peak flux density of every core part at base frequency."""

    base_frequency: float
    stator_teeth: float
    stator_yoke: float
    rotor_teeth: float
    rotor_yoke: float

    def part(self, name: str) -> float:
        return getattr(self, name)

    def harmonic(self, name: str, entry: HarmonicEntry) -> float:
        # flux follows V/f under a voltage-source supply
        return self.part(name) * entry.amplitude / entry.order


def part_flux_densities(
    geom: DerivedGeometry, winding: WindingSpec, airgap_flux_density: float, f_b: float
) -> FluxSolution:
    L = geom.core_length
    return FluxSolution(
        base_frequency=f_b,
        stator_teeth=airgap_flux_density
        * geom.stator_slot_pitch
        / geom.stator_tooth_width,
        stator_yoke=winding.flux_per_pole / (2.0 * geom.stator_yoke_depth * L),
        rotor_teeth=airgap_flux_density
        * geom.rotor_slot_pitch
        / geom.rotor_tooth_width,
        rotor_yoke=winding.flux_per_pole / (2.0 * geom.rotor_yoke_depth * L),
    )


@dataclass(frozen=True)
class CoreLossTerm:
    order: int
    part: str
    flux_density: float
    hysteresis: float
    eddy: float


@dataclass(frozen=True)
class CoreLosses:
    total: float
    detail: tuple[CoreLossTerm, ...] = ()

    @property
    def hysteresis(self) -> float:
        return sum(term.hysteresis for term in self.detail)

    @property
    def eddy(self) -> float:
        return sum(term.eddy for term in self.detail)

    def by_order(self) -> dict[int, float]:
        totals: dict[int, float] = {}
        for term in self.detail:
            totals[term.order] = (
                totals.get(term.order, 0.0) + term.hysteresis + term.eddy
            )
        return totals


def hysteresis_loss(
    mass: float, frequency: float, flux_density: float, materials: MaterialCatalog
) -> float:
    return (
        mass
        * materials.hysteresis_coefficient
        * materials.sigma_h
        * frequency
        * flux_density**materials.steinmetz_exponent
    )


def eddy_loss(
    mass: float,
    frequency: float,
    flux_density: float,
    materials: MaterialCatalog,
    order: int = 1,
) -> float:
    return (
        mass
        * materials.eddy_coefficient
        * materials.lamination_thickness**2
        * frequency**2
        * flux_density**2
        * materials.permeability_factor(order)
        / materials.lamination_resistivity
    )


def core_losses(
    geom: DerivedGeometry,
    masses: MassBreakdown,
    spectrum: HarmonicSpectrum,
    flux: FluxSolution,
    materials: MaterialCatalog,
) -> CoreLosses:
    """
    Hysteresis and eddy-current losses per harmonic and per core part.

    Every part sees the supply frequency of the harmonic.
    """
    weights = masses.core_parts()
    terms = []
    for entry in spectrum:
        f_m = entry.order * flux.base_frequency
        for part in CORE_PARTS:
            b = flux.harmonic(part, entry)
            terms.append(
                CoreLossTerm(
                    order=entry.order,
                    part=part,
                    flux_density=b,
                    hysteresis=hysteresis_loss(weights[part], f_m, b, materials),
                    eddy=eddy_loss(weights[part], f_m, b, materials, entry.order),
                )
            )
    total = sum(term.hysteresis + term.eddy for term in terms)
    return CoreLosses(total=total, detail=tuple(terms))


# ---------------------------
# Ohmic, mechanical and stray losses
# ---------------------------


def ohmic_losses(
    solutions: Mapping[int, OperatingSolution],
    circuits: Mapping[int, HarmonicCircuit],
) -> tuple[float, float]:
    """Stator and rotor copper losses summed over the harmonics."""
    stator = 0.0
    rotor = 0.0
    for order, solution in solutions.items():
        circuit = circuits[order]
        stator += 3.0 * circuit.stator_resistance * solution.stator_current**2
        rotor += 3.0 * circuit.rotor_resistance * solution.rotor_current**2
    return stator, rotor


def mechanical_losses(geom: DerivedGeometry, speed: float) -> float:
    """Friction and windage [W] at ``speed`` rpm."""
    v = rotor_tip_speed(geom, speed)
    return 8.0 * geom.rotor_outer_diameter * (geom.core_length + 0.15) * v * v


@dataclass(frozen=True)
class StrayLosses:
    pulsation: float  # P_p
    skew: float  # P_K
    zigzag: float  # P_Z
    bar_leakage: float  # P_bl

    @property
    def total(self) -> float:
        return self.pulsation + self.skew + self.zigzag + self.bar_leakage


def stray_losses(spec: MotorSpec, output_power: Optional[float] = None) -> StrayLosses:
    """Lumped stray-load losses as a fraction of the output power."""
    opts = spec.options
    power = spec.rated_power if output_power is None else output_power
    total = opts.stray_fraction * power
    p, k, z, _ = opts.stray_split
    pulsation = p * total
    skew = k * total
    zigzag = z * total
    # the last share closes the partition
    return StrayLosses(
        pulsation=pulsation,
        skew=skew,
        zigzag=zigzag,
        bar_leakage=max(total - (pulsation + skew + zigzag), 0.0),
    )


@dataclass(frozen=True)
class LossBreakdown:
    core: CoreLosses
    stator_ohmic: float
    rotor_ohmic: float
    mechanical: float
    stray: StrayLosses

    @property
    def ohmic(self) -> float:
        return self.stator_ohmic + self.rotor_ohmic

    @property
    def total(self) -> float:
        return total_losses(self)

    @property
    def dissipated(self) -> float:
        """Heat that leaves through the frame."""
        return self.ohmic + self.core.total + self.stray.total


def total_losses(losses: LossBreakdown) -> float:
    return losses.ohmic + losses.core.total + losses.mechanical + losses.stray.total


# ---------------------------
# Power and efficiency
# ---------------------------


def input_power(solutions: Mapping[int, OperatingSolution]) -> float:
    return sum(solution.input_power for solution in solutions.values())


def efficiency(p_in: float, p_loss: float) -> float:
    """
    Raises:
        NonPhysical: the losses consume the whole input.
    """
    if p_in <= 0 or p_loss >= p_in:
        raise NonPhysical(f"losses {p_loss:.1f} W >= input {p_in:.1f} W")
    if p_loss <= 0:
        logger.warning("Lossless design, efficiency is 1")
    return (p_in - p_loss) / p_in


# ---------------------------
# Torques
# ---------------------------


def shaft_torque(
    solutions: Mapping[int, OperatingSolution],
    circuits: Mapping[int, HarmonicCircuit],
    spec: MotorSpec,
) -> float:
    """Net airgap torque; backward-rotating harmonics brake."""
    torque = 0.0
    for order, solution in solutions.items():
        if solution.slip == 0:
            continue
        circuit = circuits[order]
        sign = spec.spectrum.entry(order).sign
        torque += (
            sign
            * 3.0
            * spec.pole_pairs
            * circuit.rotor_resistance
            * solution.rotor_current**2
            / (2.0 * math.pi * solution.frequency * solution.slip)
        )
    return torque


def shaft_torque_literal(
    solutions: Mapping[int, OperatingSolution],
    circuits: Mapping[int, HarmonicCircuit],
    spec: MotorSpec,
) -> float:
    """Torque sum as printed, with the pole count and no 2 pi; audit only."""
    torque = 0.0
    for order, solution in solutions.items():
        if solution.slip == 0:
            continue
        torque += (
            1.5
            * spec.pole_count
            * circuits[order].rotor_resistance
            * solution.rotor_current**2
            / (order * solution.frequency * solution.slip)
        )
    return torque


def breakdown_torque_literal(
    circuit: HarmonicCircuit, airgap_emf: float, spec: MotorSpec
) -> float:
    """1.5 E_s1 / (X_r1 omega_s) taken verbatim; not dimensionally a torque."""
    return 1.5 * airgap_emf / (circuit.rotor_leakage * spec.rated_angular_speed)


def breakdown_torque_base(
    circuit: HarmonicCircuit,
    spec: MotorSpec,
    airgap_emf: Optional[float] = None,
) -> float:
    if spec.options.breakdown_model == BreakdownModel.LITERAL:
        if airgap_emf is None:
            raise ValueError("airgap_emf is required for the literal model")
        return breakdown_torque_literal(circuit, airgap_emf, spec)
    return peak_torque(circuit, spec.phase_voltage)


def breakdown_torque_max(t_pb: float, spec: MotorSpec) -> float:
    ratio = base_frequency(spec) / max_frequency(spec)
    return ratio**2 * t_pb


# ---------------------------
# Thermal and dynamics
# ---------------------------


def inertia_constant(inertia: float, spec: MotorSpec) -> float:
    return 0.5 * inertia * spec.rated_angular_speed**2 / spec.rated_power


def cooling_area(geom: DerivedGeometry) -> float:
    d_o = geom.stator_outer_diameter
    return math.pi * d_o * (geom.core_length + 2.0 * geom.pole_pitch) + 2.0 * (
        math.pi / 4.0 * d_o * d_o
    )


def temperature_rise(
    losses: LossBreakdown,
    geom: DerivedGeometry,
    heat_transfer_coefficient: float = C.HEAT_TRANSFER_COEFFICIENT,
) -> float:
    return losses.dissipated / (heat_transfer_coefficient * cooling_area(geom))


def rotor_time_constant(circuit: HarmonicCircuit, f_b: float) -> float:
    return (circuit.rotor_leakage + circuit.magnetizing) / (
        2.0 * math.pi * f_b * circuit.rotor_resistance
    )


# ---------------------------
# Report
# ---------------------------

# report field name -> attribute path
SCALAR_FIELDS: dict[str, str] = {
    "efficiency": "efficiency",
    "power_factor": "power_factor",
    "input_power": "input_power",
    "output_power": "output_power",
    "total_losses": "total_losses",
    "rated_slip": "rated_slip",
    "rated_torque": "rated_torque",
    "breakdown_torque_base": "breakdown_torque_base",
    "breakdown_torque_max": "breakdown_torque_max",
    "breakdown_ratio": "breakdown_ratio",
    "temperature_rise": "temperature_rise",
    "tip_speed_at_max": "tip_speed_at_max",
    "rotor_time_constant": "rotor_time_constant",
    "tooth_flux_density": "tooth_flux_density",
    "total_mass": "mass.total",
    "active_volume": "mass.active_volume",
    "total_cost": "cost.total",
    "inertia": "inertia",
    "inertia_constant": "inertia_constant",
}


@dataclass(frozen=True)
class PerformanceReport:
    design: DesignVector
    geometry: DerivedGeometry
    winding: WindingSpec
    flux: FluxSolution
    losses: LossBreakdown
    input_power: float
    output_power: float
    efficiency: float
    power_factor: float
    rated_slip: float
    max_power_slip: float
    rated_torque: float
    rated_torque_literal: float
    breakdown_torque_base: float
    breakdown_torque_literal: float
    breakdown_torque_max: float
    temperature_rise: float
    mass: MassBreakdown
    cost: CostBreakdown
    inertia: float
    inertia_constant: float
    tooth_flux_density: float
    rotor_time_constant: float
    tip_speed_at_max: float
    circuits: dict[int, HarmonicCircuit] = field(default_factory=dict)
    solutions: dict[int, OperatingSolution] = field(default_factory=dict)

    @property
    def total_losses(self) -> float:
        return self.losses.total

    @property
    def breakdown_ratio(self) -> float:
        return self.breakdown_torque_base / self.rated_torque

    def value_of(self, name: str) -> float:
        try:
            path = SCALAR_FIELDS[name]
        except KeyError:
            raise UnknownField(f"report has no field {name!r}") from None
        value: object = self
        for attr in path.split("."):
            value = getattr(value, attr)
        return float(value)

    def scalars(self) -> dict[str, float]:
        """Flat named values that constraints and tables can refer to."""
        return {name: self.value_of(name) for name in SCALAR_FIELDS}


def _stage(stage: Stage, error: MotorDesignError) -> InfeasibleDesign:
    logger.debug("design infeasible at %s: %s", stage.label, error.message)
    return InfeasibleDesign(stage, error)


def evaluate_design(
    spec: MotorSpec,
    x: DesignVector,
    materials: Optional[MaterialCatalog] = None,
) -> PerformanceReport:
    """
    Evaluates one design at its rated point.

    Raises:
        InfeasibleDesign: any stage of the pipeline failed; ``stage`` tells
            which one.
    """
    materials = materials or MaterialCatalog()
    x = x.tied_for(spec.rotor_slot_shape)
    problems = validate_design(x, spec.rotor_slot_shape)
    if problems:
        raise _stage(
            Stage.GEOMETRY,
            GeometryInfeasible("; ".join(v.message for v in problems)),
        )

    try:
        geom = derive_geometry(spec, x)
    except GeometryInfeasible as e:
        raise _stage(Stage.GEOMETRY, e) from e
    masses = mass_and_volume(geom, spec, materials)
    cost = material_cost(masses, materials)
    inertia = rotor_inertia(geom, materials, spec.options.inertia_allowance)

    try:
        winding = synthesize_winding(spec, geom, x.airgap_flux_density)
    except WindingInfeasible as e:
        raise _stage(Stage.WINDING, e) from e

    f_b = base_frequency(spec)
    circuits = synthesize_circuits(spec, geom, winding, materials)
    flux = part_flux_densities(geom, winding, x.airgap_flux_density, f_b)
    core = core_losses(geom, masses, spec.spectrum, flux, materials)
    mechanical = mechanical_losses(geom, spec.rated_speed)
    stray = stray_losses(spec)

    try:
        s1 = solve_rated_slip(
            spec,
            circuits,
            spec.spectrum,
            extra_load=mechanical + core.total + stray.total,
        )
        solutions = solve_spectrum(spec, circuits, spec.spectrum, s1)
        s_p = max_power_slip(circuits[1])
        t_pb = breakdown_torque_base(circuits[1], spec, solutions[1].airgap_emf)
    except (NoRatedPoint, SingularCircuit) as e:
        raise _stage(Stage.RATED_POINT, e) from e

    stator_ohmic, rotor_ohmic = ohmic_losses(solutions, circuits)
    losses = LossBreakdown(
        core=core,
        stator_ohmic=stator_ohmic,
        rotor_ohmic=rotor_ohmic,
        mechanical=mechanical,
        stray=stray,
    )
    p_in = input_power(solutions)
    p_loss = losses.total
    try:
        eta = efficiency(p_in, p_loss)
    except NonPhysical as e:
        raise _stage(Stage.NON_PHYSICAL, e) from e

    fundamental = solutions[1]
    t_literal = breakdown_torque_literal(circuits[1], fundamental.airgap_emf, spec)

    return PerformanceReport(
        design=x,
        geometry=geom,
        winding=winding,
        flux=flux,
        losses=losses,
        input_power=p_in,
        output_power=p_in - p_loss,
        efficiency=eta,
        power_factor=fundamental.power_factor,
        rated_slip=s1,
        max_power_slip=s_p,
        rated_torque=shaft_torque(solutions, circuits, spec),
        rated_torque_literal=shaft_torque_literal(solutions, circuits, spec),
        breakdown_torque_base=t_pb,
        breakdown_torque_literal=t_literal,
        breakdown_torque_max=breakdown_torque_max(t_pb, spec),
        temperature_rise=temperature_rise(
            losses, geom, spec.options.heat_transfer_coefficient
        ),
        mass=masses,
        cost=cost,
        inertia=inertia,
        inertia_constant=inertia_constant(inertia, spec),
        tooth_flux_density=flux.stator_teeth,
        rotor_time_constant=rotor_time_constant(circuits[1], f_b),
        tip_speed_at_max=rotor_tip_speed(geom, spec.max_speed),
        circuits=circuits,
        solutions=solutions,
    )
