"""
Geometry derived from a spec and a design vector, plus the bulk properties
computed from it: masses, active volume, rotor inertia, material cost and
rotor tip speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import GeometryInfeasible
from .spec import DesignVector, MaterialCatalog, MotorSpec, SlotShape


@dataclass(frozen=True)
class DerivedGeometry:
    pole_count: int
    stator_slots: int
    rotor_slots: int
    rotor_slot_shape: SlotShape
    bore_diameter: float  # D
    rotor_outer_diameter: float  # D - 2g
    stator_outer_diameter: float  # D_o
    rotor_inner_diameter: float
    shaft_diameter: float
    core_length: float
    airgap: float
    stator_slot_width: float
    stator_slot_depth: float
    rotor_slot_width: float
    rotor_slot_depth: float
    stator_yoke_depth: float
    rotor_yoke_depth: float
    stator_tooth_width: float  # at mean slot radius
    rotor_tooth_width: float
    stator_tooth_width_min: float
    rotor_tooth_width_min: float
    stator_slot_area: float
    rotor_slot_area: float  # bar area
    end_ring_area: float
    end_ring_mean_diameter: float
    mean_turn_length: float

    @property
    def pole_pitch(self) -> float:
        return math.pi * self.bore_diameter / self.pole_count

    @property
    def stator_slot_pitch(self) -> float:
        return math.pi * self.bore_diameter / self.stator_slots

    @property
    def rotor_slot_pitch(self) -> float:
        return math.pi * self.rotor_outer_diameter / self.rotor_slots

    @property
    def bar_area(self) -> float:
        return self.rotor_slot_area

    @property
    def rotor_slot_bottom_diameter(self) -> float:
        return self.rotor_outer_diameter - 2.0 * self.rotor_slot_depth


@dataclass(frozen=True)
class MassBreakdown:
    stator_teeth: float
    stator_yoke: float
    rotor_teeth: float
    rotor_yoke: float
    stator_copper: float
    rotor_aluminum: float
    active_volume: float

    @property
    def stator_iron(self) -> float:
        return self.stator_teeth + self.stator_yoke

    @property
    def rotor_iron(self) -> float:
        return self.rotor_teeth + self.rotor_yoke

    @property
    def total(self) -> float:
        return (
            self.stator_iron
            + self.rotor_iron
            + self.stator_copper
            + self.rotor_aluminum
        )

    def core_parts(self) -> dict[str, float]:
        """Iron part weights G_i keyed like the flux-density solution."""
        return {
            "stator_teeth": self.stator_teeth,
            "stator_yoke": self.stator_yoke,
            "rotor_teeth": self.rotor_teeth,
            "rotor_yoke": self.rotor_yoke,
        }


@dataclass(frozen=True)
class CostBreakdown:
    steel: float
    copper: float
    aluminum: float

    @property
    def total(self) -> float:
        return self.steel + self.copper + self.aluminum


def _annulus(outer: float, inner: float) -> float:
    return math.pi / 4.0 * (outer * outer - inner * inner)


def derive_geometry(spec: MotorSpec, x: DesignVector) -> DerivedGeometry:
    """
    Derives the full machine geometry.

    Raises:
        GeometryInfeasible: a tooth closes up, the rotor vanishes, or the
            rotor core runs into the shaft allowance.
    """
    x = x.tied_for(spec.rotor_slot_shape)
    opts = spec.options
    bore = x.stator_inner_diameter
    length = x.core_length
    gap = x.airgap_length
    rotor_od = bore - 2.0 * gap
    if rotor_od <= 0:
        raise GeometryInfeasible("airgap leaves no rotor")

    stator_od = bore + 2.0 * x.stator_slot_depth + 2.0 * x.stator_yoke_depth
    stator_tooth_min = math.pi * bore / spec.stator_slots - x.stator_slot_width
    stator_tooth = (
        math.pi * (bore + x.stator_slot_depth) / spec.stator_slots
        - x.stator_slot_width
    )
    if stator_tooth_min <= 0:
        raise GeometryInfeasible("stator slots leave no tooth at the bore")

    if spec.rotor_slot_shape == SlotShape.ROUND:
        diameter = x.rotor_slot_width
        rotor_slot_area = math.pi * diameter * diameter / 4.0
        # a round slot is narrowest-toothed at its centre line
        rotor_tooth_min = (
            math.pi * (rotor_od - diameter) / spec.rotor_slots - diameter
        )
        rotor_tooth = rotor_tooth_min
    else:
        rotor_slot_area = x.rotor_slot_width * x.rotor_slot_depth
        rotor_tooth_min = (
            math.pi * (rotor_od - 2.0 * x.rotor_slot_depth) / spec.rotor_slots
            - x.rotor_slot_width
        )
        rotor_tooth = (
            math.pi * (rotor_od - x.rotor_slot_depth) / spec.rotor_slots
            - x.rotor_slot_width
        )
    if rotor_tooth_min <= 0:
        raise GeometryInfeasible("rotor slots leave no tooth")

    rotor_id = rotor_od - 2.0 * x.rotor_slot_depth - 2.0 * x.rotor_yoke_depth
    shaft = opts.shaft_fraction * bore
    if rotor_id < shaft:
        raise GeometryInfeasible("rotor slots overlap the shaft allowance")

    pole_pitch = math.pi * bore / spec.pole_count
    mean_turn = (
        opts.turn_length_core_factor * length
        + opts.turn_length_pitch_factor * pole_pitch
        + opts.turn_length_constant
    )
    return DerivedGeometry(
        pole_count=spec.pole_count,
        stator_slots=spec.stator_slots,
        rotor_slots=spec.rotor_slots,
        rotor_slot_shape=spec.rotor_slot_shape,
        bore_diameter=bore,
        rotor_outer_diameter=rotor_od,
        stator_outer_diameter=stator_od,
        rotor_inner_diameter=rotor_id,
        shaft_diameter=shaft,
        core_length=length,
        airgap=gap,
        stator_slot_width=x.stator_slot_width,
        stator_slot_depth=x.stator_slot_depth,
        rotor_slot_width=x.rotor_slot_width,
        rotor_slot_depth=x.rotor_slot_depth,
        stator_yoke_depth=x.stator_yoke_depth,
        rotor_yoke_depth=x.rotor_yoke_depth,
        stator_tooth_width=stator_tooth,
        rotor_tooth_width=rotor_tooth,
        stator_tooth_width_min=stator_tooth_min,
        rotor_tooth_width_min=rotor_tooth_min,
        stator_slot_area=x.stator_slot_width * x.stator_slot_depth,
        rotor_slot_area=rotor_slot_area,
        end_ring_area=x.end_ring_cross_section,
        end_ring_mean_diameter=rotor_od - x.rotor_slot_depth,
        mean_turn_length=mean_turn,
    )


def mass_and_volume(
    geom: DerivedGeometry, spec: MotorSpec, materials: MaterialCatalog
) -> MassBreakdown:
    """
    Part masses and active volume.

    Iron and bar masses scale with the core length; the copper end turns and
    the two end rings are overhang and do not.
    """
    L = geom.core_length
    bore = geom.bore_diameter
    slot_bottom = bore + 2.0 * geom.stator_slot_depth
    stator_teeth = (
        _annulus(slot_bottom, bore) - geom.stator_slots * geom.stator_slot_area
    ) * L
    stator_yoke = _annulus(geom.stator_outer_diameter, slot_bottom) * L
    rotor_bottom = geom.rotor_slot_bottom_diameter
    rotor_teeth = (
        _annulus(geom.rotor_outer_diameter, rotor_bottom)
        - geom.rotor_slots * geom.rotor_slot_area
    ) * L
    rotor_yoke = _annulus(rotor_bottom, geom.rotor_inner_diameter) * L

    # every turn crosses two slots, so the conductor volume per slot carries
    # half a mean turn
    copper_volume = (
        geom.stator_slots
        * geom.stator_slot_area
        * spec.options.fill_factor
        * geom.mean_turn_length
        / 2.0
    )
    bar_volume = geom.rotor_slots * geom.rotor_slot_area * L
    ring_volume = 2.0 * geom.end_ring_area * math.pi * geom.end_ring_mean_diameter

    density = materials.steel_density
    return MassBreakdown(
        stator_teeth=max(stator_teeth, 0.0) * density,
        stator_yoke=max(stator_yoke, 0.0) * density,
        rotor_teeth=max(rotor_teeth, 0.0) * density,
        rotor_yoke=max(rotor_yoke, 0.0) * density,
        stator_copper=copper_volume * materials.copper_density,
        rotor_aluminum=(bar_volume + ring_volume) * materials.aluminum_density,
        active_volume=math.pi / 4.0 * geom.stator_outer_diameter**2 * L,
    )


def rotor_inertia(
    geom: DerivedGeometry,
    materials: MaterialCatalog,
    allowance: float = 1.0,
) -> float:
    """
    Rotor moment of inertia [kg m^2] of a solid steel cylinder with the bar
    slots filled by aluminium; ``allowance`` covers shaft and end rings.
    """
    radius = geom.rotor_outer_diameter / 2.0
    L = geom.core_length
    slots = geom.rotor_slots * geom.rotor_slot_area * L
    steel = (math.pi * radius * radius * L - slots) * materials.steel_density
    aluminum = slots * materials.aluminum_density
    return allowance * 0.5 * (steel + aluminum) * radius * radius


def material_cost(
    mass: MassBreakdown, materials: MaterialCatalog
) -> CostBreakdown:
    return CostBreakdown(
        steel=(mass.stator_iron + mass.rotor_iron) * materials.steel_price,
        copper=mass.stator_copper * materials.copper_price,
        aluminum=mass.rotor_aluminum * materials.aluminum_price,
    )


def rotor_tip_speed(geom: DerivedGeometry, speed: float) -> float:
    """Rotor surface speed [m/s] at ``speed`` rpm."""
    if speed < 0:
        raise ValueError("speed must be >= 0")
    return math.pi * geom.rotor_outer_diameter * speed / 60.0
