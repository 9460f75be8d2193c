from motor.spec import DesignVector, MotorSpec, SlotShape

REFERENCE_VALUES = {
    "stator_inner_diameter": 0.20,
    "core_length": 0.15,
    "stator_slot_width": 0.012,
    "stator_slot_depth": 0.03,
    "rotor_slot_width": 0.012,
    "rotor_slot_depth": 0.025,
    "stator_yoke_depth": 0.04,
    "rotor_yoke_depth": 0.03,
    "airgap_length": 0.001,
    "end_ring_cross_section": 1.0e-3,
    "airgap_flux_density": 0.6,
}


# close to the published 2-pole 1800 rpm optimum in size
COMPACT_VALUES = {
    "stator_inner_diameter": 0.1264,
    "core_length": 0.0854,
    "stator_slot_width": 0.018,
    "stator_slot_depth": 0.035,
    "rotor_slot_width": 0.015,
    "rotor_slot_depth": 0.028,
    "stator_yoke_depth": 0.02025,
    "rotor_yoke_depth": 0.017,
    "airgap_length": 0.0003,
    "end_ring_cross_section": 2.0e-3,
    "airgap_flux_density": 0.95,
}


def reference_design(**overrides: float) -> DesignVector:
    """A 2-pole design that evaluates with a rated point at 1800 rpm."""
    return DesignVector(**{**REFERENCE_VALUES, **overrides})


def compact_design(**overrides: float) -> DesignVector:
    return DesignVector(**{**COMPACT_VALUES, **overrides})


def reference_spec(**overrides: object) -> MotorSpec:
    return MotorSpec.default(**overrides)


def round_spec(**overrides: object) -> MotorSpec:
    return MotorSpec.default(rotor_slot_shape=SlotShape.ROUND, **overrides)
