"""
Fixed inputs of a motor design: ratings, topology, materials, supply
harmonic spectrum, model options and the box bounds of the 11 design
variables.

All types are frozen dataclasses, so a spec can be shared between threads
of a study without copying.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Iterator, Optional, Sequence

import numpy as np
from django.db import models

from . import constants as C

# ---------------------------
# Enumerations
# ---------------------------


class SlotShape(models.TextChoices):
    RECTANGULAR = "rectangular", "Rectangular"
    ROUND = "round", "Round"


class Rotation(models.TextChoices):
    FORWARD = "forward", "Forward"
    BACKWARD = "backward", "Backward"


class BreakdownModel(models.TextChoices):
    CIRCUIT = "circuit", "Slip-maximized circuit torque"
    LITERAL = "literal", "1.5 E / (X omega) as printed"


# ---------------------------
# Harmonic spectrum
# ---------------------------


def default_rotation(order: int) -> Rotation:
    """Orders 6k+1 rotate with the fundamental, orders 6k-1 against it."""
    return Rotation.BACKWARD if order % 6 == 5 else Rotation.FORWARD


@dataclass(frozen=True)
class HarmonicEntry:
    order: int
    amplitude: float
    rotation: Rotation

    @property
    def sign(self) -> int:
        return 1 if self.rotation == Rotation.FORWARD else -1


@dataclass(frozen=True)
class HarmonicSpectrum:
    entries: tuple[HarmonicEntry, ...]

    def __iter__(self) -> Iterator[HarmonicEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(entry.order for entry in self.entries)

    def entry(self, order: int) -> HarmonicEntry:
        for item in self.entries:
            if item.order == order:
                return item
        raise KeyError(order)

    def fundamental_only(self) -> HarmonicSpectrum:
        return HarmonicSpectrum(
            tuple(e for e in self.entries if e.order == 1)
        )

    @classmethod
    def from_pairs(
        cls, pairs: Sequence[tuple[int, float]]
    ) -> HarmonicSpectrum:
        return cls(
            tuple(
                HarmonicEntry(int(m), float(a), default_rotation(int(m)))
                for m, a in pairs
            )
        )


def default_spectrum() -> HarmonicSpectrum:
    """Fundamental plus the five inverter harmonics of the studied supply."""
    return HarmonicSpectrum.from_pairs(C.DEFAULT_SPECTRUM)


# ---------------------------
# Materials and model options
# ---------------------------


@dataclass(frozen=True)
class MaterialCatalog:
    lamination_thickness: float = C.LAMINATION_THICKNESS_MM  # [mm]
    lamination_resistivity: float = C.LAMINATION_RESISTIVITY_OHM_CM
    hysteresis_coefficient: float = C.HYSTERESIS_COEFFICIENT
    eddy_coefficient: float = C.EDDY_COEFFICIENT
    steinmetz_exponent: float = C.STEINMETZ_EXPONENT
    sigma_h: float = C.SIGMA_H
    # (order, K_Em) pairs; orders not listed use 1.0
    harmonic_permeability: tuple[tuple[int, float], ...] = ()
    steel_density: float = C.STEEL_DENSITY
    copper_density: float = C.COPPER_DENSITY
    aluminum_density: float = C.ALUMINUM_DENSITY
    copper_resistivity: float = C.COPPER_RESISTIVITY
    aluminum_resistivity: float = C.ALUMINUM_RESISTIVITY
    steel_price: float = C.STEEL_PRICE
    copper_price: float = C.COPPER_PRICE
    aluminum_price: float = C.ALUMINUM_PRICE

    def permeability_factor(self, order: int) -> float:
        return dict(self.harmonic_permeability).get(order, 1.0)


@dataclass(frozen=True)
class ModelOptions:
    """Coefficients of the sizing model that a study may want to override."""

    fill_factor: float = C.SLOT_FILL_FACTOR
    turn_length_core_factor: float = C.TURN_LENGTH_CORE_FACTOR
    turn_length_pitch_factor: float = C.TURN_LENGTH_PITCH_FACTOR
    turn_length_constant: float = C.TURN_LENGTH_CONSTANT
    shaft_fraction: float = C.SHAFT_FRACTION
    inertia_allowance: float = C.INERTIA_ALLOWANCE
    stray_fraction: float = C.STRAY_FRACTION
    stray_split: tuple[float, float, float, float] = C.STRAY_SPLIT
    heat_transfer_coefficient: float = C.HEAT_TRANSFER_COEFFICIENT
    breakdown_model: BreakdownModel = BreakdownModel.CIRCUIT
    stator_slot_opening: float = C.STATOR_SLOT_OPENING
    stator_tip_height: float = C.STATOR_TIP_HEIGHT
    rotor_slot_opening: float = C.ROTOR_SLOT_OPENING
    rotor_tip_height: float = C.ROTOR_TIP_HEIGHT
    skin_effect: bool = True


# ---------------------------
# Motor specification
# ---------------------------


@dataclass(frozen=True)
class MotorSpec:
    rated_power: float = C.DEFAULT_RATED_POWER
    rated_voltage_line: float = C.DEFAULT_LINE_VOLTAGE
    pole_count: int = 2
    rated_speed: float = C.DEFAULT_RATED_SPEED
    max_speed: float = C.DEFAULT_MAX_SPEED
    stator_slots: int = 18
    rotor_slots: int = 13
    stator_slot_shape: SlotShape = SlotShape.RECTANGULAR
    rotor_slot_shape: SlotShape = SlotShape.RECTANGULAR
    spectrum: HarmonicSpectrum = field(default_factory=default_spectrum)
    phases: int = C.PHASES
    options: ModelOptions = field(default_factory=ModelOptions)

    @classmethod
    def default(
        cls,
        pole_count: int = 2,
        rated_speed: float = C.DEFAULT_RATED_SPEED,
        rotor_slot_shape: SlotShape = SlotShape.RECTANGULAR,
        **overrides: object,
    ) -> MotorSpec:
        """Builds the studied 15 hp / 96 V motor with default slot counts."""
        stator_slots, rotor_slots = default_slot_counts(pole_count)
        values: dict[str, object] = {
            "pole_count": pole_count,
            "rated_speed": float(rated_speed),
            "stator_slots": stator_slots,
            "rotor_slots": rotor_slots,
            "rotor_slot_shape": SlotShape(rotor_slot_shape),
        }
        values.update(overrides)
        return cls(**values)

    @property
    def pole_pairs(self) -> float:
        return self.pole_count / 2.0

    @property
    def phase_voltage(self) -> float:
        return self.rated_voltage_line / C.SQRT3

    @property
    def rated_angular_speed(self) -> float:
        """Rated mechanical speed [rad/s]."""
        return 2.0 * math.pi * self.rated_speed / 60.0

    @property
    def rated_torque(self) -> float:
        return self.rated_power / self.rated_angular_speed


def default_slot_counts(pole_count: int) -> tuple[int, int]:
    try:
        return C.DEFAULT_SLOT_COUNTS[pole_count]
    except KeyError:
        raise ValueError(f"Unsupported pole count: {pole_count}") from None


def base_frequency(spec: MotorSpec) -> float:
    """Supply frequency at rated speed, slip ignored [Hz]."""
    return spec.pole_count * spec.rated_speed / 120.0


def max_frequency(spec: MotorSpec) -> float:
    return spec.pole_count * spec.max_speed / 120.0


# ---------------------------
# Design variables and bounds
# ---------------------------


@dataclass(frozen=True)
class DesignVector:
    stator_inner_diameter: float
    core_length: float
    stator_slot_width: float
    stator_slot_depth: float
    rotor_slot_width: float
    rotor_slot_depth: float
    stator_yoke_depth: float
    rotor_yoke_depth: float
    airgap_length: float
    end_ring_cross_section: float
    airgap_flux_density: float

    @classmethod
    def names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    @classmethod
    def from_array(cls, values: Sequence[float]) -> DesignVector:
        names = cls.names()
        if len(values) != len(names):
            raise ValueError(
                f"Expected {len(names)} design variables, got {len(values)}"
            )
        return cls(*(float(v) for v in values))

    def to_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in self.names()], dtype=float)

    def as_dict(self) -> dict[str, float]:
        return {n: getattr(self, n) for n in self.names()}

    def tied_for(self, shape: SlotShape) -> DesignVector:
        """Round rotor slots carry a single size: the depth follows W_r."""
        if shape == SlotShape.ROUND and (
            self.rotor_slot_depth != self.rotor_slot_width
        ):
            values = self.as_dict()
            values["rotor_slot_depth"] = self.rotor_slot_width
            return DesignVector(**values)
        return self


DESIGN_VARIABLES: tuple[str, ...] = DesignVector.names()
ROTOR_SLOT_DEPTH_INDEX: int = DESIGN_VARIABLES.index("rotor_slot_depth")


@dataclass(frozen=True)
class VariableBounds:
    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.lower) != len(self.upper):
            raise ValueError("Bounds must have matching lengths")

    @property
    def size(self) -> int:
        return len(self.lower)

    def lower_array(self) -> np.ndarray:
        return np.asarray(self.lower, dtype=float)

    def upper_array(self) -> np.ndarray:
        return np.asarray(self.upper, dtype=float)

    def span(self) -> np.ndarray:
        return self.upper_array() - self.lower_array()

    def clamp(self, x: np.ndarray) -> np.ndarray:
        return np.minimum(np.maximum(x, self.lower_array()), self.upper_array())

    def contains(self, x: Sequence[float]) -> bool:
        return all(
            lo <= float(v) <= hi
            for v, lo, hi in zip(x, self.lower, self.upper)
        )

    def at_fraction(self, fraction: float) -> np.ndarray:
        return self.lower_array() + fraction * self.span()


# D, L, W_s, d_s, W_r, d_r, yoke_s, yoke_r, g, ring area, B_g
_DEFAULT_BOX: dict[str, tuple[float, float]] = {
    "stator_inner_diameter": (0.06, 0.30),
    "core_length": (0.04, 0.30),
    "stator_slot_width": (0.003, 0.05),
    "stator_slot_depth": (0.005, 0.05),
    "rotor_slot_width": (0.003, 0.05),
    "rotor_slot_depth": (0.005, 0.05),
    "stator_yoke_depth": (0.005, 0.10),
    "rotor_yoke_depth": (0.005, 0.06),
    "airgap_length": (0.0002, 0.002),
    "end_ring_cross_section": (5.0e-5, 2.0e-3),
    "airgap_flux_density": (0.3, 1.0),
}


def default_bounds(spec: MotorSpec) -> VariableBounds:
    """
    Box bounds of the 11 design variables.

    The box is the same for both pole counts and wide enough to hold every
    published optimum of the study.
    """
    lower = tuple(_DEFAULT_BOX[name][0] for name in DESIGN_VARIABLES)
    upper = tuple(_DEFAULT_BOX[name][1] for name in DESIGN_VARIABLES)
    return VariableBounds(lower, upper)


# ---------------------------
# Validation
# ---------------------------


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


def _spectrum_violations(spectrum: HarmonicSpectrum) -> list[Violation]:
    found: list[Violation] = []
    orders = spectrum.orders
    if any(b <= a for a, b in zip(orders, orders[1:])):
        found.append(
            Violation("spectrum_order", "harmonic orders strictly increasing")
        )
    if 1 not in orders:
        found.append(
            Violation("spectrum_fundamental", "fundamental order 1 present")
        )
    else:
        fundamental = spectrum.entry(1)
        if (
            fundamental.amplitude != 1.0
            or fundamental.rotation != Rotation.FORWARD
        ):
            found.append(
                Violation(
                    "spectrum_reference",
                    "fundamental is the forward 1.0 p.u. reference",
                )
            )
    if any(e.amplitude < 0 for e in spectrum):
        found.append(
            Violation("spectrum_amplitude", "harmonic amplitudes >= 0")
        )
    if any(e.order < 1 for e in spectrum):
        found.append(Violation("spectrum_order", "harmonic orders >= 1"))
    return found


def _material_violations(materials: MaterialCatalog) -> list[Violation]:
    found: list[Violation] = []
    for item in fields(materials):
        if item.name == "harmonic_permeability":
            continue
        value = getattr(materials, item.name)
        if not value > 0:
            found.append(
                Violation(
                    "material_nonpositive", f"{item.name} > 0 (got {value})"
                )
            )
    if not 1.6 <= materials.steinmetz_exponent <= 2.4:
        found.append(
            Violation("steinmetz_exponent", "steinmetz exponent in [1.6, 2.4]")
        )
    if any(k <= 0 for _, k in materials.harmonic_permeability):
        found.append(
            Violation("material_nonpositive", "harmonic permeability > 0")
        )
    return found


def validate_spec(
    spec: MotorSpec, materials: Optional[MaterialCatalog] = None
) -> list[Violation]:
    """
    Returns every broken invariant of ``spec`` and ``materials``.

    Violations are data: the caller decides whether to raise. The list is
    empty iff the inputs are valid, and the function is pure.
    """
    found: list[Violation] = []
    if not spec.rated_power > 0:
        found.append(Violation("rated_power", "rated_power > 0"))
    if not spec.rated_voltage_line > 0:
        found.append(Violation("rated_voltage", "rated_voltage_line > 0"))
    if spec.pole_count not in C.SUPPORTED_POLE_COUNTS:
        found.append(Violation("pole_count", "pole_count in {2, 4}"))
    if not spec.rated_speed > 0:
        found.append(Violation("rated_speed", "rated_speed > 0"))
    elif not spec.rated_speed < spec.max_speed:
        found.append(Violation("speed_order", "rated_speed < max_speed"))
    if spec.stator_slots <= 0 or spec.rotor_slots <= 0:
        found.append(Violation("slot_count", "slot counts positive"))
    elif spec.stator_slots == spec.rotor_slots:
        found.append(Violation("slot_counts_equal", "slot counts equal"))
    if spec.stator_slot_shape != SlotShape.RECTANGULAR:
        found.append(
            Violation("stator_slot_shape", "stator slots are rectangular")
        )
    if spec.phases != C.PHASES:
        found.append(Violation("phases", "three-phase winding"))
    found.extend(_spectrum_violations(spec.spectrum))
    if materials is not None:
        found.extend(_material_violations(materials))
    return found


def validate_design(x: DesignVector, shape: SlotShape) -> list[Violation]:
    found: list[Violation] = []
    for name, value in x.as_dict().items():
        if not value > 0:
            found.append(Violation("design_nonpositive", f"{name} > 0"))
    if x.airgap_length < 0.0002:
        found.append(Violation("airgap", "airgap_length >= 0.2 mm"))
    if not 0.2 < x.airgap_flux_density < 1.1:
        found.append(
            Violation("airgap_flux_density", "airgap flux density in (0.2, 1.1) T")
        )
    if shape == SlotShape.ROUND and x.rotor_slot_depth != x.rotor_slot_width:
        found.append(
            Violation("round_slot", "round rotor slots need W_r = d_r")
        )
    return found
