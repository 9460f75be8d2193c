"""
Per-phase T-equivalent circuit of the cage motor.

The circuit elements are synthesized from the derived geometry and the
stator winding with the classical permeance method, one circuit per supply
harmonic. Skin effect in the rotor bars is evaluated at the rotor frequency
each harmonic induces when the machine runs at synchronous speed, so the
elements do not depend on the fundamental slip and the rated-slip search
only has to re-solve the circuits.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Optional

import numpy as np
from scipy import optimize as so

from . import constants as C
from .exceptions import NoRatedPoint, SingularCircuit, WindingInfeasible
from .geometry import DerivedGeometry
from .spec import (
    HarmonicSpectrum,
    MaterialCatalog,
    MotorSpec,
    Rotation,
    SlotShape,
    base_frequency,
    default_rotation,
)

logger = logging.getLogger(__name__)


# ---------------------------
# Winding
# ---------------------------


@dataclass(frozen=True)
class WindingSpec:
    turns_per_phase: int
    winding_factor: float
    conductor_area: float  # [m^2]
    parallel_paths: int = 1
    conductors_per_slot: float = 0.0
    slots_per_pole_phase: float = 0.0
    flux_per_pole: float = 0.0  # [Wb]

    @property
    def effective_turns(self) -> float:
        return self.winding_factor * self.turns_per_phase


def slots_per_pole_phase(stator_slots: int, pole_count: int) -> float:
    return stator_slots / (C.PHASES * pole_count)


def winding_factor(stator_slots: int, pole_count: int) -> float:
    """Distribution factor of a full-pitch integral-slot three-phase winding."""
    q = slots_per_pole_phase(stator_slots, pole_count)
    half_angle = math.pi / (6.0 * q)
    return math.sin(q * half_angle) / (q * math.sin(half_angle))


@lru_cache(maxsize=32)
def differential_leakage_coefficient(q: float, harmonics: int = 2000) -> float:
    """
    Stator differential (belt) leakage coefficient: the summed share of the
    space-harmonic airgap fields relative to the fundamental.
    """
    k = np.arange(-harmonics, harmonics + 1)
    nu = (6.0 * k[k != 0] + 1.0).astype(float)
    half_angle = math.pi / (6.0 * q)
    fundamental = math.sin(q * half_angle) / (q * math.sin(half_angle))
    k_d = np.sin(nu * q * half_angle) / (q * np.sin(nu * half_angle))
    return float(np.sum((k_d / (nu * fundamental)) ** 2))


def synthesize_winding(
    spec: MotorSpec, geom: DerivedGeometry, airgap_flux_density: float
) -> WindingSpec:
    """
    Sizes the stator winding from the EMF equation.

    Raises:
        WindingInfeasible: the turns round to zero or the conductors do not
            fit the slot.
    """
    if geom.stator_slot_area <= 0:
        raise WindingInfeasible("stator slots have no area")
    k_w = winding_factor(spec.stator_slots, spec.pole_count)
    flux = (
        2.0
        * airgap_flux_density
        * geom.bore_diameter
        * geom.core_length
        / spec.pole_count
    )
    f_b = base_frequency(spec)
    turns = round(spec.phase_voltage / (4.44 * f_b * k_w * flux))
    if turns < 1:
        raise WindingInfeasible("turns per phase round to zero")

    conductors_per_slot = 2.0 * spec.phases * turns / spec.stator_slots
    conductor_area = (
        geom.stator_slot_area * spec.options.fill_factor / conductors_per_slot
    )
    if conductor_area < C.MIN_CONDUCTOR_AREA:
        raise WindingInfeasible(
            f"{conductors_per_slot:.1f} conductors exceed the slot area"
        )
    return WindingSpec(
        turns_per_phase=int(turns),
        winding_factor=k_w,
        conductor_area=conductor_area,
        parallel_paths=1,
        conductors_per_slot=conductors_per_slot,
        slots_per_pole_phase=slots_per_pole_phase(
            spec.stator_slots, spec.pole_count
        ),
        flux_per_pole=flux,
    )


# ---------------------------
# Harmonic slip and coefficients
# ---------------------------


def harmonic_slip(order: int, s1: float, rotation: Rotation) -> float:
    if rotation == Rotation.BACKWARD:
        return (order + (1.0 - s1)) / order
    return (order - (1.0 - s1)) / order


def slot_permeance(shape: SlotShape, width: float, depth: float) -> float:
    """Specific slot-body permeance below the slot tip."""
    if shape == SlotShape.ROUND:
        return C.ROUND_SLOT_PERMEANCE
    return depth / (3.0 * width)


def carter_coefficient(slot_pitch: float, opening: float, gap: float) -> float:
    ratio = opening / gap
    gamma = ratio * ratio / (C.CARTER_DENOMINATOR + ratio)
    return slot_pitch / (slot_pitch - gamma * gap)


def skin_depth_ratio(height: float, frequency: float, resistivity: float) -> float:
    """Reduced conductor height xi of a bar carrying current at ``frequency``."""
    return height * math.sqrt(math.pi * C.MU_0 * abs(frequency) / resistivity)


def bar_resistance_factor(xi: float) -> float:
    """AC/DC resistance ratio k_r of a rectangular bar in an open slot."""
    if xi < 0.1:
        return 1.0 + 4.0 * xi**4 / 45.0
    if xi > 20.0:
        return xi
    two = 2.0 * xi
    return xi * (math.sinh(two) + math.sin(two)) / (
        math.cosh(two) - math.cos(two)
    )


def bar_reactance_factor(xi: float) -> float:
    """AC/DC slot-leakage ratio k_x of a rectangular bar."""
    if xi < 0.1:
        return 1.0 - 8.0 * xi**4 / 315.0
    if xi > 20.0:
        return 1.5 / xi
    two = 2.0 * xi
    return (
        1.5
        / xi
        * (math.sinh(two) - math.sin(two))
        / (math.cosh(two) - math.cos(two))
    )


# ---------------------------
# Circuit synthesis
# ---------------------------


@dataclass(frozen=True)
class HarmonicCircuit:
    order: int
    frequency: float  # f_m [Hz]
    stator_resistance: float  # R_sm [ohm]
    rotor_resistance: float  # R_rm referred [ohm]
    stator_leakage: float  # X_lsm [ohm]
    rotor_leakage: float  # X_lrm referred [ohm]
    magnetizing: float  # X_mm [ohm]
    pole_pairs: float
    skin_resistance_factor: float = 1.0
    skin_reactance_factor: float = 1.0

    @property
    def synchronous_speed(self) -> float:
        """Mechanical speed of this harmonic's field [rad/s]."""
        return 2.0 * math.pi * self.frequency / self.pole_pairs

    def stator_impedance(self) -> complex:
        return complex(self.stator_resistance, self.stator_leakage)

    def rotor_impedance(self, slip: float) -> Optional[complex]:
        """Rotor branch impedance, ``None`` for an open rotor at zero slip."""
        if slip == 0:
            return None
        return complex(self.rotor_resistance / slip, self.rotor_leakage)

    def parallel_impedance(self, slip: float) -> complex:
        z_m = complex(0.0, self.magnetizing)
        z_r = self.rotor_impedance(slip)
        if z_r is None:
            return z_m
        total = z_m + z_r
        if abs(total) < C.SINGULAR_IMPEDANCE:
            return 0j
        return z_m * z_r / total

    def total_impedance(self, slip: float) -> complex:
        return self.stator_impedance() + self.parallel_impedance(slip)

    def as_dict(self) -> dict[str, float]:
        return {
            "order": self.order,
            "frequency": self.frequency,
            "stator_resistance": self.stator_resistance,
            "rotor_resistance": self.rotor_resistance,
            "stator_leakage": self.stator_leakage,
            "rotor_leakage": self.rotor_leakage,
            "magnetizing": self.magnetizing,
            "skin_resistance_factor": self.skin_resistance_factor,
            "skin_reactance_factor": self.skin_reactance_factor,
        }


def effective_airgap(geom: DerivedGeometry, spec: MotorSpec) -> float:
    opts = spec.options
    k_s = carter_coefficient(
        geom.stator_slot_pitch, opts.stator_slot_opening, geom.airgap
    )
    k_r = carter_coefficient(
        geom.rotor_slot_pitch, opts.rotor_slot_opening, geom.airgap
    )
    return k_s * k_r * geom.airgap


def _harmonic_rotation(spec: MotorSpec, order: int) -> Rotation:
    try:
        return spec.spectrum.entry(order).rotation
    except KeyError:
        return default_rotation(order)


def circuit_params(
    spec: MotorSpec,
    geom: DerivedGeometry,
    winding: WindingSpec,
    materials: MaterialCatalog,
    order: int,
) -> HarmonicCircuit:
    opts = spec.options
    p1 = spec.pole_pairs
    f_m = order * base_frequency(spec)
    omega = 2.0 * math.pi * f_m
    L = geom.core_length
    N = winding.turns_per_phase
    k_w = winding.winding_factor
    q = winding.slots_per_pole_phase or slots_per_pole_phase(
        spec.stator_slots, spec.pole_count
    )
    g_e = effective_airgap(geom, spec)
    tau = geom.pole_pitch

    # stator
    stator_resistance = (
        materials.copper_resistivity
        * N
        * geom.mean_turn_length
        / (winding.parallel_paths * winding.conductor_area)
    )
    end_length = (geom.mean_turn_length - 2.0 * L) / 2.0
    lambda_slot = slot_permeance(
        SlotShape.RECTANGULAR, geom.stator_slot_width, geom.stator_slot_depth
    )
    lambda_tip = opts.stator_tip_height / opts.stator_slot_opening
    lambda_diff = (
        C.DIFFERENTIAL_LEAKAGE_FACTOR
        * geom.stator_slot_pitch
        * (q * k_w) ** 2
        * differential_leakage_coefficient(q)
        / g_e
    )
    lambda_end = (
        C.END_WINDING_PERMEANCE_FACTOR
        * q
        * max(end_length - C.END_WINDING_PITCH_DEDUCTION * tau, 0.0)
        / L
    )
    stator_leakage = (
        2.0
        * C.MU_0
        * omega
        * L
        * N
        * N
        / (p1 * q)
        * (lambda_slot + lambda_tip + lambda_diff + lambda_end)
    )
    magnetizing = (
        6.0 * C.MU_0 * omega * (k_w * N) ** 2 * tau * L / (math.pi**2 * p1 * g_e)
    )

    # rotor, per bar first
    Qr = geom.rotor_slots
    rotor_frequency = f_m * harmonic_slip(order, 0.0, _harmonic_rotation(spec, order))
    if opts.skin_effect:
        xi = skin_depth_ratio(
            geom.rotor_slot_depth, rotor_frequency, materials.aluminum_resistivity
        )
        k_r = bar_resistance_factor(xi)
        k_x = bar_reactance_factor(xi)
    else:
        k_r = k_x = 1.0

    half_angle = math.pi * p1 / Qr
    sin_half = math.sin(half_angle)
    bar_resistance = materials.aluminum_resistivity * L / geom.bar_area
    ring_segment = (
        materials.aluminum_resistivity
        * math.pi
        * geom.end_ring_mean_diameter
        / (Qr * geom.end_ring_area)
    )
    bar_equivalent_resistance = bar_resistance * k_r + ring_segment / (
        2.0 * sin_half * sin_half
    )

    lambda_bar = slot_permeance(
        geom.rotor_slot_shape, geom.rotor_slot_width, geom.rotor_slot_depth
    )
    lambda_rotor_tip = opts.rotor_tip_height / opts.rotor_slot_opening
    sigma_rotor = (half_angle / sin_half) ** 2 - 1.0
    lambda_rotor_diff = (
        C.DIFFERENTIAL_LEAKAGE_FACTOR * geom.rotor_slot_pitch * sigma_rotor / g_e
    )
    lambda_ring = (
        C.END_RING_PERMEANCE_FACTOR
        * geom.end_ring_mean_diameter
        / (Qr * L * (2.0 * sin_half) ** 2)
    )
    bar_equivalent_leakage = (
        omega
        * C.MU_0
        * L
        * (lambda_bar * k_x + lambda_rotor_tip + lambda_rotor_diff + lambda_ring)
    )
    referral = 4.0 * spec.phases * (k_w * N) ** 2 / Qr

    return HarmonicCircuit(
        order=order,
        frequency=f_m,
        stator_resistance=stator_resistance,
        rotor_resistance=referral * bar_equivalent_resistance,
        stator_leakage=stator_leakage,
        rotor_leakage=referral * bar_equivalent_leakage,
        magnetizing=magnetizing,
        pole_pairs=p1,
        skin_resistance_factor=k_r,
        skin_reactance_factor=k_x,
    )


def synthesize_circuits(
    spec: MotorSpec,
    geom: DerivedGeometry,
    winding: WindingSpec,
    materials: MaterialCatalog,
) -> dict[int, HarmonicCircuit]:
    return {
        order: circuit_params(spec, geom, winding, materials, order)
        for order in spec.spectrum.orders
    }


# ---------------------------
# Solution
# ---------------------------


@dataclass(frozen=True)
class OperatingSolution:
    order: int
    slip: float
    frequency: float
    voltage: float  # V_sm
    stator_current: float  # |I_sm|
    rotor_current: float  # |I_rm|
    airgap_emf: float  # |E_sm|
    power_factor: float  # cos phi_m
    input_power: float
    stator_copper_loss: float
    rotor_copper_loss: float
    airgap_power: float

    @property
    def mechanical_power(self) -> float:
        return (1.0 - self.slip) * self.airgap_power

    def as_dict(self) -> dict[str, float]:
        return {
            "order": self.order,
            "slip": self.slip,
            "frequency": self.frequency,
            "voltage": self.voltage,
            "stator_current": self.stator_current,
            "rotor_current": self.rotor_current,
            "airgap_emf": self.airgap_emf,
            "power_factor": self.power_factor,
            "input_power": self.input_power,
            "airgap_power": self.airgap_power,
        }


def solve_harmonic(
    circuit: HarmonicCircuit, voltage: float, slip: float
) -> OperatingSolution:
    """
    Phasor solution of the T-circuit with the phase voltage as reference.

    A zero slip leaves the rotor branch open.

    Raises:
        SingularCircuit: the input impedance vanishes.
    """
    z = circuit.total_impedance(slip)
    if abs(z) < C.SINGULAR_IMPEDANCE:
        raise SingularCircuit(f"order {circuit.order}: |Z| = {abs(z):.3e}")
    i_s = voltage / z
    emf = i_s * circuit.parallel_impedance(slip)
    z_r = circuit.rotor_impedance(slip)
    i_r = 0j if z_r is None or abs(z_r) == 0 else emf / z_r

    i_s_abs = abs(i_s)
    i_r_abs = abs(i_r)
    power_factor = min(max(math.cos(cmath.phase(z)), 0.0), 1.0)
    stator_loss = 3.0 * circuit.stator_resistance * i_s_abs**2
    rotor_loss = 3.0 * circuit.rotor_resistance * i_r_abs**2
    airgap = 0.0 if slip == 0 else rotor_loss / slip
    return OperatingSolution(
        order=circuit.order,
        slip=slip,
        frequency=circuit.frequency,
        voltage=voltage,
        stator_current=i_s_abs,
        rotor_current=i_r_abs,
        airgap_emf=abs(emf),
        power_factor=power_factor,
        input_power=3.0 * voltage * i_s_abs * power_factor,
        stator_copper_loss=stator_loss,
        rotor_copper_loss=rotor_loss,
        airgap_power=airgap,
    )


def solve_spectrum(
    spec: MotorSpec,
    circuits: Mapping[int, HarmonicCircuit],
    spectrum: HarmonicSpectrum,
    s1: float,
) -> dict[int, OperatingSolution]:
    solutions = {}
    for entry in spectrum:
        voltage = entry.amplitude * spec.phase_voltage
        slip = harmonic_slip(entry.order, s1, entry.rotation)
        solutions[entry.order] = solve_harmonic(
            circuits[entry.order], voltage, slip
        )
    return solutions


# ---------------------------
# Thevenin equivalent and breakdown
# ---------------------------


def thevenin(circuit: HarmonicCircuit, voltage: float) -> tuple[complex, complex]:
    """Source voltage and impedance seen by the rotor branch."""
    z_m = complex(0.0, circuit.magnetizing)
    z_s = circuit.stator_impedance()
    total = z_s + z_m
    if abs(total) < C.SINGULAR_IMPEDANCE:
        raise SingularCircuit(f"order {circuit.order}: open magnetizing branch")
    return voltage * z_m / total, z_s * z_m / total


def breakdown_slip(circuit: HarmonicCircuit) -> float:
    """Slip of peak airgap torque."""
    _, z_th = thevenin(circuit, 1.0)
    x = z_th.imag + circuit.rotor_leakage
    return circuit.rotor_resistance / math.hypot(z_th.real, x)


def peak_torque(circuit: HarmonicCircuit, voltage: float) -> float:
    """Peak of the airgap torque-slip curve of ``circuit`` at ``voltage``."""
    v_th, z_th = thevenin(circuit, voltage)
    x = z_th.imag + circuit.rotor_leakage
    return (
        3.0
        * abs(v_th) ** 2
        / (2.0 * circuit.synchronous_speed * (z_th.real + math.hypot(z_th.real, x)))
    )


def max_power_slip(circuit: HarmonicCircuit) -> float:
    """Slip at which the converted mechanical power peaks."""
    _, z_th = thevenin(circuit, 1.0)
    r_r = circuit.rotor_resistance
    load = math.hypot(z_th.real + r_r, z_th.imag + circuit.rotor_leakage)
    return r_r / (r_r + load)


def solve_rated_slip(
    spec: MotorSpec,
    circuits: Mapping[int, HarmonicCircuit],
    spectrum: HarmonicSpectrum,
    extra_load: float = 0.0,
) -> float:
    """
    Fundamental slip at which the machine delivers rated power plus
    ``extra_load`` (the losses charged to the shaft) summed over all
    harmonics.

    Raises:
        NoRatedPoint: the demand exceeds the peak available power.
    """
    demand = spec.rated_power + extra_load

    def balance(s1: float) -> float:
        solutions = solve_spectrum(spec, circuits, spectrum, s1)
        return sum(s.mechanical_power for s in solutions.values()) - demand

    upper = max_power_slip(circuits[1])
    if balance(upper) < 0:
        raise NoRatedPoint(
            f"{demand:.1f} W exceeds the peak available power"
        )
    if balance(C.SLIP_FLOOR) >= 0:
        return C.SLIP_FLOOR
    s1 = so.bisect(balance, C.SLIP_FLOOR, upper, xtol=1e-13, maxiter=200)
    logger.debug("rated slip %.6g (max-power slip %.4g)", s1, upper)
    return float(s1)

