"""
Physical constants and the single table of design coefficients used by the
motor model.

Every coefficient that the equivalent-circuit synthesis, the loss model or
the thermal model depends on lives here, so a calibration change touches one
file only.
"""

import math

# ---------------------------
# Physical constants
# ---------------------------

MU_0: float = 4.0 * math.pi * 1e-7  # vacuum permeability [H/m]
WATTS_PER_HP: float = 745.7
SQRT3: float = math.sqrt(3.0)

# ---------------------------
# Ratings of the studied traction motor
# ---------------------------

DEFAULT_RATED_POWER: float = 15.0 * WATTS_PER_HP  # 15 hp [W]
DEFAULT_LINE_VOLTAGE: float = 96.0  # battery-limited rms line voltage [V]
DEFAULT_RATED_SPEED: float = 1800.0  # [rpm]
# 9000 rpm is the top speed implied by the reference breakdown torque pairs
# through T_pm = (f_b/f_max)^2 T_pb.
DEFAULT_MAX_SPEED: float = 9000.0  # [rpm]
DEFAULT_SLOT_COUNTS: dict[int, tuple[int, int]] = {2: (18, 13), 4: (24, 18)}
SUPPORTED_POLE_COUNTS: tuple[int, ...] = (2, 4)
PHASES: int = 3

# Supply time harmonics (order, per-unit amplitude of the fundamental phase
# voltage) of the six-step inverter supply.
DEFAULT_SPECTRUM: tuple[tuple[int, float], ...] = (
    (1, 1.0),
    (5, 0.972),
    (7, 0.088),
    (11, 0.019),
    (13, 0.015),
    (17, 0.050),
)

# ---------------------------
# Materials
# ---------------------------

STEEL_DENSITY: float = 7850.0  # [kg/m^3]
COPPER_DENSITY: float = 8960.0
ALUMINUM_DENSITY: float = 2700.0
COPPER_RESISTIVITY: float = 2.1e-8  # at operating temperature [ohm m]
ALUMINUM_RESISTIVITY: float = 3.45e-8  # cast cage at operating temperature

LAMINATION_THICKNESS_MM: float = 0.35
LAMINATION_RESISTIVITY_OHM_CM: float = 5.0e-5
STEINMETZ_EXPONENT: float = 2.0
SIGMA_H: float = 3.0  # 0.35 mm sheets
# The reference design (D 0.20 m, L 0.15 m) dissipates about 1.8 % of rated
# power in the core with the harmonic terms included. Both values absorb the
# building factor and the 1/pi of the eddy-current expression.
HYSTERESIS_COEFFICIENT: float = 0.006
EDDY_COEFFICIENT: float = 1.2e-7

# Calibration prices, not market data [$/kg]. A 30-50 kg optimum costs
# roughly $85-160.
STEEL_PRICE: float = 1.5
COPPER_PRICE: float = 5.0
ALUMINUM_PRICE: float = 2.5

# ---------------------------
# Design coefficients
# ---------------------------

SLOT_FILL_FACTOR: float = 0.40
# mean turn length = a L + b tau + c
TURN_LENGTH_CORE_FACTOR: float = 2.0
TURN_LENGTH_PITCH_FACTOR: float = 2.3
TURN_LENGTH_CONSTANT: float = 0.08  # [m]
SHAFT_FRACTION: float = 0.25  # shaft diameter / bore diameter
INERTIA_ALLOWANCE: float = 1.0
MIN_CONDUCTOR_AREA: float = 0.2e-6  # [m^2]

STRAY_FRACTION: float = 0.018
# tooth pulsation, skew, zigzag, bar leakage
STRAY_SPLIT: tuple[float, float, float, float] = (0.35, 0.15, 0.35, 0.15)

# frame with forced air from the shaft fan
HEAT_TRANSFER_COEFFICIENT: float = 38.0  # [W/(m^2 K)]

STATOR_SLOT_OPENING: float = 0.003  # [m]
STATOR_TIP_HEIGHT: float = 0.001
ROTOR_SLOT_OPENING: float = 0.0015
ROTOR_TIP_HEIGHT: float = 0.001

ROUND_SLOT_PERMEANCE: float = 0.66
DIFFERENTIAL_LEAKAGE_FACTOR: float = 0.9
END_WINDING_PERMEANCE_FACTOR: float = 0.34
END_WINDING_PITCH_DEDUCTION: float = 0.64
END_RING_PERMEANCE_FACTOR: float = 0.36
CARTER_DENOMINATOR: float = 5.0

# ---------------------------
# Evaluation pipeline
# ---------------------------

INFEASIBLE_OBJECTIVE: float = 1.0e6
VIOLATION_CAP: float = 10.0
# An excess up to this fraction of |bound| counts as satisfied. The exterior
# penalty approaches an active bound from outside.
CONSTRAINT_TOLERANCE: float = 1.0e-4
SLIP_FLOOR: float = 1.0e-9
SINGULAR_IMPEDANCE: float = 1.0e-12
REPORT_SCHEMA_VERSION: int = 1
