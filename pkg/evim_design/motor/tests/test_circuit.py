import math
from dataclasses import replace

import numpy as np
from django.test import SimpleTestCase

from motor import constants as C
from motor.circuit import (
    HarmonicCircuit,
    bar_reactance_factor,
    bar_resistance_factor,
    breakdown_slip,
    carter_coefficient,
    circuit_params,
    differential_leakage_coefficient,
    effective_airgap,
    harmonic_slip,
    max_power_slip,
    peak_torque,
    skin_depth_ratio,
    solve_harmonic,
    solve_rated_slip,
    solve_spectrum,
    synthesize_circuits,
    synthesize_winding,
    winding_factor,
)
from motor.exceptions import NoRatedPoint, SingularCircuit, WindingInfeasible
from motor.geometry import derive_geometry
from motor.spec import MaterialCatalog, ModelOptions, Rotation

from .fixtures import reference_design, reference_spec


def random_circuit(rng: np.random.Generator, order: int = 1) -> HarmonicCircuit:
    return HarmonicCircuit(
        order=order,
        frequency=30.0 * order,
        stator_resistance=rng.uniform(1e-3, 0.5),
        rotor_resistance=rng.uniform(1e-3, 0.5),
        stator_leakage=rng.uniform(1e-3, 2.0),
        rotor_leakage=rng.uniform(1e-3, 2.0),
        magnetizing=rng.uniform(0.5, 50.0),
        pole_pairs=1.0,
    )


def airgap_torque(circuit, voltage, slip):
    solution = solve_harmonic(circuit, voltage, slip)
    return solution.airgap_power / circuit.synchronous_speed


class WindingTests(SimpleTestCase):
    def test_winding_factors(self):
        self.assertAlmostEqual(winding_factor(18, 2), 0.9598, places=4)
        self.assertAlmostEqual(winding_factor(24, 4), 0.9659, places=4)

    def test_turns_from_emf_equation(self):
        spec = reference_spec()
        design = reference_design(
            stator_inner_diameter=0.1264,
            core_length=0.0854,
            stator_slot_width=0.0111,
            stator_slot_depth=0.0267,
            rotor_slot_width=0.0146,
            rotor_slot_depth=0.0234,
            stator_yoke_depth=0.02,
            rotor_yoke_depth=0.01,
            airgap_length=0.0005,
        )
        geom = derive_geometry(spec, design)
        winding = synthesize_winding(spec, geom, 0.6)
        self.assertAlmostEqual(winding.flux_per_pole, 0.006477, places=6)
        self.assertEqual(winding.turns_per_phase, 67)
        self.assertAlmostEqual(winding.conductors_per_slot, 6 * 67 / 18)
        self.assertAlmostEqual(winding.slots_per_pole_phase, 3.0)

    def test_reference_turns(self):
        spec = reference_spec()
        geom = derive_geometry(spec, reference_design())
        self.assertEqual(synthesize_winding(spec, geom, 0.6).turns_per_phase, 24)

    def test_crowded_slot_is_infeasible(self):
        spec = reference_spec()
        geom = replace(
            derive_geometry(spec, reference_design()), stator_slot_area=1e-6
        )
        with self.assertRaises(WindingInfeasible):
            synthesize_winding(spec, geom, 0.6)

    def test_zero_turns_is_infeasible(self):
        spec = reference_spec(rated_voltage_line=1.0)
        geom = derive_geometry(spec, reference_design())
        with self.assertRaises(WindingInfeasible):
            synthesize_winding(spec, geom, 0.6)

    def test_differential_leakage_falls_with_q(self):
        self.assertGreater(
            differential_leakage_coefficient(2.0),
            differential_leakage_coefficient(3.0),
        )
        self.assertGreater(differential_leakage_coefficient(3.0), 0.0)


class CoefficientTests(SimpleTestCase):
    def test_harmonic_slips(self):
        self.assertAlmostEqual(harmonic_slip(5, 0.035, Rotation.BACKWARD), 1.193)
        self.assertAlmostEqual(
            harmonic_slip(7, 0.035, Rotation.FORWARD), 0.8621, places=4
        )
        self.assertAlmostEqual(harmonic_slip(1, 0.02, Rotation.FORWARD), 0.02)

    def test_carter_coefficient(self):
        self.assertEqual(carter_coefficient(0.03, 0.0, 0.001), 1.0)
        self.assertGreater(carter_coefficient(0.03, 0.003, 0.001), 1.0)

    def test_bar_factors(self):
        self.assertAlmostEqual(bar_resistance_factor(0.0), 1.0)
        self.assertAlmostEqual(bar_reactance_factor(0.0), 1.0)
        self.assertAlmostEqual(bar_resistance_factor(1.0), 1.0856, places=3)
        self.assertAlmostEqual(bar_reactance_factor(1.0), 0.9756, places=3)
        self.assertAlmostEqual(bar_resistance_factor(25.0), 25.0)
        self.assertAlmostEqual(bar_reactance_factor(25.0), 0.06)
        values = [bar_resistance_factor(x) for x in np.linspace(0.0, 10.0, 50)]
        self.assertTrue(all(b >= a for a, b in zip(values, values[1:])))


class SynthesisTests(SimpleTestCase):
    def setUp(self):
        self.spec = reference_spec()
        self.geom = derive_geometry(self.spec, reference_design())
        self.winding = synthesize_winding(self.spec, self.geom, 0.6)
        self.circuits = synthesize_circuits(
            self.spec, self.geom, self.winding, MaterialCatalog()
        )

    def test_one_circuit_per_harmonic(self):
        self.assertEqual(tuple(self.circuits), self.spec.spectrum.orders)
        self.assertAlmostEqual(self.circuits[5].frequency, 150.0)

    def test_reactances_scale_with_frequency(self):
        first, fifth = self.circuits[1], self.circuits[5]
        self.assertAlmostEqual(fifth.magnetizing / first.magnetizing, 5.0)
        self.assertGreater(first.magnetizing, 10 * first.stator_leakage)

    def test_skin_effect_raises_harmonic_rotor_resistance(self):
        first, fifth = self.circuits[1], self.circuits[5]
        self.assertGreater(fifth.skin_resistance_factor, first.skin_resistance_factor)
        self.assertGreater(fifth.rotor_resistance, first.rotor_resistance)
        self.assertLess(fifth.skin_reactance_factor, 1.0)

    def test_skin_effect_is_taken_at_synchronous_speed(self):
        first, fifth = self.circuits[1], self.circuits[5]
        self.assertEqual(first.skin_resistance_factor, 1.0)
        rotor_frequency = fifth.frequency * harmonic_slip(5, 0.0, Rotation.BACKWARD)
        self.assertAlmostEqual(rotor_frequency, 6.0 * first.frequency)
        xi = skin_depth_ratio(
            self.geom.rotor_slot_depth,
            rotor_frequency,
            MaterialCatalog().aluminum_resistivity,
        )
        self.assertEqual(fifth.skin_resistance_factor, bar_resistance_factor(xi))

    def test_circuit_params_for_one_order(self):
        fifth = circuit_params(self.spec, self.geom, self.winding, MaterialCatalog(), 5)
        self.assertEqual(fifth, self.circuits[5])

    def test_without_skin_effect_rotor_resistance_is_flat(self):
        spec = reference_spec(options=ModelOptions(skin_effect=False))
        first, fifth = (
            circuit_params(spec, self.geom, self.winding, MaterialCatalog(), m)
            for m in (1, 5)
        )
        self.assertEqual(fifth.skin_resistance_factor, 1.0)
        self.assertEqual(fifth.rotor_resistance, first.rotor_resistance)
        self.assertEqual(fifth.stator_resistance, first.stator_resistance)

    def test_effective_airgap_exceeds_mechanical(self):
        self.assertGreater(effective_airgap(self.geom, self.spec), self.geom.airgap)

    def test_rated_slip_meets_demand(self):
        s1 = solve_rated_slip(self.spec, self.circuits, self.spec.spectrum, 500.0)
        self.assertGreater(s1, C.SLIP_FLOOR)
        self.assertLess(s1, max_power_slip(self.circuits[1]))
        solutions = solve_spectrum(self.spec, self.circuits, self.spec.spectrum, s1)
        produced = sum(s.mechanical_power for s in solutions.values())
        self.assertAlmostEqual(produced / (self.spec.rated_power + 500.0), 1.0, places=6)

    def test_unreachable_demand(self):
        with self.assertRaises(NoRatedPoint):
            solve_rated_slip(self.spec, self.circuits, self.spec.spectrum, 1e7)


class SolverTests(SimpleTestCase):
    def test_power_balance_on_random_circuits(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            circuit = random_circuit(rng)
            slip = rng.uniform(1e-3, 2.0)
            solution = solve_harmonic(circuit, rng.uniform(1.0, 100.0), slip)
            balance = solution.stator_copper_loss + solution.airgap_power
            self.assertLessEqual(
                abs(solution.input_power - balance), 1e-9 * solution.input_power
            )

    def test_zero_slip_leaves_rotor_open(self):
        circuit = random_circuit(np.random.default_rng(1))
        solution = solve_harmonic(circuit, 50.0, 0.0)
        self.assertEqual(solution.rotor_current, 0.0)
        self.assertEqual(solution.airgap_power, 0.0)
        self.assertGreater(solution.stator_current, 0.0)

    def test_singular_circuit(self):
        circuit = HarmonicCircuit(1, 30.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0)
        with self.assertRaises(SingularCircuit):
            solve_harmonic(circuit, 50.0, 0.05)

    def test_peak_torque_is_torque_at_breakdown_slip(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            circuit = random_circuit(rng)
            peak = peak_torque(circuit, 55.0)
            at_slip = airgap_torque(circuit, 55.0, breakdown_slip(circuit))
            self.assertAlmostEqual(at_slip / peak, 1.0, places=9)
            for slip in np.linspace(1e-3, 1.0, 200):
                self.assertLessEqual(
                    airgap_torque(circuit, 55.0, slip), peak * (1 + 1e-12)
                )

    def test_max_power_slip_is_a_maximum(self):
        circuit = random_circuit(np.random.default_rng(3))
        s_p = max_power_slip(circuit)

        def power(slip):
            return solve_harmonic(circuit, 55.0, slip).mechanical_power

        self.assertGreaterEqual(power(s_p), power(0.98 * s_p))
        self.assertGreaterEqual(power(s_p), power(min(1.02 * s_p, 1.0)))
        self.assertTrue(0 < s_p < 1)
        self.assertFalse(math.isnan(s_p))
