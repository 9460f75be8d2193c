import math
from dataclasses import replace

from django.test import SimpleTestCase

from motor.exceptions import GeometryInfeasible
from motor.geometry import (
    derive_geometry,
    mass_and_volume,
    material_cost,
    rotor_inertia,
    rotor_tip_speed,
)
from motor.performance import inertia_constant
from motor.spec import MaterialCatalog

from .fixtures import reference_design, reference_spec, round_spec


class DeriveGeometryTests(SimpleTestCase):
    def setUp(self):
        self.spec = reference_spec()
        self.geom = derive_geometry(self.spec, reference_design())

    def test_diameters(self):
        self.assertAlmostEqual(self.geom.rotor_outer_diameter, 0.198)
        self.assertAlmostEqual(self.geom.stator_outer_diameter, 0.34)
        self.assertAlmostEqual(self.geom.rotor_inner_diameter, 0.088)
        self.assertAlmostEqual(self.geom.shaft_diameter, 0.05)

    def test_teeth_and_pitches(self):
        self.assertAlmostEqual(self.geom.stator_slot_pitch, math.pi * 0.2 / 18)
        self.assertAlmostEqual(
            self.geom.stator_tooth_width_min, math.pi * 0.2 / 18 - 0.012
        )
        self.assertGreater(self.geom.stator_tooth_width, self.geom.stator_tooth_width_min)
        self.assertAlmostEqual(self.geom.pole_pitch, math.pi * 0.2 / 2)
        self.assertAlmostEqual(self.geom.stator_slot_area, 0.012 * 0.03)

    def test_round_bar_area(self):
        geom = derive_geometry(
            round_spec(),
            reference_design(rotor_slot_width=0.0175, rotor_slot_depth=0.0175),
        )
        self.assertAlmostEqual(geom.bar_area, 2.405e-4, delta=0.001e-4)
        self.assertEqual(geom.rotor_slot_depth, geom.rotor_slot_width)

    def test_round_slots_ignore_given_depth(self):
        geom = derive_geometry(round_spec(), reference_design(rotor_slot_width=0.0175))
        self.assertEqual(geom.rotor_slot_depth, 0.0175)

    def test_outer_diameter_of_published_optimum(self):
        # 2-pole 1800 rpm rectangular-slot optimum, stator yoke solved for D_o
        geom = derive_geometry(
            self.spec,
            reference_design(
                stator_inner_diameter=0.1264,
                core_length=0.0854,
                stator_slot_width=0.0111,
                stator_slot_depth=0.0267,
                rotor_slot_width=0.0146,
                rotor_slot_depth=0.0234,
                stator_yoke_depth=0.02025,
                rotor_yoke_depth=0.017,
            ),
        )
        self.assertAlmostEqual(geom.stator_outer_diameter, 0.2203, places=10)

    def test_closed_stator_tooth_is_infeasible(self):
        with self.assertRaises(GeometryInfeasible):
            derive_geometry(self.spec, reference_design(stator_slot_width=0.04))

    def test_rotor_core_into_shaft_is_infeasible(self):
        with self.assertRaises(GeometryInfeasible):
            derive_geometry(self.spec, reference_design(rotor_yoke_depth=0.06))

    def test_airgap_eating_the_rotor_is_infeasible(self):
        with self.assertRaises(GeometryInfeasible):
            derive_geometry(
                self.spec,
                reference_design(stator_inner_diameter=0.01, airgap_length=0.006),
            )


class MassAndCostTests(SimpleTestCase):
    def setUp(self):
        self.spec = reference_spec()
        self.materials = MaterialCatalog()
        self.geom = derive_geometry(self.spec, reference_design())

    def test_parts_add_up(self):
        mass = mass_and_volume(self.geom, self.spec, self.materials)
        parts = mass.core_parts()
        self.assertAlmostEqual(
            mass.total,
            sum(parts.values()) + mass.stator_copper + mass.rotor_aluminum,
        )
        self.assertTrue(all(value > 0 for value in parts.values()))
        self.assertAlmostEqual(
            mass.active_volume, math.pi / 4 * 0.34**2 * 0.15
        )

    def test_iron_scales_with_core_length(self):
        short = mass_and_volume(self.geom, self.spec, self.materials)
        geom = derive_geometry(self.spec, reference_design(core_length=0.30))
        long = mass_and_volume(geom, self.spec, self.materials)
        for name, value in short.core_parts().items():
            self.assertAlmostEqual(long.core_parts()[name] / value, 2.0, places=12)
        # end turns and end rings are overhang
        self.assertLess(long.stator_copper / short.stator_copper, 2.0)
        self.assertLess(long.rotor_aluminum / short.rotor_aluminum, 2.0)

    def test_cost_uses_catalog_prices(self):
        mass = mass_and_volume(self.geom, self.spec, self.materials)
        cost = material_cost(mass, self.materials)
        self.assertAlmostEqual(
            cost.total,
            (mass.stator_iron + mass.rotor_iron) * 1.5
            + mass.stator_copper * 5.0
            + mass.rotor_aluminum * 2.5,
        )

    def test_solid_cylinder_inertia(self):
        airgap = 0.0003
        geom = replace(
            self.geom,
            rotor_outer_diameter=0.1264 - 2 * airgap,
            core_length=0.0854,
            rotor_slot_area=0.0,
        )
        j = rotor_inertia(geom, self.materials)
        radius = geom.rotor_outer_diameter / 2
        self.assertAlmostEqual(j, 0.5 * 7850.0 * math.pi * radius**4 * 0.0854)
        self.assertAlmostEqual(j, 0.017, delta=0.001)

    def test_inertia_allowance_is_linear(self):
        j = rotor_inertia(self.geom, self.materials)
        self.assertGreater(j, 0)
        self.assertAlmostEqual(
            rotor_inertia(self.geom, self.materials, allowance=2.0), 2 * j
        )


class TipSpeedAndInertiaConstantTests(SimpleTestCase):
    def setUp(self):
        design = reference_design()
        geom = derive_geometry(reference_spec(), design)
        self.geom = replace(geom, rotor_outer_diameter=0.1264)

    def test_tip_speed(self):
        self.assertAlmostEqual(rotor_tip_speed(self.geom, 1800), 11.91, places=2)
        self.assertAlmostEqual(rotor_tip_speed(self.geom, 9000), 59.6, places=1)
        self.assertEqual(rotor_tip_speed(self.geom, 0), 0.0)

    def test_negative_speed_rejected(self):
        with self.assertRaises(ValueError):
            rotor_tip_speed(self.geom, -1)

    def test_inertia_constant(self):
        self.assertAlmostEqual(
            inertia_constant(0.0265, reference_spec()), 0.04209, places=5
        )
