import json
import os
import tempfile
import unittest
from io import StringIO
from pathlib import Path

import numpy as np
import pandas as pd
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from study.tables import CURVE_PARAMETERS, curve_file_name, parse_design_table

from .helpers import ALL_CONSTRAINTS_OFF

SLOW_TESTS = os.environ.get("EVIM_SLOW_TESTS") == "1"

TINY_STUDY = {
    "pole_counts": [2],
    "rotor_slot_shapes": ["rectangular"],
    "rated_speeds": [1800],
    "hj": {"max_evaluations": 20, "min_step_fraction": 0.01, "start_fractions": [0.5]},
    "constraints": ALL_CONSTRAINTS_OFF,
    "threads": 1,
}


class StudyCommandTestCase(SimpleTestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)
        self.addCleanup(self._tmp.cleanup)
        self.out = self.tmp / "out"

    def config(self, data):
        path = self.tmp / "study.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    def call(self, *args, **options):
        stdout, stderr = StringIO(), StringIO()
        call_command(*args, stdout=stdout, stderr=stderr, **options)
        return stdout.getvalue(), stderr.getvalue()


class StudyCommandTests(StudyCommandTestCase):
    def test_writes_study_and_tables(self):
        stdout, _ = self.call("study", config=self.config(TINY_STUDY), out=str(self.out))
        self.assertIn("Best design: 2p-rectangular-1800", stdout)
        self.assertIn("agrees", stdout)
        data = json.loads((self.out / "study.json").read_text())
        self.assertEqual(data["best"]["scenario"]["label"], "2p-rectangular-1800")
        table = parse_design_table((self.out / "table_rectangular.csv").read_text())
        self.assertEqual(list(table.columns), [(2, 1800.0)])
        self.assertTrue((self.out / "table_rectangular.txt").exists())
        self.assertFalse((self.out / "table_round.csv").exists())

    def test_curves_flag(self):
        config = dict(TINY_STUDY, curve_speeds={"2": [1600, 1800]})
        self.call("study", config=self.config(config), out=str(self.out), curves=True)
        for parameter in CURVE_PARAMETERS:
            frame = pd.read_csv(self.out / curve_file_name(parameter, 2))
            self.assertEqual(list(frame["rated_speed"]), [1600.0, 1800.0])

    def test_no_feasible_scenario_exits_with_3(self):
        config = dict(
            TINY_STUDY, constraints={"mass_cap": {"enabled": True, "bound": 0.001}}
        )
        with self.assertRaises(CommandError) as ctx:
            self.call("study", config=self.config(config), out=str(self.out))
        self.assertEqual(ctx.exception.returncode, 3)
        self.assertTrue((self.out / "study.json").exists())

    def test_empty_speed_list_warns(self):
        config = dict(TINY_STUDY, rated_speeds=[])
        _, stderr = self.call("study", config=self.config(config), out=str(self.out))
        self.assertIn("no scenarios", stderr)
        data = json.loads((self.out / "study.json").read_text())
        self.assertEqual(data["outcomes"], [])
        self.assertIsNone(data["best"])

    def test_invalid_config_exits_with_2(self):
        config = dict(TINY_STUDY, policy="speed")
        with self.assertRaises(CommandError) as ctx:
            self.call("study", config=self.config(config), out=str(self.out))
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertFalse(self.out.exists())


class TableCommandTests(StudyCommandTestCase):
    def test_prints_tables_of_a_finished_study(self):
        self.call("study", config=self.config(TINY_STUDY), out=str(self.out))
        text, _ = self.call("table", study=str(self.out))
        self.assertIn("rectangular rotor slots", text)
        csv, _ = self.call(
            "table", study=str(self.out / "study.json"), format="csv", shape="rectangular"
        )
        self.assertEqual(csv, (self.out / "table_rectangular.csv").read_text())

    def test_missing_study(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("table", study=str(self.tmp / "absent"))
        self.assertEqual(ctx.exception.returncode, 2)


@unittest.skipUnless(SLOW_TESTS, "set EVIM_SLOW_TESTS=1")
class SpeedSweepTests(StudyCommandTestCase):
    """Full-budget sweep of the 2-pole rectangular design over rated speed."""

    def test_sweep(self):
        config = {
            "pole_counts": [2],
            "rotor_slot_shapes": ["rectangular"],
            "rated_speeds": [1800],
            "curve_speeds": {"2": [1600, 1800, 2000]},
            "curves": True,
        }
        try:
            self.call("study", config=self.config(config), out=str(self.out))
        except CommandError as e:
            # curves are written before the selection
            self.assertEqual(e.returncode, 3)
        for parameter in CURVE_PARAMETERS:
            frame = pd.read_csv(self.out / curve_file_name(parameter, 2))
            self.assertEqual(list(frame["rated_speed"]), [1600.0, 1800.0, 2000.0])
        efficiency = pd.read_csv(self.out / curve_file_name("efficiency", 2))["value"]
        self.assertTrue(efficiency.dropna().between(0.0, 1.0).all())
        inertia = pd.read_csv(self.out / curve_file_name("inertia", 2))["value"]
        self.assertTrue(np.all(inertia.dropna().to_numpy() > 0))
