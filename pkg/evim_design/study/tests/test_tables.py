import math
import tempfile
from pathlib import Path

import pandas as pd
from django.test import SimpleTestCase

from motor.spec import SlotShape
from study.reporting import load_study, save_study, study_from_dict, study_to_dict
from study.runner import TABULAR_FIELDS, Scenario, Selection, SelectionPolicy
from study.tables import (
    CURVE_COLUMNS,
    CURVE_PARAMETERS,
    DESIGN_TABLE_ROWS,
    TableFormat,
    curve_file_name,
    design_table,
    emit_design_table,
    emit_speed_curves,
    parse_design_table,
)

from .helpers import outcome, study_of

RECT = SlotShape.RECTANGULAR
ROUND = SlotShape.ROUND


def full_outcome(pole_count, shape, speed, **overrides):
    values = {name: 0.01 * (i + 1) for i, name in enumerate(TABULAR_FIELDS)}
    values.update(efficiency=0.8585, mass=41.234, cost=151.26)
    values.update(overrides)
    return outcome(pole_count, shape, speed, **values)


class DesignTableTests(SimpleTestCase):
    def setUp(self):
        self.report = study_of(
            [
                full_outcome(4, RECT, 1800.0),
                full_outcome(2, RECT, 1800.0),
                full_outcome(2, RECT, 1600.0, power_factor=1 / 3),
                outcome(4, RECT, 1600.0, feasible=False),
                full_outcome(2, ROUND, 1800.0),
            ]
        )

    def test_layout(self):
        frame = design_table(self.report.grid_outcomes(), RECT)
        self.assertEqual(list(frame.index), [row.label for row in DESIGN_TABLE_ROWS])
        self.assertEqual(
            list(frame.columns),
            [(2, 1600.0), (2, 1800.0), (4, 1600.0), (4, 1800.0)],
        )
        self.assertAlmostEqual(frame.loc["η (%)", (2, 1800.0)], 85.85)
        self.assertTrue(math.isnan(frame.loc["W (kg)", (4, 1600.0)]))

    def test_round_table_merges_rotor_slot_rows(self):
        frame = design_table(self.report.grid_outcomes(), ROUND)
        self.assertEqual(frame.index[-1], "W_r=d_r (m)")
        self.assertNotIn("d_r (m)", frame.index)
        self.assertEqual(list(frame.columns), [(2, 1800.0)])

    def test_csv_reads_back_exactly(self):
        text = emit_design_table(self.report, TableFormat.CSV, RECT)
        parsed = parse_design_table(text)
        pd.testing.assert_frame_equal(
            parsed, design_table(self.report.grid_outcomes(), RECT)
        )
        self.assertEqual(parsed.loc["pf", (2, 1600.0)], 1 / 3)

    def test_text_table(self):
        text = emit_design_table(self.report, TableFormat.TEXT, RECT)
        self.assertTrue(text.startswith("Rectangular stator slots, rectangular rotor slots"))
        self.assertIn("85.85", text)
        self.assertIn("41.23", text)
        self.assertIn("151.3", text)
        self.assertIn("Infeasible: 4p-rectangular-1600 (power_factor)", text)

    def test_no_columns_for_shape(self):
        report = study_of([full_outcome(2, RECT, 1800.0)])
        self.assertEqual(emit_design_table(report, TableFormat.TEXT, ROUND), "")
        self.assertEqual(emit_design_table(report, TableFormat.CSV, ROUND), "")

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            emit_design_table(self.report, "xlsx", RECT)


class SpeedCurveTests(SimpleTestCase):
    def test_one_file_per_parameter_and_pole_count(self):
        curves = [
            full_outcome(2, RECT, speed, efficiency=0.80 + speed / 1e5)
            for speed in (2000.0, 1400.0, 1600.0)
        ] + [full_outcome(4, RECT, 1500.0)]
        report = study_of([full_outcome(2, RECT, 1800.0)], curves=curves)
        with tempfile.TemporaryDirectory() as tmp:
            written = emit_speed_curves(report, tmp)
            self.assertEqual(len(written), 2 * len(CURVE_PARAMETERS))
            frame = pd.read_csv(Path(tmp) / curve_file_name("efficiency", 2))
        self.assertEqual(list(frame.columns), CURVE_COLUMNS)
        self.assertEqual(list(frame["rated_speed"]), [1400.0, 1600.0, 2000.0])
        self.assertAlmostEqual(frame["value"].iloc[0], 0.814)
        self.assertEqual(set(frame["pole_count"]), {2})


class StudyDocumentTests(SimpleTestCase):
    def setUp(self):
        report = study_of(
            [full_outcome(2, RECT, 1800.0), outcome(4, ROUND, 2000.0, feasible=False)]
        )
        selection = Selection(
            Scenario(2, RECT, 1800.0), SelectionPolicy.EFFICIENCY, "Picked.", True
        )
        self.report = type(report)(
            report.scenarios, report.curve_scenarios, report.outcomes, best=selection
        )

    def test_document_reads_back(self):
        data = study_to_dict(self.report)
        again = study_from_dict(data)
        self.assertEqual(study_to_dict(again), data)
        self.assertEqual(again.best.scenario.key, (2, "rectangular", 1800.0))
        infeasible = again.outcomes[(4, "round", 2000.0)]
        self.assertFalse(infeasible.feasible)
        self.assertTrue(math.isinf(infeasible.objective))
        self.assertEqual(data["outcomes"][1]["objective"], None)

    def test_save_and_load(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = save_study(self.report, Path(tmp) / "run")
            self.assertEqual(path.name, "study.json")
            from_dir = load_study(path.parent)
            from_file = load_study(path)
        self.assertEqual(study_to_dict(from_dir), study_to_dict(from_file))
        self.assertTrue(from_dir.best.agrees_with_published)
