import logging
from dataclasses import replace
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from motor.documents import load_document, validated
from motor.spec import SlotShape
from study.reporting import save_study
from study.runner import run_study
from study.serializers import StudyConfigSerializer
from study.tables import TableFormat, emit_design_table, emit_speed_curves

logger = logging.getLogger("study")

NO_FEASIBLE_EXIT_CODE = 3


class Command(BaseCommand):
    help = (
        "Optimizes every scenario of a study and writes study.json, the "
        "design tables and, on request, the speed-trend curves."
    )

    def add_arguments(self, parser):
        parser.add_argument("--config", required=True, help="Study JSON document")
        parser.add_argument("--out", required=True, help="Output directory")
        parser.add_argument(
            "--curves",
            action="store_true",
            help="Also sweep the rated speed for the trend curves",
        )

    def handle(self, *args, **options):
        config = validated(
            StudyConfigSerializer(data=load_document(options["config"])), "study"
        ).build()
        if options["curves"]:
            config = replace(config, curves=True)

        out = Path(options["out"])
        report = run_study(config)
        save_study(report, out)

        if report.is_empty:
            self.stderr.write(
                self.style.WARNING("Study has no scenarios; wrote an empty report.")
            )
            return

        for shape in SlotShape:
            for fmt, suffix in ((TableFormat.CSV, "csv"), (TableFormat.TEXT, "txt")):
                text = emit_design_table(report, fmt, shape)
                if text:
                    (out / f"table_{shape.value}.{suffix}").write_text(
                        text, encoding="utf-8"
                    )
        if config.curves:
            written = emit_speed_curves(report, out)
            logger.info("Wrote %d curve files to %s", len(written), out)

        if report.best is None:
            if report.scenarios:
                raise CommandError(
                    "No feasible scenario in the study.",
                    returncode=NO_FEASIBLE_EXIT_CODE,
                )
            return
        self.stdout.write(report.best.rationale)
        self.stdout.write(
            self.style.SUCCESS(
                f"Best design: {report.best.scenario.label}. Results in {out}"
            )
        )
