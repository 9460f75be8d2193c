from django.core.management.base import BaseCommand, CommandError

from motor.documents import VALIDATION_EXIT_CODE
from motor.spec import SlotShape
from study.reporting import load_study
from study.tables import TableFormat, emit_design_table


class Command(BaseCommand):
    help = "Prints the design tables of a finished study."

    def add_arguments(self, parser):
        parser.add_argument(
            "--study", required=True, help="Study output directory or study.json"
        )
        parser.add_argument(
            "--format", choices=TableFormat.values, default=TableFormat.TEXT
        )
        parser.add_argument(
            "--shape",
            choices=SlotShape.values,
            help="Only the table of this rotor slot shape",
        )

    def handle(self, *args, **options):
        try:
            report = load_study(options["study"])
        except (OSError, ValueError, KeyError) as e:
            raise CommandError(
                f"Cannot read study {options['study']}: {e}",
                returncode=VALIDATION_EXIT_CODE,
            )

        shapes = [SlotShape(options["shape"])] if options["shape"] else list(SlotShape)
        tables = [emit_design_table(report, options["format"], s) for s in shapes]
        tables = [t for t in tables if t]
        if not tables:
            self.stderr.write(self.style.WARNING("Study has no design columns."))
            return
        self.stdout.write("\n".join(tables), ending="")
