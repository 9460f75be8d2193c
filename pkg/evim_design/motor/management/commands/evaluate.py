import logging

from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from motor.constraints import default_constraints, evaluate_constraints
from motor.documents import (
    VALIDATION_EXIT_CODE,
    dump_json,
    format_errors,
    load_document,
    validated,
    write_text,
)
from motor.exceptions import InfeasibleDesign
from motor.performance import evaluate_design
from motor.reporting import report_to_dict
from motor.serializers import (
    DesignVectorSerializer,
    MaterialCatalogSerializer,
    MotorSpecSerializer,
)

logger = logging.getLogger("motor")


class Command(BaseCommand):
    help = "Evaluates one motor design and prints its performance report as JSON."

    def add_arguments(self, parser):
        parser.add_argument("--spec", required=True, help="Spec JSON document")
        parser.add_argument("--design", required=True, help="Design vector JSON")
        parser.add_argument(
            "--materials", help="Materials JSON, overrides the spec's block"
        )
        parser.add_argument("--output", help="Write the report here, not stdout")

    def handle(self, *args, **options):
        spec, materials = validated(
            MotorSpecSerializer(data=load_document(options["spec"])), "spec"
        ).build()
        if options["materials"]:
            materials = validated(
                MaterialCatalogSerializer(data=load_document(options["materials"])),
                "materials",
            ).build()
        design_serializer = validated(
            DesignVectorSerializer(data=load_document(options["design"])), "design"
        )
        try:
            design = design_serializer.build(spec.rotor_slot_shape)
        except serializers.ValidationError as e:
            raise CommandError(
                f"Invalid design: {format_errors(e.detail)}",
                returncode=VALIDATION_EXIT_CODE,
            )

        constraints = default_constraints(spec)
        try:
            report = evaluate_design(spec, design, materials)
        except InfeasibleDesign as e:
            logger.warning("Design infeasible: %s", e.message)
            cr = evaluate_constraints(e, constraints)
            data = {"feasible": False, "failure": e.as_dict(), **cr.as_dict()}
        else:
            cr = evaluate_constraints(report, constraints)
            data = report_to_dict(report, cr)

        text = dump_json(data)
        if options["output"]:
            write_text(text, options["output"])
            self.stdout.write(self.style.SUCCESS(f"Report written to {options['output']}"))
        else:
            self.stdout.write(text, ending="")
