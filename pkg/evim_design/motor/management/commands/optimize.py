import logging

from django.core.management.base import BaseCommand

from motor.conf import hj_config
from motor.documents import dump_json, load_document, validated, write_text
from motor.optimizer import optimize_design
from motor.reporting import result_to_dict, trace_frame
from motor.serializers import (
    HJConfigSerializer,
    MaterialCatalogSerializer,
    MotorSpecSerializer,
)

logger = logging.getLogger("motor")


class Command(BaseCommand):
    help = (
        "Maximizes the efficiency of one motor spec under the default "
        "constraints and prints the best design as JSON."
    )

    def add_arguments(self, parser):
        parser.add_argument("--spec", required=True, help="Spec JSON document")
        parser.add_argument("--materials", help="Materials JSON document")
        parser.add_argument("--hj", help="Pattern-search settings JSON document")
        parser.add_argument("--trace", help="Write the search trace to this CSV")
        parser.add_argument("--output", help="Write the result here, not stdout")

    def handle(self, *args, **options):
        spec, materials = validated(
            MotorSpecSerializer(data=load_document(options["spec"])), "spec"
        ).build()
        if options["materials"]:
            materials = validated(
                MaterialCatalogSerializer(data=load_document(options["materials"])),
                "materials",
            ).build()
        if options["hj"]:
            cfg = validated(
                HJConfigSerializer(data=load_document(options["hj"])), "hj"
            ).build()
        else:
            cfg = hj_config()

        result = optimize_design(spec, materials, cfg)

        if options["trace"]:
            trace_frame(result).to_csv(
                options["trace"], index=False, float_format="%.17g"
            )
            logger.info("Trace written to %s", options["trace"])

        text = dump_json(result_to_dict(result))
        if options["output"]:
            write_text(text, options["output"])
            self.stdout.write(
                self.style.SUCCESS(f"Result written to {options['output']}")
            )
        else:
            self.stdout.write(text, ending="")
