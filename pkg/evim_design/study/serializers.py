from __future__ import annotations

from typing import Any

from django.utils.translation import gettext_lazy as _
from rest_framework import serializers

from motor.conf import hj_config, thread_count
from motor.constraints import default_constraints
from motor.serializers import (
    ConstraintOverrideSerializer,
    HJConfigSerializer,
    MaterialCatalogSerializer,
    MotorSpecSerializer,
    StrictSerializer,
)
from motor.spec import MaterialCatalog, MotorSpec, SlotShape
from motor.spec import validate_spec as spec_violations

from .runner import (
    DEFAULT_CURVE_SPEEDS,
    DEFAULT_POLE_COUNTS,
    DEFAULT_RATED_SPEEDS,
    DEFAULT_ROTOR_SLOT_SHAPES,
    SelectionPolicy,
    StudyConfig,
    curve_scenarios,
    scenario_grid,
)


class StudyConfigSerializer(StrictSerializer):
    """
    Study document. Every key is optional; an empty document runs the
    default grid of 2 and 4 poles, both rotor slot shapes and 1600, 1800
    and 2000 rpm.
    """

    spec = serializers.DictField(required=False)
    materials = MaterialCatalogSerializer(required=False)
    hj = HJConfigSerializer(required=False)
    pole_counts = serializers.ListField(
        child=serializers.ChoiceField(choices=DEFAULT_POLE_COUNTS),
        required=False,
    )
    rotor_slot_shapes = serializers.ListField(
        child=serializers.ChoiceField(choices=SlotShape.choices), required=False
    )
    rated_speeds = serializers.ListField(
        child=serializers.FloatField(min_value=1.0), required=False
    )
    curves = serializers.BooleanField(default=False)
    curve_speeds = serializers.DictField(
        child=serializers.ListField(child=serializers.FloatField(min_value=1.0)),
        required=False,
    )
    constraints = serializers.DictField(
        child=ConstraintOverrideSerializer(), required=False
    )
    policy = serializers.ChoiceField(
        choices=SelectionPolicy.choices, default=SelectionPolicy.EFFICIENCY
    )
    threads = serializers.IntegerField(min_value=1, required=False)

    def validate_spec(self, value: dict[str, Any]) -> tuple[MotorSpec, MaterialCatalog]:
        serializer = MotorSpecSerializer(data=value)
        if not serializer.is_valid():
            raise serializers.ValidationError(serializer.errors)
        return serializer.build()

    def validate_curve_speeds(
        self, value: dict[str, list[float]]
    ) -> dict[int, tuple[float, ...]]:
        speeds = {}
        for key, items in value.items():
            try:
                pole_count = int(key)
            except ValueError:
                raise serializers.ValidationError(_("Keys must be pole counts."))
            if pole_count not in DEFAULT_POLE_COUNTS:
                raise serializers.ValidationError(
                    _("Unsupported pole count: %(p)s") % {"p": key}
                )
            speeds[pole_count] = tuple(sorted(set(items)))
        return speeds

    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        base_spec, spec_materials = attrs.get("spec") or (MotorSpec(), None)
        if "materials" in attrs:
            materials = MaterialCatalog(**attrs["materials"])
        else:
            materials = spec_materials or MaterialCatalog()
        hj = hj_config(**attrs.get("hj", {}))

        curve_speeds = dict(DEFAULT_CURVE_SPEEDS)
        curve_speeds.update(attrs.get("curve_speeds", {}))
        config = StudyConfig(
            base_spec=base_spec,
            materials=materials,
            hj=hj,
            pole_counts=tuple(
                dict.fromkeys(attrs.get("pole_counts", DEFAULT_POLE_COUNTS))
            ),
            rotor_slot_shapes=tuple(
                dict.fromkeys(
                    SlotShape(s)
                    for s in attrs.get("rotor_slot_shapes", DEFAULT_ROTOR_SLOT_SHAPES)
                )
            ),
            rated_speeds=tuple(
                sorted(set(attrs.get("rated_speeds", DEFAULT_RATED_SPEEDS)))
            ),
            curves=attrs["curves"],
            curve_speeds=curve_speeds,
            constraint_overrides=attrs.get("constraints", {}),
            policy=SelectionPolicy(attrs["policy"]),
            threads=attrs.get("threads") or thread_count(),
        )

        known = {c.name for c in default_constraints(base_spec)}
        unknown = sorted(set(config.constraint_overrides) - known)
        if unknown:
            raise serializers.ValidationError(
                {name: [_("Unknown constraint.")] for name in unknown},
                code="unknown_field",
            )

        # every scenario must be a valid motor on its own
        errors: dict[str, list[str]] = {}
        for scenario in [*scenario_grid(config), *curve_scenarios(config)]:
            for violation in spec_violations(config.spec_for(scenario), materials):
                errors.setdefault(scenario.label, []).append(violation.message)
        if errors:
            raise serializers.ValidationError(errors)
        return {"config": config}

    def build(self) -> StudyConfig:
        return self.validated_data["config"]
