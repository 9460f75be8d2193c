from __future__ import annotations

from dataclasses import replace
from typing import Any, Mapping, Optional, TypedDict

from django.utils.translation import gettext_lazy as _
from rest_framework import serializers

from .conf import default_max_speed, hj_config, model_options
from .optimizer import HJConfig
from .spec import (
    BreakdownModel,
    DesignVector,
    HarmonicEntry,
    HarmonicSpectrum,
    MaterialCatalog,
    MotorSpec,
    Rotation,
    SlotShape,
    default_rotation,
    default_slot_counts,
    default_spectrum,
    validate_design,
    validate_spec,
)


class HarmonicData(TypedDict, total=False):
    order: int
    amplitude: float
    rotation: str


class StrictSerializer(serializers.Serializer):
    """
    Rejects keys that name no declared field, so a typo in a document never
    silently falls back to a default.
    """

    default_error_messages = {"unknown_field": _("Unknown field.")}

    def to_internal_value(self, data: Any) -> dict[str, Any]:
        if isinstance(data, Mapping):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError(
                    {key: [self.error_messages["unknown_field"]] for key in unknown},
                    code="unknown_field",
                )
        return super().to_internal_value(data)


# ---------------------------
# Spec document
# ---------------------------


class HarmonicSerializer(StrictSerializer):
    order = serializers.IntegerField(min_value=1)
    amplitude = serializers.FloatField(min_value=0.0)
    rotation = serializers.ChoiceField(choices=Rotation.choices, required=False)


class ModelOptionsSerializer(StrictSerializer):
    fill_factor = serializers.FloatField(min_value=0.05, max_value=0.9, required=False)
    turn_length_core_factor = serializers.FloatField(min_value=0.0, required=False)
    turn_length_pitch_factor = serializers.FloatField(min_value=0.0, required=False)
    turn_length_constant = serializers.FloatField(min_value=0.0, required=False)
    shaft_fraction = serializers.FloatField(min_value=0.0, max_value=0.9, required=False)
    inertia_allowance = serializers.FloatField(min_value=0.0, required=False)
    stray_fraction = serializers.FloatField(min_value=0.0, required=False)
    stray_split = serializers.ListField(
        child=serializers.FloatField(min_value=0.0),
        min_length=4,
        max_length=4,
        required=False,
    )
    heat_transfer_coefficient = serializers.FloatField(required=False)
    breakdown_model = serializers.ChoiceField(
        choices=BreakdownModel.choices, required=False
    )
    stator_slot_opening = serializers.FloatField(required=False)
    stator_tip_height = serializers.FloatField(min_value=0.0, required=False)
    rotor_slot_opening = serializers.FloatField(required=False)
    rotor_tip_height = serializers.FloatField(min_value=0.0, required=False)
    skin_effect = serializers.BooleanField(required=False)

    def validate_stray_split(self, value: list[float]) -> tuple[float, ...]:
        if abs(sum(value) - 1.0) > 1e-9:
            raise serializers.ValidationError(_("Shares must add up to 1."))
        return tuple(value)

    def validate_breakdown_model(self, value: str) -> BreakdownModel:
        return BreakdownModel(value)

    def validate_heat_transfer_coefficient(self, value: float) -> float:
        if value <= 0:
            raise serializers.ValidationError(_("Must be > 0."))
        return value


class MaterialCatalogSerializer(StrictSerializer):
    lamination_thickness = serializers.FloatField(required=False)
    lamination_resistivity = serializers.FloatField(required=False)
    hysteresis_coefficient = serializers.FloatField(required=False)
    eddy_coefficient = serializers.FloatField(required=False)
    steinmetz_exponent = serializers.FloatField(required=False)
    sigma_h = serializers.FloatField(required=False)
    harmonic_permeability = serializers.DictField(
        child=serializers.FloatField(), required=False
    )
    steel_density = serializers.FloatField(required=False)
    copper_density = serializers.FloatField(required=False)
    aluminum_density = serializers.FloatField(required=False)
    copper_resistivity = serializers.FloatField(required=False)
    aluminum_resistivity = serializers.FloatField(required=False)
    steel_price = serializers.FloatField(required=False)
    copper_price = serializers.FloatField(required=False)
    aluminum_price = serializers.FloatField(required=False)

    def validate_harmonic_permeability(
        self, value: dict[str, float]
    ) -> tuple[tuple[int, float], ...]:
        try:
            return tuple(sorted((int(k), float(v)) for k, v in value.items()))
        except ValueError:
            raise serializers.ValidationError(_("Keys must be harmonic orders."))

    def build(self) -> MaterialCatalog:
        return MaterialCatalog(**self.validated_data)


class MotorSpecSerializer(StrictSerializer):
    """
    Spec document: ratings and topology, with optional ``spectrum``,
    ``options`` and ``materials`` blocks. Omitted values take the studied
    motor's defaults.
    """

    rated_power = serializers.FloatField(required=False)
    rated_voltage_line = serializers.FloatField(required=False)
    pole_count = serializers.IntegerField(default=2)
    rated_speed = serializers.FloatField(required=False)
    max_speed = serializers.FloatField(required=False)
    stator_slots = serializers.IntegerField(required=False)
    rotor_slots = serializers.IntegerField(required=False)
    stator_slot_shape = serializers.ChoiceField(
        choices=SlotShape.choices, required=False
    )
    rotor_slot_shape = serializers.ChoiceField(
        choices=SlotShape.choices, required=False
    )
    spectrum = HarmonicSerializer(many=True, required=False)
    options = ModelOptionsSerializer(required=False)
    materials = MaterialCatalogSerializer(required=False)

    def _spectrum(self, items: Optional[list[HarmonicData]]) -> HarmonicSpectrum:
        if not items:
            return default_spectrum()
        return HarmonicSpectrum(
            tuple(
                HarmonicEntry(
                    order=item["order"],
                    amplitude=item["amplitude"],
                    rotation=Rotation(
                        item.get("rotation") or default_rotation(item["order"])
                    ),
                )
                for item in items
            )
        )

    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        data = dict(attrs)
        pole_count = data.pop("pole_count")
        try:
            stator_slots, rotor_slots = default_slot_counts(pole_count)
        except ValueError:
            stator_slots, rotor_slots = MotorSpec.stator_slots, MotorSpec.rotor_slots
        data.setdefault("stator_slots", stator_slots)
        data.setdefault("rotor_slots", rotor_slots)
        data.setdefault("max_speed", default_max_speed())
        data["spectrum"] = self._spectrum(data.get("spectrum"))
        data["options"] = replace(model_options(), **data.get("options", {}))
        for key in ("stator_slot_shape", "rotor_slot_shape"):
            if key in data:
                data[key] = SlotShape(data[key])
        materials = MaterialCatalog(**data.pop("materials", {}))
        spec = MotorSpec(pole_count=pole_count, **data)

        violations = validate_spec(spec, materials)
        if violations:
            errors: dict[str, list[str]] = {}
            for violation in violations:
                errors.setdefault(violation.code, []).append(violation.message)
            raise serializers.ValidationError(errors)
        return {"spec": spec, "materials": materials}

    def build(self) -> tuple[MotorSpec, MaterialCatalog]:
        return self.validated_data["spec"], self.validated_data["materials"]


# ---------------------------
# Design vector, optimizer and constraint overrides
# ---------------------------


class DesignVectorSerializer(StrictSerializer):
    stator_inner_diameter = serializers.FloatField()
    core_length = serializers.FloatField()
    stator_slot_width = serializers.FloatField()
    stator_slot_depth = serializers.FloatField()
    rotor_slot_width = serializers.FloatField()
    # round rotor slots take their depth from the width
    rotor_slot_depth = serializers.FloatField(required=False)
    stator_yoke_depth = serializers.FloatField()
    rotor_yoke_depth = serializers.FloatField()
    airgap_length = serializers.FloatField()
    end_ring_cross_section = serializers.FloatField()
    airgap_flux_density = serializers.FloatField()

    def build(self, shape: SlotShape = SlotShape.RECTANGULAR) -> DesignVector:
        return build_design(self.validated_data, shape)


def build_design(values: Mapping[str, float], shape: SlotShape) -> DesignVector:
    """Design vector of validated values, tied and checked for ``shape``."""
    values = dict(values)
    if "rotor_slot_depth" not in values:
        if shape != SlotShape.ROUND:
            raise serializers.ValidationError(
                {"rotor_slot_depth": [_("This field is required.")]}
            )
        values["rotor_slot_depth"] = values["rotor_slot_width"]
    design = DesignVector(**values).tied_for(shape)
    violations = validate_design(design, shape)
    if violations:
        raise serializers.ValidationError(
            {"design": [v.message for v in violations]}
        )
    return design


class HJConfigSerializer(StrictSerializer):
    initial_step_fraction = serializers.FloatField(required=False)
    step_reduction = serializers.FloatField(required=False)
    min_step_fraction = serializers.FloatField(required=False)
    max_evaluations = serializers.IntegerField(min_value=1, required=False)
    pattern_acceleration = serializers.FloatField(required=False)
    penalty_mu = serializers.FloatField(required=False)
    penalty_doublings = serializers.IntegerField(min_value=0, required=False)
    start_fractions = serializers.ListField(
        child=serializers.FloatField(min_value=0.0, max_value=1.0),
        min_length=1,
        required=False,
    )

    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        if "start_fractions" in attrs:
            attrs["start_fractions"] = tuple(attrs["start_fractions"])
        try:
            hj_config(**attrs)
        except ValueError as e:
            raise serializers.ValidationError(str(e))
        return attrs

    def build(self) -> HJConfig:
        return hj_config(**self.validated_data)


class ConstraintOverrideSerializer(StrictSerializer):
    bound = serializers.FloatField(required=False)
    weight = serializers.FloatField(required=False)
    enabled = serializers.BooleanField(required=False)

    def validate_weight(self, value: float) -> float:
        if value <= 0:
            raise serializers.ValidationError(_("Must be > 0."))
        return value

