from rest_framework import serializers
from rest_framework_simplejwt.serializers import TokenObtainPairSerializer
from django.utils.translation import gettext_lazy as _
from typing import Any, Dict, TypedDict

from motor.conf import hj_config
from motor.optimizer import HJConfig
from motor.serializers import (
    DesignVectorSerializer,
    HJConfigSerializer,
    MaterialCatalogSerializer,
    MotorSpecSerializer,
    StrictSerializer,
    build_design,
)
from motor.spec import DesignVector, MaterialCatalog, MotorSpec


class TokenResponse(TypedDict):
    refresh: str
    access: str
    user_id: int
    username: str
    email: str


class LoginSerializer(TokenObtainPairSerializer):
    """
    Custom serializer for obtaining JWT tokens.

    Adds the user's id, username and email to the token pair and answers
    every failed login with the same message, so the response does not tell
    an unknown username from a wrong password.
    """

    default_error_messages: Dict[str, str] = {
        "no_active_account": _("Invalid username or password.")
    }

    def validate(self, attrs: Dict[str, str]) -> TokenResponse:
        try:
            data = super().validate(attrs)
        except serializers.ValidationError:
            raise serializers.ValidationError(
                {"detail": self.default_error_messages["no_active_account"]}
            )

        typed_data: TokenResponse = {
            **data,
            "user_id": self.user.id,
            "username": self.user.username,
            "email": self.user.email,
        }

        return typed_data


# ---------------------------
# Motor requests
# ---------------------------


def _materials(attrs: Dict[str, Any]) -> MaterialCatalog:
    """An explicit ``materials`` block wins over the one inside the spec."""
    if "materials" in attrs:
        return MaterialCatalog(**attrs["materials"])
    return attrs["spec"]["materials"]


class EvaluateRequestSerializer(StrictSerializer):
    """
    Body of ``POST /api/evaluate/``: a spec document, a design vector and
    an optional materials document.
    """

    spec = MotorSpecSerializer()
    design = DesignVectorSerializer()
    materials = MaterialCatalogSerializer(required=False)

    def validate(self, attrs: Dict[str, Any]) -> Dict[str, Any]:
        spec: MotorSpec = attrs["spec"]["spec"]
        try:
            design = build_design(attrs["design"], spec.rotor_slot_shape)
        except serializers.ValidationError as e:
            raise serializers.ValidationError({"design": e.detail})
        return {"spec": spec, "design": design, "materials": _materials(attrs)}

    def build(self) -> tuple[MotorSpec, DesignVector, MaterialCatalog]:
        data = self.validated_data
        return data["spec"], data["design"], data["materials"]


class OptimizeRequestSerializer(StrictSerializer):
    """Body of ``POST /api/optimize/``."""

    spec = MotorSpecSerializer()
    materials = MaterialCatalogSerializer(required=False)
    hj = HJConfigSerializer(required=False)

    def validate(self, attrs: Dict[str, Any]) -> Dict[str, Any]:
        return {
            "spec": attrs["spec"]["spec"],
            "materials": _materials(attrs),
            "hj": hj_config(**attrs.get("hj", {})),
        }

    def build(self) -> tuple[MotorSpec, MaterialCatalog, HJConfig]:
        data = self.validated_data
        return data["spec"], data["materials"], data["hj"]
