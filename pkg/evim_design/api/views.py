import logging

from rest_framework.views import APIView
from rest_framework.response import Response
from rest_framework.permissions import IsAuthenticated, AllowAny
from rest_framework import status
from rest_framework_simplejwt.views import TokenObtainPairView

from motor.constraints import default_constraints, evaluate_constraints
from motor.optimizer import optimize_design
from motor.performance import evaluate_design
from motor.reporting import report_to_dict, result_to_dict
from .serializers import (
    EvaluateRequestSerializer,
    LoginSerializer,
    OptimizeRequestSerializer,
)

logger = logging.getLogger(__name__)

# ---------------------------
# Login View
# ---------------------------


class LoginView(TokenObtainPairView):
    """
    API view for user login and JWT token issuance.

    This view uses rest_framework_simplejwt's TokenObtainPairView to handle
    the authentication process, with the custom serializer adding the user
    details to the token pair.
    """

    serializer_class = LoginSerializer
    permission_classes = [AllowAny]

    def post(self, request, *args, **kwargs):
        response = super().post(request, *args, **kwargs)

        if response.status_code == status.HTTP_200_OK:
            response.data["message"] = "Login successful."

        return response


# ---------------------------
# Evaluate View
# ---------------------------


class EvaluateView(APIView):
    """
    Evaluates one design and returns its performance report together with
    the default constraint check.

    - **HTTP Method:** `POST`
    - **Endpoint:** `/api/evaluate/`
    - **Permissions:** `IsAuthenticated`

    A valid request whose design cannot be built (for example a bore too
    small for its slots) is answered with 422 and the failing stage.
    """

    permission_classes = [IsAuthenticated]

    def post(self, request):
        serializer = EvaluateRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        spec, design, materials = serializer.build()

        # InfeasibleDesign goes to the exception handler
        report = evaluate_design(spec, design, materials)
        constraint_report = evaluate_constraints(report, default_constraints(spec))
        return Response(
            {
                "message": "Design evaluated.",
                "data": report_to_dict(report, constraint_report),
            },
            status=status.HTTP_200_OK,
        )


# ---------------------------
# Optimize View
# ---------------------------


class OptimizeView(APIView):
    """
    Maximizes efficiency for one spec and returns the best design found,
    without the search trace.

    - **HTTP Method:** `POST`
    - **Endpoint:** `/api/optimize/`
    - **Permissions:** `IsAuthenticated`
    """

    permission_classes = [IsAuthenticated]

    def post(self, request):
        serializer = OptimizeRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        spec, materials, cfg = serializer.build()

        logger.info(
            "Optimization requested by %s for %d-pole %s rotor at %g rpm",
            request.user.username,
            spec.pole_count,
            spec.rotor_slot_shape.value,
            spec.rated_speed,
        )
        result = optimize_design(spec, materials, cfg)
        return Response(
            {
                "message": (
                    "Feasible design found."
                    if result.feasible
                    else "No feasible design found."
                ),
                "data": result_to_dict(result),
            },
            status=status.HTTP_200_OK,
        )
