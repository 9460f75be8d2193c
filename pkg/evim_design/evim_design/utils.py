from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import exception_handler

from motor.exceptions import InfeasibleDesign, MotorDesignError


def custom_exception_handler(exc, context):
    if isinstance(exc, MotorDesignError):
        # a valid document describing a motor the model cannot build
        data = exc.as_dict()
        if isinstance(exc, InfeasibleDesign):
            data["stage"] = exc.stage.label
        else:
            data.setdefault("stage", None)
        data["status_code"] = status.HTTP_422_UNPROCESSABLE_ENTITY
        data["error"] = True
        return Response(data, status=status.HTTP_422_UNPROCESSABLE_ENTITY)

    response = exception_handler(exc, context)

    if response is not None:
        # Add extra fields to all DRF error responses
        response.data["status_code"] = response.status_code
        response.data["error"] = True

        # Customize 404 message
        if response.status_code == 404:
            response.data["detail"] = "The requested resource was not found."

    return response
