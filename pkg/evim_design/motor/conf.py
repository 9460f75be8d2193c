"""
Bridges ``settings.EVIM`` to the explicit config objects the library takes.

Only the management commands, the study runner and the API views call into
this module; the model code itself never touches Django settings.
"""

from __future__ import annotations

import logging
import os
from dataclasses import replace
from typing import Any

from django.conf import settings

from .optimizer import HJConfig
from .spec import BreakdownModel, ModelOptions, MotorSpec

logger = logging.getLogger(__name__)


def evim_setting(name: str, default: Any = None) -> Any:
    return getattr(settings, "EVIM", {}).get(name, default)


def thread_count() -> int:
    threads = evim_setting("THREADS")
    try:
        count = int(threads or 0)
    except (TypeError, ValueError):
        logger.warning("EVIM THREADS=%r is not an integer, using all CPUs", threads)
        count = 0
    if count <= 0:
        count = os.cpu_count() or 1
    return count


def hj_config(**overrides: Any) -> HJConfig:
    """``HJConfig`` built from ``EVIM['HJ']`` plus explicit overrides."""
    values = dict(evim_setting("HJ", {}))
    values.setdefault("threads", thread_count())
    values.update(overrides)
    if "start_fractions" in values:
        values["start_fractions"] = tuple(values["start_fractions"])
    return HJConfig(**values)


def model_options(base: ModelOptions | None = None) -> ModelOptions:
    """Applies the project-wide model defaults on top of ``base``."""
    options = base or ModelOptions()
    updates: dict[str, Any] = {}
    if evim_setting("STRAY_FRACTION") is not None:
        updates["stray_fraction"] = float(evim_setting("STRAY_FRACTION"))
    if evim_setting("HEAT_TRANSFER_COEFFICIENT") is not None:
        updates["heat_transfer_coefficient"] = float(
            evim_setting("HEAT_TRANSFER_COEFFICIENT")
        )
    if evim_setting("BREAKDOWN_MODEL"):
        updates["breakdown_model"] = BreakdownModel(evim_setting("BREAKDOWN_MODEL"))
    return replace(options, **updates)


def default_max_speed() -> float:
    return float(evim_setting("MAX_SPEED_RPM", MotorSpec.max_speed))
