"""
Reading and writing the JSON documents of the command-line tools.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, TypeVar

from django.core.management.base import CommandError
from rest_framework import serializers

S = TypeVar("S", bound=serializers.Serializer)

VALIDATION_EXIT_CODE = 2


def load_document(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise CommandError(
            f"Cannot read {path}: {e.strerror}", returncode=VALIDATION_EXIT_CODE
        )
    except json.JSONDecodeError as e:
        raise CommandError(
            f"{path} is not valid JSON: {e}", returncode=VALIDATION_EXIT_CODE
        )


def format_errors(errors: Any) -> str:
    return json.dumps(errors, sort_keys=True, default=str)


def validated(serializer: S, label: str = "document") -> S:
    if not serializer.is_valid():
        raise CommandError(
            f"Invalid {label}: {format_errors(serializer.errors)}",
            returncode=VALIDATION_EXIT_CODE,
        )
    return serializer


def dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def write_text(text: str, path: str | Path) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
