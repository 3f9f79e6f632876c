from __future__ import annotations

import json
import logging
import os
from io import StringIO
from typing import Any, Sequence

import django
from django.core.management import call_command
from django.core.management.base import CommandError

logger = logging.getLogger(__name__)


def run(argv: Sequence[str]) -> tuple[int, dict[str, Any] | None]:
    """Run one ``rainbow`` subcommand in-process and return (exit code, parsed report)."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "rainbow_project.settings")
    django.setup()
    from .management.commands.rainbow import NegativeVerdict

    stdout = StringIO()
    try:
        call_command("rainbow", *argv, stdout=stdout)
        code = 0
    except NegativeVerdict:
        code = 1
    except CommandError as exc:
        logger.warning("rainbow %s: %s", " ".join(argv[:1]), exc)
        return 2, {"error": str(exc)}
    text = stdout.getvalue()
    return code, json.loads(text) if text else None
