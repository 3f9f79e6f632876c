"""
Django settings for rainbow_project.
"""
import os
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get("RAINBOW_SECRET_KEY", "replace-me-with-a-secure-key")
DEBUG = False
ALLOWED_HOSTS: list[str] = []

INSTALLED_APPS = [
    "rainbow",
]

# Everything is computed in memory; the dummy backend is enough.
DATABASES: dict = {}

LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = False
USE_TZ = True


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(f"RAINBOW_{name}")
    return int(value) if value not in (None, "") else default


RAINBOW = {
    "DEFAULT_SEED": _env_int("DEFAULT_SEED", 20140101),
    "ORBIT_BUDGET": _env_int("ORBIT_BUDGET", 100_000),
    "FLOW_BOUND": _env_int("FLOW_BOUND", 5),
    "EHRHART_EXTRA_SAMPLES": _env_int("EHRHART_EXTRA_SAMPLES", 3),
    "DEFAULT_JOBS": _env_int("DEFAULT_JOBS", 1),
}

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(asctime)s %(levelname)s %(name)s %(message)s"},
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "plain",
        },
    },
    "loggers": {
        "rainbow": {
            "handlers": ["console"],
            "level": os.environ.get("RAINBOW_LOG_LEVEL", "WARNING"),
            "propagate": False,
        },
    },
}
