from __future__ import annotations

from typing import Any, Dict

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured

DEFAULTS: Dict[str, Any] = {
    "TOL": 1e-9,
    "CLUSTER_TOL": 1e-7,
    "GOLDMAN_TOL": 1e-6,
    "AMBIGUITY_GAP": 1e-4,
    "DENOM_BOUND": 512,
    "TYPE_TOL": 1e-6,
    "FAMILY_TOL": 1e-7,
    "LINK_MIN_SEGMENTS": 256,
    "LINK_MIN_DISTANCE": 1e-3,
    "ORIENTATION": 1,
}


def setting(name: str) -> Any:
    """
    Value of a crkit setting: settings.CRKIT first, module default otherwise.
    Works without a configured Django project so the geometry package can be
    imported from plain scripts.
    """
    if name not in DEFAULTS:
        raise KeyError(f"unknown crkit setting {name!r}")
    try:
        overrides = getattr(settings, "CRKIT", None) or {}
    except ImproperlyConfigured:
        overrides = {}
    return overrides.get(name, DEFAULTS[name])
