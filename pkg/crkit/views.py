from __future__ import annotations
import json
import logging
from typing import Any, Dict

from django.http import JsonResponse
from django.views.decorators.csrf import csrf_exempt

from crkit import export
from crkit.errors import CrkitError
from crkit.geometry import fig8
from crkit.geometry.models import get_model
from crkit.geometry.surgery import Slope, change_marking, get_marking

logger = logging.getLogger("crkit.api")


def _load_json(request):
    """Parsed body, or a 400 response."""
    try:
        return json.loads(request.body or "{}"), None
    except (ValueError, TypeError):
        return None, JsonResponse({"error": "Invalid JSON"}, status=400)


def _domain_error(e: CrkitError) -> JsonResponse:
    logger.warning("%s: %s", e.code, e.message)
    return JsonResponse(e.as_dict(), status=422)


def health(request):
    if request.method != "GET":
        return JsonResponse({"error": "GET required"}, status=405)
    return JsonResponse({"ok": True})


@csrf_exempt
def classify_matrix(request):
    if request.method != "POST":
        return JsonResponse({"error": "POST required"}, status=405)

    data, error = _load_json(request)
    if error:
        return error
    if "matrix" not in data:
        return JsonResponse({"error": "Missing matrix"}, status=400)

    try:
        m = export.matrix_from_json(data["matrix"])
        model = get_model(data.get("model") or "ball")
        report = export.classify_report(m, model)
    except CrkitError as e:
        return _domain_error(e)
    return JsonResponse(report)


@csrf_exempt
def fig8_classify(request):
    if request.method != "POST":
        return JsonResponse({"error": "POST required"}, status=405)

    data, error = _load_json(request)
    if error:
        return error

    try:
        if "u" in data:
            u = export.complex_from_json(data["u"])
        elif "p" in data and "n" in data:
            u = fig8.u_from_pn(int(data["p"]), int(data["n"]))
        else:
            return JsonResponse({"error": "Missing u or p, n"}, status=400)
        report = fig8.classify_at(u, int(data.get("branch", 1)), data.get("orientation"))
    except CrkitError as e:
        return _domain_error(e)
    except (TypeError, ValueError):
        return JsonResponse({"error": "Invalid parameters"}, status=400)
    return JsonResponse(export.fig8_report(report))


@csrf_exempt
def slope_change(request):
    if request.method != "POST":
        return JsonResponse({"error": "POST required"}, status=405)

    data, error = _load_json(request)
    if error:
        return error
    slope = data.get("slope")
    if not isinstance(slope, list) or len(slope) != 2:
        return JsonResponse({"error": "Missing slope"}, status=400)

    orientation = data.get("orientation")
    try:
        source = get_marking(data.get("from") or "(l,m)", orientation)
        target = get_marking(data.get("to") or "(l0,m0)", orientation)
        moved = change_marking(Slope(int(slope[0]), int(slope[1]), source), target)
    except CrkitError as e:
        return _domain_error(e)
    except (TypeError, ValueError):
        return JsonResponse({"error": "Invalid slope"}, status=400)
    payload: Dict[str, Any] = export.slope_json(moved)
    return JsonResponse(payload)
