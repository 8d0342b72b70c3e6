from __future__ import annotations

from typing import Any, Dict

import numpy as np


def _jsonable(value: Any) -> Any:
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    return str(value)


class CrkitError(Exception):
    """Base of every domain error. The class name is the structured error name."""

    module = "crkit"

    def __init__(self, message: str = "", **details: Any):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__
        self.details: Dict[str, Any] = details

    @property
    def code(self) -> str:
        return self.__class__.__name__

    def as_dict(self) -> Dict[str, Any]:
        return {
            "error": self.code,
            "module": self.module,
            "message": self.message,
            "details": _jsonable(self.details),
        }


class InvalidArgument(CrkitError):
    pass


# linalg

class LinalgError(CrkitError):
    module = "linalg"


class LogBranchFailure(LinalgError):
    pass


class NonConvergent(LinalgError):
    pass


# models

class ModelsError(CrkitError):
    module = "models"


class UnknownModel(ModelsError):
    pass


class ModelMismatch(ModelsError):
    pass


class NotNull(ModelsError):
    pass


class NotSiegel(ModelsError):
    pass


class InfiniteOperand(ModelsError):
    pass


class NotExterior(ModelsError):
    pass


class BadSignature(ModelsError):
    pass


# isometry

class IsometryError(CrkitError):
    module = "isometry"


class NotInGroup(IsometryError):
    pass


class AmbiguousNearBoundary(IsometryError):
    pass


class NotElliptic(IsometryError):
    pass


class NotRationalType(IsometryError):
    pass


class IdentityInput(IsometryError):
    pass


class NormalFormResidual(IsometryError):
    pass


# flows

class FlowsError(CrkitError):
    module = "flows"


class UnknownFamily(FlowsError):
    pass


class NotClosed(FlowsError):
    pass


class NotOnTorus(FlowsError):
    pass


class CurvesTooClose(FlowsError):
    pass


class NotUnipotent(FlowsError):
    pass


class CircleHitsFixedPoint(FlowsError):
    pass


# surgery

class SurgeryError(CrkitError):
    module = "surgery"


class NonUnimodular(SurgeryError):
    pass


class InvalidSlope(SurgeryError):
    pass


class NotCoprime(SurgeryError):
    pass


class IrrationalElliptic(SurgeryError):
    pass


class UnsupportedEllipticType(SurgeryError):
    pass


# fig8

class Fig8Error(CrkitError):
    module = "fig8"


class NonRealDelta(Fig8Error):
    pass


class NegativeDelta(Fig8Error):
    pass


class DegenerateDenominator(Fig8Error):
    pass


class InvariantViolation(Fig8Error):
    pass


class MalformedWord(Fig8Error):
    pass
