"""
Ball and Siegel models of the complex hyperbolic plane, the Cayley transfer
between them, Heisenberg coordinates on the Siegel boundary and C-circles.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np

from crkit.conf import setting
from crkit.errors import (
    BadSignature,
    InfiniteOperand,
    InvalidArgument,
    ModelMismatch,
    NotExterior,
    NotNull,
    NotSiegel,
    UnknownModel,
)
from crkit.geometry.linalg import J1, J2, adjoint, as_mat, as_vec

SQRT2 = math.sqrt(2.0)

CAYLEY = np.array(
    [[1, 0, 1], [0, SQRT2, 0], [1, 0, -1]], dtype=complex
) / SQRT2


class ModelTag(str, Enum):
    BALL = "ball"
    SIEGEL = "siegel"


@dataclass(frozen=True)
class Model:
    tag: ModelTag

    @property
    def form(self) -> np.ndarray:
        return (J1 if self.tag is ModelTag.BALL else J2).copy()

    @property
    def name(self) -> str:
        return self.tag.value


BALL = Model(ModelTag.BALL)
SIEGEL = Model(ModelTag.SIEGEL)


def get_model(name: Union[str, Model]) -> Model:
    if isinstance(name, Model):
        return name
    key = (name or "").strip().lower()
    if key == "ball":
        return BALL
    if key == "siegel":
        return SIEGEL
    raise UnknownModel(f"unknown model {name!r}", model=name)


class Location(str, Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


def form_eval(w, z, model: Model) -> complex:
    """<w, z> = w* J z (conjugate-linear in w)."""
    w, z = as_vec(w), as_vec(z)
    return complex(np.conj(w) @ model.form @ z)


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    rep: np.ndarray
    model: Model

    def __post_init__(self):
        rep = as_vec(self.rep)
        if np.linalg.norm(rep) == 0:
            raise InvalidArgument("projective point needs a nonzero representative")
        object.__setattr__(self, "rep", rep)

    def phi(self) -> float:
        return form_eval(self.rep, self.rep, self.model).real

    def location(self, tol: float = 1e-10) -> Location:
        value = self.phi()
        if abs(value) <= tol * float(np.linalg.norm(self.rep)) ** 2:
            return Location.BOUNDARY
        return Location.INTERIOR if value < 0 else Location.EXTERIOR

    def normalized(self) -> np.ndarray:
        v = self.rep / np.linalg.norm(self.rep)
        k = int(np.argmax(np.abs(v)))
        return v * (abs(v[k]) / v[k])

    def affine(self) -> Tuple[complex, complex]:
        """Coordinates (Z1, Z2) = (z1/z3, z2/z3)."""
        z = self.rep
        return complex(z[0] / z[2]), complex(z[1] / z[2])


def projectively_equal(p: ProjectivePoint, q: ProjectivePoint, tol: float = 1e-8) -> bool:
    return projective_distance(p, q) <= tol


def projective_distance(p: ProjectivePoint, q: ProjectivePoint) -> float:
    if p.model != q.model:
        raise ModelMismatch("points live in different models")
    a = p.rep / np.linalg.norm(p.rep)
    b = q.rep / np.linalg.norm(q.rep)
    overlap = np.vdot(b, a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(a - phase * b))


def cayley_transfer(x, source: Model, target: Model):
    """
    Move a matrix (by conjugation) or a ProjectivePoint (by C) between models.
    C is its own inverse, so both directions use the same matrix.
    """
    if source == target:
        raise ModelMismatch("source and target models coincide", model=source.name)
    if isinstance(x, ProjectivePoint):
        if x.model != source:
            raise ModelMismatch("point is not in the source model",
                                point_model=x.model.name, source=source.name)
        return ProjectivePoint(CAYLEY @ x.rep, target)
    m = as_mat(x)
    return CAYLEY @ m @ CAYLEY


def standardize_form(h) -> np.ndarray:
    """
    S with S* J1 S = H for a Hermitian H of signature (2,1). Conjugating by S
    moves isometries of H into the ball model: M -> S M S^-1.
    """
    h = as_mat(h)
    if np.linalg.norm(h - adjoint(h)) > 1e-9 * max(1.0, np.linalg.norm(h)):
        raise BadSignature("form is not Hermitian")
    values, vectors = np.linalg.eigh(h)
    negative = [k for k, v in enumerate(values) if v < 0]
    positive = [k for k, v in enumerate(values) if v > 0]
    if len(negative) != 1 or len(positive) != 2:
        raise BadSignature("form does not have signature (2,1)", eigenvalues=list(values))
    order = positive + negative
    rows = [math.sqrt(abs(values[k])) * np.conj(vectors[:, k]) for k in order]
    return np.array(rows, dtype=complex)


# =========================
# Heisenberg boundary
# =========================

@dataclass(frozen=True)
class HeisPoint:
    z: complex
    t: float

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "t", float(self.t))

    @property
    def is_infinite(self) -> bool:
        return False

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.z.real, self.z.imag, self.t)


@dataclass(frozen=True)
class HeisInfinity:
    @property
    def is_infinite(self) -> bool:
        return True


INFINITY = HeisInfinity()

BoundaryPoint = Union[HeisPoint, HeisInfinity]


def heis_embed(h: BoundaryPoint) -> ProjectivePoint:
    if isinstance(h, HeisInfinity):
        return ProjectivePoint(np.array([1, 0, 0], dtype=complex), SIEGEL)
    w = -(abs(h.z) ** 2 + 1j * h.t) / 2
    return ProjectivePoint(np.array([w, h.z, 1], dtype=complex), SIEGEL)


def heis_project(p: ProjectivePoint, tol: Optional[float] = None) -> BoundaryPoint:
    if p.model != SIEGEL:
        raise NotSiegel("Heisenberg coordinates need a Siegel point", model=p.model.name)
    tol = setting("TOL") if tol is None else tol
    scale = float(np.linalg.norm(p.rep)) ** 2
    phi = p.phi()
    if abs(phi) > tol * scale:
        raise NotNull("point is not on the boundary", phi=phi)
    if abs(p.rep[2]) <= 1e-12 * math.sqrt(scale):
        return INFINITY
    w = p.rep / p.rep[2]
    return HeisPoint(w[1], -2 * w[0].imag)


def heis_mul(a: BoundaryPoint, b: BoundaryPoint) -> HeisPoint:
    if a.is_infinite or b.is_infinite:
        raise InfiniteOperand("the Heisenberg law is only defined on finite points")
    return HeisPoint(a.z + b.z, a.t + b.t + 2 * (a.z * b.z.conjugate()).imag)


def heis_inverse(a: BoundaryPoint) -> HeisPoint:
    if a.is_infinite:
        raise InfiniteOperand("infinity has no inverse")
    return HeisPoint(-a.z, -a.t)


# =========================
# C-circles
# =========================

@dataclass(frozen=True, eq=False)
class CCircle:
    """
    Boundary of the complex line polar^perp, parametrized as
    theta -> [e^{i theta} e + n] with <n,n> = -1, <e,e> = 1, <n,e> = 0.
    """
    polar: ProjectivePoint
    center: np.ndarray
    direction: np.ndarray

    @property
    def model(self) -> Model:
        return self.polar.model

    def point(self, theta: float) -> ProjectivePoint:
        return ProjectivePoint(cmath.exp(1j * theta) * self.direction + self.center, self.model)

    def sample(self, count: int) -> Tuple[np.ndarray, List[ProjectivePoint]]:
        thetas = np.linspace(0.0, 2 * math.pi, count, endpoint=False)
        return thetas, [self.point(float(t)) for t in thetas]


def _unit_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


def c_circle_through(polar: ProjectivePoint) -> CCircle:
    if polar.phi() <= 0:
        raise NotExterior("polar vector must be positive", phi=polar.phi())
    j = polar.model.form
    row = np.conj(j @ polar.rep)[None, :]
    _, _, vh = np.linalg.svd(row)
    plane = np.conj(vh[1:]).T
    gram = adjoint(plane) @ j @ plane
    values, vectors = np.linalg.eigh(gram)
    n = _unit_phase(plane @ vectors[:, 0]) / math.sqrt(-values[0])
    e = _unit_phase(plane @ vectors[:, 1]) / math.sqrt(values[1])
    return CCircle(polar, n, e)
