"""
One-parameter flows phi_t = exp(tX) on the boundary sphere.

Closed forms for the four normal-form families, orbit sampling, invariant
surfaces and their meshes, torus-knot winding numbers, Gauss linking of
closed curves and horotube boundaries.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.distance import cdist

from crkit.conf import setting
from crkit.errors import (
    CircleHitsFixedPoint,
    CurvesTooClose,
    InvalidArgument,
    ModelMismatch,
    NotClosed,
    NotOnTorus,
    NotUnipotent,
    UnknownFamily,
)
from crkit.geometry.isometry import EllipticType, Kind, classify, fixed_points
from crkit.geometry.linalg import IDENTITY, adjoint, as_mat, mat_exp, mat_log
from crkit.geometry.models import (
    BALL,
    CAYLEY,
    SIEGEL,
    CCircle,
    HeisPoint,
    Model,
    ProjectivePoint,
    c_circle_through,
    cayley_transfer,
    heis_embed,
    heis_project,
    projective_distance,
)

logger = logging.getLogger("crkit.flows")


# =========================
# Generators
# =========================

@dataclass(frozen=True, eq=False)
class FlowGenerator:
    X: np.ndarray
    model: Model

    def __post_init__(self):
        x = as_mat(self.X)
        j = self.model.form
        scale = max(1.0, float(np.linalg.norm(x)))
        skew = float(np.linalg.norm(adjoint(x) @ j + j @ x)) / scale
        trace = abs(np.trace(x)) / scale
        if skew > 1e-9 or trace > 1e-9:
            raise InvalidArgument("generator is not in su(2,1)", skew=skew, trace=trace)
        object.__setattr__(self, "X", x)

    @classmethod
    def from_isometry(cls, m, model: Model) -> "FlowGenerator":
        """Log of M with the trace removed; exp(X) equals M projectively."""
        x = mat_log(m)
        return cls(x - np.trace(x) / 3 * IDENTITY, model)

    def exp(self, t: float) -> np.ndarray:
        return mat_exp(t * self.X)


class FlowFamily(str, Enum):
    ELLIPTIC = "elliptic"
    LOXODROMIC = "loxodromic"
    UNIPOTENT = "unipotent"
    ELLIPTO_PARABOLIC = "ellipto-parabolic"


def _family(family: Union[str, FlowFamily]) -> FlowFamily:
    try:
        return FlowFamily(family)
    except ValueError:
        raise UnknownFamily(f"unknown flow family {family!r}", family=str(family))


def family_generator(family, params: Dict) -> FlowGenerator:
    """
    The Log of each displayed normal form.

    elliptic: alpha, beta (radians), ball model.
    loxodromic: lam, Siegel model.
    unipotent: z, s, Siegel model.
    ellipto-parabolic: theta and optional s (default 1), Siegel model.
    """
    family = _family(family)
    if family is FlowFamily.ELLIPTIC:
        a, b = float(params["alpha"]), float(params["beta"])
        return FlowGenerator(np.diag([1j * a, 1j * b, -1j * (a + b)]), BALL)
    if family is FlowFamily.LOXODROMIC:
        lam = complex(params["lam"])
        r, alpha = abs(lam), cmath.phase(lam)
        x = np.diag([math.log(r) + 1j * alpha, -2j * alpha, -math.log(r) + 1j * alpha])
        return FlowGenerator(x, SIEGEL)
    if family is FlowFamily.UNIPOTENT:
        z, s = complex(params["z"]), float(params["s"])
        x = np.array([[0, -z.conjugate(), -0.5j * s], [0, 0, z], [0, 0, 0]], dtype=complex)
        return FlowGenerator(x, SIEGEL)
    theta, s = float(params["theta"]), float(params.get("s", 1.0))
    x = np.array(
        [[1j * theta, 0, -0.5j * s], [0, -2j * theta, 0], [0, 0, 1j * theta]], dtype=complex
    )
    return FlowGenerator(x, SIEGEL)


def elliptic_generator(etype: EllipticType) -> FlowGenerator:
    """Ball generator with rotation numbers (p/n, q/n) per unit time; period n."""
    alpha, beta, gamma = (float(a) for a in etype.angles)
    return FlowGenerator(2j * math.pi * np.diag([alpha, beta, gamma]), BALL)


def flow_apply(gen: FlowGenerator, t: float, x: ProjectivePoint) -> ProjectivePoint:
    if x.model != gen.model:
        raise ModelMismatch("point and generator live in different models",
                            point_model=x.model.name, generator_model=gen.model.name)
    return ProjectivePoint(gen.exp(t) @ x.rep, gen.model)


def flow_closed_form(family, params: Dict, t: float, point):
    """
    Closed-form action of the family flow.

    elliptic acts on ball coordinates (Z1, Z2); the other families act on
    Heisenberg points.
    """
    family = _family(family)
    if family is FlowFamily.ELLIPTIC:
        a, b = float(params["alpha"]), float(params["beta"])
        z1, z2 = point
        return (complex(z1) * cmath.exp(1j * t * (2 * a + b)),
                complex(z2) * cmath.exp(1j * t * (2 * b + a)))
    if family is FlowFamily.LOXODROMIC:
        lam = complex(params["lam"])
        mu = abs(lam) ** t * cmath.exp(-3j * cmath.phase(lam) * t)
        return HeisPoint(mu * point.z, abs(mu) ** 2 * point.t)
    if family is FlowFamily.UNIPOTENT:
        z, s = complex(params["z"]), float(params["s"])
        shear = 2 * t * (z.conjugate() * point.z).imag
        return HeisPoint(point.z + t * z, point.t + t * s + shear)
    theta, s = float(params["theta"]), float(params.get("s", 1.0))
    return HeisPoint(cmath.exp(-3j * theta * t) * point.z, point.t + t * s)


# =========================
# Orbits
# =========================

def _to_siegel(p: ProjectivePoint) -> ProjectivePoint:
    return p if p.model == SIEGEL else cayley_transfer(p, p.model, SIEGEL)


def _to_ball(p: ProjectivePoint) -> ProjectivePoint:
    return p if p.model == BALL else cayley_transfer(p, p.model, BALL)


def heisenberg_coordinates(points: Sequence[ProjectivePoint], tol: float = 1e-8) -> np.ndarray:
    """(Re z, Im z, t) per boundary point; the point at infinity maps to nan."""
    out = np.full((len(points), 3), np.nan)
    for k, p in enumerate(points):
        h = heis_project(_to_siegel(p), tol)
        if not h.is_infinite:
            out[k] = h.as_tuple()
    return out


@dataclass(frozen=True, eq=False)
class OrbitPolyline:
    points: List[ProjectivePoint]
    t_values: np.ndarray

    def heisenberg(self) -> np.ndarray:
        return heisenberg_coordinates(self.points)

    def ball_coordinates(self) -> np.ndarray:
        """(Z1, Z2) per sample, shape (k, 2)."""
        return np.array([_to_ball(p).affine() for p in self.points], dtype=complex)

    def null_residual(self) -> float:
        return max(abs(p.phi()) / float(np.linalg.norm(p.rep)) ** 2 for p in self.points)


def sample_orbit(gen: FlowGenerator, x0: ProjectivePoint, t_min: float, t_max: float,
                 steps: int) -> OrbitPolyline:
    if steps < 2:
        raise InvalidArgument("an orbit needs at least two samples", steps=steps)
    t_values = np.linspace(t_min, t_max, steps)
    points = [flow_apply(gen, float(t), x0) for t in t_values]
    return OrbitPolyline(points, t_values)


# =========================
# Invariant surfaces
# =========================

class SurfaceFamily(str, Enum):
    TORUS = "torus"
    PARABOLOID = "paraboloid"
    PLANE = "plane"
    EP_CYLINDER = "ep-cylinder"


@dataclass(frozen=True, eq=False)
class InvariantSurface:
    """
    TORUS: |Z2| = r in the ball, r in (0, 1), around the elliptic axes.
    PARABOLOID: s / |z|^2 = r in Heisenberg coordinates (loxodromic).
    PLANE: Im(z / z0) = r with z0 the translation of the anchor P_{z0,s}.
    EP_CYLINDER: |z| = r (ellipto-parabolic).
    """
    family: SurfaceFamily
    r: float
    anchor: Optional[np.ndarray] = None

    def __post_init__(self):
        family = SurfaceFamily(self.family)
        object.__setattr__(self, "family", family)
        if family is SurfaceFamily.TORUS and not 0 < self.r < 1:
            raise InvalidArgument("torus radius must lie in (0, 1)", r=self.r)
        if family is SurfaceFamily.EP_CYLINDER and self.r <= 0:
            raise InvalidArgument("cylinder radius must be positive", r=self.r)

    @property
    def direction(self) -> complex:
        if self.anchor is None:
            return 1 + 0j
        z0 = complex(as_mat(self.anchor)[1, 2])
        return z0 if abs(z0) > 0 else 1 + 0j


def surface_membership(surface: InvariantSurface, point: ProjectivePoint) -> float:
    if surface.family is SurfaceFamily.TORUS:
        _, z2 = _to_ball(point).affine()
        return abs(z2) - surface.r
    h = heis_project(_to_siegel(point), 1e-8)
    if h.is_infinite:
        return math.inf
    if surface.family is SurfaceFamily.PARABOLOID:
        return h.t / abs(h.z) ** 2 - surface.r
    if surface.family is SurfaceFamily.PLANE:
        return (h.z / surface.direction).imag - surface.r
    return abs(h.z) - surface.r


@dataclass(frozen=True, eq=False)
class Mesh:
    """Quad mesh; vertices are Heisenberg (x, y, t), faces index into them."""
    vertices: np.ndarray
    faces: np.ndarray
    points: List[ProjectivePoint] = field(default_factory=list)


def _grid_mesh(us: np.ndarray, vs: np.ndarray, wrap_u: bool, wrap_v: bool,
               make: Callable[[float, float], ProjectivePoint]) -> Mesh:
    points = [make(float(u), float(v)) for u in us for v in vs]
    rows, cols = len(us), len(vs)
    faces = []
    for i in range(rows if wrap_u else rows - 1):
        for j in range(cols if wrap_v else cols - 1):
            i2, j2 = (i + 1) % rows, (j + 1) % cols
            faces.append((i * cols + j, i2 * cols + j, i2 * cols + j2, i * cols + j2))
    return Mesh(heisenberg_coordinates(points), np.array(faces, dtype=int).reshape(-1, 4), points)


def surface_mesh(surface: InvariantSurface, resolution: int, extent: float = 2.0) -> Mesh:
    if resolution < 4:
        raise InvalidArgument("surface mesh needs resolution >= 4", resolution=resolution)
    angles = np.linspace(0.0, 2 * math.pi, resolution, endpoint=False)
    span = np.linspace(-extent, extent, resolution)

    if surface.family is SurfaceFamily.TORUS:
        rho = math.sqrt(1 - surface.r ** 2)

        def make(a, b):
            v = np.array([rho * cmath.exp(1j * a), surface.r * cmath.exp(1j * b), 1])
            return ProjectivePoint(v, BALL)

        return _grid_mesh(angles, angles, True, True, make)

    if surface.family is SurfaceFamily.PARABOLOID:
        radii = np.linspace(extent / resolution, extent, resolution)

        def make(rad, a):
            return heis_embed(HeisPoint(rad * cmath.exp(1j * a), surface.r * rad ** 2))

        return _grid_mesh(radii, angles, False, True, make)

    if surface.family is SurfaceFamily.PLANE:
        z0 = surface.direction

        def make(x, s):
            return heis_embed(HeisPoint(z0 * complex(x, surface.r), s))

        return _grid_mesh(span, span, False, False, make)

    def make(a, s):
        return heis_embed(HeisPoint(surface.r * cmath.exp(1j * a), s))

    return _grid_mesh(angles, span, True, False, make)


# =========================
# Knot diagnostics
# =========================

@dataclass(frozen=True)
class WindingNumbers:
    p: int
    q: int
    unknotted: bool
    matches_type: Optional[bool] = None


def winding_numbers(orbit: OrbitPolyline, etype: Optional[EllipticType] = None) -> WindingNumbers:
    """Turns of the Z1 and Z2 phases over a closed orbit on a torus |Z2| = r."""
    first, last = orbit.points[0], orbit.points[-1]
    gap = projective_distance(_to_ball(first), _to_ball(last))
    if gap > 1e-6:
        raise NotClosed("orbit endpoints do not match", gap=gap)

    coords = orbit.ball_coordinates()
    turns = []
    for column in (coords[:, 0], coords[:, 1]):
        moduli = np.abs(column)
        spread = float(moduli.max() - moduli.min())
        if spread > 1e-7:
            raise NotOnTorus("orbit modulus is not constant", spread=spread)
        if moduli.max() <= 1e-12:
            turns.append(0)
            continue
        phases = np.unwrap(np.angle(column))
        turns.append(int(round((phases[-1] - phases[0]) / (2 * math.pi))))

    p, q = turns
    matches = None
    if etype is not None:
        matches = (p, q) in ((etype.p, etype.q), (etype.q, etype.p))
    return WindingNumbers(p, q, abs(p) <= 1 or abs(q) <= 1, matches)


def chart_coordinates(points, twist: float = 0.0) -> np.ndarray:
    """
    R^3 chart of ball boundary points: rotate (Z1, Z2) by ``twist``, Cayley
    to the Siegel model, then Heisenberg coordinates. Accepts ProjectivePoints
    or an array of (Z1, Z2).
    """
    c, s = math.cos(twist), math.sin(twist)
    rotation = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]], dtype=complex)
    reps = []
    for p in points:
        if isinstance(p, ProjectivePoint):
            reps.append(_to_ball(p).rep)
        else:
            reps.append(np.array([p[0], p[1], 1], dtype=complex))
    twisted = [ProjectivePoint(CAYLEY @ rotation @ v, SIEGEL) for v in reps]
    return heisenberg_coordinates(twisted)


@dataclass(frozen=True)
class LinkingResult:
    number: int
    value: float
    error: float


def _closed(curve: np.ndarray) -> np.ndarray:
    if np.linalg.norm(curve[0] - curve[-1]) > 1e-12:
        curve = np.vstack([curve, curve[:1]])
    return curve


def _resample(curve: np.ndarray, segments: int) -> np.ndarray:
    if len(curve) - 1 >= segments:
        return curve
    lengths = np.linalg.norm(np.diff(curve, axis=0), axis=1)
    arc = np.concatenate([[0.0], np.cumsum(lengths)])
    target = np.linspace(0.0, arc[-1], segments + 1)
    return np.column_stack([np.interp(target, arc, curve[:, k]) for k in range(3)])


def _solid_angle_sum(ls: np.ndarray, ks: np.ndarray, block: int = 128) -> float:
    # segment pair (k_i k_{i+1}) x (l_j l_{j+1}); closed curves, last point == first
    total = 0.0
    l0, l1 = ls[:-1], ls[1:]
    for start in range(0, len(ks) - 1, block):
        k0 = ks[start:min(start + block, len(ks) - 1)][:, None, :]
        k1 = ks[start + 1:min(start + block, len(ks) - 1) + 1][:, None, :]
        a = l0[None] - k0
        b = l0[None] - k1
        c = l1[None] - k1
        d = l1[None] - k0
        p = np.einsum("ijk,ijk->ij", a, np.cross(b, c))
        an, bn, cn, dn = (np.linalg.norm(v, axis=2) for v in (a, b, c, d))

        def dot(u, v):
            return np.einsum("ijk,ijk->ij", u, v)

        d1 = an * bn * cn + dot(a, b) * cn + dot(b, c) * an + dot(c, a) * bn
        d2 = an * dn * cn + dot(a, d) * cn + dot(d, c) * an + dot(c, a) * dn
        total += float(np.sum(np.arctan2(p, d1) + np.arctan2(p, d2)))
    return total / (2 * math.pi)


def gauss_linking(a, b) -> LinkingResult:
    """Discretized Gauss linking integral of two closed polylines in R^3."""
    a = _closed(np.asarray(a, dtype=float))
    b = _closed(np.asarray(b, dtype=float))
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise InvalidArgument("curves must be finite; move infinity off the curves")
    segments = setting("LINK_MIN_SEGMENTS")
    a, b = _resample(a, segments), _resample(b, segments)
    gap = float(cdist(a, b).min())
    if gap <= setting("LINK_MIN_DISTANCE"):
        raise CurvesTooClose("curves are too close for the discrete integral", distance=gap)
    value = _solid_angle_sum(a, b)
    number = int(round(value))
    return LinkingResult(number, value, abs(value - number))


# =========================
# Axes and horotubes
# =========================

def loxodromic_axis(m, model: Model = SIEGEL) -> CCircle:
    """Boundary C-circle of the complex geodesic through both fixed points."""
    cls = classify(m, model)
    if cls.kind is not Kind.LOXODROMIC:
        raise InvalidArgument("axis needs a loxodromic element", kind=cls.kind.value)
    middle = sorted(cls.eigen.pairs, key=lambda pair: abs(pair.value))[1]
    return c_circle_through(ProjectivePoint(middle.vector, model))


@dataclass(frozen=True, eq=False)
class Horotube:
    mesh: Mesh
    invariance_residual: float


def horotube_boundary(p_matrix, circle: Sequence[ProjectivePoint],
                      t_range: Tuple[float, float], resolution: int,
                      model: Model = SIEGEL) -> Horotube:
    """Sweep a boundary circle along the flow of Log P; P must be unipotent."""
    p_matrix = as_mat(p_matrix)
    cls = classify(p_matrix, model)
    if cls.kind not in (Kind.HORIZONTAL_PARABOLIC, Kind.VERTICAL_PARABOLIC):
        raise NotUnipotent("horotube needs a unipotent parabolic", kind=cls.kind.value)
    if resolution < 2:
        raise InvalidArgument("horotube needs resolution >= 2", resolution=resolution)
    fixed = fixed_points(p_matrix, model)[0].point
    for c in circle:
        if projective_distance(c, fixed) <= 1e-6:
            raise CircleHitsFixedPoint("circle passes through the parabolic fixed point")

    gen = FlowGenerator.from_isometry(p_matrix, model)
    t0, t1 = t_range
    times = np.array([t0]) if t0 == t1 else np.linspace(t0, t1, resolution)
    columns = list(range(len(circle)))

    def make(t, k):
        return flow_apply(gen, t, circle[int(k)])

    # a single time row has no quads: the mesh is the circle itself
    mesh = _grid_mesh(times, np.array(columns, dtype=float), False, True, make)

    residual = 0.0
    for t in times[:: max(1, len(times) // 8)]:
        for k in columns[:: max(1, len(columns) // 8)]:
            moved = ProjectivePoint(p_matrix @ make(float(t), k).rep, model)
            residual = max(residual, projective_distance(moved, make(float(t) + 1, k)))
    logger.debug("horotube invariance residual %.2e", residual)
    return Horotube(mesh, residual)
