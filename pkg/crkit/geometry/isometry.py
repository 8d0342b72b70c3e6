"""
Classification of PU(2,1) elements.

The kind of an element comes from its eigen-data: eigenvalue moduli
(loxodromic), a negative eigen-direction (elliptic), otherwise parabolic.
Goldman's trace function f is used as a cross-check on regular elements.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from crkit.conf import setting
from crkit.errors import (
    AmbiguousNearBoundary,
    IdentityInput,
    NormalFormResidual,
    NotElliptic,
    NotInGroup,
    NotRationalType,
)
from crkit.geometry.linalg import (
    CUBE_ROOTS_OF_UNITY,
    IDENTITY,
    EigenSpace,
    EigenSystem,
    adjoint,
    as_mat,
    eig3,
    in_su21,
    mat_log,
    matrix_rank,
    sort_key,
)
from crkit.geometry.models import (
    BALL,
    SIEGEL,
    Location,
    Model,
    ProjectivePoint,
    cayley_transfer,
    projectively_equal,
)

logger = logging.getLogger("crkit.isometry")


class Kind(str, Enum):
    LOXODROMIC = "Loxodromic"
    REGULAR_ELLIPTIC = "RegularElliptic"
    COMPLEX_REFLECTION = "ComplexReflection"
    REFLECTION_ON_POINT = "ReflectionOnPoint"
    HORIZONTAL_PARABOLIC = "HorizontalParabolic"
    VERTICAL_PARABOLIC = "VerticalParabolic"
    ELLIPTO_PARABOLIC = "ElliptoParabolic"
    IDENTITY = "Identity"
    AMBIGUOUS = "AmbiguousNearBoundary"

    @property
    def is_elliptic(self) -> bool:
        return self in (Kind.REGULAR_ELLIPTIC, Kind.COMPLEX_REFLECTION, Kind.REFLECTION_ON_POINT)

    @property
    def is_parabolic(self) -> bool:
        return self in (Kind.HORIZONTAL_PARABOLIC, Kind.VERTICAL_PARABOLIC, Kind.ELLIPTO_PARABOLIC)


def goldman_f(z):
    """|z|^4 - 8 Re(z^3) + 18 |z|^2 - 27; accepts scalars or numpy arrays."""
    a2 = np.abs(z) ** 2
    value = a2 * a2 - 8 * np.real(z ** 3) + 18 * a2 - 27
    return float(value) if np.ndim(value) == 0 else value


@dataclass(frozen=True)
class IsometryClass:
    kind: Kind
    regular: bool
    unipotent: bool
    eigen: EigenSystem
    trace: complex
    model: Model
    # Gram eigenvalues of the form restricted to each eigenspace, same order as eigen.spaces
    space_signs: Tuple[Tuple[float, ...], ...] = field(default=())

    @property
    def f_of_trace(self) -> float:
        return goldman_f(self.trace)


# =========================
# Normal-form families
# =========================

def t_lambda(lam: complex) -> np.ndarray:
    """Loxodromic T_lambda = diag(lambda, conj(lambda)/lambda, 1/conj(lambda)) (Siegel)."""
    lam = complex(lam)
    return np.diag([lam, lam.conjugate() / lam, 1 / lam.conjugate()]).astype(complex)


def e_abg(alpha: float, beta: float) -> np.ndarray:
    """E_{alpha,beta,gamma} = diag(e^{i alpha}, e^{i beta}, e^{i gamma}), gamma = -alpha-beta (ball)."""
    gamma = -alpha - beta
    return np.diag([cmath.exp(1j * alpha), cmath.exp(1j * beta), cmath.exp(1j * gamma)])


def p_zs(z: complex, s: float) -> np.ndarray:
    """Heisenberg translation P_{z,s} (Siegel)."""
    z = complex(z)
    return np.array(
        [[1, -z.conjugate(), -(abs(z) ** 2 + 1j * s) / 2], [0, 1, z], [0, 0, 1]],
        dtype=complex,
    )


def ellipto_parabolic(theta: float, s: float = 1.0) -> np.ndarray:
    """e^{i theta} [[1, 0, -is/2], [0, e^{-3i theta}, 0], [0, 0, 1]] (Siegel)."""
    mu = cmath.exp(1j * theta)
    core = np.array(
        [[1, 0, -0.5j * s], [0, cmath.exp(-3j * theta), 0], [0, 0, 1]], dtype=complex
    )
    return mu * core


# =========================
# Classification
# =========================

def _space_gram(space: EigenSpace, form: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    gram = adjoint(space.basis) @ form @ space.basis
    gram = (gram + adjoint(gram)) / 2
    return np.linalg.eigh(gram)


def _nearest_cube_root(z: complex) -> complex:
    return min(CUBE_ROOTS_OF_UNITY, key=lambda w: abs(z - w))


def _check_group(m: np.ndarray, model: Model) -> None:
    ok, residual = in_su21(m, model.form)
    if not ok:
        raise NotInGroup("matrix is not in SU(2,1) for this model",
                         model=model.name, residual=residual)


def classify(m, model: Model = BALL) -> IsometryClass:
    m = as_mat(m)
    _check_group(m, model)
    cluster_tol = setting("CLUSTER_TOL")
    goldman_tol = setting("GOLDMAN_TOL")
    tol = setting("TOL")

    eig = eig3(m)
    tr = complex(np.trace(m))
    values = eig.values
    form = model.form
    signs = []
    for space in eig.spaces:
        gram_values, _ = _space_gram(space, form)
        signs.append(tuple(float(v) for v in gram_values))
    signs = tuple(signs)

    def build(kind: Kind, regular: bool, unipotent: bool) -> IsometryClass:
        return IsometryClass(kind, regular, unipotent, eig, tr, model, signs)

    if np.linalg.norm(m - tr / 3 * IDENTITY) <= tol * 10:
        return build(Kind.IDENTITY, False, True)

    regular = eig.regular
    unipotent = len(eig.spaces) == 1 and abs(
        eig.spaces[0].value - _nearest_cube_root(eig.spaces[0].value)) <= cluster_tol * 10
    f = goldman_f(tr)

    gaps = [abs(a - b) for i, a in enumerate(values) for b in values[i + 1:]]
    min_gap = min(gaps)
    if abs(f) <= goldman_tol and cluster_tol < min_gap <= setting("AMBIGUITY_GAP"):
        logger.warning("classification ambiguous: f(tr)=%.3g, eigenvalue gap %.3g", f, min_gap)
        return build(Kind.AMBIGUOUS, regular, unipotent)

    if any(abs(abs(v) - 1) > cluster_tol for v in values):
        kind = Kind.LOXODROMIC
    else:
        negative = [k for k, s in enumerate(signs) if s[0] < -tol]
        if negative:
            if regular:
                kind = Kind.REGULAR_ELLIPTIC
            else:
                repeated = next(k for k, sp in enumerate(eig.spaces) if sp.multiplicity == 2)
                indefinite = signs[repeated][0] < -tol
                kind = Kind.COMPLEX_REFLECTION if indefinite else Kind.REFLECTION_ON_POINT
        elif unipotent:
            lam = _nearest_cube_root(eig.spaces[0].value)
            rank = matrix_rank(m - lam * IDENTITY)
            kind = Kind.HORIZONTAL_PARABOLIC if rank == 2 else Kind.VERTICAL_PARABOLIC
        else:
            kind = Kind.ELLIPTO_PARABOLIC

    if regular and abs(f) > goldman_tol:
        expected = Kind.LOXODROMIC if f > 0 else Kind.REGULAR_ELLIPTIC
        if kind is not expected:
            logger.warning("eigen classification %s disagrees with f(tr)=%.3g", kind.value, f)
            return build(Kind.AMBIGUOUS, regular, unipotent)

    return build(kind, regular, unipotent)


# =========================
# Elliptic type
# =========================

@dataclass(frozen=True)
class EllipticType:
    """Rotation numbers (p/n, q/n) in turns, in lowest joint terms, |p| >= |q|."""
    p: int
    q: int
    n: int

    @classmethod
    def from_rotations(cls, r1: Fraction, r2: Fraction) -> "EllipticType":
        n = r1.denominator * r2.denominator // math.gcd(r1.denominator, r2.denominator)
        p, q = int(r1 * n), int(r2 * n)
        if abs(q) > abs(p) or (abs(q) == abs(p) and q > p):
            p, q = q, p
        return cls(p, q, n)

    @property
    def rotations(self) -> Tuple[Fraction, Fraction]:
        return Fraction(self.p, self.n), Fraction(self.q, self.n)

    @property
    def angles(self) -> Tuple[Fraction, Fraction, Fraction]:
        """(alpha, beta, gamma) in turns: alpha = (2p-q)/3n, beta = (2q-p)/3n."""
        alpha = Fraction(2 * self.p - self.q, 3 * self.n)
        beta = Fraction(2 * self.q - self.p, 3 * self.n)
        return alpha, beta, -alpha - beta

    def inverse(self) -> "EllipticType":
        return EllipticType.from_rotations(Fraction(-self.p, self.n), Fraction(-self.q, self.n))

    def __str__(self) -> str:
        return f"({self.p}/{self.n}, {self.q}/{self.n})"


def _reduce_turn(x: float) -> float:
    # into (-1/2, 1/2]
    r = x - math.floor(x)
    return r - 1 if r > 0.5 else r


def _rationalize(x: float, denom_bound: int, tol: float) -> Fraction:
    frac = Fraction(x).limit_denominator(denom_bound)
    if abs(float(frac) - x) > tol:
        raise NotRationalType("rotation number is not rational at this bound",
                              rotation=x, denom_bound=denom_bound)
    if frac == Fraction(-1, 2):
        frac = Fraction(1, 2)
    return frac


def negative_eigenvalue(cls: IsometryClass) -> complex:
    k = min(range(len(cls.space_signs)), key=lambda i: cls.space_signs[i][0])
    return cls.eigen.spaces[k].value


def elliptic_type(m, model: Model = BALL, denom_bound: Optional[int] = None,
                  tol: Optional[float] = None) -> EllipticType:
    denom_bound = setting("DENOM_BOUND") if denom_bound is None else denom_bound
    tol = setting("TYPE_TOL") if tol is None else tol
    cls = classify(m, model)
    if not cls.kind.is_elliptic:
        raise NotElliptic("elliptic type needs an elliptic element", kind=cls.kind.value)

    lam_neg = negative_eigenvalue(cls)
    others = list(cls.eigen.values)
    others.remove(min(others, key=lambda v: abs(v - lam_neg)))
    rotations = [_reduce_turn(cmath.phase(v / lam_neg) / (2 * math.pi)) for v in others]
    fracs = [_rationalize(r, denom_bound, tol) for r in rotations]
    return EllipticType.from_rotations(*fracs)


# =========================
# Fixed points
# =========================

@dataclass(frozen=True)
class FixedPoint:
    point: ProjectivePoint
    location: Location
    eigenvalue: complex


def fixed_points(m, model: Model = BALL) -> List[FixedPoint]:
    """Projectivized eigen-directions, one Gram-orthogonal basis per eigenspace."""
    cls = classify(m, model)
    form = model.form
    out: List[FixedPoint] = []
    for space in cls.eigen.spaces:
        _, vectors = _space_gram(space, form)
        for k in range(space.dimension):
            v = space.basis @ vectors[:, k]
            p = ProjectivePoint(v, model)
            if any(projectively_equal(p, q.point) for q in out):
                continue
            out.append(FixedPoint(p, p.location(1e-8), space.value))
    return out


# =========================
# Normal forms
# =========================

@dataclass(frozen=True)
class NormalForm:
    representative: np.ndarray
    conjugator: np.ndarray
    model: Model
    kind: Kind
    # input expressed in ``model``; conjugator @ source @ inv(conjugator) = representative
    source: np.ndarray


def _pair(u: np.ndarray, v: np.ndarray, form: np.ndarray) -> complex:
    return complex(np.conj(u) @ form @ v)


def _unit_det(b: np.ndarray) -> np.ndarray:
    det = np.linalg.det(b)
    return b / det ** (1 / 3)


def _best_probe(values: List[Tuple[float, np.ndarray]]) -> Tuple[float, np.ndarray]:
    return max(values, key=lambda item: abs(item[0]))


_PROBES = [np.eye(3, dtype=complex)[k] for k in range(3)] + [np.ones(3, dtype=complex)]


def _loxodromic_basis(m: np.ndarray, cls: IsometryClass) -> Tuple[np.ndarray, np.ndarray]:
    form = SIEGEL.form
    pairs = sorted(cls.eigen.pairs, key=lambda p: abs(p.value))
    repelling, middle, attracting = pairs
    b1 = attracting.vector
    b3 = repelling.vector / _pair(b1, repelling.vector, form)
    b2 = middle.vector / math.sqrt(_pair(middle.vector, middle.vector, form).real)
    return np.column_stack([b1, b2, b3]), t_lambda(attracting.value)


def _elliptic_basis(m: np.ndarray, cls: IsometryClass) -> Tuple[np.ndarray, np.ndarray]:
    form = BALL.form
    positive: List[Tuple[complex, np.ndarray]] = []
    negative: List[Tuple[complex, np.ndarray]] = []
    for space in cls.eigen.spaces:
        gram_values, vectors = _space_gram(space, form)
        for k in range(space.dimension):
            v = space.basis @ vectors[:, k]
            norm = math.sqrt(abs(gram_values[k]))
            (negative if gram_values[k] < 0 else positive).append((space.value, v / norm))
    positive.sort(key=lambda item: sort_key(item[0]))
    (l1, b1), (l2, b2) = positive
    lneg, b3 = negative[0]
    return np.column_stack([b1, b2, b3]), np.diag([l1, l2, lneg]).astype(complex)


def _horizontal_basis(m: np.ndarray, mu: complex) -> Tuple[np.ndarray, np.ndarray]:
    form = SIEGEL.form
    x = mat_log(m / mu)
    x2 = x @ x
    q, b = _best_probe([(_pair(x2 @ v, v, form).real, v) for v in _PROBES])
    if q >= 0:
        raise NormalFormResidual("horizontal generator has no negative probe", q=q)
    b3 = b / math.sqrt(-q)
    b2 = x @ b3
    shift = 1j * (-_pair(b2, b3, form).imag / 2)
    b3 = b3 + shift * b2
    b2 = x @ b3
    b1 = -(x @ b2)
    b3 = b3 - _pair(b3, b3, form).real / 2 * b1
    return np.column_stack([b1, b2, b3]), mu * p_zs(1, 0)


def _vertical_basis(m: np.ndarray, mu: complex, nu: Optional[complex],
                    b2: Optional[np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    form = SIEGEL.form
    n = m / mu - IDENTITY
    if b2 is not None:
        projector = IDENTITY - np.outer(b2, np.conj(b2) @ form)
        n = n @ projector
    probe, b3 = _best_probe([(_pair(n @ v, v, form).imag, v) for v in _PROBES])
    s = 1.0 if probe > 0 else -1.0
    if b2 is not None:
        b3 = b3 - _pair(b2, b3, form) * b2
    b1 = 2j * s * (n @ b3)
    scale = math.sqrt(_pair(b1, b3, form).real)
    b3, b1 = b3 / scale, b1 / scale
    b3 = b3 - _pair(b3, b3, form).real / 2 * b1
    if b2 is None:
        c = np.cross(np.conj(form @ b1), np.conj(form @ b3))
        b2 = c / math.sqrt(_pair(c, c, form).real)
        rep = mu * p_zs(0, s)
    else:
        rep = mu * np.array([[1, 0, -0.5j * s], [0, nu / mu, 0], [0, 0, 1]], dtype=complex)
    return np.column_stack([b1, b2, b3]), rep


def normal_form(m, model: Model = BALL) -> NormalForm:
    """
    Conjugate M to its displayed family: T_lambda, E_{alpha,beta,gamma},
    P_{1,0}, P_{0,+-1} or the ellipto-parabolic form. Loxodromic and parabolic
    representatives live in the Siegel model, elliptic ones in the ball.
    """
    m = as_mat(m)
    cls = classify(m, model)
    kind = cls.kind
    if kind is Kind.IDENTITY:
        raise IdentityInput("the identity has no normal form")
    if kind is Kind.AMBIGUOUS:
        raise AmbiguousNearBoundary("classification is ambiguous", trace=cls.trace)

    target = BALL if kind.is_elliptic else SIEGEL
    source = m if target == model else cayley_transfer(m, model, target)
    cls = classify(source, target)

    if kind is Kind.LOXODROMIC:
        b, rep = _loxodromic_basis(source, cls)
    elif kind.is_elliptic:
        b, rep = _elliptic_basis(source, cls)
    elif kind is Kind.HORIZONTAL_PARABOLIC:
        b, rep = _horizontal_basis(source, _nearest_cube_root(cls.eigen.spaces[0].value))
    elif kind is Kind.VERTICAL_PARABOLIC:
        b, rep = _vertical_basis(source, _nearest_cube_root(cls.eigen.spaces[0].value), None, None)
    else:
        double = next(sp for sp in cls.eigen.spaces if sp.multiplicity == 2)
        simple = next(sp for sp in cls.eigen.spaces if sp.multiplicity == 1)
        v = simple.basis[:, 0]
        v = v / math.sqrt(_pair(v, v, SIEGEL.form).real)
        b, rep = _vertical_basis(source, double.value, simple.value, v)

    b = _unit_det(b)
    conjugator = np.linalg.inv(b)
    result = conjugator @ source @ b
    residual = float(np.linalg.norm(result - rep) / max(1.0, np.linalg.norm(rep)))
    if residual > 1e-8:
        raise NormalFormResidual("conjugation did not reach the representative",
                                 kind=kind.value, residual=residual)
    logger.debug("normal form %s residual %.2e", kind.value, residual)
    return NormalForm(rep, conjugator, target, kind, source)
