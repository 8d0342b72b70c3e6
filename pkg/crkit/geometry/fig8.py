"""
The figure-eight knot representation family.

pi_1 = <g1, g2, g3 | g2 = [g3, g1^-1], g1 g2 = g2 g3>. Words are strings over
``a b c`` for g1 g2 g3, upper case for inverses, read left to right as a
matrix product.
"""
from __future__ import annotations

import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage

from crkit.conf import setting
from crkit.errors import (
    BadSignature,
    DegenerateDenominator,
    InvalidArgument,
    InvariantViolation,
    IrrationalElliptic,
    MalformedWord,
    NegativeDelta,
    NonRealDelta,
    NotCoprime,
    NotRationalType,
    UnsupportedEllipticType,
)
from crkit.geometry.isometry import (
    EllipticType,
    IsometryClass,
    classify,
    elliptic_type,
    goldman_f,
)
from crkit.geometry.linalg import (
    IDENTITY,
    J2,
    adjoint,
    as_mat,
    projective_identity_residual,
)
from crkit.geometry.models import BALL, CAYLEY, standardize_form
from crkit.geometry.surgery import (
    REFERENCE,
    DehnFilling,
    Marking,
    Slope,
    SlopeReconciliation,
    SurgeryOutcome,
    change_marking,
    figure_eight_marking,
    reconcile_elliptic_slope,
    surgery_outcome,
)

logger = logging.getLogger("crkit.fig8")

# relators and peripheral words
R1 = "BcACa"            # g2^-1 [g3, g1^-1]
R2 = "BAbc"             # (g1 g2)^-1 g2 g3
M0 = "c"                # meridian m0 = g3
L0 = "AcaCCacA"         # longitude l0
M1 = "bcB"              # g2 g3 g2^-1, equals g1
G2_WORD = "cACa"        # g2 = [g3, g1^-1]

FINGERPRINT_WORDS = (
    "a", "c", "ac", "aC", "acc", "aaC", "acac", "aCaC", "aacc", "aacC",
    "accc", "aCCC", "acaC", "aacac", "aCacc", "acAC", "accAC", "aacaC", "acacac", "b",
)

_LETTERS = {"a": "g1", "b": "g2", "c": "g3"}

SQRT7 = math.sqrt(7.0)


def delta(u: complex) -> float:
    """Delta = 4u^3 + 4v^3 - u^2 v^2 - 16uv + 16 with v = conj(u)."""
    u = complex(u)
    v = u.conjugate()
    value = 4 * u ** 3 + 4 * v ** 3 - u * u * v * v - 16 * u * v + 16
    if abs(value.imag) > 1e-8 * max(1.0, abs(value)):
        raise NonRealDelta("Delta has an imaginary part", u=u, imag=value.imag)
    return value.real


def delta_xy(x, y):
    """The same quartic in real coordinates; vectorizes over numpy arrays."""
    x2, y2 = x * x, y * y
    return -x2 * x2 - y2 * y2 - 2 * x2 * y2 - 24 * x * y2 + 8 * x2 * x - 16 * x2 - 16 * y2 + 16


@dataclass(frozen=True)
class RepParam:
    u: complex
    v: complex
    delta: float
    branch: int


@dataclass(frozen=True, eq=False)
class Fig8Rep:
    """
    A representation g1, g2, g3 -> SU(2,1). ``form`` is the preserved Hermitian
    form and ``standardizer`` an S with S* J1 S = form, so S M S^-1 is the
    ball-model image of M.
    """
    param: RepParam
    g1: np.ndarray
    g2: np.ndarray
    g3: np.ndarray
    form: np.ndarray
    standardizer: np.ndarray
    residuals: Dict[str, float] = field(default_factory=dict)

    def generator(self, letter: str) -> np.ndarray:
        m = {"a": self.g1, "b": self.g2, "c": self.g3}[letter.lower()]
        return m if letter.islower() else np.linalg.inv(m)

    def to_ball(self, m) -> np.ndarray:
        s = self.standardizer
        return s @ as_mat(m) @ np.linalg.inv(s)

    def meridian(self) -> np.ndarray:
        return word_eval(M0, self)


def _check_word(word: str) -> None:
    bad = [ch for ch in word if ch.lower() not in _LETTERS]
    if bad:
        raise MalformedWord(f"word {word!r} has letters outside a, b, c", word=word)


def word_eval(word: str, rep: Fig8Rep) -> np.ndarray:
    _check_word(word)
    result = IDENTITY.copy()
    for letter in word:
        result = result @ rep.generator(letter)
    return result


def _word_from(word: str, g1: np.ndarray, g3: np.ndarray) -> np.ndarray:
    gens = {"a": g1, "A": np.linalg.inv(g1), "c": g3, "C": np.linalg.inv(g3)}
    result = IDENTITY.copy()
    for letter in word:
        result = result @ gens[letter]
    return result


def relator_residuals(rep: Fig8Rep) -> Dict[str, float]:
    """Projective distance to the identity of r1, r2 and m0^3 l0^-1."""
    return {
        "r1": projective_identity_residual(word_eval(R1, rep)),
        "r2": projective_identity_residual(word_eval(R2, rep)),
        "m0^3 l0^-1": projective_identity_residual(word_eval(M0 * 3 + _invert(L0), rep)),
    }


def _invert(word: str) -> str:
    return word[::-1].swapcase()


def form_residual(m: np.ndarray, form: np.ndarray) -> float:
    return float(np.linalg.norm(adjoint(m) @ form @ m - form) / max(1.0, np.linalg.norm(form)))


def rho0() -> Fig8Rep:
    """The unipotent representation at u = 3, preserving the Siegel form."""
    g1 = np.array(
        [[1, 1, -0.5 - 0.5j * SQRT7], [0, 1, -1], [0, 0, 1]], dtype=complex
    )
    g3 = np.array(
        [[1, 0, 0], [-1, 1, 0], [-0.5 + 0.5j * SQRT7, 1, 1]], dtype=complex
    )
    g2 = _word_from(G2_WORD, g1, g3)
    param = RepParam(3 + 0j, 3 + 0j, 7.0, 1)
    rep = Fig8Rep(param, g1, g2, g3, J2.copy(), CAYLEY.copy())
    rep.residuals.update(relator_residuals(rep))
    return rep


def family_rep(u: complex, branch: int = 1) -> Fig8Rep:
    """
    The representation with tr rho(m0) = u, built from rho(a) = G3^-1 and
    rho(b) = G1^-1. g2 comes from the first relator; the second relator, the
    form and the trace are checked on construction.
    """
    if branch not in (1, -1):
        raise InvalidArgument("branch must be +1 or -1", branch=branch)
    u = complex(u)
    v = u.conjugate()
    d = delta(u)
    if d < 0:
        raise NegativeDelta("Delta is negative at u", u=u, delta=d)
    sd = branch * math.sqrt(d)
    den = 8 * u * u - 6 * u * v * v + v ** 4
    scale = max(1.0, abs(u)) ** 4
    if abs(den) <= 1e-12 * scale:
        raise DegenerateDenominator("8u^2 - 6uv^2 + v^4 vanishes", u=u)
    if abs(16 - d) <= 1e-12 * 16:
        raise DegenerateDenominator("16 - Delta vanishes", u=u)
    if abs(sd + 4) <= 1e-12 * 4:
        raise DegenerateDenominator("sqrt(Delta) + 4 vanishes", u=u)

    num = -16 + 8 * u * v - 2 * v ** 3 - 4 * sd
    corner = (8 - 4 * u * v + v ** 3 - 2 * sd) / 16
    rho_a = np.array([
        [v / 2, 1, -(1 - 1j) * num / den],
        [(1 + 1j) * (-2 * u + v * v) / 8, (1 + 1j) * v / 4, 1],
        [corner, (-4 * u + v * v) / 8, (1 - 1j) * v / 4],
    ], dtype=complex)
    rho_b = np.array([
        [v / 2, 1j, (1 + 1j) * num / den],
        [-(1 + 1j) * (-2 * u + v * v) / 8, (1 - 1j) * v / 4, 1j],
        [-corner, -1j * (-4 * u + v * v) / 8, (1 + 1j) * v / 4],
    ], dtype=complex)
    h = np.diag([(d - 16) * (sd + abs(u) ** 2 - 4) / 8, 16 - d, 8 * (sd + 4)]).astype(complex)

    g3 = np.linalg.inv(rho_a)
    g1 = np.linalg.inv(rho_b)
    g2 = _word_from(G2_WORD, g1, g3)
    try:
        s = standardize_form(h)
    except BadSignature as e:
        raise InvariantViolation("form H(u) does not have signature (2,1)", u=u, **e.details)

    rep = Fig8Rep(RepParam(u, v, d, branch), g1, g2, g3, h, s)
    residuals = relator_residuals(rep)
    residuals["form g1"] = form_residual(g1, h)
    residuals["form g3"] = form_residual(g3, h)
    residuals["trace m0"] = abs(np.trace(g3) - u)
    rep.residuals.update(residuals)

    tol = setting("FAMILY_TOL")
    worst = max(residuals.values())
    logger.debug("family_rep u=%s residuals %s", u, residuals)
    if worst > tol:
        raise InvariantViolation("family representation fails its checks", u=u,
                                 residuals=residuals, tol=tol)
    return rep


def trace_fingerprint(rep: Fig8Rep, words: Sequence[str] = FINGERPRINT_WORDS) -> np.ndarray:
    return np.array([np.trace(word_eval(w, rep)) for w in words], dtype=complex)


# =========================
# (p, n) parameters
# =========================

def angles_from_pn(p: int, n: int) -> Tuple[Fraction, Fraction, Fraction]:
    """(alpha, beta, gamma) in turns: ((-2p-1)/3n, (2+p)/3n, (p-1)/3n)."""
    if n < 1:
        raise InvalidArgument("n must be positive", n=n)
    if math.gcd(p, n) != 1:
        raise NotCoprime("p and n must be coprime", p=p, n=n)
    return Fraction(-2 * p - 1, 3 * n), Fraction(2 + p, 3 * n), Fraction(p - 1, 3 * n)


def u_from_pn(p: int, n: int) -> complex:
    return sum(cmath.exp(2j * math.pi * float(a)) for a in angles_from_pn(p, n))


# =========================
# Parameter scans
# =========================

@dataclass(frozen=True, eq=False)
class ScanGrid:
    xs: np.ndarray
    ys: np.ndarray
    delta: np.ndarray       # shape (len(ys), len(xs))
    f: np.ndarray
    in_component: np.ndarray

    def records(self) -> Iterator[Dict]:
        """Row-major: y outer, x inner."""
        for i, y in enumerate(self.ys):
            for j, x in enumerate(self.xs):
                d, fv = float(self.delta[i, j]), float(self.f[i, j])
                yield {
                    "x": float(x), "y": float(y), "delta": d, "f": fv,
                    "delta_sign": int(np.sign(d)), "f_sign": int(np.sign(fv)),
                    "in_component": bool(self.in_component[i, j]),
                }


def _scan_row(xs: np.ndarray, y: float) -> Tuple[np.ndarray, np.ndarray]:
    return delta_xy(xs, y), goldman_f(xs + 1j * y)


def _contains(bounds: Tuple[float, float], value: float) -> bool:
    return min(bounds) <= value <= max(bounds)


def scan_region(x_range: Tuple[float, float], y_range: Tuple[float, float], resolution: int,
                threads: int = 1) -> ScanGrid:
    """
    Delta and f(u) on a resolution x resolution grid, plus the cells of the
    Delta > 0 component containing u = 3 - 1e-3.

    Delta(2 + iy) = -y^4 - 72y^2 <= 0, so the line Re u = 2 separates that
    component from the region around u = 1. The two only meet at the node
    u = 2, which a grid row y = 0 would otherwise bridge.
    """
    if resolution < 2:
        raise InvalidArgument("scan needs resolution >= 2", resolution=resolution)
    xs = np.linspace(x_range[0], x_range[1], resolution)
    ys = np.linspace(y_range[0], y_range[1], resolution)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        rows = list(pool.map(lambda y: _scan_row(xs, float(y)), ys))
    d = np.vstack([r[0] for r in rows])
    f = np.vstack([r[1] for r in rows])

    component = np.zeros_like(d, dtype=bool)
    seed_x = 3 - 1e-3
    if not (_contains(x_range, seed_x) and _contains(y_range, 0.0)):
        logger.warning("scan region does not contain u = 3")
        return ScanGrid(xs, ys, d, f, component)

    labels, count = ndimage.label((d > 0) & (xs > 2)[None, :])
    j = int(np.argmin(np.abs(xs - seed_x)))
    i = int(np.argmin(np.abs(ys)))
    seed = labels[i, j]
    if seed == 0:
        logger.warning("grid cell nearest u = 3 is not inside Delta > 0")
    else:
        component = labels == seed
    logger.info("scanned %dx%d grid, %d components of Delta > 0 right of Re u = 2",
                resolution, resolution, count)
    return ScanGrid(xs, ys, d, f, component)


def _edge_point(values: np.ndarray, p1: Tuple[int, int], p2: Tuple[int, int],
                xs: np.ndarray, ys: np.ndarray) -> Optional[Tuple[float, float]]:
    # corners with value 0 count as outside, so a zero corner is a crossing
    v1, v2 = values[p1], values[p2]
    if (v1 > 0) == (v2 > 0):
        return None
    w = v1 / (v1 - v2)
    x = xs[p1[1]] + w * (xs[p2[1]] - xs[p1[1]])
    y = ys[p1[0]] + w * (ys[p2[0]] - ys[p1[0]])
    return float(x), float(y)


def contour(grid: ScanGrid, field_name: str = "delta") -> List[Tuple[Tuple[float, float], Tuple[float, float]]]:
    """
    Marching squares on the zero set of ``delta`` or ``f``. Saddle cells are
    split by the sign of the average of their four corners.
    """
    values = {"delta": grid.delta, "f": grid.f}.get(field_name)
    if values is None:
        raise InvalidArgument(f"unknown scan field {field_name!r}", field=field_name)
    segments = []
    rows, cols = values.shape
    for i in range(rows - 1):
        for j in range(cols - 1):
            corners = [(i, j), (i, j + 1), (i + 1, j + 1), (i + 1, j)]
            points = [
                _edge_point(values, corners[k], corners[(k + 1) % 4], grid.xs, grid.ys)
                for k in range(4)
            ]
            crossed = [k for k in range(4) if points[k] is not None]
            if len(crossed) == 2:
                segments.append((points[crossed[0]], points[crossed[1]]))
            elif len(crossed) == 4:
                center = sum(values[c] for c in corners) / 4
                if (center > 0) == (values[corners[0]] > 0):
                    pairs = ((0, 1), (2, 3))
                else:
                    pairs = ((3, 0), (1, 2))
                segments.extend((points[a], points[b]) for a, b in pairs)
    return segments


# =========================
# Classification along the family
# =========================

@dataclass(frozen=True, eq=False)
class Fig8Report:
    u: complex
    branch: int
    delta: float
    meridian: np.ndarray
    classification: IsometryClass
    etype: Optional[EllipticType]
    outcome: Optional[SurgeryOutcome]
    marking: Marking
    transported: Optional[Slope]
    reconciliation: Optional[SlopeReconciliation]

    @property
    def inverse_type(self) -> Optional[EllipticType]:
        """Type of rho(a) = G3^-1."""
        return None if self.etype is None else self.etype.inverse()


def classify_at(u: complex, branch: int = 1, orientation: Optional[int] = None) -> Fig8Report:
    rep = family_rep(u, branch)
    meridian = rep.to_ball(rep.meridian())
    cls = classify(meridian, BALL)
    etype = None
    if cls.kind.is_elliptic:
        try:
            etype = elliptic_type(meridian, BALL)
        except NotRationalType:
            logger.info("meridian at u=%s has an irrational type", u)

    marking = figure_eight_marking(orientation)
    try:
        outcome = surgery_outcome(cls, etype, marking)
    except (IrrationalElliptic, UnsupportedEllipticType, NotCoprime) as e:
        logger.info("no surgery outcome at u=%s: %s", u, e.message)
        outcome = None
    transported = reconciliation = None
    if isinstance(outcome, DehnFilling):
        transported = change_marking(outcome.slope, REFERENCE)
        if etype is not None:
            reconciliation = reconcile_elliptic_slope(etype, marking)
    return Fig8Report(complex(u), branch, rep.param.delta, meridian, cls, etype,
                      outcome, marking, transported, reconciliation)
