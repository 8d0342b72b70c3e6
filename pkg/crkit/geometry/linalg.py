"""
Fixed-size complex 3x3 linear algebra for SU(2,1).

Matrices are plain ``numpy`` arrays of shape (3, 3) and dtype complex128,
vectors are shape (3,). Everything here is a pure function.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import sqrtm

from crkit.conf import setting
from crkit.errors import InvalidArgument, LogBranchFailure, NonConvergent

logger = logging.getLogger("crkit.linalg")

IDENTITY = np.eye(3, dtype=complex)
J1 = np.diag([1.0, 1.0, -1.0]).astype(complex)
J2 = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=complex)
OMEGA = cmath.exp(2j * cmath.pi / 3)
CUBE_ROOTS_OF_UNITY = (1 + 0j, OMEGA, OMEGA * OMEGA)


def as_mat(value) -> np.ndarray:
    try:
        m = np.asarray(value, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidArgument("matrix entries are not numeric") from exc
    if m.shape != (3, 3):
        raise InvalidArgument("expected a 3x3 matrix", shape=list(m.shape))
    if not np.all(np.isfinite(m)):
        raise InvalidArgument("matrix has non-finite entries")
    return m


def as_vec(value) -> np.ndarray:
    try:
        v = np.asarray(value, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidArgument("vector entries are not numeric") from exc
    if v.shape != (3,):
        raise InvalidArgument("expected a 3-vector", shape=list(v.shape))
    if not np.all(np.isfinite(v)):
        raise InvalidArgument("vector has non-finite entries")
    return v


def adjoint(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def sort_key(z: complex) -> Tuple[float, float]:
    # Re rounded so that equal real parts fall back on Im deterministically
    return (round(z.real, 9), round(z.imag, 9))


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


# =========================
# Cubic solver
# =========================

def char_poly_su21(z: complex) -> Tuple[complex, complex, complex]:
    """Coefficients (c2, c1, c0) of X^3 - zX^2 + conj(z)X - 1."""
    z = complex(z)
    return (-z, z.conjugate(), -1 + 0j)


def _poly(c2: complex, c1: complex, c0: complex, x: complex) -> complex:
    return ((x + c2) * x + c1) * x + c0


def _polish(c2: complex, c1: complex, c0: complex, x: complex) -> complex:
    f = _poly(c2, c1, c0, x)
    df = (3 * x + 2 * c2) * x + c1
    if df == 0:
        return x
    y = x - f / df
    return y if abs(_poly(c2, c1, c0, y)) < abs(f) else x


def cubic_roots(c2: complex, c1: complex, c0: complex) -> Tuple[complex, complex, complex]:
    """
    Roots of x^3 + c2 x^2 + c1 x + c0, sorted by ``sort_key``.

    Works on the depressed cubic y^3 + p y + q (x = y - c2/3). Triple and
    double roots are detected explicitly, three real roots of a real cubic
    use the trigonometric form, everything else goes through Cardano with
    one Newton step per root.
    """
    c2, c1, c0 = complex(c2), complex(c1), complex(c0)
    scale = 1.0 + max(abs(c2), abs(c1), abs(c0))
    shift = -c2 / 3
    p = c1 - c2 * c2 / 3
    q = 2 * c2 ** 3 / 27 - c2 * c1 / 3 + c0

    if abs(p) <= 1e-12 * scale ** 2 and abs(q) <= 1e-12 * scale ** 3:
        return (shift, shift, shift)

    cube, square = 4 * p ** 3, 27 * q ** 2
    disc = cube + square
    if abs(disc) <= 1e-8 * max(abs(cube), abs(square)):
        double, simple = -3 * q / (2 * p), 3 * q / p
        roots = [shift + double, shift + double, shift + simple]
        return tuple(sorted(roots, key=sort_key))

    real_coeffs = max(abs(c2.imag), abs(c1.imag), abs(c0.imag)) <= 1e-15 * scale
    if real_coeffs and disc.real < 0:
        pr, qr = p.real, q.real
        m = 2 * math.sqrt(-pr / 3)
        arg = max(-1.0, min(1.0, 3 * qr / (2 * pr) * math.sqrt(-3 / pr)))
        theta = math.acos(arg) / 3
        ys = [m * math.cos(theta - 2 * math.pi * k / 3) for k in range(3)]
        roots = [complex(y) + shift.real for y in ys]
    else:
        s = cmath.sqrt(disc / 108)
        c = -q / 2 + s
        if abs(-q / 2 - s) > abs(c):
            c = -q / 2 - s
        w = c ** (1 / 3)
        roots = []
        for rot in CUBE_ROOTS_OF_UNITY:
            wk = w * rot
            roots.append(wk - p / (3 * wk) + shift)

    roots = [_polish(c2, c1, c0, r) for r in roots]
    return tuple(sorted(roots, key=sort_key))


# =========================
# Eigen-systems
# =========================

@dataclass(frozen=True)
class EigenPair:
    value: complex
    vector: np.ndarray


@dataclass(frozen=True)
class EigenSpace:
    """Eigenvalue cluster with an orthonormal basis of its eigenspace (columns)."""
    value: complex
    multiplicity: int
    basis: np.ndarray

    @property
    def dimension(self) -> int:
        return int(self.basis.shape[1])

    @property
    def defective(self) -> bool:
        return self.dimension < self.multiplicity


@dataclass(frozen=True)
class EigenSystem:
    pairs: Tuple[EigenPair, ...]
    spaces: Tuple[EigenSpace, ...]
    defect_flag: bool

    @property
    def values(self) -> np.ndarray:
        return np.array([pair.value for pair in self.pairs], dtype=complex)

    @property
    def vectors(self) -> np.ndarray:
        return np.column_stack([pair.vector for pair in self.pairs])

    @property
    def regular(self) -> bool:
        return len(self.spaces) == 3

    def residual(self, m: np.ndarray) -> float:
        m = as_mat(m)
        worst = max(np.linalg.norm(m @ p.vector - p.value * p.vector) for p in self.pairs)
        return float(worst / max(1.0, np.linalg.norm(m)))


def cluster_values(values: Sequence[complex], tol: float) -> List[List[complex]]:
    groups: List[List[complex]] = []
    for z in sorted(values, key=sort_key):
        for group in groups:
            if abs(z - group[0]) <= tol * max(1.0, abs(group[0])):
                group.append(z)
                break
        else:
            groups.append([z])
    return groups


def _simple_null_vector(a: np.ndarray) -> np.ndarray:
    best, best_norm = None, -1.0
    for i, j in ((0, 1), (0, 2), (1, 2)):
        v = np.cross(a[i], a[j])
        n = np.linalg.norm(v)
        if n > best_norm:
            best, best_norm = v, n
    if best_norm <= 1e-12 * max(1.0, np.linalg.norm(a)) ** 2:
        logger.debug("cross-product null vector degenerate, using SVD")
        best = np.conj(np.linalg.svd(a)[2][-1])
    return _fix_phase(best / np.linalg.norm(best))


def _null_basis(a: np.ndarray, multiplicity: int, scale: float) -> np.ndarray:
    _, s, vh = np.linalg.svd(a)
    count = int(np.sum(s <= 1e-6 * scale))
    count = max(1, min(count, multiplicity))
    basis = np.conj(vh[3 - count:]).T
    return np.column_stack([_fix_phase(basis[:, k]) for k in range(count)])


def null_basis(a, scale: Optional[float] = None) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical kernel of ``a``."""
    a = as_mat(a)
    scale = max(1.0, np.linalg.norm(a)) if scale is None else scale
    return _null_basis(a, 3, scale)


def matrix_rank(a, scale: Optional[float] = None) -> int:
    a = as_mat(a)
    scale = max(1.0, np.linalg.norm(a)) if scale is None else scale
    return int(np.sum(np.linalg.svd(a, compute_uv=False) > 1e-6 * scale))


def eig3(m, cluster_tol: Optional[float] = None) -> EigenSystem:
    m = as_mat(m)
    tol = setting("CLUSTER_TOL") if cluster_tol is None else cluster_tol
    tr = np.trace(m)
    roots = cubic_roots(-tr, (tr * tr - np.trace(m @ m)) / 2, -np.linalg.det(m))
    scale = max(1.0, np.linalg.norm(m))

    pairs: List[EigenPair] = []
    spaces: List[EigenSpace] = []
    for group in cluster_values(roots, tol):
        lam = complex(sum(group) / len(group))
        a = m - lam * IDENTITY
        if len(group) == 1:
            basis = _simple_null_vector(a)[:, None]
        else:
            basis = _null_basis(a, len(group), scale)
        spaces.append(EigenSpace(lam, len(group), basis))
        for i in range(len(group)):
            pairs.append(EigenPair(lam, basis[:, min(i, basis.shape[1] - 1)].copy()))

    defect = any(space.defective for space in spaces)
    return EigenSystem(tuple(pairs), tuple(spaces), defect)


# =========================
# exp / log
# =========================

def mat_exp(x) -> np.ndarray:
    """Taylor series on x / 2^s, then s squarings."""
    x = as_mat(x)
    norm = np.linalg.norm(x, 1)
    squarings = int(math.ceil(math.log2(norm))) + 1 if norm > 0.5 else 0
    y = x / 2 ** squarings
    result = IDENTITY.copy()
    term = IDENTITY.copy()
    for k in range(1, 40):
        term = term @ y / k
        result = result + term
        if np.linalg.norm(term, 1) <= 1e-18 * np.linalg.norm(result, 1):
            break
    for _ in range(squarings):
        result = result @ result
    return result


def _sqrtm(a: np.ndarray) -> np.ndarray:
    root = np.asarray(sqrtm(a), dtype=complex)
    if not np.all(np.isfinite(root)):
        raise NonConvergent("matrix square root is not finite")
    return root


def _log_by_square_roots(m: np.ndarray) -> np.ndarray:
    r, k = m, 0
    while np.linalg.norm(r - IDENTITY) >= 0.5:
        if k >= 60:
            raise NonConvergent("could not bring the matrix close to the identity",
                                distance=float(np.linalg.norm(r - IDENTITY)))
        r = _sqrtm(r)
        k += 1
    n = r - IDENTITY
    out = np.zeros((3, 3), dtype=complex)
    power = IDENTITY.copy()
    for j in range(1, 400):
        power = power @ n
        term = power * ((-1) ** (j + 1) / j)
        out = out + term
        if np.linalg.norm(term) <= 1e-18:
            break
    logger.debug("log via %d square roots", k)
    return out * 2 ** k


def mat_log(m) -> np.ndarray:
    """
    Principal logarithm.

    Unipotent inputs get the finite Mercator sum, diagonalizable ones the
    spectral log, defective ones inverse scaling-and-squaring.
    """
    m = as_mat(m)
    n = m - IDENTITY
    nn = n @ n
    n3 = nn @ n
    if np.linalg.norm(n3) <= 1e-10 * max(1.0, np.linalg.norm(n) ** 3):
        return n - nn / 2 + n3 / 3

    eig = eig3(m)
    for lam in eig.values:
        if lam.real < 0 and abs(lam.imag) <= 1e-12 * abs(lam):
            raise LogBranchFailure("eigenvalue on the negative real axis", eigenvalue=lam)
        if lam == 0:
            raise LogBranchFailure("singular matrix has no logarithm")

    if not eig.defect_flag:
        b = eig.vectors
        if np.linalg.cond(b) < 1e8:
            out = b @ np.diag(np.log(eig.values)) @ np.linalg.inv(b)
            if np.linalg.norm(mat_exp(out) - m) <= 1e-10 * max(1.0, np.linalg.norm(m)):
                return out
            logger.debug("spectral log residual too large, falling back")
    return _log_by_square_roots(m)


# =========================
# SU(2,1)
# =========================

def in_su21(m, j, tol: Optional[float] = None) -> Tuple[bool, float]:
    """(member, residual) for M*JM = J and det M = 1."""
    m, j = as_mat(m), as_mat(j)
    tol = setting("TOL") if tol is None else tol
    form = np.linalg.norm(adjoint(m) @ j @ m - j) / max(1.0, np.linalg.norm(j))
    det = abs(np.linalg.det(m) - 1)
    residual = float(max(form, det))
    return residual <= tol, residual


def random_su21_algebra(seed, j=J1, scale: float = 1.0) -> np.ndarray:
    """Random X with X*J + JX = 0, tr X = 0 and max |X_ij| = scale * u, u in [0.1, 1]."""
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    k = (a - adjoint(a)) / 2
    x = np.linalg.solve(as_mat(j), k)
    x = x - np.trace(x) / 3 * IDENTITY
    return x * (scale * rng.uniform(0.1, 1.0) / np.max(np.abs(x)))


def random_su21(seed, j=J1, scale: float = 1.0) -> np.ndarray:
    return mat_exp(random_su21_algebra(seed, j, scale))


def projective_identity_residual(m) -> float:
    """Distance of M to the scalar matrices, after dividing by tr M / 3."""
    m = as_mat(m)
    scalar = np.trace(m) / 3
    if abs(scalar) < 1e-12:
        return float(np.linalg.norm(m))
    return float(np.linalg.norm(m / scalar - IDENTITY))
