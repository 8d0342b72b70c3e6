"""
Peripheral markings, slopes and the surgery outcome of a peripheral holonomy.

All arithmetic is exact integer arithmetic; slopes always carry the marking
they are written in.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple, Union

from crkit.conf import setting
from crkit.errors import (
    AmbiguousNearBoundary,
    IdentityInput,
    InvalidArgument,
    InvalidSlope,
    IrrationalElliptic,
    NonUnimodular,
    NotCoprime,
    UnsupportedEllipticType,
)
from crkit.geometry.isometry import EllipticType, IsometryClass, Kind

logger = logging.getLogger("crkit.surgery")

IntMatrix = Tuple[Tuple[int, int], Tuple[int, int]]


@dataclass(frozen=True)
class Marking:
    """
    A basis of the peripheral torus homology. Column k of ``change`` is the
    k-th basis element written in the reference basis (l0, m0).
    """
    name: str
    change: IntMatrix

    def __post_init__(self):
        (a, b), (c, d) = self.change
        change = ((int(a), int(b)), (int(c), int(d)))
        object.__setattr__(self, "change", change)
        if self.det not in (1, -1):
            raise NonUnimodular("marking change must have determinant +-1",
                                marking=self.name, det=self.det)

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.change
        return a * d - b * c

    def to_reference(self, x: int, y: int) -> Tuple[int, int]:
        (a, b), (c, d) = self.change
        return a * x + b * y, c * x + d * y

    def from_reference(self, x: int, y: int) -> Tuple[int, int]:
        (a, b), (c, d) = self.change
        det = self.det
        return (d * x - b * y) * det, (-c * x + a * y) * det


REFERENCE = Marking("(l0,m0)", ((1, 0), (0, 1)))


def figure_eight_marking(orientation: Optional[int] = None) -> Marking:
    """(l, m) with l = orientation * m0 and m = 3 m0 - l0."""
    sigma = setting("ORIENTATION") if orientation is None else int(orientation)
    if sigma not in (1, -1):
        raise InvalidArgument("orientation must be +1 or -1", orientation=sigma)
    return Marking("(l,m)", ((0, -1), (sigma, 3)))


def get_marking(name: Union[str, Marking], orientation: Optional[int] = None) -> Marking:
    if isinstance(name, Marking):
        return name
    if name == "(l,m)":
        return figure_eight_marking(orientation)
    if name == REFERENCE.name:
        return REFERENCE
    raise InvalidArgument(f"unknown marking {name!r}", marking=name)


@dataclass(frozen=True)
class Slope:
    """The curve a*l + b*m of the marking; primitive and nonzero."""
    a: int
    b: int
    marking: Marking = REFERENCE

    def __post_init__(self):
        if (self.a, self.b) == (0, 0):
            raise InvalidSlope("slope (0,0) is not a curve")
        if math.gcd(self.a, self.b) != 1:
            raise InvalidSlope("slope is not primitive", slope=[self.a, self.b])

    @classmethod
    def of(cls, a: int, b: int, marking: Marking = REFERENCE) -> "Slope":
        g = math.gcd(a, b)
        if g == 0:
            raise InvalidSlope("slope (0,0) is not a curve")
        return cls(a // g, b // g, marking)

    def canonical(self) -> Tuple[int, int]:
        """Representative with first nonzero coordinate positive."""
        if self.a < 0 or (self.a == 0 and self.b < 0):
            return -self.a, -self.b
        return self.a, self.b

    def same_surgery(self, other: "Slope") -> bool:
        other = change_marking(other, self.marking)
        return self.canonical() == other.canonical()

    def as_list(self):
        return [self.a, self.b]


def change_marking(s: Slope, target: Marking) -> Slope:
    if s.marking == target:
        return s
    x, y = s.marking.to_reference(s.a, s.b)
    return Slope.of(*target.from_reference(x, y), marking=target)


def mod_inverse(p: int, n: int) -> int:
    if n < 1:
        raise InvalidArgument("modulus must be positive", n=n)
    if n == 1:
        return 0
    if math.gcd(p, n) != 1:
        raise NotCoprime("no inverse modulo n", p=p, n=n)
    return pow(p, -1, n)


# =========================
# Outcomes
# =========================

@dataclass(frozen=True)
class DehnFilling:
    slope: Slope

    def as_dict(self) -> Dict[str, Any]:
        return {"variant": "dehn", "slope": self.slope.as_list(), "marking": self.slope.marking.name}


@dataclass(frozen=True)
class Gluing:
    p: int
    q: int
    n: int
    lens: Tuple[int, int]

    def as_dict(self) -> Dict[str, Any]:
        return {"variant": "gluing", "p": self.p, "q": self.q, "n": self.n, "lens": list(self.lens)}


@dataclass(frozen=True)
class Thickening:
    def as_dict(self) -> Dict[str, Any]:
        return {"variant": "thickening"}


SurgeryOutcome = Union[DehnFilling, Gluing, Thickening]


def _sign(x: int) -> int:
    return 1 if x > 0 else -1


def elliptic_filling_slope(etype: EllipticType, marking: Marking) -> Slope:
    if abs(etype.q) != 1:
        raise UnsupportedEllipticType("filling slope needs q = +-1", type=str(etype))
    if math.gcd(etype.p, etype.n) != 1:
        raise NotCoprime("p and n must be coprime", p=etype.p, n=etype.n)
    return Slope(etype.n, _sign(etype.q) * etype.p, marking)


def surgery_outcome(cls: IsometryClass, etype: Optional[EllipticType] = None,
                    marking: Optional[Marking] = None) -> SurgeryOutcome:
    marking = figure_eight_marking() if marking is None else marking
    kind = cls.kind
    if kind is Kind.IDENTITY:
        raise IdentityInput("the identity has no surgery outcome")
    if kind is Kind.AMBIGUOUS:
        raise AmbiguousNearBoundary("classification is ambiguous", trace=cls.trace)
    if kind is Kind.LOXODROMIC:
        return DehnFilling(Slope(0, 1, marking))
    if kind.is_parabolic:
        return Thickening()

    if etype is None:
        raise IrrationalElliptic("elliptic holonomy without a rational type", kind=kind.value)
    if abs(etype.q) == 1:
        return DehnFilling(elliptic_filling_slope(etype, marking))
    if abs(etype.p) > 1 and abs(etype.q) > 1:
        alpha = mod_inverse(etype.p, etype.n) * etype.q % etype.n
        return Gluing(etype.p, etype.q, etype.n, (etype.n, alpha))
    raise UnsupportedEllipticType("no surgery for this elliptic type", type=str(etype))


@dataclass(frozen=True)
class SlopeReconciliation:
    filling: Slope
    transported: Slope
    claimed: Slope
    agrees: bool
    note: str

    def as_dict(self) -> Dict[str, Any]:
        return {
            "filling": {"slope": self.filling.as_list(), "marking": self.filling.marking.name},
            "transported": self.transported.as_list(),
            "claimed": self.claimed.as_list(),
            "agrees": self.agrees,
            "note": self.note,
        }


def reconcile_elliptic_slope(etype: EllipticType, marking: Optional[Marking] = None) -> SlopeReconciliation:
    """
    Compare the filling slope (n, +-p) moved to (l0, m0) with the closed form
    (-n, +-p + 3n) stated for the figure-eight marking.
    """
    marking = figure_eight_marking() if marking is None else marking
    filling = elliptic_filling_slope(etype, marking)
    transported = change_marking(filling, REFERENCE)
    s = _sign(etype.q)
    claimed = Slope.of(-etype.n, s * etype.p + 3 * etype.n)
    agrees = transported.same_surgery(claimed)
    if agrees:
        note = "transported slope agrees with (-n, +-p+3n)"
    else:
        note = (f"transported slope {tuple(transported.as_list())} differs from "
                f"(-n, +-p+3n) = {tuple(claimed.as_list())}")
        logger.info("slope reconciliation for %s: %s", etype, note)
    return SlopeReconciliation(filling, transported, claimed, agrees, note)
