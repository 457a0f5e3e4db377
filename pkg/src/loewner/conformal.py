"""Upper half-plane primitives: boundary points and Mobius self-maps."""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import InvalidInputError


class Infinity:
    """The boundary point at infinity. Use the module-level singleton INF."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"


INF = Infinity()

#: A boundary point of the upper half-plane: a finite real number or INF.
Boundary = Union[float, Infinity]


def is_interior(z) -> bool:
    """True if z is a finite point strictly inside the upper half-plane."""
    z = complex(z)
    return np.isfinite(z.real) and np.isfinite(z.imag) and z.imag > 0


@dataclass(frozen=True)
class MobiusMap:
    """Real fractional-linear self-map of the upper half-plane.

    Acts as z -> (a z + b) / (c z + d) with a d - b c > 0, so the upper
    half-plane maps onto itself and the boundary circle R u {inf} onto
    itself.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        coeffs = (self.a, self.b, self.c, self.d)
        if not all(np.isfinite(v) for v in coeffs):
            raise InvalidInputError(f"non-finite Mobius coefficients {coeffs}")
        if self.det <= 0:
            raise InvalidInputError(
                f"Mobius determinant must be positive, got {self.det}"
            )

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def __call__(self, z):
        return mobius_apply(self, z)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """Map equal to applying `other` first, then this map."""
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def is_translation(self) -> bool:
        return self.c == 0.0 and self.a == self.d

    @property
    def shift(self) -> float:
        """Displacement of a translation map; meaningless otherwise."""
        return self.b / self.d

    def scaled(self, r: float) -> "MobiusMap":
        """Post-compose with w -> r w (r > 0), the residual scaling freedom."""
        if not r > 0:
            raise InvalidInputError("scale must be positive")
        return MobiusMap(r * self.a, r * self.b, self.c, self.d)

    @staticmethod
    def identity() -> "MobiusMap":
        return MobiusMap(1.0, 0.0, 0.0, 1.0)

    @staticmethod
    def translation(x: float) -> "MobiusMap":
        return MobiusMap(1.0, float(x), 0.0, 1.0)


def mobius_apply(m: MobiusMap, z):
    """Evaluate m at an interior point, a boundary point, or an ndarray.

    The pole c z + d = 0 maps to INF and INF maps to a/c (INF if c = 0);
    interior points stay strictly interior.
    """
    if z is INF:
        if m.c == 0.0:
            return INF
        return m.a / m.c
    if isinstance(z, np.ndarray):
        return (m.a * z + m.b) / (m.c * z + m.d)
    if isinstance(z, numbers.Real):
        den = m.c * z + m.d
        if den == 0.0:
            return INF
        return (m.a * z + m.b) / den
    z = complex(z)
    return (m.a * z + m.b) / (m.c * z + m.d)


def mobius_fixing(a: Boundary, b: Boundary) -> MobiusMap:
    """Half-plane automorphism sending boundary point a to 0 and b to INF.

    The residual scaling freedom is pinned so results are reproducible:
    for finite a < b the map is (z - a)/(b - z), which sends the midpoint
    (a + b)/2 to 1; for b = INF it is z - a; for a = INF it is -1/(z - b);
    for finite a > b it is (z - a)/(z - b).
    """
    if a is INF and b is INF:
        raise InvalidInputError("boundary points must be distinct")
    if a is INF:
        return MobiusMap(0.0, -1.0, 1.0, -float(b))
    if b is INF:
        return MobiusMap(1.0, -float(a), 0.0, 1.0)
    a = float(a)
    b = float(b)
    if not (np.isfinite(a) and np.isfinite(b)):
        raise InvalidInputError("boundary points must be finite or INF")
    if a == b:
        raise InvalidInputError("boundary points must be distinct")
    if a < b:
        return MobiusMap(1.0, -a, -1.0, b)
    return MobiusMap(1.0, -a, 1.0, -b)
