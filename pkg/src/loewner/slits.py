"""Vertical-slit maps and their ordered compositions.

A MapStack is the discrete stand-in for the mapping-out function of a
hull: the unique conformal map g from the slit half-plane onto the upper
half-plane with g(z) - z -> 0 at infinity. Each SlitElement removes one
vertical segment and contributes v^2/2 of half-plane capacity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .conformal import INF, MobiusMap, mobius_apply
from .errors import (
    AmbiguityError,
    InvalidInputError,
    SingularPointError,
    UnsupportedNormalizationError,
)

#: Points closer than this to a slit are rejected rather than perturbed.
SLIT_CLEARANCE = 1e-10


class LastSlitTip:
    """Prime-end marker: the tip of a stack's final slit. Singleton TIP."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "TIP"


TIP = LastSlitTip()


@dataclass(frozen=True)
class SlitElement:
    """One vertical slit: base u on the real line, height v > 0.

    Forward map z -> u + s(z - u) with s(w) = w sqrt(1 + (v/w)^2) in the
    principal branch. The product form picks the hydrodynamic branch
    (s(w) ~ w at infinity) for every w off the slit, so no branch-cut
    bookkeeping is needed: the cut locus of the principal square root is
    exactly the slit itself.
    """

    u: float
    v: float

    def __post_init__(self):
        ok = np.isfinite(self.u) and np.isfinite(self.v) and self.v > 0
        if not ok:
            raise InvalidInputError(
                f"slit needs finite base and height > 0, got ({self.u}, {self.v})"
            )

    @property
    def hcap(self) -> float:
        """Half-plane capacity v^2/2 removed by this slit."""
        return 0.5 * self.v * self.v

    @property
    def dt(self) -> float:
        """Curve-time advance v^2/4 in the a_t = t clock."""
        return 0.25 * self.v * self.v

    @property
    def tip(self) -> complex:
        return complex(self.u, self.v)


def _clearance(w, v):
    """Distance of relative points w = z - u to the closed slit {iy: 0<=y<=v}."""
    y = np.clip(w.imag, 0.0, v)
    return np.hypot(w.real, w.imag - y)


def _forward(w, v):
    return w * np.sqrt(1.0 + (v / w) ** 2)


def _backward(x, v):
    return x * np.sqrt(1.0 - (v / x) ** 2)


def slit_apply(e: SlitElement, z):
    """Map z out of the slit plane. z: complex, real, or complex ndarray."""
    w = np.asarray(z, dtype=complex) - e.u
    if np.any(_clearance(w, e.v) < SLIT_CLEARANCE):
        raise SingularPointError(
            f"point within {SLIT_CLEARANCE} of the slit ({e.u}, {e.v})"
        )
    out = e.u + _forward(w, e.v)
    return complex(out) if out.ndim == 0 else out


def slit_invert(e: SlitElement, w):
    """Inverse of slit_apply: u + x sqrt(1 - (v/x)^2), x = w - u.

    The image of w = u itself is the slit tip. Real w strictly inside the
    collapsed interval (u - v, u + v) is a two-sided prime end and is
    rejected: callers that need a side must stay off the boundary.
    """
    x = np.asarray(w, dtype=complex) - e.u
    tip_like = np.abs(x) < 1e-150 * e.v
    on_axis = x.imag == 0.0
    if np.any(on_axis & (np.abs(x.real) < e.v) & ~tip_like):
        raise AmbiguityError(
            f"real point inside the collapsed interval of slit ({e.u}, {e.v}); "
            "one-sided prime end requested without a side"
        )
    if np.any(tip_like):
        safe = np.where(tip_like, 1.0, x)
        out = np.where(tip_like, e.u + 1j * e.v, e.u + _backward(safe, e.v))
    else:
        out = e.u + _backward(x, e.v)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class MapStack:
    """Ordered slit composition with optional Mobius frames.

    Forward evaluation applies pre, then the elements in list order, then
    post. Immutable after construction; evaluation is pure, so instances
    are safe to share across threads.
    """

    elements: Tuple[SlitElement, ...] = ()
    pre: Optional[MobiusMap] = None
    post: Optional[MobiusMap] = None

    def __len__(self):
        return len(self.elements)

    def extended(self, element: SlitElement) -> "MapStack":
        return MapStack(self.elements + (element,), self.pre, self.post)


def stack_apply(s: MapStack, z):
    """Composite forward map; z: complex, real, ndarray, or INF."""
    if z is INF:
        w = INF if s.pre is None else mobius_apply(s.pre, INF)
        if w is INF:
            return INF if s.post is None else mobius_apply(s.post, INF)
        return stack_apply(MapStack(s.elements, None, s.post), w)
    w = np.asarray(z, dtype=complex)
    scalar = w.ndim == 0
    if s.pre is not None:
        w = mobius_apply(s.pre, w)
    for e in s.elements:
        w = slit_apply(e, w)
    if s.post is not None:
        w = mobius_apply(s.post, w)
    return complex(w) if scalar else w


def stack_invert(s: MapStack, w):
    """Composite inverse map (inverse frames, elements in reverse order)."""
    if w is INF:
        z = INF if s.post is None else mobius_apply(s.post.inverse(), INF)
        if z is INF:
            return INF if s.pre is None else mobius_apply(s.pre.inverse(), INF)
        return stack_invert(MapStack(s.elements, s.pre, None), z)
    z = np.asarray(w, dtype=complex)
    scalar = z.ndim == 0
    if s.post is not None:
        z = mobius_apply(s.post.inverse(), z)
    for e in reversed(s.elements):
        z = slit_invert(e, z)
    if s.pre is not None:
        z = mobius_apply(s.pre.inverse(), z)
    return complex(z) if scalar else z


def _neutral(m: Optional[MobiusMap]) -> bool:
    return m is None or m.is_translation()


def stack_hcap(s: MapStack) -> float:
    """Total half-plane capacity sum(v_i^2 / 2) of the stack's hull."""
    if not (_neutral(s.pre) and _neutral(s.post)):
        raise UnsupportedNormalizationError(
            "capacity is defined only for stacks whose frame maps are translations"
        )
    return float(sum(e.hcap for e in s.elements))


def stack_total_t(s: MapStack) -> float:
    """Total curve time sum(v_i^2 / 4); same normalization rule as stack_hcap."""
    if not (_neutral(s.pre) and _neutral(s.post)):
        raise UnsupportedNormalizationError(
            "capacity is defined only for stacks whose frame maps are translations"
        )
    return float(sum(e.dt for e in s.elements))


def stack_last_driving(s: MapStack) -> float:
    """Image of the final slit's tip prime end: its base, in post-frame coordinates."""
    if not s.elements:
        raise InvalidInputError("stack has no elements")
    u = s.elements[-1].u
    if s.post is None:
        return u
    out = mobius_apply(s.post, u)
    if out is INF:
        raise InvalidInputError("post frame sends the driving value to INF")
    return float(out)


def stack_tip(s: MapStack) -> complex:
    """Domain point mapping to the final slit's driving value (the hull tip)."""
    if not s.elements:
        raise InvalidInputError("stack has no elements")
    z = np.asarray(s.elements[-1].tip, dtype=complex)
    for e in reversed(s.elements[:-1]):
        z = slit_invert(e, z)
    if s.pre is not None:
        z = mobius_apply(s.pre.inverse(), z)
    return complex(z)


def apply_chain(stacks: Sequence[MapStack], z):
    """Apply several stacks in order (z through stacks[0] first)."""
    w = z
    for s in stacks:
        w = stack_apply(s, w)
    return w


def invert_chain(stacks: Sequence[MapStack], w):
    """Inverse of apply_chain: last stack inverted first."""
    z = w
    for s in reversed(stacks):
        z = stack_invert(s, z)
    return z
