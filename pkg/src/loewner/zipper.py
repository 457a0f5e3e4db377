"""Inverse Loewner transform: driving functions of polyline chords.

The zipper peels a polyline into a composition of vertical slits. At
step k the current stack maps vertex k to some w; the slit (Re w, Im w)
is appended, the driving sample (t_k, Re w) recorded, and t advances by
(Im w)^2 / 4 in the a_t = t clock.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .conformal import MobiusMap
from .errors import GeometryError, InvalidInputError
from .slits import SLIT_CLEARANCE, MapStack, SlitElement, _clearance, _forward

#: Closing-gap tolerance for full chords, relative to |start - end|.
CLOSE_TOL = 1e-3


@dataclass
class DrivingFunction:
    """Sampled driving function in the a_t = t clock, piecewise linear in t."""

    t: np.ndarray
    lam: np.ndarray

    def __post_init__(self):
        self.t = np.atleast_1d(np.asarray(self.t, dtype=float))
        self.lam = np.atleast_1d(np.asarray(self.lam, dtype=float))
        if self.t.ndim != 1 or self.t.shape != self.lam.shape:
            raise InvalidInputError("driving samples must be parallel 1-d arrays")
        if self.t.size == 0:
            raise InvalidInputError("driving needs at least one sample")
        if self.t[0] != 0.0:
            raise InvalidInputError("driving must start at t = 0")
        if np.any(np.diff(self.t) <= 0):
            raise InvalidInputError("driving times must be strictly increasing")
        if not (np.all(np.isfinite(self.t)) and np.all(np.isfinite(self.lam))):
            raise InvalidInputError("driving samples must be finite")

    def __len__(self):
        return int(self.t.size)

    @property
    def total_t(self) -> float:
        return float(self.t[-1])

    @property
    def base(self) -> float:
        return float(self.lam[0])

    def value_at(self, t: float) -> float:
        return float(np.interp(t, self.t, self.lam))

    def restricted(self, t_cut: float) -> "DrivingFunction":
        """Truncate to [0, t_cut], interpolating a final sample if needed."""
        if not 0.0 <= t_cut <= self.total_t:
            raise InvalidInputError(f"t_cut {t_cut} outside [0, {self.total_t}]")
        if t_cut == 0.0:
            return DrivingFunction(np.array([0.0]), np.array([self.base]))
        idx = int(np.searchsorted(self.t, t_cut, side="right"))
        t = self.t[:idx]
        lam = self.lam[:idx]
        if t[-1] < t_cut:
            t = np.append(t, t_cut)
            lam = np.append(lam, self.value_at(t_cut))
        return DrivingFunction(t, lam)

    def shifted(self, x: float) -> "DrivingFunction":
        return DrivingFunction(self.t.copy(), self.lam + x)


def _segments_intersect_any(p, q, a, b):
    """True if segment p-q properly intersects or touches any segment a[i]-b[i]."""
    d1 = np.conj(q - p)
    cross_a = (d1 * (a - p)).imag
    cross_b = (d1 * (b - p)).imag
    d2 = np.conj(b - a)
    cross_p = (d2 * (p - a)).imag
    cross_q = (d2 * (q - a)).imag
    straddle = (
        (np.minimum(cross_a, cross_b) <= 0)
        & (np.maximum(cross_a, cross_b) >= 0)
        & (np.minimum(cross_p, cross_q) <= 0)
        & (np.maximum(cross_p, cross_q) >= 0)
    )
    if not np.any(straddle):
        return False
    # Bounding-box test weeds out collinear-but-disjoint hits.
    lo1, hi1 = np.minimum(p.real, q.real), np.maximum(p.real, q.real)
    lo2, hi2 = np.minimum(a.real, b.real), np.maximum(a.real, b.real)
    xo = (lo1 <= hi2) & (lo2 <= hi1)
    lo1, hi1 = np.minimum(p.imag, q.imag), np.maximum(p.imag, q.imag)
    lo2, hi2 = np.minimum(a.imag, b.imag), np.maximum(a.imag, b.imag)
    yo = (lo1 <= hi2) & (lo2 <= hi1)
    return bool(np.any(straddle & xo & yo))


def polyline_is_simple(points: np.ndarray) -> bool:
    """O(n^2) sweep: no two non-adjacent segments of the chain intersect."""
    p = np.asarray(points, dtype=complex)
    n = p.size - 1
    for i in range(n - 2):
        if _segments_intersect_any(p[i], p[i + 1], p[i + 2 : n], p[i + 3 : n + 1]):
            return False
    return True


def chains_disjoint(points_a: np.ndarray, points_b: np.ndarray) -> bool:
    """True if two polyline chains share no point (all segment pairs checked)."""
    a = np.asarray(points_a, dtype=complex)
    b = np.asarray(points_b, dtype=complex)
    for i in range(a.size - 1):
        if _segments_intersect_any(a[i], a[i + 1], b[:-1], b[1:]):
            return False
    return True


@dataclass
class Chord:
    """Oriented boundary-to-boundary polyline in the upper half-plane.

    The orientation is the vertex order, start -> end. The reversal is the
    same polyline traversed the other way with endpoints swapped.
    """

    start: float
    end: float
    vertices: np.ndarray

    def __post_init__(self):
        self.start = float(self.start)
        self.end = float(self.end)
        self.vertices = np.atleast_1d(np.asarray(self.vertices, dtype=complex))

    def __len__(self):
        return int(self.vertices.size)

    def chain(self) -> np.ndarray:
        """Full polyline including the two boundary endpoints."""
        return np.concatenate(
            ([complex(self.start)], self.vertices, [complex(self.end)])
        )

    def validate(self) -> "Chord":
        if not (np.isfinite(self.start) and np.isfinite(self.end)):
            raise InvalidInputError("chord endpoints must be finite reals")
        if self.start == self.end:
            raise InvalidInputError("chord endpoints must be distinct")
        if self.vertices.size < 1:
            raise InvalidInputError("chord needs at least one vertex")
        if not np.all(np.isfinite(self.vertices)):
            raise InvalidInputError("chord vertices must be finite")
        if not np.all(self.vertices.imag > 0):
            k = int(np.argmin(self.vertices.imag))
            raise InvalidInputError(f"vertex {k} is not in the open upper half-plane")
        chain = self.chain()
        if np.any(chain[1:] == chain[:-1]):
            raise InvalidInputError("chord contains a zero-length segment")
        if not polyline_is_simple(chain):
            raise InvalidInputError("chord polyline is not simple")
        return self

    def reversed(self) -> "Chord":
        return Chord(self.end, self.start, self.vertices[::-1].copy())

    def mirrored(self) -> "Chord":
        """Reflection z -> -conj(z) with endpoints negated."""
        return Chord(-self.start, -self.end, -np.conj(self.vertices))

    def translated(self, x: float) -> "Chord":
        return Chord(self.start + x, self.end + x, self.vertices + x)

    def scaled(self, r: float) -> "Chord":
        if not r > 0:
            raise InvalidInputError("scale must be positive")
        return Chord(r * self.start, r * self.end, r * self.vertices)

    def diameter(self) -> float:
        chain = self.chain()
        return float(
            np.max(np.abs(chain[:, None] - chain[None, :]))
            if chain.size <= 1024
            else _diameter_big(chain)
        )

    def radius_about(self, x0: float) -> float:
        return float(np.max(np.abs(self.chain() - x0)))


def _diameter_big(chain: np.ndarray) -> float:
    best = 0.0
    for i in range(0, chain.size, 512):
        block = chain[i : i + 512]
        best = max(best, float(np.max(np.abs(block[:, None] - chain[None, :]))))
    return best


@dataclass
class Segment:
    """Open curve from a finite boundary base point; the last vertex is the tip."""

    base: float
    vertices: np.ndarray

    def __post_init__(self):
        self.base = float(self.base)
        self.vertices = np.asarray(self.vertices, dtype=complex).reshape(-1)

    def __len__(self):
        return int(self.vertices.size)

    def chain(self) -> np.ndarray:
        return np.concatenate(([complex(self.base)], self.vertices))

    def validate(self) -> "Segment":
        if not np.isfinite(self.base):
            raise InvalidInputError("segment base must be a finite real")
        if not np.all(np.isfinite(self.vertices)):
            raise InvalidInputError("segment vertices must be finite")
        if self.vertices.size and not np.all(self.vertices.imag > 0):
            k = int(np.argmin(self.vertices.imag))
            raise InvalidInputError(f"vertex {k} is not in the open upper half-plane")
        chain = self.chain()
        if np.any(chain[1:] == chain[:-1]):
            raise InvalidInputError("segment contains a zero-length segment")
        if not polyline_is_simple(chain):
            raise InvalidInputError("segment polyline is not simple")
        return self


@dataclass
class ZipperResult:
    """Driving function and slit stack of a zipped curve."""

    driving: DrivingFunction
    stack: MapStack
    total_t: float
    total_hcap: float
    tail_hcap_bound: Optional[float] = None
    low_resolution: bool = False


def compute_driving(
    curve: Union[Chord, Segment], *, validate: bool = True
) -> ZipperResult:
    """Zip a chord or open segment into its driving function and stack.

    Works in coordinates translated so the base point sits at 0 (the
    returned stack carries the translations as pre/post frames), which
    makes translation equivariance of the samples exact. For a full
    chord the closing gap to `end` is not zipped; its capacity is
    bounded by the squared image gap and reported as tail_hcap_bound.
    """
    if isinstance(curve, Chord):
        base, end = curve.start, curve.end
    else:
        base, end = curve.base, None
    if validate:
        curve.validate()
    x0 = float(base)
    w = curve.vertices - x0
    n = w.size
    elements = []
    ts = np.empty(n)
    us = np.empty(n)
    t_acc = 0.0
    for k in range(n):
        zk = w[k]
        if not zk.imag > 0:
            raise GeometryError(
                f"image of vertex {k} has im <= 0; polyline invalid or "
                "resolution too coarse"
            )
        e = SlitElement(zk.real, zk.imag)
        elements.append(e)
        t_acc += e.dt
        ts[k] = t_acc
        us[k] = zk.real
        if k + 1 < n:
            rest = w[k + 1 :] - e.u
            near = _clearance(rest, e.v) < SLIT_CLEARANCE
            if np.any(near):
                j = k + 1 + int(np.argmax(near))
                raise GeometryError(
                    f"image of vertex {j} falls within {SLIT_CLEARANCE} of the "
                    f"slit for vertex {k}; resolution too coarse"
                )
            w[k + 1 :] = e.u + _forward(rest, e.v)
    driving = DrivingFunction(
        np.concatenate(([0.0], ts)), np.concatenate(([x0], us + x0))
    )
    stack = MapStack(
        tuple(elements),
        pre=MobiusMap.translation(-x0),
        post=MobiusMap.translation(x0),
    )
    tail = None
    if end is not None and elements:
        tail = _tail_hcap_bound(elements, float(end) - x0)
    return ZipperResult(
        driving=driving,
        stack=stack,
        total_t=t_acc,
        total_hcap=2.0 * t_acc,
        tail_hcap_bound=tail,
        low_resolution=n < 3,
    )


def _tail_hcap_bound(elements, end_rel: float) -> float:
    """Squared image gap between g(end) and the final driving value."""
    g = np.asarray(complex(end_rel), dtype=complex)
    for e in elements:
        rel = g - e.u
        if _clearance(rel, e.v) < SLIT_CLEARANCE:
            # end sits on the discrete hull; fall back to the last slit scale
            return float((2.0 * elements[-1].v) ** 2)
        g = e.u + _forward(rel, e.v)
    return float(abs(g.real - elements[-1].u) ** 2)


def closing_gap_ok(curve: Chord, result: ZipperResult) -> bool:
    """True if the last vertex lies within the closing tolerance of `end`."""
    return bool(
        abs(curve.vertices[-1] - curve.end)
        <= CLOSE_TOL * abs(curve.start - curve.end)
    )
